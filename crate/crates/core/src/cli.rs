//! The `fueterfrac` command line: `verify`, `convergence` and `table`.
//!
//! Exit codes: 0 when every residual is below its tolerance, 1 when one is
//! not, 2 for unreadable or invalid configurations and evaluation errors.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fueter::{
    d_trunc, fueter, line_decomposition_residual, prop_fractal_fueter, truncated_ab_residual,
    truncated_decomposition_residual, Side,
};
use crate::integration::{borel_pompeiu_residual, stokes_residual, IdentityProblem};
use crate::report::{NumericTable, ReportRow, VerificationReport};
use crate::scalar::{prop_beta_fractal_derivative, DerivParams, ScalarFunction};
use crate::scenario::{FieldRef, IdentityName, IdentitySpec, OperatorName, Resolved, Scenario, TableSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_TOLERANCE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "fueterfrac", version, about = "Verify quaternionic fractal Fueter identities numerically")]
pub struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "FUETERFRAC_JOBS")]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate every identity of a scenario and write report.csv and report.json.
    Verify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Override the seed of random points.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Repeat the first identity over boundary orders and write convergence.csv.
    Convergence {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long, value_delimiter = ',')]
        orders: Vec<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Tabulate operator values over the scenario's grid into table.csv.
    Table {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
}

/// Parse `args` (including the program name), run, and return the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_CONFIG
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cli.jobs {
        if j == 0 {
            return Err(Error::Config("--jobs must be positive".into()));
        }
        builder = builder.num_threads(j);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    pool.install(|| match cli.command {
        Command::Verify { config, out, seed } => cmd_verify(&config, &out, seed),
        Command::Convergence {
            config,
            out,
            orders,
            seed,
        } => cmd_convergence(&config, &out, &orders, seed),
        Command::Table { config, out } => cmd_table(&config, &out),
    })
}

fn load(config: &Path, seed: Option<u64>) -> Result<Resolved> {
    let mut s = Scenario::load(config)?;
    if let Some(seed) = seed {
        s = s.with_seed(seed);
    }
    s.resolve()
}

pub fn cmd_verify(config: &Path, out: &Path, seed: Option<u64>) -> Result<i32> {
    let resolved = load(config, seed)?;
    let report = verify_scenario(&resolved)?;
    report.write(out)?;
    let failed = report.rows.iter().filter(|r| !r.passed).count();
    println!(
        "{} rows, {} failed, max residual {:.3e}",
        report.rows.len(),
        failed,
        report.max_residual()
    );
    Ok(if failed == 0 { EXIT_OK } else { EXIT_TOLERANCE })
}

pub fn cmd_convergence(config: &Path, out: &Path, orders: &[usize], seed: Option<u64>) -> Result<i32> {
    let resolved = load(config, seed)?;
    let id = resolved
        .scenario
        .identities
        .first()
        .cloned()
        .ok_or_else(|| Error::Config("convergence needs at least one identity".into()))?;
    let orders = if orders.is_empty() {
        vec![resolved.scenario.quadrature.boundary_order]
    } else {
        orders.to_vec()
    };
    let mut table = NumericTable::new(&["order", "residual"]);
    let mut last = f64::INFINITY;
    for &order in &orders {
        let mut r = resolved.clone();
        r.scenario.quadrature.boundary_order = order;
        let rows = identity_rows(&r, &id)?;
        last = rows.iter().map(|row| row.residual).fold(0.0, f64::max);
        table.rows.push(vec![order as f64, last]);
        println!("{order:>6} {last:.6e}");
    }
    table.write(&out.join("convergence.csv"))?;
    Ok(if last < id.tolerance { EXIT_OK } else { EXIT_TOLERANCE })
}

pub fn cmd_table(config: &Path, out: &Path) -> Result<i32> {
    let resolved = load(config, None)?;
    let table = tabulate(&resolved)?;
    table.write(&out.join("table.csv"))?;
    println!("{} rows", table.rows.len());
    Ok(EXIT_OK)
}

/// Rows for every identity of the scenario, in request order.
pub fn verify_scenario(resolved: &Resolved) -> Result<VerificationReport> {
    let mut rows = Vec::new();
    for id in &resolved.scenario.identities {
        rows.extend(identity_rows(resolved, id)?);
    }
    Ok(VerificationReport {
        name: resolved.scenario.name.clone(),
        rows,
    })
}

fn identity_rows(r: &Resolved, id: &IdentitySpec) -> Result<Vec<ReportRow>> {
    let tol = id.tolerance;
    match id.name {
        IdentityName::BorelPompeiu => {
            let p: IdentityProblem = r.problem(id.variant)?;
            r.points
                .par_iter()
                .map(|x| Ok(ReportRow::from_identity(&borel_pompeiu_residual(&p, x)?, tol)))
                .collect()
        }
        IdentityName::Stokes => {
            let p = r.problem(id.variant)?;
            Ok(vec![ReportRow::from_identity(&stokes_residual(&p)?, tol)])
        }
        IdentityName::DecompositionLine
        | IdentityName::DecompositionTruncated
        | IdentityName::TruncatedAbForm => {
            let jobs: Vec<(Side, [f64; 4])> = id
                .sides()
                .into_iter()
                .flat_map(|s| r.points.iter().map(move |x| (s, *x)))
                .collect();
            jobs.par_iter()
                .map(|(side, x)| pointwise_row(r, id, *side, x))
                .collect()
        }
    }
}

fn side_name(s: Side) -> &'static str {
    match s {
        Side::Left => "left",
        Side::Right => "right",
    }
}

fn pointwise_row(r: &Resolved, id: &IdentitySpec, side: Side, x: &[f64; 4]) -> Result<ReportRow> {
    let (h, p) = r.side(side);
    let name = id.name.as_str();
    let row = match id.name {
        IdentityName::DecompositionLine => {
            let d = line_decomposition_residual(h, p, x, &r.scenario.line)?;
            ReportRow::new(name, side_name(side), Some(*x), d.lhs, d.rhs(), id.tolerance)
                .with_term("operator", d.operator)
                .with_term("e_term", d.e_term)
                .with_term("coeff_sum", d.coeff_sum)
        }
        _ => {
            let mode = id.lhs_mode.unwrap_or_default();
            let d = if id.name == IdentityName::DecompositionTruncated {
                truncated_decomposition_residual(h, p, x, mode)?
            } else {
                truncated_ab_residual(h, p, x, mode)?
            };
            ReportRow::new(name, side_name(side), Some(*x), d.lhs, d.rhs(), id.tolerance)
                .with_term("operator", d.operator)
                .with_term("coeff_sum", d.coeff_sum)
                .with_term("w", d.w)
        }
    };
    if !row.residual.is_finite() {
        return Err(Error::NonFinite(format!("{name} at {x:?}")));
    }
    Ok(row)
}

/// Values of the scenario's `table` block.
pub fn tabulate(r: &Resolved) -> Result<NumericTable> {
    let spec = r
        .scenario
        .table
        .as_ref()
        .ok_or_else(|| Error::Config("table needs a `table` block".into()))?;
    match spec {
        TableSpec::Scalar {
            function,
            grid,
            sigma,
            beta,
            measure,
            pair,
            diff_mode,
        } => {
            let f = ScalarFunction::parse(function).map_err(|e| Error::Config(format!("function: {e}")))?;
            let params = DerivParams::new(*sigma, *beta, measure.build()?, pair.build()?)?.with_mode(*diff_mode)?;
            let mut t = NumericTable::new(&["t", "value"]);
            for &s in grid {
                t.rows.push(vec![s, prop_beta_fractal_derivative(&f, &params, s)?]);
            }
            Ok(t)
        }
        TableSpec::Operator { field, operator, grid } => {
            let side = match field {
                FieldRef::F => Side::Left,
                FieldRef::G => Side::Right,
            };
            let (h, p) = r.side(side);
            let mut t = NumericTable::new(&["x0", "x1", "x2", "x3", "v0", "v1", "v2", "v3"]);
            for x in grid {
                let q = match operator {
                    OperatorName::Fueter => fueter(h, side, x)?,
                    OperatorName::PropFractal => prop_fractal_fueter(h, p, x)?,
                    OperatorName::Trunc => d_trunc(h, p, x)?,
                };
                let c = q.0;
                t.rows.push(x.iter().chain(c.iter()).copied().collect());
            }
            Ok(t)
        }
    }
}
