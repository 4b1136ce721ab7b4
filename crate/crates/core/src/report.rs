//! Verification reports as CSV and JSON.
//!
//! CSV numbers are written with 17 significant digits (`{:.16e}`) and rows
//! keep the order in which identities and points were requested, so equal
//! inputs give byte-identical files.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::integration::IdentityRow;
use crate::quaternion::Quaternion;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportRow {
    pub identity: String,
    pub variant: String,
    pub point: Option<[f64; 4]>,
    pub inside: bool,
    pub lhs: Quaternion,
    pub rhs: Quaternion,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub terms: BTreeMap<String, Quaternion>,
}

impl ReportRow {
    pub fn new(identity: &str, variant: &str, point: Option<[f64; 4]>, lhs: Quaternion, rhs: Quaternion, tolerance: f64) -> Self {
        let residual = (lhs - rhs).norm();
        ReportRow {
            identity: identity.to_string(),
            variant: variant.to_string(),
            point,
            inside: true,
            lhs,
            rhs,
            residual,
            tolerance,
            passed: residual < tolerance,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_identity(row: &IdentityRow, tolerance: f64) -> Self {
        let mut r = ReportRow::new(row.identity.name(), row.variant.name(), row.point, row.lhs, row.rhs, tolerance);
        r.inside = row.inside;
        r.residual = row.residual;
        r.passed = row.residual < tolerance;
        r.terms.insert("boundary".into(), row.boundary);
        r.terms.insert("volume".into(), row.volume);
        r
    }

    pub fn with_term(mut self, name: &str, q: Quaternion) -> Self {
        self.terms.insert(name.to_string(), q);
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct VerificationReport {
    pub name: Option<String>,
    pub rows: Vec<ReportRow>,
}

pub const CSV_HEADER: [&str; 18] = [
    "identity", "variant", "x0", "x1", "x2", "x3", "inside", "lhs0", "lhs1", "lhs2", "lhs3", "rhs0", "rhs1",
    "rhs2", "rhs3", "residual", "tolerance", "passed",
];

pub fn fmt_num(v: f64) -> String {
    format!("{v:.16e}")
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Config(format!("cannot write {}: {e}", path.display()))
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed)
    }

    pub fn max_residual(&self) -> f64 {
        self.rows.iter().map(|r| r.residual).fold(0.0, f64::max)
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(CSV_HEADER).expect("in-memory write");
        for r in &self.rows {
            let mut rec: Vec<String> = vec![r.identity.clone(), r.variant.clone()];
            match r.point {
                Some(p) => rec.extend(p.iter().map(|&v| fmt_num(v))),
                None => rec.extend(std::iter::repeat_n(String::new(), 4)),
            }
            rec.push(r.inside.to_string());
            rec.extend(r.lhs.0.iter().map(|&v| fmt_num(v)));
            rec.extend(r.rhs.0.iter().map(|&v| fmt_num(v)));
            rec.push(fmt_num(r.residual));
            rec.push(fmt_num(r.tolerance));
            rec.push(r.passed.to_string());
            w.write_record(&rec).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv")
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Out<'a> {
            #[serde(flatten)]
            report: &'a VerificationReport,
            passed: bool,
            max_residual: f64,
        }
        serde_json::to_string_pretty(&Out {
            report: self,
            passed: self.passed(),
            max_residual: self.max_residual(),
        })
        .expect("report serializes")
    }

    /// Write `report.csv` and `report.json` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
        for (name, body) in [("report.csv", self.to_csv()), ("report.json", self.to_json())] {
            let path = dir.join(name);
            let mut file = std::fs::File::create(&path).map_err(|e| io_err(&path, e))?;
            file.write_all(body.as_bytes()).map_err(|e| io_err(&path, e))?;
        }
        Ok(())
    }
}

/// A CSV table with a header and numeric rows.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct NumericTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl NumericTable {
    pub fn new(header: &[&str]) -> Self {
        NumericTable {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r.iter().map(|&v| fmt_num(v))).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv")
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
        }
        std::fs::write(path, self.to_csv()).map_err(|e| io_err(path, e))
    }
}
