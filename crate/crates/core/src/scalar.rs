//! One-dimensional fractal, β-fractal and proportional derivatives.
//!
//! All derivatives are evaluated through their chain-rule closed forms for
//! C¹ inputs: `d_ν f/dt^η = f'(t)/ν'(t)`. The limit quotients of the
//! definitions are available as [`fractal_quotient`] and
//! [`beta_fractal_quotient`] for cross-checking.

use serde::{Deserialize, Serialize};

use crate::dsl::{diff_expr, parse_expr, Expr, Tape, VAR_T};
use crate::error::{Error, Result};
use crate::measures::{FractalMeasure, ProportionalPair};

/// How `f'` is obtained.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum DiffMode {
    Symbolic,
    CentralFd { h: f64 },
}

impl Default for DiffMode {
    fn default() -> Self {
        DiffMode::Symbolic
    }
}

impl DiffMode {
    pub const DEFAULT_FD_STEP: f64 = 1e-5;

    pub fn central_fd() -> Self {
        DiffMode::CentralFd {
            h: Self::DEFAULT_FD_STEP,
        }
    }
}

/// A real function of `t` with its symbolic derivative.
#[derive(Clone, Debug)]
pub struct ScalarFunction {
    expr: Expr,
    deriv: Expr,
    tape: Tape,
    dtape: Tape,
}

fn env(t: f64) -> [f64; 5] {
    [0.0, 0.0, 0.0, 0.0, t]
}

impl ScalarFunction {
    pub fn new(expr: Expr) -> Result<Self> {
        if (0..4).any(|i| expr.uses_var(i)) || expr.max_var().is_some_and(|m| m > VAR_T) {
            return Err(Error::param(format!(
                "scalar function `{expr}` may only use the variable t"
            )));
        }
        let deriv = diff_expr(&expr, VAR_T);
        Ok(ScalarFunction {
            tape: Tape::compile(&expr),
            dtape: Tape::compile(&deriv),
            expr,
            deriv,
        })
    }

    pub fn parse(src: &str) -> Result<Self> {
        Self::new(parse_expr(src)?)
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn derivative_expr(&self) -> &Expr {
        &self.deriv
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        self.tape.eval(&env(t))
    }

    /// `f'(t)` by the requested mode.
    pub fn derivative(&self, t: f64, mode: DiffMode) -> Result<f64> {
        match mode {
            DiffMode::Symbolic => self.dtape.eval(&env(t)),
            DiffMode::CentralFd { h } => {
                if !(h > 0.0) {
                    return Err(Error::param("finite-difference step must be positive"));
                }
                Ok((self.eval(t + h)? - self.eval(t - h)?) / (2.0 * h))
            }
        }
    }
}

/// Parameters of the proportional β-fractal derivative.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivParams {
    pub sigma: f64,
    pub beta: f64,
    pub measure: FractalMeasure,
    pub pair: ProportionalPair,
    pub diff_mode: DiffMode,
}

impl DerivParams {
    pub fn new(sigma: f64, beta: f64, measure: FractalMeasure, pair: ProportionalPair) -> Result<Self> {
        let p = DerivParams {
            sigma,
            beta,
            measure,
            pair,
            diff_mode: DiffMode::Symbolic,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_mode(mut self, mode: DiffMode) -> Result<Self> {
        self.diff_mode = mode;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.sigma) {
            return Err(Error::param(format!("σ = {} must lie in [0, 1]", self.sigma)));
        }
        check_beta(self.beta)?;
        if let DiffMode::CentralFd { h } = self.diff_mode {
            if !(h > 0.0) {
                return Err(Error::param("finite-difference step must be positive"));
            }
        }
        Ok(())
    }
}

pub(crate) fn check_beta(beta: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::param(format!("β = {beta} must lie in [0, 1]")));
    }
    Ok(())
}

/// `d(f^β)/dt = β f^{β−1} f'` from the value `f` and slope `df`.
///
/// Integer `β` accepts any sign of `f`; fractional `β` needs `f > 0`, or
/// `f ≥ 0` when `β > 1`.
pub fn beta_power_slope(f: f64, df: f64, beta: f64) -> Result<f64> {
    check_exponent(beta)?;
    if beta == 1.0 {
        return Ok(df);
    }
    if beta == 0.0 {
        return Ok(0.0);
    }
    if beta.fract() == 0.0 && beta.abs() <= 64.0 {
        if f == 0.0 && beta < 1.0 {
            return Err(Error::ZeroBase { beta });
        }
        return Ok(beta * f.powi(beta as i32 - 1) * df);
    }
    if f < 0.0 {
        return Err(Error::NegativeBase { value: f, beta });
    }
    if f == 0.0 {
        if beta < 1.0 {
            return Err(Error::ZeroBase { beta });
        }
        return Ok(0.0);
    }
    Ok(beta * f.powf(beta - 1.0) * df)
}

/// `f^β`, with the same sign rule as [`beta_power_slope`].
pub fn beta_power(f: f64, beta: f64) -> Result<f64> {
    check_exponent(beta)?;
    if beta == 1.0 {
        return Ok(f);
    }
    if beta == 0.0 {
        return Ok(1.0);
    }
    if beta.fract() == 0.0 && beta.abs() <= 64.0 {
        if f == 0.0 && beta < 0.0 {
            return Err(Error::ZeroBase { beta });
        }
        return Ok(f.powi(beta as i32));
    }
    if f < 0.0 {
        return Err(Error::NegativeBase { value: f, beta });
    }
    if f == 0.0 && beta < 0.0 {
        return Err(Error::ZeroBase { beta });
    }
    Ok(f.powf(beta))
}

fn check_exponent(beta: f64) -> Result<()> {
    if !beta.is_finite() {
        return Err(Error::param(format!("β = {beta} must be finite")));
    }
    Ok(())
}

/// `f'(t) / ν'(t)`.
pub fn fractal_derivative(f: &ScalarFunction, m: &FractalMeasure, t: f64) -> Result<f64> {
    fractal_derivative_with(f, m, t, DiffMode::Symbolic)
}

pub fn fractal_derivative_with(
    f: &ScalarFunction,
    m: &FractalMeasure,
    t: f64,
    mode: DiffMode,
) -> Result<f64> {
    let dn = m.deriv_checked(t)?;
    Ok(f.derivative(t, mode)? / dn)
}

/// `(f^β)'(t) / ν'(t)`.
pub fn beta_fractal_derivative(
    f: &ScalarFunction,
    m: &FractalMeasure,
    beta: f64,
    t: f64,
) -> Result<f64> {
    beta_fractal_derivative_with(f, m, beta, t, DiffMode::Symbolic)
}

pub fn beta_fractal_derivative_with(
    f: &ScalarFunction,
    m: &FractalMeasure,
    beta: f64,
    t: f64,
    mode: DiffMode,
) -> Result<f64> {
    let dn = m.deriv_checked(t)?;
    let slope = beta_power_slope(f.eval(t)?, f.derivative(t, mode)?, beta)?;
    Ok(slope / dn)
}

/// `χ₁(σ,t) f(t) + χ₀(σ,t) f'(t)`.
pub fn proportional_derivative(
    f: &ScalarFunction,
    p: &ProportionalPair,
    sigma: f64,
    t: f64,
) -> Result<f64> {
    let (chi1, chi0) = p.eval(sigma, t)?;
    Ok(chi1 * f.eval(t)? + chi0 * f.derivative(t, DiffMode::Symbolic)?)
}

/// `χ₁ f + χ₀ (f^β)'/ν'`.
pub fn prop_beta_fractal_derivative(f: &ScalarFunction, params: &DerivParams, t: f64) -> Result<f64> {
    params.validate()?;
    let (chi1, chi0) = params.pair.eval(params.sigma, t)?;
    let value = f.eval(t)?;
    // χ₀ = 0 removes the fractal part entirely, so its hypotheses do not
    // apply there.
    if chi0 == 0.0 {
        return Ok(chi1 * value);
    }
    let bfd = beta_fractal_derivative_with(f, &params.measure, params.beta, t, params.diff_mode)?;
    Ok(chi1 * value + chi0 * bfd)
}

/// The defining limit quotient `(f(t) − f(τ)) / (ν(t) − ν(τ))`.
pub fn fractal_quotient(f: &ScalarFunction, m: &FractalMeasure, t: f64, tau: f64) -> Result<f64> {
    beta_fractal_quotient(f, m, 1.0, t, tau)
}

/// `(f(t)^β − f(τ)^β) / (ν(t) − ν(τ))`.
pub fn beta_fractal_quotient(
    f: &ScalarFunction,
    m: &FractalMeasure,
    beta: f64,
    t: f64,
    tau: f64,
) -> Result<f64> {
    let num = beta_power(f.eval(t)?, beta)? - beta_power(f.eval(tau)?, beta)?;
    let den = m.eval(t)? - m.eval(tau)?;
    if den == 0.0 {
        return Err(Error::SingularMeasure { t, deriv: 0.0 });
    }
    Ok(num / den)
}
