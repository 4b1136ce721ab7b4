//! Operators built on truncated-exponential measures `E_n(t) = e(t^{α_n})_{k_n}`
//! with canonical pairs.
//!
//! With `c_n(x_n) = σ_n / E_n'(x_n)` and `I^β[f] = Σ_ℓ ψ_ℓ f_ℓ^β`,
//! `ψD[Σ_ℓ c_ℓ I^{β_ℓ}[f]] = ψD^{σ,β}_{α,k} f + Σ ψ_nψ_ℓ T_{n,ℓ} + ψW[f]`
//! where `T_{n,ℓ} = c_n' f_ℓ^{β_n} − (1 − σ_n) f_ℓ` and
//! `W = Σ_{ℓ≠n} c_ℓ ψ_n ∂_n I^{β_ℓ}[f]`. The right version mirrors every
//! product.

use serde::{Deserialize, Serialize};

use super::{check_positivity, component_partial, fueter, fueter_fd, OperatorParams, Side};
use crate::dsl::{self, diff_expr, Expr, Tape};
use crate::error::{Error, Result};
use crate::field::QuaternionField;
use crate::measures::{truncated_exp_series, FractalMeasure, TruncOrder};
use crate::quadrature::integrate;
use crate::quaternion::Quaternion;
use crate::scalar::{beta_power, beta_power_slope};

/// Order of the rule used for the `H` line integrals.
pub const H_ORDER: usize = 64;

fn truncation(params: &OperatorParams) -> Result<[(f64, TruncOrder); 4]> {
    params.truncation().ok_or_else(|| {
        Error::param("operator needs truncated_exp measures with canonical pairs on every axis")
    })
}

/// `c_n(x_n) = σ_n / E_n'(x_n)`.
pub fn c_coeff(params: &OperatorParams, n: usize, t: f64) -> Result<f64> {
    Ok(params.sigma[n] / params.measures[n].deriv_checked(t)?)
}

/// `c_n'(x_n) = −σ_n E_n'' / E_n'²`.
pub fn c_coeff_deriv(params: &OperatorParams, n: usize, t: f64) -> Result<f64> {
    let m = &params.measures[n];
    let d1 = m.deriv_checked(t)?;
    Ok(-params.sigma[n] * m.second_deriv(t)? / (d1 * d1))
}

/// `(1 − σ_n) f_ℓ(x) + σ_n ∂_n(f_ℓ^{β_n})(x) / (d e(x_n^{α_n})_{k_n}/dx_n)`
/// for a single component expression.
pub fn trunc_partial(
    f_l: &Expr,
    n: usize,
    sigma: f64,
    beta: f64,
    alpha: f64,
    k: TruncOrder,
    x: &[f64; 4],
) -> Result<f64> {
    let m = FractalMeasure::truncated_exp(alpha, k)?;
    let v = f_l.eval(x)?;
    if sigma == 0.0 {
        return Ok(v);
    }
    let d = Tape::compile(&diff_expr(f_l, n)).eval(x)?;
    Ok((1.0 - sigma) * v + sigma * beta_power_slope(v, d, beta)? / m.deriv_checked(x[n])?)
}

fn trunc_partial_field(
    f: &QuaternionField,
    n: usize,
    l: usize,
    params: &OperatorParams,
    x: &[f64; 4],
) -> Result<f64> {
    let sigma = params.sigma[n];
    let v = f.component_value(l, x)?;
    if sigma == 0.0 {
        return Ok(v);
    }
    let d = component_partial(f, n, l, x, params.diff_mode)?;
    let slope = beta_power_slope(v, d, params.beta[n])?;
    Ok((1.0 - sigma) * v + sigma * slope / params.measures[n].deriv_checked(x[n])?)
}

/// `Σ_{n,ℓ} ψ_nψ_ℓ (trunc partial)` on the left, `Σ ψ_ℓ (…) ψ_n` on the
/// right.
pub fn d_trunc(f: &QuaternionField, params: &OperatorParams, x: &[f64; 4]) -> Result<Quaternion> {
    truncation(params)?;
    let psi = f.frame().psi();
    let mut acc = Quaternion::ZERO;
    for n in 0..4 {
        for l in 0..4 {
            let v = trunc_partial_field(f, n, l, params, x)?;
            acc += params.side.apply(psi[n], psi[l]) * v;
        }
    }
    Ok(acc)
}

/// `I^β[f](x) = Σ_ℓ ψ_ℓ f_ℓ(x)^β`.
pub fn i_beta(f: &QuaternionField, beta: f64, x: &[f64; 4]) -> Result<Quaternion> {
    let mut c = [0.0; 4];
    for (l, slot) in c.iter_mut().enumerate() {
        *slot = beta_power(f.component_value(l, x)?, beta)?;
    }
    Ok(f.frame().from_coords(c))
}

/// `∂_n I^β[f](x) = Σ_ℓ ψ_ℓ β f_ℓ^{β−1} ∂_n f_ℓ`.
pub fn d_i_beta(
    f: &QuaternionField,
    beta: f64,
    n: usize,
    params: &OperatorParams,
    x: &[f64; 4],
) -> Result<Quaternion> {
    let mut c = [0.0; 4];
    for (l, slot) in c.iter_mut().enumerate() {
        let v = f.component_value(l, x)?;
        let d = component_partial(f, n, l, x, params.diff_mode)?;
        *slot = beta_power_slope(v, d, beta)?;
    }
    Ok(f.frame().from_coords(c))
}

/// `H_{n,ℓ}(x) = ((σ_n − 1)/σ_n) ∫_0^{x_n} E_n'(t) f_ℓ(x|x_n=t)^{1−β_n} dt`.
///
/// The integral is taken in the variable `s = t^{α_n}`, where
/// `E_n'(t) dt = e_{k_n−1}(s) ds` and the integrand is smooth.
pub fn h_coeff(
    f: &QuaternionField,
    n: usize,
    l: usize,
    params: &OperatorParams,
    x: &[f64; 4],
) -> Result<f64> {
    let trunc = truncation(params)?;
    let sigma = params.sigma[n];
    if sigma == 0.0 {
        return Err(Error::ZeroSigma { axis: n });
    }
    let (alpha, k) = trunc[n];
    let factor = (sigma - 1.0) / sigma;
    let xn = x[n];
    if !(xn > 0.0) {
        return Err(Error::domain(format!("H needs x{n} > 0, got {xn}")));
    }
    let beta = params.beta[n];
    if beta == 1.0 {
        return Ok(factor * (params.measures[n].eval(xn)? - 1.0));
    }
    let pred = k.pred();
    let integral = integrate(
        |s| {
            let mut y = *x;
            y[n] = s.powf(1.0 / alpha);
            let w = pred.map_or(0.0, |p| truncated_exp_series(s, p));
            Ok(w * beta_power(f.component_value(l, &y)?, 1.0 - beta)?)
        },
        0.0,
        xn.powf(alpha),
        H_ORDER,
    )?;
    Ok(factor * integral)
}

/// `T_{n,ℓ}[f](x) = c_n' f_ℓ^{β_n} − (1 − σ_n) f_ℓ`; on the right side
/// this is `S_{n,ℓ}[g]`.
pub fn t_coeff(
    f: &QuaternionField,
    n: usize,
    l: usize,
    params: &OperatorParams,
    x: &[f64; 4],
) -> Result<f64> {
    let v = f.component_value(l, x)?;
    Ok(c_coeff_deriv(params, n, x[n])? * beta_power(v, params.beta[n])? - (1.0 - params.sigma[n]) * v)
}

/// All pointwise truncated-operator quantities of one field at one point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TruncatedTerms {
    pub h: [[f64; 4]; 4],
    pub t: [[f64; 4]; 4],
    /// `W[f]` on the left, `V[g]` on the right.
    pub w: Quaternion,
    pub i_beta: [Quaternion; 4],
    /// `A` on the left, `B` on the right.
    pub a: Quaternion,
}

/// `Σ_n Σ_{ℓ≠n} c_ℓ ψ_n ∂_n I^{β_ℓ}[f]` (left) or `Σ c_ℓ ∂_n I^{β_ℓ}[g] ψ_n`.
pub fn w_term(f: &QuaternionField, params: &OperatorParams, x: &[f64; 4]) -> Result<Quaternion> {
    let psi = f.frame().psi();
    let mut acc = Quaternion::ZERO;
    for n in 0..4 {
        for l in (0..4).filter(|&l| l != n) {
            let c = c_coeff(params, l, x[l])?;
            if c == 0.0 {
                continue;
            }
            acc += params.side.apply(psi[n], d_i_beta(f, params.beta[l], n, params, x)?) * c;
        }
    }
    Ok(acc)
}

/// `Σ ψ_n (c_n' − (1 − σ_n))`, multiplied on the left of `f` for the left
/// operator; on the right side `Σ (c_n' − (1 − ρ_n)) ψ_n` multiplies `g`
/// from the right.
pub fn a_coeff(params: &OperatorParams, frame: &crate::quaternion::StructuralSet, x: &[f64; 4]) -> Result<Quaternion> {
    let mut acc = Quaternion::ZERO;
    for n in 0..4 {
        acc += frame.get(n) * (c_coeff_deriv(params, n, x[n])? - (1.0 - params.sigma[n]));
    }
    Ok(acc)
}

pub fn truncated_terms(f: &QuaternionField, params: &OperatorParams, x: &[f64; 4]) -> Result<TruncatedTerms> {
    truncation(params)?;
    check_positivity(f, &params.beta, x)?;
    let mut h = [[0.0; 4]; 4];
    let mut t = [[0.0; 4]; 4];
    for n in 0..4 {
        for l in 0..4 {
            h[n][l] = h_coeff(f, n, l, params, x)?;
            t[n][l] = t_coeff(f, n, l, params, x)?;
        }
    }
    let mut ib = [Quaternion::ZERO; 4];
    for n in 0..4 {
        ib[n] = i_beta(f, params.beta[n], x)?;
    }
    Ok(TruncatedTerms {
        h,
        t,
        w: w_term(f, params, x)?,
        i_beta: ib,
        a: a_coeff(params, f.frame(), x)?,
    })
}

/// How `ψD[Σ_ℓ c_ℓ I^{β_ℓ}[f]]` is evaluated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LhsMode {
    /// Exact partials of the composite expression.
    #[default]
    Symbolic,
    /// Central differences with the given step.
    CentralFd(f64),
}

/// The field `F = Σ_ℓ c_ℓ(x_ℓ) I^{β_ℓ}[f]` as DSL components.
pub fn transformed_field(f: &QuaternionField, params: &OperatorParams) -> Result<QuaternionField> {
    truncation(params)?;
    let coeffs: [Expr; 4] = std::array::from_fn(|l| {
        dsl::div(dsl::constant(params.sigma[l]), params.measures[l].deriv_expr(l))
    });
    let comps: [Expr; 4] = std::array::from_fn(|m| {
        let mut acc = dsl::constant(0.0);
        for (l, c) in coeffs.iter().enumerate() {
            let p = dsl::pow(f.component(m).clone(), params.beta[l]);
            acc = dsl::add(acc, dsl::mul(c.clone(), p));
        }
        acc
    });
    QuaternionField::new(comps, f.frame().clone())
}

/// `F(x)` evaluated pointwise, without building expressions.
pub fn transformed_value(f: &QuaternionField, params: &OperatorParams, x: &[f64; 4]) -> Result<Quaternion> {
    let mut acc = Quaternion::ZERO;
    for l in 0..4 {
        let c = c_coeff(params, l, x[l])?;
        if c != 0.0 {
            acc += i_beta(f, params.beta[l], x)? * c;
        }
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TruncatedDecomposition {
    pub lhs: Quaternion,
    pub operator: Quaternion,
    /// `Σψψ T` (or `A f`, `g B` in the β = 1 form).
    pub coeff_sum: Quaternion,
    pub w: Quaternion,
    pub residual: Quaternion,
}

impl TruncatedDecomposition {
    pub fn rhs(&self) -> Quaternion {
        self.operator + self.coeff_sum + self.w
    }

    pub fn norm(&self) -> f64 {
        self.residual.norm()
    }
}

fn lhs_value(f: &QuaternionField, params: &OperatorParams, x: &[f64; 4], mode: LhsMode) -> Result<Quaternion> {
    match mode {
        LhsMode::Symbolic => fueter(&transformed_field(f, params)?, params.side, x),
        LhsMode::CentralFd(h) => {
            if !(h > 0.0) {
                return Err(Error::param("finite-difference step must be positive"));
            }
            fueter_fd(f.frame(), params.side, |y| transformed_value(f, params, y), x, h)
        }
    }
}

fn check_sigma_positive(params: &OperatorParams) -> Result<()> {
    match params.sigma.iter().position(|&s| s == 0.0) {
        Some(n) => Err(Error::ZeroSigma { axis: n }),
        None => Ok(()),
    }
}

/// Residual `ψD[F] − (ψD^{σ,β}_{α,k} f + Σ ψ_nψ_ℓ T_{n,ℓ} + ψW[f])`, or the
/// right version with `S` and `V`.
pub fn truncated_decomposition_residual(
    f: &QuaternionField,
    params: &OperatorParams,
    x: &[f64; 4],
    mode: LhsMode,
) -> Result<TruncatedDecomposition> {
    truncation(params)?;
    check_sigma_positive(params)?;
    check_positivity(f, &params.beta, x)?;
    let psi = f.frame().psi();
    let lhs = lhs_value(f, params, x, mode)?;
    let operator = d_trunc(f, params, x)?;
    let mut coeff_sum = Quaternion::ZERO;
    for n in 0..4 {
        for l in 0..4 {
            coeff_sum += params.side.apply(psi[n], psi[l]) * t_coeff(f, n, l, params, x)?;
        }
    }
    let w = w_term(f, params, x)?;
    let residual = lhs - (operator + coeff_sum + w);
    Ok(TruncatedDecomposition {
        lhs,
        operator,
        coeff_sum,
        w,
        residual,
    })
}

/// The `β = (1,1,1,1)` form `ψD[Σ c_ℓ f] = ψD^{σ,1} f + A f + W[f]` and its
/// right analogue `D_ψ[Σ c_ℓ g] = D^{ρ,1}_r g + g B + V[g]`.
pub fn truncated_ab_residual(
    f: &QuaternionField,
    params: &OperatorParams,
    x: &[f64; 4],
    mode: LhsMode,
) -> Result<TruncatedDecomposition> {
    truncation(params)?;
    check_sigma_positive(params)?;
    if params.beta.iter().any(|&b| b != 1.0) {
        return Err(Error::HypothesisViolated("the A/B form needs β = (1,1,1,1)".into()));
    }
    let lhs = lhs_value(f, params, x, mode)?;
    let operator = d_trunc(f, params, x)?;
    let a = a_coeff(params, f.frame(), x)?;
    let fx = f.eval(x)?;
    let coeff_sum = match params.side {
        Side::Left => a * fx,
        Side::Right => fx * a,
    };
    let w = w_term(f, params, x)?;
    let residual = lhs - (operator + coeff_sum + w);
    Ok(TruncatedDecomposition {
        lhs,
        operator,
        coeff_sum,
        w,
        residual,
    })
}
