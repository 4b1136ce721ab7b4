//! ψ-Fueter operators and their proportional β-fractal generalizations.
//!
//! Left operators multiply by `ψ_n` from the left, right operators from the
//! right: `ψD f = Σ ψ_n ∂_n f` and `D_ψ f = Σ ∂_n f ψ_n`.

pub mod line_transform;
pub mod truncated;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::QuaternionField;
use crate::measures::{FractalMeasure, MeasureKind, ProportionalPair, TruncOrder};
use crate::quaternion::{Quaternion, StructuralSet};
use crate::scalar::{beta_power_slope, check_beta, DiffMode};

pub use line_transform::{
    line_decomposition_residual, e_term, frak_l, h_int, l_coeff, l_coeff_literal, lambda_component,
    lambda_int, LineDecomposition, LineIntegralSpec,
};
pub use truncated::{
    d_trunc, trunc_partial, truncated_ab_residual, truncated_decomposition_residual, truncated_terms,
    TruncatedDecomposition,
    LhsMode, TruncatedTerms,
};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    #[default]
    Left,
    Right,
}

impl Side {
    /// `ψ q` on the left side, `q ψ` on the right.
    #[inline]
    pub fn apply(self, psi: Quaternion, q: Quaternion) -> Quaternion {
        match self {
            Side::Left => psi * q,
            Side::Right => q * psi,
        }
    }
}

/// Per-axis parameters of a proportional β-fractal Fueter operator.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorParams {
    pub side: Side,
    pub sigma: [f64; 4],
    pub beta: [f64; 4],
    pub measures: [FractalMeasure; 4],
    pub pairs: [ProportionalPair; 4],
    pub diff_mode: DiffMode,
}

impl OperatorParams {
    pub fn new(
        side: Side,
        sigma: [f64; 4],
        beta: [f64; 4],
        measures: [FractalMeasure; 4],
        pairs: [ProportionalPair; 4],
    ) -> Result<Self> {
        let p = OperatorParams {
            side,
            sigma,
            beta,
            measures,
            pairs,
            diff_mode: DiffMode::Symbolic,
        };
        p.validate()?;
        Ok(p)
    }

    /// Same `σ`, `β`, measure and pair on every axis.
    pub fn uniform(
        side: Side,
        sigma: f64,
        beta: f64,
        measure: FractalMeasure,
        pair: ProportionalPair,
    ) -> Result<Self> {
        Self::new(
            side,
            [sigma; 4],
            [beta; 4],
            std::array::from_fn(|_| measure.clone()),
            std::array::from_fn(|_| pair.clone()),
        )
    }

    /// `σ = β = 1`, identity measures: the classical operator.
    pub fn classical(side: Side) -> Self {
        Self::uniform(side, 1.0, 1.0, FractalMeasure::identity(), ProportionalPair::Canonical)
            .expect("classical parameters are valid")
    }

    /// Truncated-exponential measures `e(t^{α_n})_{k_n}` with canonical
    /// pairs.
    pub fn truncated(
        side: Side,
        sigma: [f64; 4],
        beta: [f64; 4],
        alpha: [f64; 4],
        k: [TruncOrder; 4],
    ) -> Result<Self> {
        let mut measures = Vec::with_capacity(4);
        for n in 0..4 {
            measures.push(FractalMeasure::truncated_exp(alpha[n], k[n])?);
        }
        Self::new(
            side,
            sigma,
            beta,
            measures.try_into().expect("four measures"),
            std::array::from_fn(|_| ProportionalPair::Canonical),
        )
    }

    pub fn with_diff_mode(mut self, mode: DiffMode) -> Result<Self> {
        self.diff_mode = mode;
        self.validate()?;
        Ok(self)
    }

    pub fn with_side(mut self, side: Side) -> Self {
        self.side = side;
        self
    }

    pub fn validate(&self) -> Result<()> {
        for n in 0..4 {
            if !(0.0..=1.0).contains(&self.sigma[n]) {
                return Err(Error::param(format!(
                    "σ{n} = {} must lie in [0, 1]",
                    self.sigma[n]
                )));
            }
            check_beta(self.beta[n])?;
        }
        if let DiffMode::CentralFd { h } = self.diff_mode {
            if !(h > 0.0) {
                return Err(Error::param("finite-difference step must be positive"));
            }
        }
        Ok(())
    }

    /// `(α_n, k_n)` when every axis uses a truncated exponential with the
    /// canonical pair.
    pub fn truncation(&self) -> Option<[(f64, TruncOrder); 4]> {
        let mut out = [(0.0, TruncOrder::Infinite); 4];
        for n in 0..4 {
            if !self.pairs[n].is_canonical() {
                return None;
            }
            match self.measures[n].kind() {
                MeasureKind::TruncatedExp { alpha, k } => out[n] = (*alpha, *k),
                _ => return None,
            }
        }
        Some(out)
    }

    /// `(χ_{n,1}, χ_{n,0})` at coordinate value `t`.
    #[inline]
    pub fn chi(&self, n: usize, t: f64) -> Result<(f64, f64)> {
        self.pairs[n].eval(self.sigma[n], t)
    }
}

/// `∂_n f_m(x)` by the parameters' differentiation mode.
#[inline]
pub fn component_partial(
    f: &QuaternionField,
    n: usize,
    m: usize,
    x: &[f64; 4],
    mode: DiffMode,
) -> Result<f64> {
    match mode {
        DiffMode::Symbolic => f.partial_value(n, m, x),
        DiffMode::CentralFd { h } => {
            let mut a = *x;
            let mut b = *x;
            a[n] += h;
            b[n] -= h;
            Ok((f.component_value(m, &a)? - f.component_value(m, &b)?) / (2.0 * h))
        }
    }
}

/// The β-fractal partial `∂(f_m^{β_n})/∂x_n / ν_n'(x_n)`.
pub fn beta_partial(
    f: &QuaternionField,
    n: usize,
    m: usize,
    params: &OperatorParams,
    x: &[f64; 4],
) -> Result<f64> {
    let dn = params.measures[n].deriv_checked(x[n])?;
    let slope = beta_power_slope(
        f.component_value(m, x)?,
        component_partial(f, n, m, x, params.diff_mode)?,
        params.beta[n],
    )?;
    Ok(slope / dn)
}

/// `χ_{n,1} f_m + χ_{n,0} ∂^{β_n}_{ν_n} f_m` at `x`.
pub fn prop_partial(
    f: &QuaternionField,
    n: usize,
    m: usize,
    params: &OperatorParams,
    x: &[f64; 4],
) -> Result<f64> {
    let (chi1, chi0) = params.chi(n, x[n])?;
    let v = f.component_value(m, x)?;
    if chi0 == 0.0 {
        return Ok(chi1 * v);
    }
    Ok(chi1 * v + chi0 * beta_partial(f, n, m, params, x)?)
}

/// `ψD f(x) = Σ_k ψ_k ∂_k f(x)`.
pub fn fueter_left(f: &QuaternionField, x: &[f64; 4]) -> Result<Quaternion> {
    fueter(f, Side::Left, x)
}

/// `D_ψ f(x) = Σ_k ∂_k f(x) ψ_k`.
pub fn fueter_right(f: &QuaternionField, x: &[f64; 4]) -> Result<Quaternion> {
    fueter(f, Side::Right, x)
}

pub fn fueter(f: &QuaternionField, side: Side, x: &[f64; 4]) -> Result<Quaternion> {
    let psi = f.frame().psi();
    let mut acc = Quaternion::ZERO;
    for k in 0..4 {
        acc += side.apply(psi[k], f.partial(k, x)?);
    }
    Ok(acc)
}

/// The ψ-proportional β-fractal Fueter operator of `f` at `x`, on the side
/// given by `params`.
pub fn prop_fractal_fueter(f: &QuaternionField, params: &OperatorParams, x: &[f64; 4]) -> Result<Quaternion> {
    let psi = f.frame().psi();
    let mut acc = Quaternion::ZERO;
    for n in 0..4 {
        let mut c = [0.0; 4];
        for (m, slot) in c.iter_mut().enumerate() {
            *slot = prop_partial(f, n, m, params, x)?;
        }
        acc += params.side.apply(psi[n], f.frame().from_coords(c));
    }
    Ok(acc)
}

/// Fails with `HypothesisViolated` if some component that is raised to a
/// fractional power is not positive at `x`.
pub fn check_positivity(f: &QuaternionField, beta: &[f64; 4], x: &[f64; 4]) -> Result<()> {
    if beta.iter().all(|&b| b == 0.0 || b == 1.0) {
        return Ok(());
    }
    for m in 0..4 {
        let v = f.component_value(m, x)?;
        if !(v > 0.0) {
            return Err(Error::HypothesisViolated(format!(
                "component {m} is {v} at {x:?}; fractional β needs positive components"
            )));
        }
    }
    Ok(())
}

/// Central difference `(g(x + h e_n) − g(x − h e_n)) / 2h`.
pub(crate) fn central_diff<F>(mut g: F, x: &[f64; 4], n: usize, h: f64) -> Result<Quaternion>
where
    F: FnMut(&[f64; 4]) -> Result<Quaternion>,
{
    let mut a = *x;
    let mut b = *x;
    a[n] += h;
    b[n] -= h;
    Ok((g(&a)? - g(&b)?) * (0.5 / h))
}

/// Classical operator applied to an arbitrary quaternion function by
/// central differences.
pub fn fueter_fd<F>(frame: &StructuralSet, side: Side, mut g: F, x: &[f64; 4], h: f64) -> Result<Quaternion>
where
    F: FnMut(&[f64; 4]) -> Result<Quaternion>,
{
    let mut acc = Quaternion::ZERO;
    for n in 0..4 {
        acc += side.apply(frame.get(n), central_diff(&mut g, x, n, h)?);
    }
    Ok(acc)
}
