//! Borel–Pompeiu and Stokes residuals for the classical ψ-Fueter operators
//! and their proportional fractal generalizations.
//!
//! Every variant is written as the classical identity for a pair of
//! transformed fields `F`, `G` whose volume densities `ψD F`, `D_ψ G` are
//! computed from the decomposition of the variant, never by differentiating
//! `F` or `G` directly:
//!
//! | variant | `F` | `ψD F` |
//! |---|---|---|
//! | classical | `f` | `ψD f` |
//! | generalized | `𝔏f` | `ψD^{σ,β}_{ν,χ} f + ℰ[f] + Σ ψ_nψ_m L_{n,m} λ_n(f_m)` |
//! | ker_restricted | `𝔏f` | `ℰ[f] + Σ ψ_nψ_m L_{n,m} λ_n(f_m)` |
//! | truncated | `Σ c_ℓ I^{β_ℓ}[f]` | `ψD^{σ,β}_{α,k} f + Σ ψ_nψ_ℓ T_{n,ℓ} + ψW[f]` |
//! | ker_restricted_truncated | `Σ c_ℓ I^{β_ℓ}[f]` | `Σ ψ_nψ_ℓ T_{n,ℓ} + ψW[f]` |
//!
//! and symmetrically for `G` with the right operator.

use serde::{Deserialize, Serialize};

use super::{boundary_integral, cauchy_kernel, volume_integral, Box4, QuadratureSpec};
use crate::error::{Error, Result};
use crate::field::QuaternionField;
use crate::fueter::line_transform::coeff_lambda_sum;
use crate::fueter::truncated::{t_coeff, transformed_value, w_term};
use crate::fueter::{
    check_positivity, d_trunc, e_term, frak_l, fueter_left, fueter_right, prop_fractal_fueter,
    LineIntegralSpec, OperatorParams, Side,
};
use crate::quaternion::Quaternion;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    #[default]
    Classical,
    Generalized,
    KerRestricted,
    Truncated,
    KerRestrictedTruncated,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Classical => "classical",
            Variant::Generalized => "generalized",
            Variant::KerRestricted => "ker_restricted",
            Variant::Truncated => "truncated",
            Variant::KerRestrictedTruncated => "ker_restricted_truncated",
        }
    }

    fn is_trunc(self) -> bool {
        matches!(self, Variant::Truncated | Variant::KerRestrictedTruncated)
    }

    fn is_line(self) -> bool {
        matches!(self, Variant::Generalized | Variant::KerRestricted)
    }

    fn is_ker(self) -> bool {
        matches!(self, Variant::KerRestricted | Variant::KerRestrictedTruncated)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityKind {
    BorelPompeiu,
    Stokes,
}

impl IdentityKind {
    pub fn name(self) -> &'static str {
        match self {
            IdentityKind::BorelPompeiu => "borel_pompeiu",
            IdentityKind::Stokes => "stokes",
        }
    }
}

/// Fields, operators and quadrature for one identity check. `f` is acted on
/// by `left` from the left and `g` by `right` from the right.
#[derive(Clone, Debug)]
pub struct IdentityProblem {
    pub f: QuaternionField,
    pub g: QuaternionField,
    pub left: OperatorParams,
    pub right: OperatorParams,
    pub line: LineIntegralSpec,
    pub domain: Box4,
    pub quadrature: QuadratureSpec,
    pub variant: Variant,
}

/// Threshold on the inner fractal operator for the kernel-restricted
/// variants, relative to `1 + |f|`.
pub const KERNEL_TOL: f64 = 1e-9;

impl IdentityProblem {
    pub fn classical(f: QuaternionField, g: QuaternionField, domain: Box4, quadrature: QuadratureSpec) -> Result<Self> {
        Self::new(
            f,
            g,
            OperatorParams::classical(Side::Left),
            OperatorParams::classical(Side::Right),
            LineIntegralSpec::default(),
            domain,
            quadrature,
            Variant::Classical,
        )
    }

    #[allow(clippy::too_many_arguments)]
    pub fn new(
        f: QuaternionField,
        g: QuaternionField,
        left: OperatorParams,
        right: OperatorParams,
        line: LineIntegralSpec,
        domain: Box4,
        quadrature: QuadratureSpec,
        variant: Variant,
    ) -> Result<Self> {
        if f.frame() != g.frame() {
            return Err(Error::param("f and g must share a structural set"));
        }
        let left = left.with_side(Side::Left);
        let right = right.with_side(Side::Right);
        left.validate()?;
        right.validate()?;
        line.validate()?;
        quadrature.validate()?;
        if variant.is_line() {
            if let Some(n) = (0..4).find(|&n| !(domain.lo[n] > line.lower)) {
                return Err(Error::domain(format!(
                    "box lower corner x{n} = {} must exceed line.lower = {}",
                    domain.lo[n], line.lower
                )));
            }
        }
        if variant.is_trunc() {
            for p in [&left, &right] {
                if p.truncation().is_none() {
                    return Err(Error::param(format!(
                        "variant {} needs truncated_exp measures",
                        variant.name()
                    )));
                }
                if let Some(n) = p.sigma.iter().position(|&s| s == 0.0) {
                    return Err(Error::ZeroSigma { axis: n });
                }
            }
        }
        let problem = IdentityProblem {
            f,
            g,
            left,
            right,
            line,
            domain,
            quadrature,
            variant,
        };
        if variant.is_ker() {
            problem.check_kernel_fields()?;
        }
        Ok(problem)
    }

    fn inner_operator(&self, side: Side, y: &[f64; 4]) -> Result<Quaternion> {
        let (h, p) = self.side(side);
        if self.variant.is_trunc() {
            d_trunc(h, p, y)
        } else {
            prop_fractal_fueter(h, p, y)
        }
    }

    fn side(&self, side: Side) -> (&QuaternionField, &OperatorParams) {
        match side {
            Side::Left => (&self.f, &self.left),
            Side::Right => (&self.g, &self.right),
        }
    }

    /// The kernel-restricted variants drop the inner operator, so `f` and
    /// `g` must lie in its kernel. Checked at the center and at the 16
    /// corners of the box shrunk by 10%.
    fn check_kernel_fields(&self) -> Result<()> {
        let inner = self.domain.shrunk(0.1)?;
        let mut pts = vec![self.domain.center()];
        for c in 0..16usize {
            pts.push(std::array::from_fn(|n| if c >> n & 1 == 1 { inner.hi[n] } else { inner.lo[n] }));
        }
        for side in [Side::Left, Side::Right] {
            let (h, _) = self.side(side);
            for y in &pts {
                let d = self.inner_operator(side, y)?.norm();
                let scale = 1.0 + h.eval(y)?.norm();
                if d > KERNEL_TOL * scale {
                    return Err(Error::HypothesisViolated(format!(
                        "variant {} needs fields in the kernel of the inner operator; |D{}| = {d:e} at {y:?}",
                        self.variant.name(),
                        if side == Side::Left { "f" } else { "_r g" },
                    )));
                }
            }
        }
        Ok(())
    }

    /// `F(y)` (left) or `G(y)` (right).
    pub fn transformed(&self, side: Side, y: &[f64; 4]) -> Result<Quaternion> {
        let (h, p) = self.side(side);
        match self.variant {
            Variant::Classical => h.eval(y),
            Variant::Generalized | Variant::KerRestricted => frak_l(h, p, y, &self.line),
            Variant::Truncated | Variant::KerRestrictedTruncated => transformed_value(h, p, y),
        }
    }

    /// `ψD F(y)` (left) or `D_ψ G(y)` (right).
    pub fn density(&self, side: Side, y: &[f64; 4]) -> Result<Quaternion> {
        let (h, p) = self.side(side);
        match self.variant {
            Variant::Classical => match side {
                Side::Left => fueter_left(h, y),
                Side::Right => fueter_right(h, y),
            },
            Variant::Generalized | Variant::KerRestricted => {
                check_positivity(h, &p.beta, y)?;
                let mut acc = e_term(h, p, y, &self.line)? + coeff_lambda_sum(h, p, y, &self.line)?;
                if self.variant == Variant::Generalized {
                    acc += prop_fractal_fueter(h, p, y)?;
                }
                Ok(acc)
            }
            Variant::Truncated | Variant::KerRestrictedTruncated => {
                check_positivity(h, &p.beta, y)?;
                let psi = h.frame().psi();
                let mut acc = w_term(h, p, y)?;
                for n in 0..4 {
                    for l in 0..4 {
                        acc += p.side.apply(psi[n], psi[l]) * t_coeff(h, n, l, p, y)?;
                    }
                }
                if self.variant == Variant::Truncated {
                    acc += d_trunc(h, p, y)?;
                }
                Ok(acc)
            }
        }
    }
}

/// One evaluated identity. `point` is absent for Stokes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityRow {
    pub identity: IdentityKind,
    pub variant: Variant,
    pub point: Option<[f64; 4]>,
    pub inside: bool,
    pub lhs: Quaternion,
    pub rhs: Quaternion,
    /// Surface part of the left-hand side (Stokes: all of it).
    pub boundary: Quaternion,
    /// Volume part: subtracted on the left for Borel–Pompeiu, the whole
    /// right-hand side for Stokes.
    pub volume: Quaternion,
    pub residual: f64,
}

/// Fraction of the smallest edge an evaluation point must keep from the
/// boundary.
pub const BOUNDARY_CLEARANCE: f64 = 0.05;

fn diff(a: &[f64; 4], b: &[f64; 4]) -> [f64; 4] {
    std::array::from_fn(|n| a[n] - b[n])
}

/// `∮ (K(τ−x) σ F + G σ K(τ−x)) − ∫ (K(y−x) ψD F + D_ψ G K(y−x)) dy`
/// against `F(x) + G(x)` inside the box and `0` outside.
pub fn borel_pompeiu_residual(p: &IdentityProblem, x: &[f64; 4]) -> Result<IdentityRow> {
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::domain("evaluation point must be finite"));
    }
    let clearance = BOUNDARY_CLEARANCE * p.domain.min_edge();
    let dist = p.domain.boundary_distance(x);
    if !(dist > clearance) {
        return Err(Error::HypothesisViolated(format!(
            "point {x:?} lies within {dist:e} of the boundary; need more than {clearance:e}"
        )));
    }
    let frame = p.f.frame();
    let boundary = boundary_integral(&p.domain, frame, &p.quadrature, Some(x), |tau, sigma| {
        let k = cauchy_kernel(&diff(tau, x), frame)?;
        let big_f = p.transformed(Side::Left, tau)?;
        let big_g = p.transformed(Side::Right, tau)?;
        Ok(k * sigma * big_f + big_g * sigma * k)
    })?;
    let volume = volume_integral(&p.domain, &p.quadrature, Some(x), |y| {
        let k = cauchy_kernel(&diff(y, x), frame)?;
        Ok(k * p.density(Side::Left, y)? + p.density(Side::Right, y)? * k)
    })?;
    let inside = p.domain.contains(x);
    let rhs = if inside {
        (p.transformed(Side::Left, x)? + p.transformed(Side::Right, x)?) * p.quadrature.orientation()
    } else {
        Quaternion::ZERO
    };
    let lhs = boundary - volume;
    finish(IdentityRow {
        identity: IdentityKind::BorelPompeiu,
        variant: p.variant,
        point: Some(*x),
        inside,
        lhs,
        rhs,
        boundary,
        volume,
        residual: (lhs - rhs).norm(),
    })
}

/// `∮ G σ F` against `∫ (G ψD F + D_ψ G F) dy`.
pub fn stokes_residual(p: &IdentityProblem) -> Result<IdentityRow> {
    let frame = p.f.frame();
    let boundary = boundary_integral(&p.domain, frame, &p.quadrature, None, |tau, sigma| {
        Ok(p.transformed(Side::Right, tau)? * sigma * p.transformed(Side::Left, tau)?)
    })?;
    let volume = volume_integral(&p.domain, &p.quadrature, None, |y| {
        let big_f = p.transformed(Side::Left, y)?;
        let big_g = p.transformed(Side::Right, y)?;
        Ok(big_g * p.density(Side::Left, y)? + p.density(Side::Right, y)? * big_f)
    })?;
    finish(IdentityRow {
        identity: IdentityKind::Stokes,
        variant: p.variant,
        point: None,
        inside: true,
        lhs: boundary,
        rhs: volume,
        boundary,
        volume,
        residual: (boundary - volume).norm(),
    })
}

fn finish(row: IdentityRow) -> Result<IdentityRow> {
    if !row.residual.is_finite() || !row.lhs.is_finite() || !row.rhs.is_finite() {
        return Err(Error::NonFinite(format!(
            "{} ({}) produced a non-finite value",
            row.identity.name(),
            row.variant.name()
        )));
    }
    Ok(row)
}
