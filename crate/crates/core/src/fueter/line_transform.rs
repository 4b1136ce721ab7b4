//! Line integrals `λ`, the transform `𝔏`, the correction `ℰ` and the
//! coefficients `L` relating `ψD[𝔏f]` to the proportional β-fractal
//! operator.
//!
//! For axis `n` and component `m`,
//! `λ_n(f_m)(x) = ∫_a^{x_n} ∂^{β_n}_{ν_n} f_m(x|x_n=t) dt`, all other
//! coordinates frozen, and `𝔏f = Σ_k χ_{k,0}(σ_k, x_k) Σ_m ψ_m λ_k(f_m)`.

use serde::{Deserialize, Serialize};

use super::{beta_partial, central_diff, check_positivity, prop_fractal_fueter, OperatorParams};
use crate::error::{Error, Result};
use crate::field::QuaternionField;
use crate::quadrature::{geometric_breaks, integrate, integrate_panels};
use crate::quaternion::Quaternion;

/// Step of the central differences applied to line integrals.
pub const FD_STEP: f64 = 1e-5;
/// Grading ratio of the panels toward a singular lower endpoint.
pub const GRADING_RATIO: f64 = 0.15;

const LAMBDA_TOL: f64 = 1e-12;
const CHI0_TOL: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LineIntegralSpec {
    pub order: usize,
    pub lower: f64,
    pub panels: usize,
}

impl Default for LineIntegralSpec {
    fn default() -> Self {
        LineIntegralSpec {
            order: 64,
            lower: 0.0,
            panels: 8,
        }
    }
}

impl LineIntegralSpec {
    pub fn validate(&self) -> Result<()> {
        if self.order < 2 {
            return Err(Error::param("line-integral order must be at least 2"));
        }
        if !(self.lower >= 0.0) || !self.lower.is_finite() {
            return Err(Error::param("line-integral lower endpoint must be finite and ≥ 0"));
        }
        if self.panels == 0 {
            return Err(Error::param("line-integral panel count must be positive"));
        }
        Ok(())
    }
}

fn along(x: &[f64; 4], n: usize, t: f64) -> [f64; 4] {
    let mut y = *x;
    y[n] = t;
    y
}

/// `λ_n(f_m)(x)`.
pub fn lambda_component(
    f: &QuaternionField,
    n: usize,
    m: usize,
    params: &OperatorParams,
    x: &[f64; 4],
    spec: &LineIntegralSpec,
) -> Result<f64> {
    let a = spec.lower;
    let b = x[n];
    if !(a < b) {
        return Err(Error::domain(format!(
            "λ needs the lower endpoint {a} below x{n} = {b}"
        )));
    }
    let measure = &params.measures[n];
    let beta = params.beta[n];
    let fractional = beta != 0.0 && beta != 1.0;
    if a == 0.0 && !measure.integrable_at_zero() {
        return Err(Error::IntegrandSingular(format!(
            "1/ν'{n} is not integrable at 0; set a positive line.lower"
        )));
    }
    let integrand = |t: f64| -> Result<f64> {
        let y = along(x, n, t);
        beta_partial(f, n, m, params, &y).map_err(|e| match e {
            Error::SingularMeasure { t, deriv } => Error::IntegrandSingular(format!(
                "ν'{n}({t}) = {deriv} inside the λ integral"
            )),
            other => other,
        })
    };
    if a == 0.0 && (measure.singular_at_zero() || fractional) {
        let breaks = geometric_breaks(a, b, spec.panels, GRADING_RATIO);
        integrate_panels(integrand, &breaks, spec.order)
    } else {
        integrate(integrand, a, b, spec.order)
    }
}

/// `λ_n(f)(x) = Σ_m ψ_m λ_n(f_m)(x)`.
pub fn lambda_int(
    f: &QuaternionField,
    n: usize,
    params: &OperatorParams,
    x: &[f64; 4],
    spec: &LineIntegralSpec,
) -> Result<Quaternion> {
    let mut c = [0.0; 4];
    for (m, slot) in c.iter_mut().enumerate() {
        *slot = lambda_component(f, n, m, params, x, spec)?;
    }
    Ok(f.frame().from_coords(c))
}

/// `𝔏f(x) = Σ_k χ_{k,0}(σ_k, x_k) λ_k(f)(x)`.
pub fn frak_l(
    f: &QuaternionField,
    params: &OperatorParams,
    x: &[f64; 4],
    spec: &LineIntegralSpec,
) -> Result<Quaternion> {
    let mut acc = Quaternion::ZERO;
    for k in 0..4 {
        let (_, chi0) = params.chi(k, x[k])?;
        if chi0 != 0.0 {
            acc += lambda_int(f, k, params, x, spec)? * chi0;
        }
    }
    Ok(acc)
}

/// `ℰ[f](x) = Σ_{n≠k} ψ_n ∂_n[χ_{k,0} λ_k(f)](x)` (left) or with `ψ_n`
/// on the right, the outer partial by central differences.
pub fn e_term(
    f: &QuaternionField,
    params: &OperatorParams,
    x: &[f64; 4],
    spec: &LineIntegralSpec,
) -> Result<Quaternion> {
    let psi = f.frame().psi();
    let mut acc = Quaternion::ZERO;
    for k in 0..4 {
        // χ_{k,0} depends on x_k only, so it factors out of ∂_n for n ≠ k.
        let (_, chi0) = params.chi(k, x[k])?;
        if chi0 == 0.0 {
            continue;
        }
        for n in (0..4).filter(|&n| n != k) {
            let d = central_diff(|y| lambda_int(f, k, params, y, spec), x, n, FD_STEP)?;
            acc += params.side.apply(psi[n], d * chi0);
        }
    }
    Ok(acc)
}

fn guarded_lambda(lambda: f64, n: usize, m: usize) -> Result<f64> {
    if !(lambda.abs() >= LAMBDA_TOL) {
        return Err(Error::ZeroLambda {
            axis: n,
            component: m,
            value: lambda,
        });
    }
    Ok(lambda)
}

fn guarded_chi0(chi0: f64, n: usize) -> Result<f64> {
    if !(chi0.abs() >= CHI0_TOL) {
        return Err(Error::ZeroChi0 { axis: n, value: chi0 });
    }
    Ok(chi0)
}

/// `L_{n,m}[f](x) = ∂χ_{n,0}/∂x_n − χ_{n,1} f_m / λ_n(f_m)`, the expanded
/// form of `e^{h} ∂_n(χ_{n,0} e^{−h})`. On the right side this is the
/// coefficient `T_{n,m}[g]`.
pub fn l_coeff(
    f: &QuaternionField,
    n: usize,
    m: usize,
    params: &OperatorParams,
    x: &[f64; 4],
    spec: &LineIntegralSpec,
) -> Result<f64> {
    let lambda = lambda_component(f, n, m, params, x, spec)?;
    l_coeff_with(f, n, m, params, x, lambda)
}

fn l_coeff_with(
    f: &QuaternionField,
    n: usize,
    m: usize,
    params: &OperatorParams,
    x: &[f64; 4],
    lambda: f64,
) -> Result<f64> {
    let (chi1, chi0) = params.chi(n, x[n])?;
    guarded_chi0(chi0, n)?;
    let dchi0 = params.pairs[n].dchi0(params.sigma[n], x[n])?;
    if chi1 == 0.0 {
        return Ok(dchi0);
    }
    let lambda = guarded_lambda(lambda, n, m)?;
    Ok(dchi0 - chi1 * f.component_value(m, x)? / lambda)
}

/// `h_{n,m}(x) = ∫_{a_h}^{x_n} (χ_{n,1}/χ_{n,0})(σ_n, t) f_m/λ_n(f_m) dt`
/// along axis `n`.
pub fn h_int(
    f: &QuaternionField,
    n: usize,
    m: usize,
    params: &OperatorParams,
    x: &[f64; 4],
    spec: &LineIntegralSpec,
    a_h: f64,
) -> Result<f64> {
    if !(a_h < x[n]) {
        return Err(Error::domain(format!("h needs a_h = {a_h} below x{n} = {}", x[n])));
    }
    integrate(
        |t| {
            let y = along(x, n, t);
            let (chi1, chi0) = params.chi(n, t)?;
            if chi1 == 0.0 {
                return Ok(0.0);
            }
            if !(chi0.abs() >= CHI0_TOL) {
                return Err(Error::ZeroDenominator(format!("χ{n},0({t}) = {chi0}")));
            }
            let lambda = lambda_component(f, n, m, params, &y, spec)?;
            if !(lambda.abs() >= LAMBDA_TOL) {
                return Err(Error::ZeroDenominator(format!("λ{n}(f{m}) = {lambda} at t = {t}")));
            }
            Ok(chi1 / chi0 * f.component_value(m, &y)? / lambda)
        },
        a_h,
        x[n],
        spec.order,
    )
}

/// `e^{h} ∂_n(χ_{n,0} e^{−h})` with `h` from [`h_int`] and the outer
/// partial by Richardson-extrapolated central differences; used to
/// cross-check [`l_coeff`].
pub fn l_coeff_literal(
    f: &QuaternionField,
    n: usize,
    m: usize,
    params: &OperatorParams,
    x: &[f64; 4],
    spec: &LineIntegralSpec,
    a_h: f64,
    step: f64,
) -> Result<f64> {
    let weight = |y: &[f64; 4]| -> Result<f64> {
        let (_, chi0) = params.chi(n, y[n])?;
        Ok(chi0 * (-h_int(f, n, m, params, y, spec, a_h)?).exp())
    };
    let diff = |s: f64| -> Result<f64> {
        let mut a = *x;
        let mut b = *x;
        a[n] += s;
        b[n] -= s;
        Ok((weight(&a)? - weight(&b)?) / (2.0 * s))
    };
    // one Richardson step on the central difference
    let d = (4.0 * diff(0.5 * step)? - diff(step)?) / 3.0;
    Ok(d * h_int(f, n, m, params, x, spec, a_h)?.exp())
}

/// Terms of `ψD[𝔏f] = ψD^{σ,β}_ν f + ℰ[f] + Σ ψ_nψ_m L_{n,m} λ_n(f_m)`
/// (left) or of the mirrored right identity with `Σ ψ_mψ_n T_{n,m} λ_n(g_m)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LineDecomposition {
    pub lhs: Quaternion,
    pub operator: Quaternion,
    pub e_term: Quaternion,
    pub coeff_sum: Quaternion,
    pub residual: Quaternion,
}

impl LineDecomposition {
    pub fn rhs(&self) -> Quaternion {
        self.operator + self.e_term + self.coeff_sum
    }

    pub fn norm(&self) -> f64 {
        self.residual.norm()
    }
}

/// `Σ_{n,m} ψ_nψ_m L_{n,m} λ_n(f_m)` (left) or `Σ ψ_mψ_n T_{n,m} λ_n(g_m)`
/// (right).
pub fn coeff_lambda_sum(
    f: &QuaternionField,
    params: &OperatorParams,
    x: &[f64; 4],
    spec: &LineIntegralSpec,
) -> Result<Quaternion> {
    let psi = f.frame().psi();
    let mut acc = Quaternion::ZERO;
    for n in 0..4 {
        for m in 0..4 {
            let lambda = lambda_component(f, n, m, params, x, spec)?;
            let c = l_coeff_with(f, n, m, params, x, lambda)?;
            acc += params.side.apply(psi[n], psi[m]) * (c * lambda);
        }
    }
    Ok(acc)
}

/// Residual of the decomposition of the classical operator applied to
/// `𝔏f`, with `ψD[𝔏f]` by central differences of `𝔏`.
pub fn line_decomposition_residual(
    f: &QuaternionField,
    params: &OperatorParams,
    x: &[f64; 4],
    spec: &LineIntegralSpec,
) -> Result<LineDecomposition> {
    spec.validate()?;
    params.validate()?;
    check_positivity(f, &params.beta, x)?;
    let psi = f.frame().psi();
    let mut lhs = Quaternion::ZERO;
    for n in 0..4 {
        let d = central_diff(|y| frak_l(f, params, y, spec), x, n, FD_STEP)?;
        lhs += params.side.apply(psi[n], d);
    }
    let operator = prop_fractal_fueter(f, params, x)?;
    let e = e_term(f, params, x, spec)?;
    let coeff_sum = coeff_lambda_sum(f, params, x, spec)?;
    let residual = lhs - (operator + e + coeff_sum);
    Ok(LineDecomposition {
        lhs,
        operator,
        e_term: e,
        coeff_sum,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fueter::Side;
    use crate::measures::{FractalMeasure, ProportionalPair, TruncOrder};
    use crate::quaternion::StructuralSet;

    fn field(c: [&str; 4]) -> QuaternionField {
        QuaternionField::parse(c, StructuralSet::standard()).unwrap()
    }

    fn canonical(sigma: f64, beta: f64, m: FractalMeasure) -> OperatorParams {
        OperatorParams::uniform(Side::Left, sigma, beta, m, ProportionalPair::Canonical).unwrap()
    }

    #[test]
    fn lambda_examples() {
        let spec = LineIntegralSpec::default();
        let f = field(["x0^2*x1 + x2", "x1", "exp(x3)", "3"]);
        let p = canonical(0.5, 1.0, FractalMeasure::identity());
        let x = [1.2, 0.7, 1.9, 0.4];
        // fundamental theorem of calculus
        for n in 0..4 {
            let at0 = f.substitute(n, 0.0).unwrap();
            for m in 0..4 {
                let l = lambda_component(&f, n, m, &p, &x, &spec).unwrap();
                let want = f.component_value(m, &x).unwrap() - at0.component_value(m, &x).unwrap();
                assert!((l - want).abs() < 1e-13, "n={n} m={m}: {l} vs {want}");
            }
        }
        assert!((lambda_component(&f, 1, 1, &p, &x, &spec).unwrap() - 0.7).abs() < 1e-15);
        assert_eq!(lambda_component(&f, 0, 3, &p, &x, &spec).unwrap(), 0.0);
    }

    #[test]
    fn frak_l_and_e_term_examples() {
        let spec = LineIntegralSpec::default();
        let x = [0.8, 1.3, 0.6, 1.1];
        let c = field(["2", "1", "0", "5"]);
        let p = canonical(0.5, 1.0, FractalMeasure::identity());
        assert_eq!(frak_l(&c, &p, &x, &spec).unwrap(), Quaternion::ZERO);
        assert_eq!(e_term(&c, &p, &x, &spec).unwrap(), Quaternion::ZERO);

        let one_axis = field(["x2", "x2^2", "0", "1"]);
        assert!(e_term(&one_axis, &p, &x, &spec).unwrap().norm() < 1e-10);

        let f = field(["x0*x1 + x2*x3", "sin(x1) + x0", "x3^3", "x0*x1*x2"]);
        let p = canonical(1.0, 1.0, FractalMeasure::identity());
        let mut want = Quaternion::ZERO;
        for k in 0..4 {
            want += f.eval(&x).unwrap() - f.substitute(k, 0.0).unwrap().eval(&x).unwrap();
        }
        assert!((frak_l(&f, &p, &x, &spec).unwrap() - want).norm() < 1e-13);
    }

    #[test]
    fn coefficients() {
        let spec = LineIntegralSpec::default();
        let x = [0.9, 1.4, 0.7, 1.6];
        let f = field(["x0", "x1", "x2", "x3"]);
        let p = canonical(0.5, 1.0, FractalMeasure::identity());
        for n in 0..4 {
            assert!((l_coeff(&f, n, n, &p, &x, &spec).unwrap() + 0.5).abs() < 1e-14);
        }
        let p1 = canonical(1.0, 1.0, FractalMeasure::identity());
        assert_eq!(l_coeff(&f, 0, 1, &p1, &x, &spec).unwrap(), 0.0);
        // λ_0(f_1) = 0 for σ < 1
        assert!(matches!(l_coeff(&f, 0, 1, &p, &x, &spec), Err(Error::ZeroLambda { .. })));
    }

    #[test]
    fn h_examples() {
        let spec = LineIntegralSpec::default();
        let f = field(["x1", "x0", "1", "1"]);
        let x = [1.0, 1.0, 1.0, 1.0];
        let p = canonical(0.5, 1.0, FractalMeasure::identity());
        let h = h_int(&f, 0, 1, &p, &x, &spec, 0.1).unwrap();
        assert!((h - 0.9).abs() < 1e-13);
        let p1 = canonical(1.0, 1.0, FractalMeasure::identity());
        assert_eq!(h_int(&f, 0, 1, &p1, &x, &spec, 0.1).unwrap(), 0.0);
    }

    #[test]
    fn expanded_coefficient_matches_literal_form() {
        let spec = LineIntegralSpec::default();
        let f = field(["1 + x0^2*x1", "2 + sin(x0*x2)", "exp(0.3*x0) + x3", "1 + x0*x1*x2*x3"]);
        let m = FractalMeasure::truncated_exp(0.5, TruncOrder::Finite(2)).unwrap();
        let p = canonical(0.5, 0.5, m);
        let x = [1.3, 0.8, 1.5, 0.9];
        for mm in 0..4 {
            let a = l_coeff(&f, 0, mm, &p, &x, &spec).unwrap();
            let b = l_coeff_literal(&f, 0, mm, &p, &x, &spec, 0.1 * x[0], 2e-4).unwrap();
            assert!((a - b).abs() < 1e-9, "m={mm}: {a} vs {b}");
        }
    }

    #[test]
    fn decomposition_holds_left_and_right() {
        let spec = LineIntegralSpec::default();
        // every component depends on every coordinate, so no λ vanishes
        let f = field([
            "1 + x0*x1*x2*x3",
            "2 + x0 + x1^2 + x2*x3",
            "1 + exp(0.2*(x0 + x1 + x2 + x3))",
            "3 + sin(x0*x1) + x2 + x3^2",
        ]);
        let x = [1.1, 0.7, 1.6, 1.3];
        for side in [Side::Left, Side::Right] {
            let m = FractalMeasure::truncated_exp(0.5, TruncOrder::Finite(2)).unwrap();
            let p = canonical(0.5, 0.5, m).with_side(side);
            let d = line_decomposition_residual(&f, &p, &x, &spec).unwrap();
            assert!(d.norm() < 1e-6, "{side:?}: {}", d.norm());
            assert!(d.coeff_sum.norm() > 1e-3);
        }
    }

    #[test]
    fn decomposition_guards() {
        let spec = LineIntegralSpec::default();
        let f = field(["x0 - 1", "1", "1", "1"]);
        let p = canonical(0.5, 0.5, FractalMeasure::identity());
        assert!(matches!(
            line_decomposition_residual(&f, &p, &[0.5; 4], &spec),
            Err(Error::HypothesisViolated(_))
        ));
        let p2 = canonical(0.5, 1.0, FractalMeasure::power(2.0).unwrap());
        assert!(matches!(
            lambda_component(&f, 0, 0, &p2, &[1.0; 4], &spec),
            Err(Error::IntegrandSingular(_))
        ));
    }
}
