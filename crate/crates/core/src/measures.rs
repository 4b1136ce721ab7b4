//! Fractal measures `ν(η, t)` and proportional pairs `(χ₀, χ₁)`.

use serde::{Deserialize, Serialize};

use crate::dsl::{self, diff_expr, parse_expr, Expr, Tape, VAR_SIGMA, VAR_T};
use crate::error::{Error, Result};

/// Largest finite truncation order accepted for `e(t^α)_k`.
pub const MAX_TRUNCATION: u32 = 64;

/// Truncation order `k` of `e(t^α)_k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TruncOrder {
    Finite(u32),
    Infinite,
}

impl TruncOrder {
    /// `k − 1`, with `∞ − 1 = ∞`; `None` encodes the empty sum `e_{-1} = 0`.
    pub fn pred(self) -> Option<TruncOrder> {
        match self {
            TruncOrder::Infinite => Some(TruncOrder::Infinite),
            TruncOrder::Finite(0) => None,
            TruncOrder::Finite(k) => Some(TruncOrder::Finite(k - 1)),
        }
    }
}

impl Serialize for TruncOrder {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            TruncOrder::Finite(k) => s.serialize_u32(*k),
            TruncOrder::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for TruncOrder {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u32),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(k) => Ok(TruncOrder::Finite(k)),
            Raw::Str(s) if matches!(s.as_str(), "inf" | "infinity" | "∞") => {
                Ok(TruncOrder::Infinite)
            }
            Raw::Str(s) => Err(serde::de::Error::custom(format!(
                "truncation order must be a positive integer or \"inf\", got {s:?}"
            ))),
        }
    }
}

/// `e(s)_k = Σ_{i≤k} s^i / i!`, summed in ascending powers; `k = ∞` is
/// `exp(s)`.
pub fn truncated_exp_series(s: f64, k: TruncOrder) -> f64 {
    match k {
        TruncOrder::Infinite => s.exp(),
        TruncOrder::Finite(k) => {
            let mut term = 1.0;
            let mut sum = 1.0;
            for i in 1..=k {
                term *= s / f64::from(i);
                sum += term;
            }
            sum
        }
    }
}

fn series_pred(s: f64, k: TruncOrder) -> f64 {
    k.pred().map_or(0.0, |k| truncated_exp_series(s, k))
}

/// A user-supplied measure `ν(t)` with its symbolic derivatives.
#[derive(Clone, Debug)]
pub struct CustomMeasure {
    expr: Expr,
    d1: Expr,
    tapes: [Tape; 3],
}

#[derive(Clone, Debug)]
pub enum MeasureKind {
    Identity,
    Power { eta: f64 },
    ExpPower { alpha: f64 },
    TruncatedExp { alpha: f64, k: TruncOrder },
    Custom(Box<CustomMeasure>),
}

impl PartialEq for MeasureKind {
    fn eq(&self, other: &Self) -> bool {
        use MeasureKind::*;
        match (self, other) {
            (Identity, Identity) => true,
            (Power { eta: a }, Power { eta: b }) => a == b,
            (ExpPower { alpha: a }, ExpPower { alpha: b }) => a == b,
            (TruncatedExp { alpha: a, k: j }, TruncatedExp { alpha: b, k }) => a == b && j == k,
            (Custom(a), Custom(b)) => a.expr == b.expr,
            _ => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FractalMeasure {
    kind: MeasureKind,
    domain_min: Option<f64>,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::param(format!("α = {alpha} must lie in (0, 1]")));
    }
    Ok(())
}

impl FractalMeasure {
    pub fn identity() -> Self {
        FractalMeasure {
            kind: MeasureKind::Identity,
            domain_min: None,
        }
    }

    /// `ν = t^η`, the Hausdorff measure.
    pub fn power(eta: f64) -> Result<Self> {
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(Error::param(format!("η = {eta} must be positive")));
        }
        Ok(FractalMeasure {
            kind: MeasureKind::Power { eta },
            domain_min: None,
        })
    }

    /// `ν = exp(t^α)`.
    pub fn exp_power(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(FractalMeasure {
            kind: MeasureKind::ExpPower { alpha },
            domain_min: None,
        })
    }

    /// `ν = e(t^α)_k`.
    pub fn truncated_exp(alpha: f64, k: TruncOrder) -> Result<Self> {
        check_alpha(alpha)?;
        if let TruncOrder::Finite(k) = k {
            if k == 0 || k > MAX_TRUNCATION {
                return Err(Error::param(format!(
                    "truncation order {k} outside 1..={MAX_TRUNCATION}"
                )));
            }
        }
        Ok(FractalMeasure {
            kind: MeasureKind::TruncatedExp { alpha, k },
            domain_min: None,
        })
    }

    /// A measure given as an expression in `t`.
    pub fn custom(expr: Expr) -> Result<Self> {
        if (0..4).any(|i| expr.uses_var(i)) || expr.uses_var(VAR_SIGMA) {
            return Err(Error::param(format!(
                "custom measure `{expr}` may only use the variable t"
            )));
        }
        let d1 = diff_expr(&expr, VAR_T);
        let d2 = diff_expr(&d1, VAR_T);
        let tapes = [Tape::compile(&expr), Tape::compile(&d1), Tape::compile(&d2)];
        Ok(FractalMeasure {
            kind: MeasureKind::Custom(Box::new(CustomMeasure { expr, d1, tapes })),
            domain_min: None,
        })
    }

    pub fn custom_str(src: &str) -> Result<Self> {
        Self::custom(parse_expr(src)?)
    }

    pub fn with_domain_min(mut self, min: f64) -> Result<Self> {
        if !(min >= 0.0 && min.is_finite()) {
            return Err(Error::param(format!("domain_min = {min} must be ≥ 0")));
        }
        self.domain_min = Some(min);
        Ok(self)
    }

    pub fn kind(&self) -> &MeasureKind {
        &self.kind
    }

    pub fn is_identity(&self) -> bool {
        matches!(self.kind, MeasureKind::Identity)
    }

    /// Lower end of the admissible `t` range. The identity measure is
    /// unrestricted unless a minimum was set explicitly.
    pub fn domain_min(&self) -> f64 {
        match (self.domain_min, &self.kind) {
            (Some(m), _) => m,
            (None, MeasureKind::Identity) => f64::NEG_INFINITY,
            (None, _) => 0.0,
        }
    }

    /// True when the closed forms need `t > 0` strictly (fractional powers
    /// or a derivative that blows up at the origin).
    pub fn needs_positive_t(&self) -> bool {
        match &self.kind {
            MeasureKind::Identity => false,
            MeasureKind::Power { eta } => *eta < 1.0 || eta.fract() != 0.0,
            MeasureKind::ExpPower { alpha } | MeasureKind::TruncatedExp { alpha, .. } => {
                *alpha < 1.0
            }
            MeasureKind::Custom(_) => false,
        }
    }

    fn check_domain(&self, t: f64) -> Result<()> {
        if !t.is_finite() {
            return Err(Error::domain(format!("t = {t} is not finite")));
        }
        let min = self.domain_min();
        if t < min {
            return Err(Error::domain(format!(
                "t = {t} below the measure domain minimum {min}"
            )));
        }
        if self.needs_positive_t() && t <= 0.0 {
            return Err(Error::domain(format!(
                "dν/dt is singular at t = {t}; this measure needs t > 0"
            )));
        }
        Ok(())
    }

    /// `ν(t)`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        if !matches!(self.kind, MeasureKind::Identity) || self.domain_min.is_some() {
            self.check_domain_eval(t)?;
        }
        let v = match &self.kind {
            MeasureKind::Identity => t,
            MeasureKind::Power { eta } => dsl::checked_pow(t, *eta)?,
            MeasureKind::ExpPower { alpha } => t.powf(*alpha).exp(),
            MeasureKind::TruncatedExp { alpha, k } => truncated_exp_series(t.powf(*alpha), *k),
            MeasureKind::Custom(c) => c.tapes[0].eval(&t_env(t))?,
        };
        dsl::finite(v)
    }

    /// `ν` is defined at `t = 0` for every kind; only the derivative can be
    /// singular there.
    fn check_domain_eval(&self, t: f64) -> Result<()> {
        if !t.is_finite() {
            return Err(Error::domain(format!("t = {t} is not finite")));
        }
        let min = self.domain_min().max(if self.is_identity() { f64::NEG_INFINITY } else { 0.0 });
        if t < min {
            return Err(Error::domain(format!(
                "t = {t} below the measure domain minimum {min}"
            )));
        }
        Ok(())
    }

    /// `dν/dt` in closed form.
    pub fn deriv(&self, t: f64) -> Result<f64> {
        if !self.is_identity() || self.domain_min.is_some() {
            self.check_domain(t)?;
        }
        let v = match &self.kind {
            MeasureKind::Identity => 1.0,
            MeasureKind::Power { eta } => eta * dsl::checked_pow(t, eta - 1.0)?,
            MeasureKind::ExpPower { alpha } => {
                let s = t.powf(*alpha);
                alpha * t.powf(alpha - 1.0) * s.exp()
            }
            MeasureKind::TruncatedExp { alpha, k } => {
                let s = t.powf(*alpha);
                alpha * t.powf(alpha - 1.0) * series_pred(s, *k)
            }
            MeasureKind::Custom(c) => c.tapes[1].eval(&t_env(t))?,
        };
        dsl::finite(v)
    }

    /// `d²ν/dt²`.
    pub fn second_deriv(&self, t: f64) -> Result<f64> {
        if !self.is_identity() || self.domain_min.is_some() {
            self.check_domain(t)?;
        }
        let v = match &self.kind {
            MeasureKind::Identity => 0.0,
            MeasureKind::Power { eta } => eta * (eta - 1.0) * dsl::checked_pow(t, eta - 2.0)?,
            MeasureKind::ExpPower { alpha } => {
                let s = t.powf(*alpha);
                (alpha * (alpha - 1.0) * t.powf(alpha - 2.0)
                    + alpha * alpha * t.powf(2.0 * alpha - 2.0))
                    * s.exp()
            }
            MeasureKind::TruncatedExp { alpha, k } => {
                let s = t.powf(*alpha);
                let km1 = series_pred(s, *k);
                let km2 = k.pred().map_or(0.0, |k1| series_pred(s, k1));
                alpha * (alpha - 1.0) * t.powf(alpha - 2.0) * km1
                    + alpha * alpha * t.powf(2.0 * alpha - 2.0) * km2
            }
            MeasureKind::Custom(c) => c.tapes[2].eval(&t_env(t))?,
        };
        dsl::finite(v)
    }

    /// `dν/dt`, required to be positive and finite.
    pub fn deriv_checked(&self, t: f64) -> Result<f64> {
        let d = self.deriv(t)?;
        if !(d > 0.0) {
            return Err(Error::SingularMeasure { t, deriv: d });
        }
        Ok(d)
    }

    /// `dν/dt` as an expression in variable slot `var`.
    pub fn deriv_expr(&self, var: usize) -> Expr {
        let x = Expr::Var(var);
        match &self.kind {
            MeasureKind::Identity => dsl::constant(1.0),
            MeasureKind::Power { eta } => dsl::mul(dsl::constant(*eta), dsl::pow(x, eta - 1.0)),
            MeasureKind::ExpPower { alpha } => dsl::mul(
                dsl::mul(dsl::constant(*alpha), dsl::pow(x.clone(), alpha - 1.0)),
                dsl::exp(dsl::pow(x, *alpha)),
            ),
            MeasureKind::TruncatedExp { alpha, k } => {
                let series = match k.pred() {
                    None => dsl::constant(0.0),
                    Some(TruncOrder::Infinite) => dsl::exp(dsl::pow(x.clone(), *alpha)),
                    Some(TruncOrder::Finite(m)) => {
                        let mut acc = dsl::constant(1.0);
                        let mut fact = 1.0;
                        for i in 1..=m {
                            fact *= f64::from(i);
                            acc = dsl::add(
                                acc,
                                dsl::div(
                                    dsl::pow(x.clone(), alpha * f64::from(i)),
                                    dsl::constant(fact),
                                ),
                            );
                        }
                        acc
                    }
                };
                dsl::mul(
                    dsl::mul(dsl::constant(*alpha), dsl::pow(x, alpha - 1.0)),
                    series,
                )
            }
            MeasureKind::Custom(c) => c.d1.map_vars(&|i| (i == VAR_T).then(|| Expr::Var(var))),
        }
    }

    /// Whether `∫₀ dt / ν'(t)` converges, i.e. whether line integrals of
    /// fractal derivatives may start at the origin.
    pub fn integrable_at_zero(&self) -> bool {
        match &self.kind {
            MeasureKind::Identity => true,
            MeasureKind::Power { eta } => *eta < 2.0,
            MeasureKind::ExpPower { .. } | MeasureKind::TruncatedExp { .. } => true,
            MeasureKind::Custom(c) => match c.tapes[1].eval(&t_env(0.0)) {
                Ok(d) => d > 0.0,
                Err(_) => true,
            },
        }
    }

    /// Whether `1/ν'` fails to be smooth at the origin, so that quadrature
    /// from 0 should be graded.
    pub fn singular_at_zero(&self) -> bool {
        match &self.kind {
            MeasureKind::Identity => false,
            MeasureKind::Power { eta } => *eta != 1.0,
            MeasureKind::ExpPower { alpha } | MeasureKind::TruncatedExp { alpha, .. } => {
                *alpha < 1.0
            }
            MeasureKind::Custom(_) => true,
        }
    }
}

fn t_env(t: f64) -> [f64; 5] {
    [0.0, 0.0, 0.0, 0.0, t]
}

fn pair_env(sigma: f64, t: f64) -> [f64; 6] {
    [0.0, 0.0, 0.0, 0.0, t, sigma]
}

#[derive(Clone, Debug)]
pub struct CustomPair {
    chi0: Expr,
    chi1: Expr,
    tapes: [Tape; 3],
}

/// The pair `(χ₀, χ₁)` of a proportional derivative.
#[derive(Clone, Debug)]
pub enum ProportionalPair {
    /// `χ₁ = 1 − σ`, `χ₀ = σ`.
    Canonical,
    Custom(Box<CustomPair>),
}

impl PartialEq for ProportionalPair {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (ProportionalPair::Canonical, ProportionalPair::Canonical) => true,
            (ProportionalPair::Custom(a), ProportionalPair::Custom(b)) => {
                a.chi0 == b.chi0 && a.chi1 == b.chi1
            }
            _ => false,
        }
    }
}

fn check_sigma(sigma: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&sigma) {
        return Err(Error::param(format!("σ = {sigma} must lie in [0, 1]")));
    }
    Ok(())
}

impl ProportionalPair {
    /// Expressions in `sigma` and `t`.
    pub fn custom(chi0: Expr, chi1: Expr) -> Result<Self> {
        for (name, e) in [("chi0", &chi0), ("chi1", &chi1)] {
            if (0..4).any(|i| e.uses_var(i)) {
                return Err(Error::param(format!(
                    "{name} = `{e}` may only use the variables sigma and t"
                )));
            }
        }
        let d = diff_expr(&chi0, VAR_T);
        let tapes = [Tape::compile(&chi0), Tape::compile(&chi1), Tape::compile(&d)];
        Ok(ProportionalPair::Custom(Box::new(CustomPair { chi0, chi1, tapes })))
    }

    pub fn custom_str(chi0: &str, chi1: &str) -> Result<Self> {
        Self::custom(parse_expr(chi0)?, parse_expr(chi1)?)
    }

    pub fn is_canonical(&self) -> bool {
        matches!(self, ProportionalPair::Canonical)
    }

    /// `(χ₁(σ, t), χ₀(σ, t))`.
    pub fn eval(&self, sigma: f64, t: f64) -> Result<(f64, f64)> {
        check_sigma(sigma)?;
        match self {
            ProportionalPair::Canonical => Ok((1.0 - sigma, sigma)),
            ProportionalPair::Custom(c) => {
                let env = pair_env(sigma, t);
                Ok((c.tapes[1].eval(&env)?, c.tapes[0].eval(&env)?))
            }
        }
    }

    /// `∂χ₀/∂t`.
    pub fn dchi0(&self, sigma: f64, t: f64) -> Result<f64> {
        check_sigma(sigma)?;
        match self {
            ProportionalPair::Canonical => Ok(0.0),
            ProportionalPair::Custom(c) => c.tapes[2].eval(&pair_env(sigma, t)),
        }
    }

    /// Checks `χ₁ → 1, χ₀ → 0` as `σ → 0⁺` and `χ₁ → 0, χ₀ → 1` as
    /// `σ → 1⁻` by evaluation at `σ = eps` and `σ = 1 − eps`.
    pub fn check_limits(&self, t: f64, eps: f64, tol: f64) -> Result<()> {
        let (c1, c0) = self.eval(eps, t)?;
        let (d1, d0) = self.eval(1.0 - eps, t)?;
        let bad = [
            ("χ₁ as σ→0", c1, 1.0),
            ("χ₀ as σ→0", c0, 0.0),
            ("χ₁ as σ→1", d1, 0.0),
            ("χ₀ as σ→1", d0, 1.0),
        ]
        .into_iter()
        .find(|(_, v, want)| (v - want).abs() > tol);
        match bad {
            Some((what, v, want)) => Err(Error::HypothesisViolated(format!(
                "limit {what} is {v}, expected {want} (t = {t})"
            ))),
            None => Ok(()),
        }
    }
}

/// Configuration form of a measure:
/// `{kind, alpha?, eta?, k?, expr?, domain_min?}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureSpec {
    pub kind: MeasureName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<TruncOrder>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expr: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain_min: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureName {
    Identity,
    Power,
    ExpPower,
    TruncatedExp,
    Custom,
}

impl MeasureSpec {
    pub fn build(&self) -> Result<FractalMeasure> {
        let need = |v: Option<f64>, name: &str| {
            v.ok_or_else(|| Error::Config(format!("measure {:?} needs `{name}`", self.kind)))
        };
        let m = match self.kind {
            MeasureName::Identity => FractalMeasure::identity(),
            MeasureName::Power => FractalMeasure::power(need(self.eta, "eta")?)?,
            MeasureName::ExpPower => FractalMeasure::exp_power(need(self.alpha, "alpha")?)?,
            MeasureName::TruncatedExp => FractalMeasure::truncated_exp(
                need(self.alpha, "alpha")?,
                self.k
                    .ok_or_else(|| Error::Config("measure truncated_exp needs `k`".into()))?,
            )?,
            MeasureName::Custom => FractalMeasure::custom_str(
                self.expr
                    .as_deref()
                    .ok_or_else(|| Error::Config("measure custom needs `expr`".into()))?,
            )?,
        };
        match self.domain_min {
            Some(d) => m.with_domain_min(d),
            None => Ok(m),
        }
    }
}

/// Configuration form of a pair: `{kind, chi0?, chi1?}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairSpec {
    pub kind: PairName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi0: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi1: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairName {
    Canonical,
    Custom,
}

impl PairSpec {
    pub fn canonical() -> Self {
        PairSpec {
            kind: PairName::Canonical,
            chi0: None,
            chi1: None,
        }
    }

    pub fn build(&self) -> Result<ProportionalPair> {
        match self.kind {
            PairName::Canonical => Ok(ProportionalPair::Canonical),
            PairName::Custom => {
                let (Some(c0), Some(c1)) = (&self.chi0, &self.chi1) else {
                    return Err(Error::Config("custom pair needs `chi0` and `chi1`".into()));
                };
                ProportionalPair::custom_str(c0, c1)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn te(alpha: f64, k: u32) -> FractalMeasure {
        FractalMeasure::truncated_exp(alpha, TruncOrder::Finite(k)).unwrap()
    }

    #[test]
    fn truncated_exponential_values() {
        assert_eq!(te(0.5, 1).eval(4.0).unwrap(), 3.0);
        assert_eq!(te(0.5, 2).eval(4.0).unwrap(), 5.0);
        let inf = FractalMeasure::truncated_exp(0.5, TruncOrder::Infinite).unwrap();
        assert_eq!(inf.eval(0.0).unwrap(), 1.0);
        assert_eq!(te(1.0, 2).deriv(1.0).unwrap(), 2.0);
    }

    #[test]
    fn closed_form_derivatives() {
        assert_eq!(FractalMeasure::power(2.0).unwrap().deriv(3.0).unwrap(), 6.0);
        let e = FractalMeasure::exp_power(1.0).unwrap().deriv(1.0).unwrap();
        assert!((e - std::f64::consts::E).abs() < 1e-15);
        // singular at the origin for α < 1
        assert!(te(0.5, 1).deriv(0.0).is_err());
        assert!(FractalMeasure::power(0.5).unwrap().deriv(0.0).is_err());
        assert!(FractalMeasure::power(3.0).unwrap().deriv(-1.0).is_err());
        assert_eq!(FractalMeasure::identity().deriv(-5.0).unwrap(), 1.0);
    }

    #[test]
    fn second_derivatives_match_differences() {
        let ms = [
            te(0.5, 1),
            te(0.7, 3),
            FractalMeasure::truncated_exp(0.4, TruncOrder::Infinite).unwrap(),
            FractalMeasure::exp_power(0.8).unwrap(),
            FractalMeasure::power(2.5).unwrap(),
            FractalMeasure::custom_str("t^3 + t").unwrap(),
        ];
        for m in &ms {
            for t in [0.3, 1.0, 2.7] {
                let h = 1e-5;
                let fd = (m.deriv(t + h).unwrap() - m.deriv(t - h).unwrap()) / (2.0 * h);
                let d2 = m.second_deriv(t).unwrap();
                assert!((fd - d2).abs() < 1e-6 * d2.abs().max(1.0), "{m:?} t={t}");
            }
        }
    }

    #[test]
    fn deriv_expr_agrees() {
        let ms = [
            te(0.5, 2),
            te(1.0, 1),
            FractalMeasure::truncated_exp(0.3, TruncOrder::Infinite).unwrap(),
            FractalMeasure::exp_power(0.6).unwrap(),
            FractalMeasure::power(1.5).unwrap(),
            FractalMeasure::identity(),
            FractalMeasure::custom_str("exp(2*t)").unwrap(),
        ];
        for m in &ms {
            let e = m.deriv_expr(2);
            for t in [0.5, 1.5] {
                let a = e.eval(&[0.0, 0.0, t, 0.0]).unwrap();
                let b = m.deriv(t).unwrap();
                assert!((a - b).abs() <= 1e-14 * b.abs(), "{m:?}");
            }
        }
    }

    #[test]
    fn parameter_validation() {
        assert!(FractalMeasure::truncated_exp(0.0, TruncOrder::Finite(1)).is_err());
        assert!(FractalMeasure::truncated_exp(0.5, TruncOrder::Finite(0)).is_err());
        assert!(FractalMeasure::truncated_exp(0.5, TruncOrder::Finite(65)).is_err());
        assert!(FractalMeasure::exp_power(1.5).is_err());
        assert!(FractalMeasure::power(-1.0).is_err());
        assert!(FractalMeasure::custom_str("x0 + t").is_err());
        assert!(!FractalMeasure::power(2.0).unwrap().integrable_at_zero());
        assert!(FractalMeasure::power(1.5).unwrap().integrable_at_zero());
        assert!(!FractalMeasure::custom_str("t^2").unwrap().integrable_at_zero());
    }

    #[test]
    fn pairs() {
        let p = ProportionalPair::Canonical;
        assert_eq!(p.eval(0.25, 3.0).unwrap(), (0.75, 0.25));
        assert_eq!(p.eval(0.0, 3.0).unwrap(), (1.0, 0.0));
        assert_eq!(p.dchi0(0.3, 1.0).unwrap(), 0.0);
        assert!(p.check_limits(1.0, 1e-8, 1e-6).is_ok());
        assert!(p.eval(1.5, 0.0).is_err());

        let c = ProportionalPair::custom_str("sigma*t", "1 - sigma").unwrap();
        let (_, chi0) = c.eval(0.5, 2.0).unwrap();
        assert_eq!(chi0, 1.0);
        assert_eq!(c.dchi0(0.5, 2.0).unwrap(), 0.5);
        assert!(c.check_limits(2.0, 1e-8, 1e-6).is_err());
    }

    #[test]
    fn spec_parsing() {
        let m: MeasureSpec =
            serde_json::from_str(r#"{"kind":"truncated_exp","alpha":0.5,"k":"inf"}"#).unwrap();
        assert_eq!(
            m.build().unwrap(),
            FractalMeasure::truncated_exp(0.5, TruncOrder::Infinite).unwrap()
        );
        let m: MeasureSpec = serde_json::from_str(r#"{"kind":"power"}"#).unwrap();
        assert!(matches!(m.build(), Err(Error::Config(_))));
        assert!(serde_json::from_str::<MeasureSpec>(r#"{"kind":"truncated_exp","k":"many"}"#).is_err());
    }
}
