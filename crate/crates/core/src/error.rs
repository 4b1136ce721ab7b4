use thiserror::Error;

use crate::dsl::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("invalid structural set: {0}")]
    InvalidStructuralSet(String),

    #[error("degenerate frame: |det| = {det:e}")]
    DegenerateFrame { det: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("singular measure: dν/dt = {deriv:e} at t = {t}")]
    SingularMeasure { t: f64, deriv: f64 },

    #[error("non-positive base {value:e} raised to fractional power {beta}")]
    NegativeBase { value: f64, beta: f64 },

    #[error("zero base raised to power {beta} - 1 < 0")]
    ZeroBase { beta: f64 },

    #[error("integrand singular: {0}")]
    IntegrandSingular(String),

    #[error("λ vanishes on axis {axis}, component {component} (|λ| = {value:e})")]
    ZeroLambda {
        axis: usize,
        component: usize,
        value: f64,
    },

    #[error("χ₀ vanishes on axis {axis} (|χ₀| = {value:e})")]
    ZeroChi0 { axis: usize, value: f64 },

    #[error("zero denominator: {0}")]
    ZeroDenominator(String),

    #[error("σ = 0 on axis {axis}; the truncated-exponential weights need σ ≠ 0")]
    ZeroSigma { axis: usize },

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("singular point: |q| = {norm:e}")]
    SingularPoint { norm: f64 },

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("configuration error: {0}")]
    Config(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
