//! Quaternionic operator calculus with proportional fractal derivatives.
//!
//! The crate evaluates ψ-Fueter operators built from proportional
//! β-fractal partial derivatives, the correction terms that relate them to
//! the classical operator, and residuals of the associated Stokes and
//! Borel–Pompeiu integral formulas on axis-aligned boxes in ℝ⁴.

pub mod dsl;
pub mod error;
pub mod field;
pub mod fueter;
pub mod integration;
pub mod measures;
pub mod quadrature;
pub mod quaternion;
pub mod rng;
pub mod scalar;
pub mod scenario;
pub mod report;
pub mod cli;

pub use error::{Error, Result};
pub use quaternion::{Quaternion, StructuralSet};
