//! Quaternion-valued fields `f = Σ f_ℓ ψ_ℓ` with DSL components.

use crate::dsl::{diff_expr, parse_expr, Expr, Tape};
use crate::error::{Error, Result};
use crate::quaternion::{Quaternion, StructuralSet};

/// A field over ℝ⁴ in ψ-coordinates, with compiled component and partial
/// tapes.
#[derive(Clone, Debug)]
pub struct QuaternionField {
    frame: StructuralSet,
    comps: [Expr; 4],
    partials: [[Expr; 4]; 4],
    tapes: [Tape; 4],
    dtapes: [[Tape; 4]; 4],
}

impl QuaternionField {
    pub fn new(comps: [Expr; 4], frame: StructuralSet) -> Result<Self> {
        for (l, c) in comps.iter().enumerate() {
            if let Some(v) = c.max_var() {
                if v >= 4 {
                    return Err(Error::param(format!(
                        "component f{l} = `{c}` may only use x0..x3"
                    )));
                }
            }
        }
        // partials[k][l] = ∂_k f_ℓ
        let partials: [[Expr; 4]; 4] =
            std::array::from_fn(|k| std::array::from_fn(|l| diff_expr(&comps[l], k)));
        let tapes = std::array::from_fn(|l| Tape::compile(&comps[l]));
        let dtapes =
            std::array::from_fn(|k| std::array::from_fn(|l| Tape::compile(&partials[k][l])));
        Ok(QuaternionField {
            frame,
            comps,
            partials,
            tapes,
            dtapes,
        })
    }

    pub fn parse(comps: [&str; 4], frame: StructuralSet) -> Result<Self> {
        let mut out = Vec::with_capacity(4);
        for c in comps {
            out.push(parse_expr(c)?);
        }
        let arr: [Expr; 4] = out.try_into().expect("four components");
        Self::new(arr, frame)
    }

    /// The constant field `q`, written in the coordinates of `frame`.
    pub fn constant(q: Quaternion, frame: StructuralSet) -> Self {
        let c = frame.to_coords(q);
        Self::new(c.map(Expr::Const), frame).expect("constants use no variables")
    }

    pub fn frame(&self) -> &StructuralSet {
        &self.frame
    }

    pub fn components(&self) -> &[Expr; 4] {
        &self.comps
    }

    pub fn component(&self, l: usize) -> &Expr {
        &self.comps[l]
    }

    /// `∂_k f_ℓ` as an expression.
    pub fn partial_expr(&self, k: usize, l: usize) -> &Expr {
        &self.partials[k][l]
    }

    /// Same components in a different frame.
    pub fn with_frame(&self, frame: StructuralSet) -> Self {
        QuaternionField {
            frame,
            ..self.clone()
        }
    }

    #[inline]
    pub fn component_value(&self, l: usize, x: &[f64; 4]) -> Result<f64> {
        self.tapes[l].eval(x)
    }

    #[inline]
    pub fn partial_value(&self, k: usize, l: usize, x: &[f64; 4]) -> Result<f64> {
        self.dtapes[k][l].eval(x)
    }

    pub fn coords(&self, x: &[f64; 4]) -> Result<[f64; 4]> {
        Ok([
            self.tapes[0].eval(x)?,
            self.tapes[1].eval(x)?,
            self.tapes[2].eval(x)?,
            self.tapes[3].eval(x)?,
        ])
    }

    /// `(∂_k f_0, …, ∂_k f_3)`.
    pub fn partial_coords(&self, k: usize, x: &[f64; 4]) -> Result<[f64; 4]> {
        let d = &self.dtapes[k];
        Ok([d[0].eval(x)?, d[1].eval(x)?, d[2].eval(x)?, d[3].eval(x)?])
    }

    /// `f(x) = Σ f_ℓ(x) ψ_ℓ`.
    pub fn eval(&self, x: &[f64; 4]) -> Result<Quaternion> {
        Ok(self.frame.from_coords(self.coords(x)?))
    }

    /// `∂_k f(x)` as a quaternion.
    pub fn partial(&self, k: usize, x: &[f64; 4]) -> Result<Quaternion> {
        Ok(self.frame.from_coords(self.partial_coords(k, x)?))
    }

    /// Substitutes the constant `value` for variable `axis` in every
    /// component.
    pub fn substitute(&self, axis: usize, value: f64) -> Result<Self> {
        Self::new(
            std::array::from_fn(|l| self.comps[l].substitute(axis, value)),
            self.frame.clone(),
        )
    }

    /// Componentwise `a·f + b·g` on the components of two fields in the
    /// same frame.
    pub fn combine(&self, a: f64, other: &QuaternionField, b: f64) -> Result<Self> {
        if self.frame != other.frame {
            return Err(Error::param("fields live in different frames"));
        }
        Self::new(
            std::array::from_fn(|l| {
                crate::dsl::add(
                    crate::dsl::mul(crate::dsl::constant(a), self.comps[l].clone()),
                    crate::dsl::mul(crate::dsl::constant(b), other.comps[l].clone()),
                )
            }),
            self.frame.clone(),
        )
    }
}
