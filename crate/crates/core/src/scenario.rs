//! JSON scenario files: fields, operators, box, quadrature, points and the
//! identities to check.
//!
//! ```json
//! {
//!   "frame": "standard",
//!   "f": ["1", "0", "0", "0"],
//!   "g": ["0", "0", "0", "0"],
//!   "operator_left": { "sigma": 0.5, "beta": 0.5, "measure": { "kind": "identity" } },
//!   "operator_right": { "sigma": 0.5, "beta": 0.5, "measure": { "kind": "identity" } },
//!   "box": { "lo": [0.5, 0.5, 0.5, 0.5], "hi": [1.5, 1.5, 1.5, 1.5] },
//!   "quadrature": { "boundary_order": 32 },
//!   "points": { "random": { "count": 4, "seed": 7 } },
//!   "identities": [ { "name": "borel_pompeiu", "variant": "classical", "tolerance": 1e-6 } ]
//! }
//! ```
//!
//! `frame` is `"standard"` or four quaternions `[x0, x1, x2, x3]`. `points`
//! is either a list of points or `{"random": {"count", "seed"}}`; random
//! points are uniform in the box shrunk by 10% per side (see [`crate::rng`]).

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::QuaternionField;
use crate::fueter::{LhsMode, LineIntegralSpec, OperatorParams, Side};
use crate::integration::{Box4, IdentityProblem, QuadratureSpec, Variant};
use crate::measures::{MeasureSpec, PairSpec};
use crate::quaternion::{Quaternion, StructuralSet};
use crate::rng::uniform_points;
use crate::scalar::DiffMode;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FrameSpec {
    Named(String),
    Explicit([[f64; 4]; 4]),
}

impl Default for FrameSpec {
    fn default() -> Self {
        FrameSpec::Named("standard".into())
    }
}

impl FrameSpec {
    pub fn build(&self) -> Result<StructuralSet> {
        match self {
            FrameSpec::Named(n) if n == "standard" => Ok(StructuralSet::standard()),
            FrameSpec::Named(n) => Err(Error::Config(format!("unknown frame `{n}`"))),
            FrameSpec::Explicit(q) => StructuralSet::new(q.map(Quaternion)),
        }
    }
}

/// One value for every axis, or four.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PerAxis {
    All(f64),
    Each([f64; 4]),
}

impl PerAxis {
    pub fn get(self) -> [f64; 4] {
        match self {
            PerAxis::All(v) => [v; 4],
            PerAxis::Each(v) => v,
        }
    }
}

impl Default for PerAxis {
    fn default() -> Self {
        PerAxis::All(1.0)
    }
}

/// Operator parameters. `measure`/`pair` apply to every axis; `measures`/
/// `pairs` give one per axis. Defaults are the classical operator.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OperatorBlock {
    pub sigma: PerAxis,
    pub beta: PerAxis,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measure: Option<MeasureSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measures: Option<[MeasureSpec; 4]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pair: Option<PairSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pairs: Option<[PairSpec; 4]>,
    pub diff_mode: DiffMode,
}

impl OperatorBlock {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn build(&self, side: Side) -> Result<OperatorParams> {
        let measures = match (&self.measure, &self.measures) {
            (Some(_), Some(_)) => return Err(Error::Config("give `measure` or `measures`, not both".into())),
            (Some(m), None) => {
                let m = m.build()?;
                std::array::from_fn(|_| m.clone())
            }
            (None, Some(ms)) => {
                let mut out = Vec::with_capacity(4);
                for m in ms {
                    out.push(m.build()?);
                }
                out.try_into().expect("four measures")
            }
            (None, None) => std::array::from_fn(|_| crate::measures::FractalMeasure::identity()),
        };
        let pairs = match (&self.pair, &self.pairs) {
            (Some(_), Some(_)) => return Err(Error::Config("give `pair` or `pairs`, not both".into())),
            (Some(p), None) => {
                let p = p.build()?;
                std::array::from_fn(|_| p.clone())
            }
            (None, Some(ps)) => {
                let mut out = Vec::with_capacity(4);
                for p in ps {
                    out.push(p.build()?);
                }
                out.try_into().expect("four pairs")
            }
            (None, None) => std::array::from_fn(|_| crate::measures::ProportionalPair::Canonical),
        };
        OperatorParams::new(side, self.sigma.get(), self.beta.get(), measures, pairs)?
            .with_diff_mode(self.diff_mode)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomPoints {
    pub count: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointsSpec {
    List(Vec<[f64; 4]>),
    Random { random: RandomPoints },
}

impl Default for PointsSpec {
    fn default() -> Self {
        PointsSpec::List(Vec::new())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityName {
    BorelPompeiu,
    Stokes,
    DecompositionLine,
    DecompositionTruncated,
    TruncatedAbForm,
}

impl IdentityName {
    pub fn as_str(self) -> &'static str {
        match self {
            IdentityName::BorelPompeiu => "borel_pompeiu",
            IdentityName::Stokes => "stokes",
            IdentityName::DecompositionLine => "decomposition_line",
            IdentityName::DecompositionTruncated => "decomposition_truncated",
            IdentityName::TruncatedAbForm => "truncated_ab_form",
        }
    }

    pub fn needs_box(self) -> bool {
        matches!(self, IdentityName::BorelPompeiu | IdentityName::Stokes)
    }

    pub fn needs_points(self) -> bool {
        !matches!(self, IdentityName::Stokes)
    }
}

/// One identity to check. `variant` applies to the integral identities;
/// `side` restricts the pointwise decompositions to one operator (both by
/// default); `lhs_mode` selects how the truncated left-hand side is differentiated.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdentitySpec {
    pub name: IdentityName,
    #[serde(default)]
    pub variant: Variant,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub side: Option<Side>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lhs_mode: Option<LhsMode>,
    pub tolerance: f64,
}

impl IdentitySpec {
    pub fn sides(&self) -> Vec<Side> {
        match self.side {
            Some(s) => vec![s],
            None => vec![Side::Left, Side::Right],
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldRef {
    #[default]
    F,
    G,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorName {
    /// The classical ψ-Fueter operator.
    #[default]
    Fueter,
    /// The proportional β-fractal operator of the operator block.
    PropFractal,
    /// The truncated-exponential operator of the operator block.
    Trunc,
}

/// Grid for `table`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TableSpec {
    /// `d^{σ,β}f/dν` of a scalar function of `t` at each grid value.
    Scalar {
        function: String,
        grid: Vec<f64>,
        sigma: f64,
        beta: f64,
        measure: MeasureSpec,
        #[serde(default = "PairSpec::canonical")]
        pair: PairSpec,
        #[serde(default)]
        diff_mode: DiffMode,
    },
    /// Quaternion operator values of `f` (left block) or `g` (right block).
    Operator {
        #[serde(default)]
        field: FieldRef,
        #[serde(default)]
        operator: OperatorName,
        grid: Vec<[f64; 4]>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default)]
    pub frame: FrameSpec,
    #[serde(default = "zero_field")]
    pub f: [String; 4],
    #[serde(default = "zero_field")]
    pub g: [String; 4],
    #[serde(default)]
    pub operator_left: OperatorBlock,
    #[serde(default)]
    pub operator_right: OperatorBlock,
    #[serde(rename = "box", default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<Box4>,
    #[serde(default)]
    pub quadrature: QuadratureSpec,
    #[serde(default)]
    pub line: LineIntegralSpec,
    #[serde(default)]
    pub points: PointsSpec,
    #[serde(default)]
    pub identities: Vec<IdentitySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<TableSpec>,
}

fn zero_field() -> [String; 4] {
    std::array::from_fn(|_| "0".to_string())
}

/// A scenario with its fields, operators and points resolved.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub scenario: Scenario,
    pub frame: StructuralSet,
    pub f: QuaternionField,
    pub g: QuaternionField,
    pub left: OperatorParams,
    pub right: OperatorParams,
    pub points: Vec<[f64; 4]>,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Replace the seed of random points.
    pub fn with_seed(mut self, seed: u64) -> Self {
        if let PointsSpec::Random { random } = &mut self.points {
            random.seed = seed;
        }
        self
    }

    pub fn resolve(self) -> Result<Resolved> {
        let frame = self.frame.build()?;
        let parse = |which: &str, c: &[String; 4]| {
            QuaternionField::parse(std::array::from_fn(|l| c[l].as_str()), frame.clone())
                .map_err(|e| Error::Config(format!("field {which}: {e}")))
        };
        let f = parse("f", &self.f)?;
        let g = parse("g", &self.g)?;
        let left = self
            .operator_left
            .build(Side::Left)
            .map_err(|e| Error::Config(format!("operator_left: {e}")))?;
        let right = self
            .operator_right
            .build(Side::Right)
            .map_err(|e| Error::Config(format!("operator_right: {e}")))?;
        self.quadrature.validate()?;
        self.line.validate()?;
        let points = match &self.points {
            PointsSpec::List(p) => p.clone(),
            PointsSpec::Random { random } => {
                let b = self
                    .domain
                    .ok_or_else(|| Error::Config("random points need a `box`".into()))?;
                uniform_points(&b.shrunk(0.1)?, random.count, random.seed)
            }
        };
        if points.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Config("points must be finite".into()));
        }
        for id in &self.identities {
            if !(id.tolerance >= 0.0) {
                return Err(Error::Config(format!("{}: tolerance must be ≥ 0", id.name.as_str())));
            }
            if id.name.needs_box() && self.domain.is_none() {
                return Err(Error::Config(format!("{} needs a `box`", id.name.as_str())));
            }
            if id.name.needs_points() && points.is_empty() {
                return Err(Error::Config(format!("{} needs `points`", id.name.as_str())));
            }
        }
        Ok(Resolved {
            scenario: self,
            frame,
            f,
            g,
            left,
            right,
            points,
        })
    }
}

impl Resolved {
    pub fn problem(&self, variant: Variant) -> Result<IdentityProblem> {
        let domain = self
            .scenario
            .domain
            .ok_or_else(|| Error::Config("integral identities need a `box`".into()))?;
        IdentityProblem::new(
            self.f.clone(),
            self.g.clone(),
            self.left.clone(),
            self.right.clone(),
            self.scenario.line,
            domain,
            self.scenario.quadrature,
            variant,
        )
    }

    /// The field and operator acted on from `side`.
    pub fn side(&self, side: Side) -> (&QuaternionField, &OperatorParams) {
        match side {
            Side::Left => (&self.f, &self.left),
            Side::Right => (&self.g, &self.right),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_scenario_resolves() {
        let s = Scenario::from_json(
            r#"{"f":["x0","x1","x2","x3"],"box":{"lo":[0,0,0,0],"hi":[1,1,1,1]},
                "points":{"random":{"count":3,"seed":1}},
                "identities":[{"name":"borel_pompeiu","tolerance":1e-3}]}"#,
        )
        .unwrap();
        let r = s.resolve().unwrap();
        assert_eq!(r.points.len(), 3);
        assert!(r.points.iter().flatten().all(|&v| (0.1..0.9).contains(&v)));
        assert_eq!(r.left, OperatorParams::classical(Side::Left));
    }

    #[test]
    fn operator_block_forms() {
        let b: OperatorBlock = serde_json::from_str(
            r#"{"sigma":[0.5,0.5,1,1],"beta":0.5,"measure":{"kind":"power","eta":2},
                "diff_mode":{"mode":"central_fd","h":1e-5}}"#,
        )
        .unwrap();
        let p = b.build(Side::Right).unwrap();
        assert_eq!(p.sigma, [0.5, 0.5, 1.0, 1.0]);
        assert_eq!(p.diff_mode, DiffMode::CentralFd { h: 1e-5 });
        assert!(serde_json::from_str::<OperatorBlock>(r#"{"sigmas":1}"#).is_err());
    }

    #[test]
    fn config_errors() {
        let bad_dsl = r#"{"f":["x0 +","0","0","0"]}"#;
        let e = Scenario::from_json(bad_dsl).unwrap().resolve().unwrap_err();
        assert!(e.to_string().contains("column"), "{e}");
        let e = Scenario::from_json(r#"{"identities":[{"name":"nope","tolerance":1}]}"#).unwrap_err();
        assert!(matches!(e, Error::Config(_)));
        let e = Scenario::from_json(r#"{"identities":[{"name":"stokes","tolerance":1}]}"#)
            .unwrap()
            .resolve()
            .unwrap_err();
        assert!(e.to_string().contains("box"));
    }
}
