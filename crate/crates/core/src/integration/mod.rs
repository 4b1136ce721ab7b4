//! Quadrature over axis-aligned boxes in ℝ⁴ and their boundaries, the
//! quaternionic surface form and the ψ-Cauchy kernel.
//!
//! Boundary integrals run over the eight faces in the order
//! `(axis 0, lower), (axis 0, upper), …, (axis 3, upper)` and, inside a
//! face, over tensor Gauss nodes in lexicographic order. A face close to
//! the singular point of the integrand is split at the point's projection
//! and graded toward it in the same way as volumes. Volume integrals
//! around a singular point split the box into the 16 orthant boxes anchored
//! at that point; each is graded geometrically toward the anchor and its
//! innermost cube is integrated with a Duffy map.

pub mod identities;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{gauss_legendre, Rule};
use crate::quaternion::{Quaternion, StructuralSet};

pub use identities::{
    borel_pompeiu_residual, stokes_residual, IdentityKind, IdentityProblem, IdentityRow, Variant,
};

/// `lo_n < hi_n` on every axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBox")]
pub struct Box4 {
    pub lo: [f64; 4],
    pub hi: [f64; 4],
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBox {
    lo: [f64; 4],
    hi: [f64; 4],
}

impl TryFrom<RawBox> for Box4 {
    type Error = Error;

    fn try_from(r: RawBox) -> Result<Self> {
        Box4::new(r.lo, r.hi)
    }
}

impl Box4 {
    pub fn new(lo: [f64; 4], hi: [f64; 4]) -> Result<Self> {
        for n in 0..4 {
            if !(lo[n].is_finite() && hi[n].is_finite() && lo[n] < hi[n]) {
                return Err(Error::param(format!(
                    "box axis {n}: need finite lo < hi, got [{}, {}]",
                    lo[n], hi[n]
                )));
            }
        }
        Ok(Box4 { lo, hi })
    }

    pub fn cube(lo: f64, hi: f64) -> Result<Self> {
        Self::new([lo; 4], [hi; 4])
    }

    pub fn center(&self) -> [f64; 4] {
        std::array::from_fn(|n| 0.5 * (self.lo[n] + self.hi[n]))
    }

    pub fn edge(&self, n: usize) -> f64 {
        self.hi[n] - self.lo[n]
    }

    pub fn min_edge(&self) -> f64 {
        (0..4).map(|n| self.edge(n)).fold(f64::INFINITY, f64::min)
    }

    pub fn volume(&self) -> f64 {
        (0..4).map(|n| self.edge(n)).product()
    }

    /// Strictly inside.
    pub fn contains(&self, x: &[f64; 4]) -> bool {
        (0..4).all(|n| self.lo[n] < x[n] && x[n] < self.hi[n])
    }

    /// Euclidean distance from `x` to the boundary, whichever side `x` is on.
    pub fn boundary_distance(&self, x: &[f64; 4]) -> f64 {
        if self.contains(x) {
            (0..4)
                .map(|n| (x[n] - self.lo[n]).min(self.hi[n] - x[n]))
                .fold(f64::INFINITY, f64::min)
        } else {
            let c = self.clamp(x);
            (0..4).map(|n| (x[n] - c[n]).powi(2)).sum::<f64>().sqrt()
        }
    }

    pub fn clamp(&self, x: &[f64; 4]) -> [f64; 4] {
        std::array::from_fn(|n| x[n].clamp(self.lo[n], self.hi[n]))
    }

    /// The box shrunk by `frac` of each edge on every side.
    pub fn shrunk(&self, frac: f64) -> Result<Self> {
        Self::new(
            std::array::from_fn(|n| self.lo[n] + frac * self.edge(n)),
            std::array::from_fn(|n| self.hi[n] - frac * self.edge(n)),
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureSpec {
    pub boundary_order: usize,
    pub volume_order: usize,
    /// Shell halvings around a singular point below the shortest edge of
    /// each orthant box.
    pub graded_levels: usize,
    pub exclusion_radius: f64,
    /// Integrate with the reversed orientation of the box.
    pub reversed: bool,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            boundary_order: 16,
            volume_order: 8,
            graded_levels: 8,
            exclusion_radius: 0.0,
            reversed: false,
        }
    }
}

/// Grading ratio of the shells around a singular point.
pub const SHELL_RATIO: f64 = 0.5;

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.boundary_order < 2 || self.volume_order < 2 {
            return Err(Error::param("quadrature orders must be at least 2"));
        }
        if !(self.exclusion_radius >= 0.0) || !self.exclusion_radius.is_finite() {
            return Err(Error::param("exclusion_radius must be finite and ≥ 0"));
        }
        if self.graded_levels > 40 {
            return Err(Error::param("graded_levels above 40 underflows the innermost cell"));
        }
        Ok(())
    }

    pub fn orientation(&self) -> f64 {
        if self.reversed {
            -1.0
        } else {
            1.0
        }
    }
}

/// One of the eight faces of a box: `x_axis = lo` (`upper = false`) or
/// `x_axis = hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Face {
    pub axis: usize,
    pub upper: bool,
}

impl Face {
    pub fn all() -> impl Iterator<Item = Face> {
        (0..4).flat_map(|axis| [false, true].map(|upper| Face { axis, upper }))
    }

    pub fn normal_sign(&self) -> f64 {
        if self.upper {
            1.0
        } else {
            -1.0
        }
    }
}

/// Density of `σ^ψ` per unit 3-volume on `face`: `±ψ_k`, signed by the
/// outward normal `±e_k`.
pub fn sigma_form(frame: &StructuralSet, face: Face) -> Quaternion {
    frame.get(face.axis) * face.normal_sign()
}

/// `K_ψ(q) = conj(q_ψ) / (2π² |q_ψ|⁴)` for the ψ-coordinates `q`.
#[inline]
pub fn cauchy_kernel(q: &[f64; 4], frame: &StructuralSet) -> Result<Quaternion> {
    let r2 = q.iter().map(|v| v * v).sum::<f64>();
    let norm = r2.sqrt();
    if !(norm >= 1e-14) {
        return Err(Error::SingularPoint { norm });
    }
    Ok(frame.from_coords(*q).conj() * (1.0 / (2.0 * PI * PI * r2 * r2)))
}

/// Largest face cell, in units of the distance to the singular point, that
/// is integrated without further refinement.
pub const FACE_CELL_RATIO: f64 = 2.0;

/// `Σ_faces ∫ g(τ, σ-density) dS₃` with `order³` nodes per cell; `g` forms
/// the sandwich, e.g. `K σ f` or `g σ K`. With `near`, a face closer to
/// that point than `FACE_CELL_RATIO` times its extent is split at the
/// point's projection and graded toward it.
pub fn boundary_integral<F>(
    b: &Box4,
    frame: &StructuralSet,
    spec: &QuadratureSpec,
    near: Option<&[f64; 4]>,
    mut g: F,
) -> Result<Quaternion>
where
    F: FnMut(&[f64; 4], Quaternion) -> Result<Quaternion>,
{
    spec.validate()?;
    let rule = gauss_legendre(spec.boundary_order)?;
    let orient = spec.orientation();
    let mut total = Quaternion::ZERO;
    for face in Face::all() {
        let density = sigma_form(frame, face) * orient;
        let others: [usize; 3] = match face.axis {
            0 => [1, 2, 3],
            1 => [0, 2, 3],
            2 => [0, 1, 3],
            _ => [0, 1, 2],
        };
        let plane = if face.upper { b.hi[face.axis] } else { b.lo[face.axis] };
        let mut tau = [0.0; 4];
        tau[face.axis] = plane;
        let lo = others.map(|n| b.lo[n]);
        let hi = others.map(|n| b.hi[n]);
        let mut acc = Quaternion::ZERO;
        let mut visit = |u: &[f64; 3], w: f64| -> Result<()> {
            for j in 0..3 {
                tau[others[j]] = u[j];
            }
            acc += g(&tau, density)? * w;
            Ok(())
        };
        let graded = near.and_then(|x| {
            let anchor: [f64; 3] = std::array::from_fn(|j| x[others[j]].clamp(lo[j], hi[j]));
            let d2 = (x[face.axis] - plane).powi(2)
                + (0..3).map(|j| (x[others[j]] - anchor[j]).powi(2)).sum::<f64>();
            let extent = (0..3).map(|j| hi[j] - lo[j]).fold(0.0, f64::max);
            let cell = FACE_CELL_RATIO * d2.sqrt();
            (cell < extent).then_some((anchor, cell))
        });
        match graded {
            None => cell3(&rule, &lo, &hi, &mut visit)?,
            Some((anchor, cell)) => {
                for orthant in 0..8usize {
                    let (sign, e) = orthant_extents(orthant, &anchor, &lo, &hi);
                    if e.iter().any(|&v| v == 0.0) {
                        continue;
                    }
                    let r = e.iter().fold(0.0f64, |m, &v| m.max(v));
                    let levels = levels_to(r, cell);
                    let mut to_tau = |v: &[f64; 3], w: f64| -> Result<()> {
                        visit(&std::array::from_fn(|j| anchor[j] + sign[j] * v[j]), w)
                    };
                    let (cells, c) = graded_cells(&e, levels);
                    for (l, h) in &cells {
                        cell3(&rule, l, h, &mut to_tau)?;
                    }
                    cell3(&rule, &[0.0; 3], &e.map(|v| v.min(c)), &mut to_tau)?;
                }
            }
        }
        total += acc;
    }
    Ok(total)
}

/// Sign and length of the orthant box of `[lo, hi]` at `anchor` selected by
/// the bits of `orthant`.
fn orthant_extents<const D: usize>(orthant: usize, anchor: &[f64; D], lo: &[f64; D], hi: &[f64; D]) -> ([f64; D], [f64; D]) {
    let up = |n: usize| orthant >> n & 1 == 1;
    (
        std::array::from_fn(|n| if up(n) { 1.0 } else { -1.0 }),
        std::array::from_fn(|n| if up(n) { hi[n] - anchor[n] } else { anchor[n] - lo[n] }),
    )
}

/// Fewest halvings of `r` that reach `target`.
fn levels_to(r: f64, target: f64) -> usize {
    if r <= target {
        0
    } else {
        (r / target).log2().ceil() as usize
    }
}

/// Shells `{r/2 < max_n v_n ≤ r}` of `[0, e]`, halving `r` from `max e`
/// `levels` times, each split into the `2^D − 1` cubes of side `r/2` and
/// clipped to the box. Returns the cells and the side of the remaining core
/// cube `[0, c]^D`.
fn graded_cells<const D: usize>(e: &[f64; D], levels: usize) -> (Vec<([f64; D], [f64; D])>, f64) {
    let mut out = Vec::new();
    let mut outer = e.iter().fold(0.0f64, |m, &v| m.max(v));
    for _ in 0..levels {
        let inner = outer * SHELL_RATIO;
        'sub: for sub in 1..(1usize << D) {
            let mut l = [0.0; D];
            let mut h = [0.0; D];
            for n in 0..D {
                l[n] = if sub >> n & 1 == 1 { inner } else { 0.0 };
                if l[n] >= e[n] {
                    continue 'sub;
                }
                h[n] = (l[n] + inner).min(e[n]);
            }
            out.push((l, h));
        }
        outer = inner;
    }
    (out, outer)
}

fn cell3<V>(rule: &Rule, lo: &[f64; 3], hi: &[f64; 3], visit: &mut V) -> Result<()>
where
    V: FnMut(&[f64; 3], f64) -> Result<()>,
{
    let half: [f64; 3] = std::array::from_fn(|n| 0.5 * (hi[n] - lo[n]));
    let mid: [f64; 3] = std::array::from_fn(|n| 0.5 * (hi[n] + lo[n]));
    let jac = half.iter().product::<f64>();
    let mut u = [0.0; 3];
    for &(t0, w0) in rule.iter() {
        u[0] = mid[0] + half[0] * t0;
        for &(t1, w1) in rule.iter() {
            u[1] = mid[1] + half[1] * t1;
            let w01 = jac * w0 * w1;
            for &(t2, w2) in rule.iter() {
                u[2] = mid[2] + half[2] * t2;
                visit(&u, w01 * w2)?;
            }
        }
    }
    Ok(())
}

/// `∫_box f dy`. With `singular_at`, the box is split at that point (or at
/// its projection onto the box when it lies outside) and graded toward it.
pub fn volume_integral<F>(
    b: &Box4,
    spec: &QuadratureSpec,
    singular_at: Option<&[f64; 4]>,
    mut f: F,
) -> Result<Quaternion>
where
    F: FnMut(&[f64; 4]) -> Result<Quaternion>,
{
    spec.validate()?;
    let rule = gauss_legendre(spec.volume_order)?;
    let orient = spec.orientation();
    let Some(x) = singular_at else {
        let mut acc = Quaternion::ZERO;
        cell(&rule, &b.lo, &b.hi, &mut |y, w| {
            acc += f(y)? * w;
            Ok(())
        })?;
        return Ok(acc * orient);
    };
    let anchor = b.clamp(x);
    let outside = (0..4).map(|n| (x[n] - anchor[n]).powi(2)).sum::<f64>().sqrt();
    let eps2 = spec.exclusion_radius * spec.exclusion_radius;
    let mut acc = Quaternion::ZERO;
    let mut visit = |y: &[f64; 4], w: f64| -> Result<()> {
        if eps2 > 0.0 {
            let d2: f64 = (0..4).map(|n| (y[n] - x[n]).powi(2)).sum();
            if d2 < eps2 {
                return Ok(());
            }
        }
        acc += f(y)? * w;
        Ok(())
    };
    for orthant in 0..16usize {
        let (sign, e) = orthant_extents(orthant, &anchor, &b.lo, &b.hi);
        if e.iter().any(|&v| v == 0.0) {
            continue;
        }
        let r = e.iter().fold(0.0f64, |m, &v| m.max(v));
        let short = e.iter().fold(f64::INFINITY, |m, &v| m.min(v));
        // shells down to the shortest edge keep the cells near `x` cubic
        let mut levels = levels_to(r, short) + spec.graded_levels;
        if outside > 0.0 {
            levels = levels.max(levels_to(r, FACE_CELL_RATIO * outside));
        }
        let mut to_y = |v: &[f64; 4], w: f64| -> Result<()> {
            visit(&std::array::from_fn(|n| anchor[n] + sign[n] * v[n]), w)
        };
        let (cells, c) = graded_cells(&e, levels);
        for (l, h) in &cells {
            cell(&rule, l, h, &mut to_y)?;
        }
        duffy_cube(&rule, c, &mut to_y)?;
    }
    Ok(acc * orient)
}

/// Tensor rule on `[lo, hi]`, calling `visit(node, weight)`.
fn cell<V>(rule: &Rule, lo: &[f64; 4], hi: &[f64; 4], visit: &mut V) -> Result<()>
where
    V: FnMut(&[f64; 4], f64) -> Result<()>,
{
    let half: [f64; 4] = std::array::from_fn(|n| 0.5 * (hi[n] - lo[n]));
    let mid: [f64; 4] = std::array::from_fn(|n| 0.5 * (hi[n] + lo[n]));
    let jac = half.iter().product::<f64>();
    let mut y = [0.0; 4];
    for &(t0, w0) in rule.iter() {
        y[0] = mid[0] + half[0] * t0;
        for &(t1, w1) in rule.iter() {
            y[1] = mid[1] + half[1] * t1;
            for &(t2, w2) in rule.iter() {
                y[2] = mid[2] + half[2] * t2;
                let w012 = w0 * w1 * w2;
                for &(t3, w3) in rule.iter() {
                    y[3] = mid[3] + half[3] * t3;
                    visit(&y, jac * w012 * w3)?;
                }
            }
        }
    }
    Ok(())
}

/// `[0, c]⁴` as four pyramids `{u_i = max_j u_j}`, each mapped from
/// `(s, t) ∈ [0,1]⁴` by `u_i = c s`, `u_j = c s t_j`, Jacobian `c⁴ s³`.
/// The `s³` factor cancels a `|u|^{-3}` singularity at the origin.
fn duffy_cube<V>(rule: &Rule, c: f64, visit: &mut V) -> Result<()>
where
    V: FnMut(&[f64; 4], f64) -> Result<()>,
{
    let unit: Vec<(f64, f64)> = rule.iter().map(|&(t, w)| (0.5 * (t + 1.0), 0.5 * w)).collect();
    let c4 = c.powi(4);
    let mut u = [0.0; 4];
    for i in 0..4 {
        let rest: [usize; 3] = match i {
            0 => [1, 2, 3],
            1 => [0, 2, 3],
            2 => [0, 1, 3],
            _ => [0, 1, 2],
        };
        for &(s, ws) in &unit {
            let cs = c * s;
            u[i] = cs;
            let js = c4 * s * s * s * ws;
            for &(ta, wa) in &unit {
                u[rest[0]] = cs * ta;
                for &(tb, wb) in &unit {
                    u[rest[1]] = cs * tb;
                    let wab = js * wa * wb;
                    for &(tc, wc) in &unit {
                        u[rest[2]] = cs * tc;
                        visit(&u, wab * wc)?;
                    }
                }
            }
        }
    }
    Ok(())
}
