//! Real quaternions and structural sets.
//!
//! A [`Quaternion`] is stored in the standard basis `{1, e1, e2, e3}` with
//! `e1 e2 = e3`, `e2 e3 = e1`, `e3 e1 = e2` and `e_k² = −1`. A
//! [`StructuralSet`] is an orthonormal 4-frame `ψ = {ψ0, ψ1, ψ2, ψ3}`; points
//! and field components are written in ψ-coordinates, `x = Σ x_k ψ_k`.

use std::fmt;
use std::ops::{Add, AddAssign, Index, Mul, MulAssign, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A real quaternion `x0 + x1 e1 + x2 e2 + x3 e3`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Quaternion(pub [f64; 4]);

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion([0.0; 4]);
    pub const ONE: Quaternion = Quaternion([1.0, 0.0, 0.0, 0.0]);
    pub const E1: Quaternion = Quaternion([0.0, 1.0, 0.0, 0.0]);
    pub const E2: Quaternion = Quaternion([0.0, 0.0, 1.0, 0.0]);
    pub const E3: Quaternion = Quaternion([0.0, 0.0, 0.0, 1.0]);

    pub const fn new(x0: f64, x1: f64, x2: f64, x3: f64) -> Self {
        Quaternion([x0, x1, x2, x3])
    }

    pub const fn real(a: f64) -> Self {
        Quaternion([a, 0.0, 0.0, 0.0])
    }

    /// The basis element `1, e1, e2, e3` for `k = 0..4`.
    pub fn basis(k: usize) -> Self {
        let mut c = [0.0; 4];
        c[k] = 1.0;
        Quaternion(c)
    }

    #[inline]
    pub fn scalar(&self) -> f64 {
        self.0[0]
    }

    /// Vector part `x1 e1 + x2 e2 + x3 e3`.
    #[inline]
    pub fn vector(&self) -> Quaternion {
        Quaternion([0.0, self.0[1], self.0[2], self.0[3]])
    }

    #[inline]
    pub fn conj(&self) -> Quaternion {
        let [a, b, c, d] = self.0;
        Quaternion([a, -b, -c, -d])
    }

    #[inline]
    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum()
    }

    #[inline]
    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn inv(&self) -> Result<Quaternion> {
        let n2 = self.norm_sqr();
        if n2 == 0.0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.conj() * (1.0 / n2))
    }

    /// `⟨x, y⟩ = ½(x̄y + ȳx)`, which is the Euclidean dot product of the
    /// coordinate vectors.
    #[inline]
    pub fn dot(&self, other: &Quaternion) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Free-function forms of the algebra, mirroring the operation names used
/// throughout the crate's documentation.
pub fn qmul(a: Quaternion, b: Quaternion) -> Quaternion {
    a * b
}

pub fn qconj(a: Quaternion) -> Quaternion {
    a.conj()
}

pub fn qnorm(a: Quaternion) -> f64 {
    a.norm()
}

pub fn qinv(a: Quaternion) -> Result<Quaternion> {
    a.inv()
}

pub fn scalar_product(x: Quaternion, y: Quaternion) -> f64 {
    // ½(x̄y + ȳx) has zero vector part; keep the formula literal so the
    // symmetry holds bit for bit.
    0.5 * ((x.conj() * y).scalar() + (y.conj() * x).scalar())
}

impl Index<usize> for Quaternion {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn add(self, rhs: Quaternion) -> Quaternion {
        let (a, b) = (self.0, rhs.0);
        Quaternion([a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]])
    }
}

impl AddAssign for Quaternion {
    #[inline]
    fn add_assign(&mut self, rhs: Quaternion) {
        *self = *self + rhs;
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn sub(self, rhs: Quaternion) -> Quaternion {
        let (a, b) = (self.0, rhs.0);
        Quaternion([a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]])
    }
}

impl SubAssign for Quaternion {
    #[inline]
    fn sub_assign(&mut self, rhs: Quaternion) {
        *self = *self - rhs;
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn neg(self) -> Quaternion {
        let a = self.0;
        Quaternion([-a[0], -a[1], -a[2], -a[3]])
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn mul(self, rhs: Quaternion) -> Quaternion {
        let [a0, a1, a2, a3] = self.0;
        let [b0, b1, b2, b3] = rhs.0;
        Quaternion([
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        ])
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn mul(self, s: f64) -> Quaternion {
        let a = self.0;
        Quaternion([a[0] * s, a[1] * s, a[2] * s, a[3] * s])
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    #[inline]
    fn mul(self, q: Quaternion) -> Quaternion {
        q * self
    }
}

impl MulAssign<f64> for Quaternion {
    #[inline]
    fn mul_assign(&mut self, s: f64) {
        *self = *self * s;
    }
}

impl std::iter::Sum for Quaternion {
    fn sum<I: Iterator<Item = Quaternion>>(iter: I) -> Quaternion {
        iter.fold(Quaternion::ZERO, |acc, q| acc + q)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "{a} {b:+}e1 {c:+}e2 {d:+}e3")
    }
}

/// Default Gram-matrix tolerance for structural sets.
pub const FRAME_TOL: f64 = 1e-12;

/// Orientation of a frame relative to `{1, e1, e2, e3}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    Positive,
    Negative,
}

impl Orientation {
    pub fn sign(self) -> f64 {
        match self {
            Orientation::Positive => 1.0,
            Orientation::Negative => -1.0,
        }
    }
}

/// An orthonormal quaternion frame `ψ = {ψ0, ψ1, ψ2, ψ3}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StructuralSet {
    psi: [Quaternion; 4],
    orientation: Orientation,
    tol: f64,
}

impl StructuralSet {
    pub fn new(psi: [Quaternion; 4]) -> Result<Self> {
        Self::with_tolerance(psi, FRAME_TOL)
    }

    pub fn with_tolerance(psi: [Quaternion; 4], tol: f64) -> Result<Self> {
        if !(tol > 0.0) {
            return Err(Error::param("frame tolerance must be positive"));
        }
        for (k, p) in psi.iter().enumerate() {
            if !p.is_finite() {
                return Err(Error::InvalidStructuralSet(format!("ψ{k} is not finite")));
            }
        }
        for k in 0..4 {
            for s in 0..4 {
                let g = scalar_product(psi[k], psi[s]);
                let want = if k == s { 1.0 } else { 0.0 };
                if (g - want).abs() > tol {
                    return Err(Error::InvalidStructuralSet(format!(
                        "⟨ψ{k}, ψ{s}⟩ = {g} (expected {want})"
                    )));
                }
            }
        }
        let orientation = orientation_of(&psi, tol)?;
        Ok(StructuralSet {
            psi,
            orientation,
            tol,
        })
    }

    /// `ψ_std = {1, e1, e2, e3}`.
    pub fn standard() -> Self {
        StructuralSet {
            psi: [
                Quaternion::ONE,
                Quaternion::E1,
                Quaternion::E2,
                Quaternion::E3,
            ],
            orientation: Orientation::Positive,
            tol: FRAME_TOL,
        }
    }

    #[inline]
    pub fn psi(&self) -> &[Quaternion; 4] {
        &self.psi
    }

    #[inline]
    pub fn get(&self, k: usize) -> Quaternion {
        self.psi[k]
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// `sgn ψ` as ±1.
    pub fn sign(&self) -> f64 {
        self.orientation.sign()
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    /// ψ-coordinates `c_k = ⟨x, ψ_k⟩`.
    pub fn to_coords(&self, x: Quaternion) -> [f64; 4] {
        [
            x.dot(&self.psi[0]),
            x.dot(&self.psi[1]),
            x.dot(&self.psi[2]),
            x.dot(&self.psi[3]),
        ]
    }

    /// `Σ c_k ψ_k`.
    #[inline]
    pub fn from_coords(&self, c: [f64; 4]) -> Quaternion {
        self.psi[0] * c[0] + self.psi[1] * c[1] + self.psi[2] * c[2] + self.psi[3] * c[3]
    }

    /// `⟨q, x⟩_ψ = Σ q_k x_k` over ψ-coordinates.
    pub fn scalar_product(&self, q: Quaternion, x: Quaternion) -> f64 {
        let a = self.to_coords(q);
        let b = self.to_coords(x);
        a.iter().zip(b.iter()).map(|(u, v)| u * v).sum()
    }

    /// Sum `ψ0 + ψ1 + ψ2 + ψ3`.
    pub fn sum(&self) -> Quaternion {
        self.psi.iter().copied().sum()
    }
}

impl<'de> Deserialize<'de> for StructuralSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = <[[f64; 4]; 4]>::deserialize(d)?;
        StructuralSet::new(raw.map(Quaternion)).map_err(serde::de::Error::custom)
    }
}

/// `sgn ψ`: sign of the determinant of the matrix whose columns are the
/// standard coordinates of `ψ0..ψ3`.
pub fn sgn_psi(psi: &StructuralSet) -> Result<Orientation> {
    orientation_of(&psi.psi, psi.tol)
}

fn orientation_of(psi: &[Quaternion; 4], tol: f64) -> Result<Orientation> {
    let det = det4(psi);
    if det.abs() < tol {
        return Err(Error::DegenerateFrame { det });
    }
    Ok(if det > 0.0 {
        Orientation::Positive
    } else {
        Orientation::Negative
    })
}

/// Determinant with columns `cols[j]` by cofactor expansion along the
/// first column.
pub(crate) fn det4(cols: &[Quaternion; 4]) -> f64 {
    let m = |r: usize, c: usize| cols[c].0[r];
    let det3 = |skip: usize| {
        let rows: Vec<usize> = (0..4).filter(|&r| r != skip).collect();
        let a = |i: usize, j: usize| m(rows[i], j + 1);
        a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1))
            - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0))
            + a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0))
    };
    (0..4)
        .map(|r| {
            let s = if r % 2 == 0 { 1.0 } else { -1.0 };
            s * m(r, 0) * det3(r)
        })
        .sum()
}
