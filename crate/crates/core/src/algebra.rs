//! Pseudo-Galilean linear algebra.
//!
//! Vectors carry the degenerate metric of `G_3^1`: the scalar product of two
//! vectors is `x1·x2` as soon as one of them has a non-zero `x` component, and
//! the Minkowski form `y1·y2 − z1·z2` when both are isotropic (`x = 0`).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::Serialize;
use thiserror::Error;

use crate::scalar::Real;

/// Absolute tolerance used to decide whether an `x` component vanishes.
pub const DEFAULT_ISOTROPY_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("vector components must be finite, got ({x}, {y}, {z})")]
    NonFinite { x: f64, y: f64, z: f64 },
}

/// A vector or point `(x, y, z)` of pseudo-Galilean space.
///
/// `x` is the non-isotropic component; `(y, z)` span the isotropic
/// Minkowski plane.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct PGVector<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

/// Causal class of a vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum VectorClass {
    NonIsotropic,
    IsotropicSpacelike,
    IsotropicTimelike,
    IsotropicLightlike,
    Zero,
}

impl VectorClass {
    pub fn is_isotropic(self) -> bool {
        !matches!(self, VectorClass::NonIsotropic)
    }
}

impl<T: Real> PGVector<T> {
    /// Creates a vector, panicking on non-finite input. See [`PGVector::try_new`].
    pub fn new(x: T, y: T, z: T) -> Self {
        match Self::try_new(x, y, z) {
            Ok(v) => v,
            Err(e) => panic!("{e}"),
        }
    }

    pub fn try_new(x: T, y: T, z: T) -> Result<Self, AlgebraError> {
        if x.is_finite() && y.is_finite() && z.is_finite() {
            Ok(Self { x, y, z })
        } else {
            Err(AlgebraError::NonFinite {
                x: x.to_f64().unwrap_or(f64::NAN),
                y: y.to_f64().unwrap_or(f64::NAN),
                z: z.to_f64().unwrap_or(f64::NAN),
            })
        }
    }

    pub fn zero() -> Self {
        Self { x: T::zero(), y: T::zero(), z: T::zero() }
    }

    /// Isotropic vector `(0, y, z)`.
    pub fn isotropic(y: T, z: T) -> Self {
        Self::new(T::zero(), y, z)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// `y² − z²`, the Minkowski form of the isotropic part.
    #[inline]
    pub fn minkowski_form(&self) -> T {
        self.y * self.y - self.z * self.z
    }

    /// The vector `(x, z, y)`: binormals are obtained from principal normals this way.
    #[inline]
    pub fn swap_yz(&self) -> Self {
        Self { x: self.x, y: self.z, z: self.y }
    }

    /// Largest absolute component (Euclidean max-norm, used for residuals).
    #[inline]
    pub fn max_abs(&self) -> T {
        self.x.abs().max(self.y.abs()).max(self.z.abs())
    }

    /// Pseudo-Galilean scalar product with the default isotropy tolerance.
    pub fn dot(&self, other: &Self) -> T {
        self.dot_tol(other, T::lit(DEFAULT_ISOTROPY_TOL))
    }

    /// Pseudo-Galilean scalar product; `tol` decides when an `x` component counts as zero.
    pub fn dot_tol(&self, other: &Self, tol: T) -> T {
        if self.x.abs() > tol || other.x.abs() > tol {
            self.x * other.x
        } else {
            self.y * other.y - self.z * other.z
        }
    }

    /// Pseudo-Galilean norm: `|x|` for non-isotropic vectors, `sqrt|y² − z²|` otherwise.
    pub fn norm(&self) -> T {
        self.norm_tol(T::lit(DEFAULT_ISOTROPY_TOL))
    }

    pub fn norm_tol(&self, tol: T) -> T {
        if self.x.abs() > tol {
            self.x.abs()
        } else {
            self.minkowski_form().abs().sqrt()
        }
    }

    pub fn classify(&self, tol: T) -> VectorClass {
        let one = T::one();
        if self.x.abs() <= tol && self.y.abs() <= tol && self.z.abs() <= tol {
            return VectorClass::Zero;
        }
        if self.x.abs() > tol {
            return VectorClass::NonIsotropic;
        }
        let (y2, z2) = (self.y * self.y, self.z * self.z);
        let form = y2 - z2;
        if form.abs() <= tol * one.max(y2).max(z2) {
            VectorClass::IsotropicLightlike
        } else if form > T::zero() {
            VectorClass::IsotropicSpacelike
        } else {
            VectorClass::IsotropicTimelike
        }
    }
}

impl<T: Real> Add for PGVector<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self { x: self.x + rhs.x, y: self.y + rhs.y, z: self.z + rhs.z }
    }
}

impl<T: Real> Sub for PGVector<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self { x: self.x - rhs.x, y: self.y - rhs.y, z: self.z - rhs.z }
    }
}

impl<T: Real> Neg for PGVector<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self { x: -self.x, y: -self.y, z: -self.z }
    }
}

impl<T: Real> Mul<T> for PGVector<T> {
    type Output = Self;
    fn mul(self, k: T) -> Self {
        Self { x: self.x * k, y: self.y * k, z: self.z * k }
    }
}

impl<T: Real> Div<T> for PGVector<T> {
    type Output = Self;
    fn div(self, k: T) -> Self {
        Self { x: self.x / k, y: self.y / k, z: self.z / k }
    }
}

impl<T: Real> fmt::Display for PGVector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

/// Determinant of the 3×3 matrix with rows `a`, `b`, `c`.
pub fn det3<T: Real>(a: &PGVector<T>, b: &PGVector<T>, c: &PGVector<T>) -> T {
    a.x * (b.y * c.z - b.z * c.y) - a.y * (b.x * c.z - b.z * c.x) + a.z * (b.x * c.y - b.y * c.x)
}

/// Whether a motion acts on a position or on a difference of positions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Point,
    Direction,
}

/// Element of the six-parameter motion group of `G_3^1`:
///
/// ```text
/// x' = a + x
/// y' = b + c·x + y·cosh φ + z·sinh φ
/// z' = d + e·x + y·sinh φ + z·cosh φ
/// ```
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct PGMotion<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
    pub e: T,
    pub phi: T,
}

impl<T: Real> PGMotion<T> {
    pub fn identity() -> Self {
        let z = T::zero();
        Self { a: z, b: z, c: z, d: z, e: z, phi: z }
    }

    pub fn translation(a: T, b: T, d: T) -> Self {
        Self { a, b, d, ..Self::identity() }
    }

    pub fn hyperbolic_rotation(phi: T) -> Self {
        Self { phi, ..Self::identity() }
    }

    pub fn shear(c: T, e: T) -> Self {
        Self { c, e, ..Self::identity() }
    }

    pub fn apply(&self, p: &PGVector<T>, kind: Kind) -> PGVector<T> {
        let (ch, sh) = (self.phi.cosh(), self.phi.sinh());
        let lin = PGVector {
            x: p.x,
            y: self.c * p.x + p.y * ch + p.z * sh,
            z: self.e * p.x + p.y * sh + p.z * ch,
        };
        match kind {
            Kind::Point => PGVector { x: self.a + lin.x, y: self.b + lin.y, z: self.d + lin.z },
            Kind::Direction => lin,
        }
    }

    pub fn apply_point(&self, p: &PGVector<T>) -> PGVector<T> {
        self.apply(p, Kind::Point)
    }

    pub fn apply_direction(&self, v: &PGVector<T>) -> PGVector<T> {
        self.apply(v, Kind::Direction)
    }

    /// The motion "first `self`, then `next`".
    pub fn then(&self, next: &Self) -> Self {
        let (ch, sh) = (next.phi.cosh(), next.phi.sinh());
        Self {
            a: next.a + self.a,
            b: next.b + next.c * self.a + ch * self.b + sh * self.d,
            c: next.c + ch * self.c + sh * self.e,
            d: next.d + next.e * self.a + sh * self.b + ch * self.d,
            e: next.e + sh * self.c + ch * self.e,
            phi: next.phi + self.phi,
        }
    }

    pub fn inverse(&self) -> Self {
        // Undo the translation, then rotate back by -φ.
        let (ch, sh) = (self.phi.cosh(), self.phi.sinh());
        let a = -self.a;
        // Linear part inverse: y = ch·(y'−c·x) − sh·(z'−e·x), z = −sh·(y'−c·x) + ch·(z'−e·x)
        let c = -(ch * self.c - sh * self.e);
        let e = -(-sh * self.c + ch * self.e);
        let b0 = self.b - self.c * self.a;
        let d0 = self.d - self.e * self.a;
        Self {
            a,
            b: -(ch * b0 - sh * d0),
            c,
            d: -(-sh * b0 + ch * d0),
            e,
            phi: -self.phi,
        }
    }
}

/// Sign parameter (`ε`, `δ`) of a pseudo-Galilean trihedron.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value<T: Real>(self) -> T {
        match self {
            Sign::Plus => T::one(),
            Sign::Minus => -T::one(),
        }
    }

    pub fn of<T: Real>(v: T) -> Self {
        if v < T::zero() {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Trihedron<T> {
    pub e1: PGVector<T>,
    pub e2: PGVector<T>,
    pub e3: PGVector<T>,
    pub eps: Sign,
    pub delta: Sign,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TrihedronCheck {
    pub orthonormal: bool,
    pub positively_oriented: bool,
}

impl<T: Real> Trihedron<T> {
    /// `((1,0,0), (0,1,0), (0,0,1))` with `ε = δ = +1`.
    pub fn standard() -> Self {
        let (o, z) = (T::one(), T::zero());
        Self {
            e1: PGVector::new(o, z, z),
            e2: PGVector::new(z, o, z),
            e3: PGVector::new(z, z, o),
            eps: Sign::Plus,
            delta: Sign::Plus,
        }
    }

    pub fn determinant(&self) -> T {
        det3(&self.e1, &self.e2, &self.e3)
    }

    /// Checks `e1 = (1, ·, ·)`, `e2 = (0, y2, z2)` with `y2² − z2² = δ`,
    /// `e3 = (0, ε·z2, ε·y2)`; orientation additionally requires `det = 1`.
    pub fn check(&self, tol: T) -> TrihedronCheck {
        let eps: T = self.eps.value();
        let delta: T = self.delta.value();
        let close = |a: T, b: T| (a - b).abs() <= tol;
        let orthonormal = close(self.e1.x, T::one())
            && close(self.e2.x, T::zero())
            && close(self.e3.x, T::zero())
            && close(self.e2.minkowski_form(), delta)
            && close(self.e3.y, eps * self.e2.z)
            && close(self.e3.z, eps * self.e2.y);
        let positively_oriented = orthonormal && close(self.determinant(), T::one());
        TrihedronCheck { orthonormal, positively_oriented }
    }
}
