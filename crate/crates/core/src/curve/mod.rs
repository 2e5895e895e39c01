//! Admissible curves and their arc-length parameterization.
//!
//! A curve `α(t) = (x(t), y(t), z(t))` is admissible when `x′(t) ≠ 0`. Its
//! pseudo-Galilean arc length is the advance of `x`, so the arc-length
//! parameterization is `ᾱ(s) = (s, y(x⁻¹(s)), z(x⁻¹(s)))`. All geometric
//! quantities are computed from coordinate [`Jet`]s.

pub mod frenet;
pub mod inversion;

use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{PGMotion, PGVector};
use crate::expr::{EvalError, Expr};
use crate::jet::Jet;
use crate::scalar::Real;
use crate::synthesis::SampledCurve;

pub use frenet::{
    curvature, frenet_frame, frenet_residual, intrinsic_jets, is_general_helix, torsion, Causal,
    FrenetConfig, FrenetData, FrenetResidual, HelixCheck, TorsionConvention,
};

/// Default number of points of certificate and analysis grids.
pub const DEFAULT_GRID: usize = 512;
/// Minimal `|x′|` accepted by the admissibility certificate.
pub const MIN_ABS_DX: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CurveError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("curve is not admissible: x'({param}) = {dx}")]
    NotAdmissible { param: f64, dx: f64 },
    #[error("Frenet frame undefined at s = {s}: curvature below threshold")]
    FrameUndefined { s: f64 },
    #[error("lightlike acceleration at s = {s}: y'' = ±z'' and the trihedron does not exist")]
    LightlikeAcceleration { s: f64 },
    #[error("parameter {param} outside the curve domain [{lo}, {hi}]")]
    OutOfDomain { param: f64, lo: f64, hi: f64 },
    #[error("derivative of order {requested} unavailable (curve provides up to {available})")]
    DerivativeUnavailable { requested: usize, available: usize },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}

pub(crate) fn f64_of<T: Real>(v: T) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

/// Uniform grid of `n ≥ 2` points on `[lo, hi]`, endpoints included.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct Grid<T> {
    pub lo: T,
    pub hi: T,
    pub n: usize,
}

impl<T: Real> Grid<T> {
    pub fn new(lo: T, hi: T, n: usize) -> Result<Self, CurveError> {
        if n < 2 {
            return Err(CurveError::InvalidGrid(format!("need at least 2 points, got {n}")));
        }
        if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
            return Err(CurveError::InvalidGrid(format!("bad interval [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi, n })
    }

    pub fn point(&self, i: usize) -> T {
        if i + 1 == self.n {
            return self.hi;
        }
        let frac = T::from_usize_lossy(i) / T::from_usize_lossy(self.n - 1);
        self.lo + (self.hi - self.lo) * frac
    }

    pub fn points(&self) -> Vec<T> {
        (0..self.n).map(|i| self.point(i)).collect()
    }
}

/// Result of the admissibility scan: `x′` keeps one sign and stays away from zero.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct Certificate<T> {
    pub grid_points: usize,
    pub min_abs_dx: T,
    pub increasing: bool,
}

#[derive(Clone, Debug)]
pub(crate) enum Repr<T> {
    Coordinates { x: Expr, y: Expr, z: Expr },
    Sampled(Arc<SampledCurve<T>>),
    /// Arc-length reparameterization of an admissible curve by inverting `x`.
    Reparametrized(Arc<AdmissibleCurve<T>>),
    Moved { inner: Arc<AdmissibleCurve<T>>, motion: PGMotion<T> },
    /// `base + λ·N_base`, evaluated from the base jets.
    Offset { base: Arc<AdmissibleCurve<T>>, lambda: T, kappa_min: T },
}

/// Curve with coordinate functions available as jets over a parameter interval.
#[derive(Clone, Debug)]
pub struct AdmissibleCurve<T> {
    repr: Repr<T>,
    domain: (T, T),
    certificate: Certificate<T>,
}

impl<T: Real> AdmissibleCurve<T> {
    pub(crate) fn certify(repr: Repr<T>, lo: T, hi: T) -> Result<Self, CurveError> {
        let grid = Grid::new(lo, hi, DEFAULT_GRID)?;
        let mut curve = Self {
            repr,
            domain: (lo, hi),
            certificate: Certificate { grid_points: grid.n, min_abs_dx: T::zero(), increasing: true },
        };
        let mut min_abs = T::infinity();
        let mut sign = None;
        for t in grid.points() {
            let dx = curve.coordinate_jets(t, 1)?[0].derivative(1);
            let s = dx > T::zero();
            if dx.abs() < T::lit(MIN_ABS_DX) || sign.is_some_and(|prev| prev != s) {
                return Err(CurveError::NotAdmissible { param: f64_of(t), dx: f64_of(dx) });
            }
            sign = Some(s);
            min_abs = min_abs.min(dx.abs());
        }
        curve.certificate = Certificate { grid_points: grid.n, min_abs_dx: min_abs, increasing: sign == Some(true) };
        Ok(curve)
    }

    /// Curve given by three coordinate expressions on `[lo, hi]`.
    pub fn from_exprs(x: Expr, y: Expr, z: Expr, lo: T, hi: T) -> Result<Self, CurveError> {
        Self::certify(Repr::Coordinates { x, y, z }, lo, hi)
    }

    pub fn domain(&self) -> (T, T) {
        self.domain
    }

    pub fn certificate(&self) -> &Certificate<T> {
        &self.certificate
    }

    /// Highest derivative order the representation can deliver, if bounded.
    pub fn max_order(&self) -> Option<usize> {
        match &self.repr {
            Repr::Coordinates { .. } => None,
            Repr::Sampled(sc) => sc.max_order(),
            Repr::Reparametrized(inner) | Repr::Moved { inner, .. } => inner.max_order(),
            Repr::Offset { base, .. } => base.max_order().map(|k| k.saturating_sub(2)),
        }
    }

    /// Jets of `(x, y, z)` at parameter `t`.
    pub fn coordinate_jets(&self, t: T, order: usize) -> Result<[Jet<T>; 3], CurveError> {
        match &self.repr {
            Repr::Coordinates { x, y, z } => Ok([x.jet(t, order)?, y.jet(t, order)?, z.jet(t, order)?]),
            Repr::Sampled(sc) => sc.jets(t, order),
            Repr::Reparametrized(inner) => {
                let (lo, hi) = inner.domain;
                let param = inversion::invert_monotone(
                    |u| {
                        let j = inner.coordinate_jets(u, 1)?;
                        Ok::<_, CurveError>((j[0].value(), j[0].derivative(1)))
                    },
                    t,
                    lo,
                    hi,
                )?
                .ok_or_else(|| {
                    let (a, b) = self.domain;
                    CurveError::OutOfDomain { param: f64_of(t), lo: f64_of(a), hi: f64_of(b) }
                })?;
                let [x, y, z] = inner.coordinate_jets(param, order)?;
                let inv = x.inverse(param);
                Ok([Jet::variable(t, order), y.compose(&inv), z.compose(&inv)])
            }
            Repr::Moved { inner, motion } => {
                let [x, y, z] = inner.coordinate_jets(t, order)?;
                let (ch, sh) = (motion.phi.cosh(), motion.phi.sinh());
                let ny = &(&x.scale(motion.c) + &y.scale(ch)) + &z.scale(sh);
                let nz = &(&x.scale(motion.e) + &y.scale(sh)) + &z.scale(ch);
                Ok([x.add_scalar(motion.a), ny.add_scalar(motion.b), nz.add_scalar(motion.d)])
            }
            Repr::Offset { base, lambda, kappa_min } => {
                let [x, y, z] = base.coordinate_jets(t, order + 2)?;
                let y2 = y.differentiate().differentiate();
                let z2 = z.differentiate().differentiate();
                let den = &(&y2 * &y2) - &(&z2 * &z2);
                if den.value().abs().sqrt() <= *kappa_min {
                    return Err(CurveError::FrameUndefined { s: f64_of(t) });
                }
                let kappa = den.abs().sqrt();
                let ny = (&y2 / &kappa).scale(*lambda);
                let nz = (&z2 / &kappa).scale(*lambda);
                Ok([x.truncate(order), &y.truncate(order) + &ny, &z.truncate(order) + &nz])
            }
        }
    }

    pub fn point(&self, t: T) -> Result<PGVector<T>, CurveError> {
        let [x, y, z] = self.coordinate_jets(t, 0)?;
        Ok(PGVector { x: x.value(), y: y.value(), z: z.value() })
    }

    /// The image of the curve under a motion of the space.
    pub fn transformed(&self, motion: PGMotion<T>) -> Result<Self, CurveError> {
        let (lo, hi) = self.domain;
        Self::certify(Repr::Moved { inner: Arc::new(self.clone()), motion }, lo, hi)
    }

    fn is_arclength(&self) -> bool {
        match &self.repr {
            Repr::Coordinates { x, .. } => *x == Expr::Var,
            Repr::Sampled(_) | Repr::Reparametrized(_) | Repr::Offset { .. } => true,
            Repr::Moved { .. } => false,
        }
    }
}

/// An admissible curve whose parameter is its arc length: `x(s) = s`.
#[derive(Clone, Debug)]
pub struct ArcLengthCurve<T>(AdmissibleCurve<T>);

impl<T: Real> ArcLengthCurve<T> {
    /// `α(s) = (s, y(s), z(s))` on `[lo, hi]`.
    pub fn from_exprs(y: Expr, z: Expr, lo: T, hi: T) -> Result<Self, CurveError> {
        Ok(Self(AdmissibleCurve::from_exprs(Expr::Var, y, z, lo, hi)?))
    }

    pub(crate) fn from_repr(repr: Repr<T>, lo: T, hi: T) -> Result<Self, CurveError> {
        Ok(Self(AdmissibleCurve::certify(repr, lo, hi)?))
    }

    pub fn as_curve(&self) -> &AdmissibleCurve<T> {
        &self.0
    }

    pub fn domain(&self) -> (T, T) {
        self.0.domain
    }

    pub fn jets(&self, s: T, order: usize) -> Result<[Jet<T>; 3], CurveError> {
        self.0.coordinate_jets(s, order)
    }

    pub fn point(&self, s: T) -> Result<PGVector<T>, CurveError> {
        self.0.point(s)
    }

    pub fn max_order(&self) -> Option<usize> {
        self.0.max_order()
    }

    /// Uniform grid over the whole domain.
    pub fn grid(&self, n: usize) -> Result<Grid<T>, CurveError> {
        Grid::new(self.0.domain.0, self.0.domain.1, n)
    }

    /// Offset `α + λ·N_α`, evaluated lazily from this curve's jets.
    ///
    /// `N_α` has no x-component, so the offset shares the base's first
    /// coordinate and its admissibility certificate.
    pub(crate) fn offset(&self, lambda: T, kappa_min: T) -> Self {
        Self(AdmissibleCurve {
            repr: Repr::Offset { base: Arc::new(self.0.clone()), lambda, kappa_min },
            domain: self.0.domain,
            certificate: self.0.certificate,
        })
    }
}

/// Reparameterizes an admissible curve by arc length.
///
/// Curves that already satisfy `x(s) = s` are passed through. Otherwise the
/// new parameter runs over `x([t_lo, t_hi])` and `x` is inverted by Newton
/// iteration with a bisection fallback.
pub fn to_arclength<T: Real>(c: &AdmissibleCurve<T>) -> Result<ArcLengthCurve<T>, CurveError> {
    if c.is_arclength() {
        return Ok(ArcLengthCurve(c.clone()));
    }
    let (lo, hi) = c.domain;
    let (xlo, xhi) = (c.point(lo)?.x, c.point(hi)?.x);
    let (a, b) = if xlo < xhi { (xlo, xhi) } else { (xhi, xlo) };
    ArcLengthCurve::from_repr(Repr::Reparametrized(Arc::new(c.clone())), a, b)
}
