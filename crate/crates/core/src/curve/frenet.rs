//! Curvature, torsion and the Frenet trihedron of an arc-length curve.
//!
//! For `α(s) = (s, y(s), z(s))`:
//!
//! ```text
//! κ = sqrt|y″² − z″²|
//! τ = det(α′, α″, α‴) / (y″² − z″²)
//! T = (1, y′, z′),  N = (0, y″, z″)/κ,  B = (0, z″, y″)/κ
//! ```
//!
//! With the signed denominator the trihedron satisfies `T′ = κN`,
//! `N′ = τB`, `B′ = τN` for both causal characters. The unsigned variant
//! `det/κ²` is available through [`TorsionConvention::AbsDenominator`]; the
//! two agree on timelike curves and differ by a sign on spacelike ones.

use serde::Serialize;

use super::{f64_of, ArcLengthCurve, CurveError, Grid};
use crate::algebra::PGVector;
use crate::jet::Jet;
use crate::scalar::{relative_spread, Real};

pub const DEFAULT_KAPPA_MIN: f64 = 1e-9;
pub const DEFAULT_LIGHTLIKE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum TorsionConvention {
    /// `det / (y″² − z″²)`, consistent with the Frenet formulas.
    #[default]
    Signed,
    /// `det / |y″² − z″²|`.
    AbsDenominator,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FrenetConfig<T> {
    /// Curvatures at or below this value leave the trihedron undefined.
    pub kappa_min: T,
    /// Relative threshold on `|y″² − z″²|` for lightlike acceleration.
    pub lightlike_tol: T,
    pub convention: TorsionConvention,
}

impl<T: Real> Default for FrenetConfig<T> {
    fn default() -> Self {
        Self {
            kappa_min: T::lit(DEFAULT_KAPPA_MIN),
            lightlike_tol: T::lit(DEFAULT_LIGHTLIKE_TOL),
            convention: TorsionConvention::Signed,
        }
    }
}

/// Causal character of a curve at a point. A curve is timelike when its
/// principal normal is a spacelike vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Causal {
    Timelike,
    Spacelike,
}

impl Causal {
    pub fn as_str(self) -> &'static str {
        match self {
            Causal::Timelike => "timelike",
            Causal::Spacelike => "spacelike",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FrenetData<T> {
    pub s: T,
    pub point: PGVector<T>,
    pub t: PGVector<T>,
    pub n: PGVector<T>,
    pub b: PGVector<T>,
    pub kappa: T,
    pub tau: T,
    pub causal: Causal,
}

/// Returns the signed `y″² − z″²` once the acceleration is known to give a frame.
fn gate<T: Real>(y2: T, z2: T, s: T, cfg: &FrenetConfig<T>) -> Result<T, CurveError> {
    if y2.abs().max(z2.abs()) <= cfg.kappa_min {
        return Err(CurveError::FrameUndefined { s: f64_of(s) });
    }
    let (a, b) = (y2 * y2, z2 * z2);
    let den = a - b;
    if den.abs() <= cfg.lightlike_tol * T::one().max(a).max(b) || den.abs().sqrt() <= cfg.kappa_min {
        return Err(CurveError::LightlikeAcceleration { s: f64_of(s) });
    }
    Ok(den)
}

fn torsion_from<T: Real>(num: T, den: T, convention: TorsionConvention) -> T {
    match convention {
        TorsionConvention::Signed => num / den,
        TorsionConvention::AbsDenominator => num / den.abs(),
    }
}

/// `sqrt|y″² − z″²|`. Zero on straight pieces and at lightlike accelerations.
pub fn curvature<T: Real>(c: &ArcLengthCurve<T>, s: T) -> Result<T, CurveError> {
    let [_, y, z] = c.jets(s, 2)?;
    let (y2, z2) = (y.derivative(2), z.derivative(2));
    Ok((y2 * y2 - z2 * z2).abs().sqrt())
}

pub fn torsion<T: Real>(c: &ArcLengthCurve<T>, s: T, cfg: &FrenetConfig<T>) -> Result<T, CurveError> {
    let [_, y, z] = c.jets(s, 3)?;
    let (y2, z2, y3, z3) = (y.derivative(2), z.derivative(2), y.derivative(3), z.derivative(3));
    let den = gate(y2, z2, s, cfg)?;
    Ok(torsion_from(y2 * z3 - z2 * y3, den, cfg.convention))
}

pub fn frenet_frame<T: Real>(c: &ArcLengthCurve<T>, s: T, cfg: &FrenetConfig<T>) -> Result<FrenetData<T>, CurveError> {
    let [x, y, z] = c.jets(s, 3)?;
    let (y2, z2, y3, z3) = (y.derivative(2), z.derivative(2), y.derivative(3), z.derivative(3));
    let den = gate(y2, z2, s, cfg)?;
    let kappa = den.abs().sqrt();
    let n = PGVector { x: T::zero(), y: y2 / kappa, z: z2 / kappa };
    let causal = if n.dot(&n) > T::zero() { Causal::Timelike } else { Causal::Spacelike };
    Ok(FrenetData {
        s,
        point: PGVector { x: x.value(), y: y.value(), z: z.value() },
        t: PGVector { x: x.derivative(1), y: y.derivative(1), z: z.derivative(1) },
        n,
        b: n.swap_yz(),
        kappa,
        tau: torsion_from(y2 * z3 - z2 * y3, den, cfg.convention),
        causal,
    })
}

/// Jets of `κ(s)` and `τ(s)` of the given order.
pub fn intrinsic_jets<T: Real>(
    c: &ArcLengthCurve<T>,
    s: T,
    order: usize,
    cfg: &FrenetConfig<T>,
) -> Result<(Jet<T>, Jet<T>), CurveError> {
    let [_, y, z] = c.jets(s, order + 3)?;
    let y2 = y.differentiate().differentiate();
    let z2 = z.differentiate().differentiate();
    gate(y2.value(), z2.value(), s, cfg)?;
    let (y3, z3) = (y2.differentiate(), z2.differentiate());
    let den = &(&y2 * &y2) - &(&z2 * &z2);
    let kappa = den.abs().sqrt().truncate(order);
    let num = &(&y2 * &z3) - &(&z2 * &y3);
    let tau = match cfg.convention {
        TorsionConvention::Signed => &num / &den,
        TorsionConvention::AbsDenominator => &num / &den.abs(),
    };
    Ok((kappa, tau))
}

/// Max-norm residuals of the Frenet formulas from central differences of the frame.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FrenetResidual<T> {
    pub r_t: T,
    pub r_n: T,
    pub r_b: T,
}

impl<T: Real> FrenetResidual<T> {
    pub fn max(&self) -> T {
        self.r_t.max(self.r_n).max(self.r_b)
    }
}

pub fn frenet_residual<T: Real>(
    c: &ArcLengthCurve<T>,
    s: T,
    h: T,
    cfg: &FrenetConfig<T>,
) -> Result<FrenetResidual<T>, CurveError> {
    let mid = frenet_frame(c, s, cfg)?;
    let lo = frenet_frame(c, s - h, cfg)?;
    let hi = frenet_frame(c, s + h, cfg)?;
    let two_h = h + h;
    let dt = (hi.t - lo.t) / two_h;
    let dn = (hi.n - lo.n) / two_h;
    let db = (hi.b - lo.b) / two_h;
    Ok(FrenetResidual {
        r_t: (dt - mid.n * mid.kappa).max_abs(),
        r_n: (dn - mid.b * mid.tau).max_abs(),
        r_b: (db - mid.n * mid.tau).max_abs(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HelixCheck<T> {
    pub is_helix: bool,
    /// `(max − min)/max(1, |mean|)` of `κ/τ` over the grid.
    pub spread: T,
    pub ratios: Vec<T>,
}

/// A general helix has constant `κ/τ`.
pub fn is_general_helix<T: Real>(
    c: &ArcLengthCurve<T>,
    grid: &Grid<T>,
    tol: T,
    cfg: &FrenetConfig<T>,
) -> Result<HelixCheck<T>, CurveError> {
    let mut ratios = Vec::with_capacity(grid.n);
    for s in grid.points() {
        let f = frenet_frame(c, s, cfg)?;
        ratios.push(f.kappa / f.tau);
    }
    let spread = if ratios.iter().all(|r| r.is_finite()) {
        relative_spread(&ratios).unwrap_or_else(T::infinity)
    } else {
        T::infinity()
    };
    Ok(HelixCheck { is_helix: spread < tol, spread, ratios })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expr;

    fn arc(y: &str, z: &str) -> ArcLengthCurve<f64> {
        ArcLengthCurve::from_exprs(parse_expr(y).unwrap(), parse_expr(z).unwrap(), -1.0, 1.0).unwrap()
    }

    fn hyperbolic() -> ArcLengthCurve<f64> {
        arc("(2/9)*cosh(3*s)", "(2/9)*sinh(3*s)")
    }

    #[test]
    fn straight_line() {
        let c = arc("2*s + 1", "3*s - 4");
        let cfg = FrenetConfig::default();
        assert_eq!(curvature(&c, 0.3).unwrap(), 0.0);
        assert!(matches!(torsion(&c, 0.3, &cfg), Err(CurveError::FrameUndefined { .. })));
        assert!(matches!(frenet_residual(&c, 0.3, 1e-4, &cfg), Err(CurveError::FrameUndefined { .. })));
        let g = c.grid(16).unwrap();
        assert!(is_general_helix(&c, &g, 1e-6, &cfg).is_err());
    }

    #[test]
    fn hyperbolic_curve_constants() {
        let c = hyperbolic();
        let cfg = FrenetConfig::default();
        for s in [-0.8, 0.0, 0.45] {
            assert!((curvature(&c, s).unwrap() - 2.0).abs() < 1e-12);
            assert!((torsion(&c, s, &cfg).unwrap() - 3.0).abs() < 1e-12);
            let f = frenet_frame(&c, s, &cfg).unwrap();
            let (ch, sh) = ((3.0 * s).cosh(), (3.0 * s).sinh());
            assert!((f.t - PGVector::new(1.0, 2.0 / 3.0 * sh, 2.0 / 3.0 * ch)).max_abs() < 1e-13);
            assert!((f.n - PGVector::new(0.0, ch, sh)).max_abs() < 1e-13);
            assert!((f.b - PGVector::new(0.0, sh, ch)).max_abs() < 1e-13);
            assert!((f.n.dot(&f.n) - 1.0).abs() < 1e-12);
            assert_eq!(f.causal, Causal::Timelike);
        }
    }

    #[test]
    fn cubic_curve_at_origin() {
        let c = arc("s^3/6 + s^2/2", "s^3/6");
        let cfg = FrenetConfig::default();
        assert_eq!(curvature(&c, 0.0).unwrap(), 1.0);
        assert_eq!(torsion(&c, 0.0, &cfg).unwrap(), 1.0);
        let f = frenet_frame(&arc("s^2/2", "s*0"), 0.0, &cfg).unwrap();
        assert_eq!(f.n, PGVector::new(0.0, 1.0, 0.0));
        assert_eq!(f.b, PGVector::new(0.0, 0.0, 1.0));
    }

    #[test]
    fn lightlike_acceleration_is_rejected() {
        let c = arc("s^2", "s^2");
        let cfg = FrenetConfig::default();
        assert!(matches!(frenet_frame(&c, 0.2, &cfg), Err(CurveError::LightlikeAcceleration { .. })));
        assert_eq!(curvature(&c, 0.2).unwrap(), 0.0);
    }

    #[test]
    fn spacelike_curve_sign_conventions() {
        // N = (0, sinh, cosh) is timelike, so the curve is spacelike
        let c = arc("(2/9)*sinh(3*s)", "(2/9)*cosh(3*s)");
        let signed = FrenetConfig::default();
        let abs = FrenetConfig { convention: TorsionConvention::AbsDenominator, ..signed };
        let f = frenet_frame(&c, 0.2, &signed).unwrap();
        assert_eq!(f.causal, Causal::Spacelike);
        assert!((f.tau - 3.0).abs() < 1e-12);
        assert!((torsion(&c, 0.2, &abs).unwrap() + 3.0).abs() < 1e-12);
        // only the signed convention satisfies the Frenet formulas here
        assert!(frenet_residual(&c, 0.2, 1e-4, &signed).unwrap().max() < 1e-6);
        assert!(frenet_residual(&c, 0.2, 1e-4, &abs).unwrap().r_n > 1.0);
    }

    #[test]
    fn helix_detection() {
        let cfg = FrenetConfig::default();
        let c = hyperbolic();
        let g = c.grid(64).unwrap();
        let h = is_general_helix(&c, &g, 1e-6, &cfg).unwrap();
        assert!(h.is_helix);
        assert!((h.ratios[10] - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn intrinsic_jets_of_hyperbolic_curve() {
        let (k, t) = intrinsic_jets(&hyperbolic(), 0.3, 2, &FrenetConfig::default()).unwrap();
        assert!((k.value() - 2.0).abs() < 1e-12 && k.derivative(1).abs() < 1e-10);
        assert!((t.value() - 3.0).abs() < 1e-12 && t.derivative(2).abs() < 1e-8);
    }
}
