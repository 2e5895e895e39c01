//! Curves from prescribed curvature and torsion.
//!
//! The Frenet system `α′ = T`, `T′ = κN`, `N′ = τB`, `B′ = τN` is integrated
//! with classical fixed-step RK4. The frame is never renormalized: the
//! conserved quantities (`N.y² − N.z²`, the swap relation between `N` and
//! `B`, and `x = s`) are measured and reported in [`Diagnostics`] instead.

use std::io::{Read, Write};
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{PGVector, Sign, Trihedron};
use crate::curve::{f64_of, ArcLengthCurve, CurveError, Repr};
use crate::expr::{EvalError, Expr};
use crate::jet::Jet;
use crate::scalar::Real;

pub const CSV_HEADER: [&str; 13] = ["s", "x", "y", "z", "Tx", "Ty", "Tz", "Ny", "Nz", "By", "Bz", "kappa", "tau"];

/// Extra Taylor orders carried past the requested derivative when
/// re-expanding the local series at a query point.
const TAIL_ORDERS: usize = 8;
/// Derivative orders available from node data alone (quintic Hermite).
const HERMITE_ORDERS: usize = 3;

#[derive(Debug, Error)]
pub enum SynthesisError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("curvature must be positive: kappa({s}) = {kappa} at node {index}")]
    NonPositiveCurvature { index: usize, s: f64, kappa: f64 },
    #[error("step {step} must be positive and at most (s_hi - s_lo)/16 = {max}")]
    InvalidStep { step: f64, max: f64 },
    #[error("invalid domain [{lo}, {hi}]")]
    InvalidDomain { lo: f64, hi: f64 },
    #[error("initial frame must be an orthonormal trihedron with B the (y,z)-swap of N: {0}")]
    InvalidInitialFrame(String),
    #[error("sampled-curve CSV: {0}")]
    Csv(String),
}

impl From<csv::Error> for SynthesisError {
    fn from(e: csv::Error) -> Self {
        SynthesisError::Csv(e.to_string())
    }
}

#[derive(Clone, Debug)]
pub struct IntrinsicSpec<T> {
    pub kappa: Expr,
    pub tau: Expr,
    pub domain: (T, T),
    pub step: T,
    pub initial_frame: Trihedron<T>,
    /// Must satisfy `x = s_lo` so that the first coordinate equals arc length.
    pub initial_point: PGVector<T>,
    pub kappa_min: T,
}

impl<T: Real> IntrinsicSpec<T> {
    /// Standard initial frame, initial point `(s_lo, 0, 0)`.
    pub fn new(kappa: Expr, tau: Expr, lo: T, hi: T, step: T) -> Self {
        Self {
            kappa,
            tau,
            domain: (lo, hi),
            step,
            initial_frame: Trihedron::standard(),
            initial_point: PGVector { x: lo, y: T::zero(), z: T::zero() },
            kappa_min: T::lit(crate::curve::frenet::DEFAULT_KAPPA_MIN),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SampleNode<T> {
    pub s: T,
    pub position: PGVector<T>,
    pub t: PGVector<T>,
    pub n: PGVector<T>,
    pub b: PGVector<T>,
    pub kappa: T,
    pub tau: T,
}

/// Drift of the quantities the exact flow conserves.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Diagnostics<T> {
    /// `max |(N.y² − N.z²)(s) − (N.y² − N.z²)(s_lo)|`
    pub first_integral_drift: T,
    /// `max |B.y − N.z|, |B.z − N.y|`
    pub swap_drift: T,
    /// `max |x(s) − s|`
    pub x_drift: T,
    /// `max |T.x − 1|, |N.x|, |B.x|`
    pub frame_x_drift: T,
}

#[derive(Clone, Debug)]
pub struct SampledCurve<T> {
    nodes: Vec<SampleNode<T>>,
    step: T,
    intrinsics: Option<(Expr, Expr)>,
    diagnostics: Diagnostics<T>,
}

type State<T> = [T; 12];

fn rhs<T: Real>(kappa: T, tau: T, y: &State<T>) -> State<T> {
    let mut d = [T::zero(); 12];
    // position' = T
    d[..3].copy_from_slice(&y[3..6]);
    for i in 0..3 {
        d[3 + i] = kappa * y[6 + i];
        d[6 + i] = tau * y[9 + i];
        d[9 + i] = tau * y[6 + i];
    }
    d
}

fn axpy<T: Real>(y: &State<T>, k: &State<T>, a: T) -> State<T> {
    let mut out = *y;
    for (o, &ki) in out.iter_mut().zip(k) {
        *o = *o + a * ki;
    }
    out
}

fn vec_at<T: Real>(y: &State<T>, i: usize) -> PGVector<T> {
    PGVector { x: y[i], y: y[i + 1], z: y[i + 2] }
}

#[allow(clippy::needless_range_loop)]
pub fn synthesize<T: Real>(spec: &IntrinsicSpec<T>) -> Result<SampledCurve<T>, SynthesisError> {
    let (lo, hi) = spec.domain;
    if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
        return Err(SynthesisError::InvalidDomain { lo: f64_of(lo), hi: f64_of(hi) });
    }
    let span = hi - lo;
    let max_step = span / T::lit(16.0);
    if !(spec.step > T::zero()) || spec.step > max_step * (T::one() + T::epsilon()) {
        return Err(SynthesisError::InvalidStep { step: f64_of(spec.step), max: f64_of(max_step) });
    }
    let fr = &spec.initial_frame;
    let check = fr.check(T::lit(1e-12));
    if !check.orthonormal || fr.eps != Sign::Plus {
        return Err(SynthesisError::InvalidInitialFrame(format!(
            "orthonormal = {}, eps = {:?}",
            check.orthonormal, fr.eps
        )));
    }
    if (spec.initial_point.x - lo).abs() > T::lit(1e-12) * T::one().max(lo.abs()) {
        return Err(SynthesisError::InvalidInitialFrame(format!(
            "initial point x = {} must equal s_lo = {lo}",
            spec.initial_point.x
        )));
    }

    let steps = (span / spec.step - T::lit(1e-9)).ceil().to_usize().unwrap_or(1).max(1);
    let h = span / T::from_usize_lossy(steps);
    let s_at = |i: usize| if i == steps { hi } else { lo + h * T::from_usize_lossy(i) };

    let mut kappas = Vec::with_capacity(steps + 1);
    for i in 0..=steps {
        let s = s_at(i);
        let k: T = spec.kappa.value(s)?;
        if !(k > spec.kappa_min) {
            return Err(SynthesisError::NonPositiveCurvature { index: i, s: f64_of(s), kappa: f64_of(k) });
        }
        kappas.push(k);
    }

    let p0 = spec.initial_point;
    let mut y: State<T> = [
        p0.x, p0.y, p0.z, fr.e1.x, fr.e1.y, fr.e1.z, fr.e2.x, fr.e2.y, fr.e2.z, fr.e3.x, fr.e3.y, fr.e3.z,
    ];
    // Kahan compensation per component keeps x(s) − s at roundoff level over long runs
    let mut comp: State<T> = [T::zero(); 12];
    let eval = |s: T, st: &State<T>| -> Result<State<T>, SynthesisError> {
        Ok(rhs(spec.kappa.value(s)?, spec.tau.value(s)?, st))
    };

    let mut nodes = Vec::with_capacity(steps + 1);
    let half = T::lit(0.5);
    let sixth = T::one() / T::lit(6.0);
    let two = T::lit(2.0);
    for i in 0..=steps {
        let s = s_at(i);
        nodes.push(SampleNode {
            s,
            position: vec_at(&y, 0),
            t: vec_at(&y, 3),
            n: vec_at(&y, 6),
            b: vec_at(&y, 9),
            kappa: kappas[i],
            tau: spec.tau.value(s)?,
        });
        if i == steps {
            break;
        }
        let hs = s_at(i + 1) - s;
        let k1 = eval(s, &y)?;
        let k2 = eval(s + hs * half, &axpy(&y, &k1, hs * half))?;
        let k3 = eval(s + hs * half, &axpy(&y, &k2, hs * half))?;
        let k4 = eval(s + hs, &axpy(&y, &k3, hs))?;
        for j in 0..12 {
            let incr = hs * ((k1[j] + two * k2[j] + two * k3[j] + k4[j]) * sixth);
            let yj = incr - comp[j];
            let t = y[j] + yj;
            comp[j] = (t - y[j]) - yj;
            y[j] = t;
        }
    }

    let diagnostics = diagnostics_of(&nodes);
    Ok(SampledCurve { nodes, step: h, intrinsics: Some((spec.kappa.clone(), spec.tau.clone())), diagnostics })
}

fn diagnostics_of<T: Real>(nodes: &[SampleNode<T>]) -> Diagnostics<T> {
    let fi0 = nodes[0].n.minkowski_form();
    let mut d = Diagnostics {
        first_integral_drift: T::zero(),
        swap_drift: T::zero(),
        x_drift: T::zero(),
        frame_x_drift: T::zero(),
    };
    for nd in nodes {
        d.first_integral_drift = d.first_integral_drift.max((nd.n.minkowski_form() - fi0).abs());
        d.swap_drift = d.swap_drift.max((nd.b.y - nd.n.z).abs()).max((nd.b.z - nd.n.y).abs());
        d.x_drift = d.x_drift.max((nd.position.x - nd.s).abs());
        d.frame_x_drift = d
            .frame_x_drift
            .max((nd.t.x - T::one()).abs())
            .max(nd.n.x.abs())
            .max(nd.b.x.abs());
    }
    d
}

impl<T: Real> SampledCurve<T> {
    pub fn nodes(&self) -> &[SampleNode<T>] {
        &self.nodes
    }

    /// Actual node spacing (the requested step, adjusted to divide the domain evenly).
    pub fn step(&self) -> T {
        self.step
    }

    pub fn diagnostics(&self) -> &Diagnostics<T> {
        &self.diagnostics
    }

    pub fn domain(&self) -> (T, T) {
        (self.nodes[0].s, self.nodes[self.nodes.len() - 1].s)
    }

    /// `None` when derivatives of every order are available (intrinsic
    /// expressions known), `Some(3)` for curves rebuilt from node data only.
    pub fn max_order(&self) -> Option<usize> {
        if self.intrinsics.is_some() {
            None
        } else {
            Some(HERMITE_ORDERS)
        }
    }

    fn check_domain(&self, s: T) -> Result<(), CurveError> {
        let (lo, hi) = self.domain();
        if s < lo - self.step || s > hi + self.step || !s.is_finite() {
            return Err(CurveError::OutOfDomain { param: f64_of(s), lo: f64_of(lo), hi: f64_of(hi) });
        }
        Ok(())
    }

    /// Coordinate jets at arc length `s`.
    ///
    /// With the intrinsic expressions available the Frenet system is expanded
    /// in a Taylor series about the nearest node (node frame plus jets of `κ`
    /// and `τ`) and re-centred at `s`. Otherwise a quintic Hermite interpolant
    /// through the positions, tangents and `κN` of the bracketing nodes is
    /// differentiated, which supports orders up to 3.
    pub fn jets(&self, s: T, order: usize) -> Result<[Jet<T>; 3], CurveError> {
        self.check_domain(s)?;
        match &self.intrinsics {
            Some((kappa, tau)) => self.taylor_jets(kappa, tau, s, order),
            None => {
                if order > HERMITE_ORDERS {
                    return Err(CurveError::DerivativeUnavailable { requested: order, available: HERMITE_ORDERS });
                }
                Ok(self.hermite_jets(s, order))
            }
        }
    }

    fn taylor_jets(&self, kappa: &Expr, tau: &Expr, s: T, order: usize) -> Result<[Jet<T>; 3], CurveError> {
        let lo = self.nodes[0].s;
        let last = self.nodes.len() - 1;
        let idx = ((s - lo) / self.step).round().to_usize().unwrap_or(0).min(last);
        let node = &self.nodes[idx];
        let m = order + TAIL_ORDERS;
        let c = kappa.jet(node.s, m)?.to_taylor();
        let d = tau.jet(node.s, m)?.to_taylor();

        let zero = PGVector::zero();
        let (mut tt, mut nn, mut bb) = (vec![node.t], vec![node.n], vec![node.b]);
        for k in 0..m {
            let (mut dt, mut dn, mut db) = (zero, zero, zero);
            for j in 0..=k {
                dt = dt + nn[k - j] * c[j];
                dn = dn + bb[k - j] * d[j];
                db = db + nn[k - j] * d[j];
            }
            let inv = T::one() / T::from_usize_lossy(k + 1);
            tt.push(dt * inv);
            nn.push(dn * inv);
            bb.push(db * inv);
        }
        let mut p = vec![node.position];
        for (k, tk) in tt.iter().enumerate().take(m) {
            p.push(*tk / T::from_usize_lossy(k + 1));
        }
        let delta = s - node.s;
        let coord = |f: fn(&PGVector<T>) -> T| {
            let taylor: Vec<T> = p.iter().map(f).collect();
            Jet::from_taylor(&taylor).shifted(delta, order)
        };
        Ok([coord(|v| v.x), coord(|v| v.y), coord(|v| v.z)])
    }

    fn hermite_jets(&self, s: T, order: usize) -> [Jet<T>; 3] {
        let lo = self.nodes[0].s;
        let last = self.nodes.len() - 1;
        let j = ((s - lo) / self.step).floor().to_usize().unwrap_or(0).min(last - 1);
        let (a, b) = (&self.nodes[j], &self.nodes[j + 1]);
        let h = b.s - a.s;
        let u = (s - a.s) / h;
        let (p0, p1) = (a.position, b.position);
        let (m0, m1) = (a.t * h, b.t * h);
        let (a0, a1) = (a.n * (a.kappa * h * h), b.n * (b.kappa * h * h));
        let l = |v: f64| T::lit(v);
        let coeffs = [
            p0,
            m0,
            a0 * l(0.5),
            p0 * l(-10.0) + m0 * l(-6.0) + a0 * l(-1.5) + p1 * l(10.0) + m1 * l(-4.0) + a1 * l(0.5),
            p0 * l(15.0) + m0 * l(8.0) + a0 * l(1.5) + p1 * l(-15.0) + m1 * l(7.0) + a1 * l(-1.0),
            p0 * l(-6.0) + m0 * l(-3.0) + a0 * l(-0.5) + p1 * l(6.0) + m1 * l(-3.0) + a1 * l(0.5),
        ];
        let mut derivs = Vec::with_capacity(order + 1);
        let mut scale = T::one();
        for mo in 0..=order {
            let mut acc = PGVector::zero();
            for jj in (mo..6).rev() {
                // j!/(j−m)! falling factorial
                let ff = ((jj - mo + 1)..=jj).fold(1.0, |f, q| f * q as f64);
                acc = acc * u + coeffs[jj] * l(ff);
            }
            derivs.push(acc * scale);
            scale = scale / h;
        }
        let coord = |f: fn(&PGVector<T>) -> T| Jet::from_derivatives(derivs.iter().map(f).collect());
        [coord(|v| v.x), coord(|v| v.y), coord(|v| v.z)]
    }

    /// Writes the node table with 17 significant digits.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), SynthesisError> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(CSV_HEADER)?;
        for nd in &self.nodes {
            let vals = [
                nd.s,
                nd.position.x,
                nd.position.y,
                nd.position.z,
                nd.t.x,
                nd.t.y,
                nd.t.z,
                nd.n.y,
                nd.n.z,
                nd.b.y,
                nd.b.z,
                nd.kappa,
                nd.tau,
            ];
            wr.write_record(vals.iter().map(|v| format!("{:.16e}", f64_of(*v))))?;
        }
        wr.flush().map_err(|e| SynthesisError::Csv(e.to_string()))?;
        Ok(())
    }

    /// Reads a node table written by [`SampledCurve::write_csv`]. The result
    /// carries no intrinsic expressions, so derivatives stop at order 3.
    pub fn read_csv<R: Read>(r: R) -> Result<Self, SynthesisError> {
        let mut rd = csv::Reader::from_reader(r);
        let header = rd.headers()?.clone();
        if header.iter().ne(CSV_HEADER.iter().copied()) {
            return Err(SynthesisError::Csv(format!("unexpected header {:?}", header.iter().collect::<Vec<_>>())));
        }
        let mut nodes = Vec::new();
        for (row, rec) in rd.records().enumerate() {
            let rec = rec?;
            let mut v = [T::zero(); 13];
            for (k, field) in rec.iter().enumerate() {
                let x: f64 = field
                    .trim()
                    .parse()
                    .map_err(|_| SynthesisError::Csv(format!("row {}: bad number '{field}'", row + 1)))?;
                v[k] = T::lit(x);
            }
            nodes.push(SampleNode {
                s: v[0],
                position: PGVector { x: v[1], y: v[2], z: v[3] },
                t: PGVector { x: v[4], y: v[5], z: v[6] },
                n: PGVector { x: T::zero(), y: v[7], z: v[8] },
                b: PGVector { x: T::zero(), y: v[9], z: v[10] },
                kappa: v[11],
                tau: v[12],
            });
        }
        if nodes.len() < 2 {
            return Err(SynthesisError::Csv("need at least two nodes".into()));
        }
        let step = nodes[1].s - nodes[0].s;
        if !(step > T::zero()) {
            return Err(SynthesisError::Csv("node arc lengths must increase".into()));
        }
        for w in nodes.windows(2) {
            if ((w[1].s - w[0].s) - step).abs() > T::lit(1e-9) * step.max(T::one()) {
                return Err(SynthesisError::Csv(format!("non-uniform spacing at s = {}", w[1].s)));
            }
        }
        let diagnostics = diagnostics_of(&nodes);
        Ok(Self { nodes, step, intrinsics: None, diagnostics })
    }
}

/// Wraps a sampled curve as an arc-length curve for the Frenet machinery.
pub fn resample_as_curve<T: Real>(sc: &SampledCurve<T>) -> Result<ArcLengthCurve<T>, CurveError> {
    let (lo, hi) = sc.domain();
    ArcLengthCurve::from_repr(Repr::Sampled(Arc::new(sc.clone())), lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{curvature, frenet_frame, torsion, FrenetConfig};
    use crate::expr::parse_expr;

    fn spec(k: &str, t: &str, lo: f64, hi: f64, h: f64) -> IntrinsicSpec<f64> {
        IntrinsicSpec::new(parse_expr(k).unwrap(), parse_expr(t).unwrap(), lo, hi, h)
    }

    #[test]
    fn constant_intrinsics_match_closed_form() {
        let sc = synthesize(&spec("2", "3", 0.0, 1.0, 1e-3)).unwrap();
        assert_eq!(sc.nodes().len(), 1001);
        for nd in sc.nodes() {
            let s = nd.s;
            let (ch, sh) = ((3.0 * s).cosh(), (3.0 * s).sinh());
            let exact = PGVector::new(s, 2.0 / 9.0 * (ch - 1.0), 2.0 / 9.0 * sh - 2.0 / 3.0 * s);
            assert!((nd.position - exact).max_abs() < 1e-8 * ch, "s = {s}");
            assert!((nd.n - PGVector::new(0.0, ch, sh)).max_abs() < 1e-8 * ch);
        }
        let d = sc.diagnostics();
        assert!(d.x_drift < 1e-14, "{d:?}");
        assert_eq!(d.frame_x_drift, 0.0);
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(matches!(
            synthesize(&spec("1e-12", "1", 0.0, 1.0, 1e-2)),
            Err(SynthesisError::NonPositiveCurvature { index: 0, .. })
        ));
        assert!(matches!(
            synthesize(&spec("s - 0.5", "1", 0.0, 1.0, 1e-2)),
            Err(SynthesisError::NonPositiveCurvature { index: 0, .. })
        ));
        match synthesize(&spec("0.5 - s", "1", 0.0, 1.0, 1e-2)) {
            Err(SynthesisError::NonPositiveCurvature { index, .. }) => assert_eq!(index, 50),
            other => panic!("{other:?}"),
        }
        assert!(matches!(synthesize(&spec("1", "1", 0.0, 1.0, 0.1)), Err(SynthesisError::InvalidStep { .. })));
        assert!(matches!(synthesize(&spec("1", "1", 1.0, 0.0, 0.01)), Err(SynthesisError::InvalidDomain { .. })));
        let mut bad = spec("1", "1", 0.0, 1.0, 0.01);
        bad.initial_frame.e3 = -bad.initial_frame.e3;
        bad.initial_frame.eps = Sign::Minus;
        assert!(matches!(synthesize(&bad), Err(SynthesisError::InvalidInitialFrame(_))));
    }

    #[test]
    fn resampled_frame_matches_nodes() {
        let sc = synthesize(&spec("2", "3", 0.0, 1.0, 1e-3)).unwrap();
        let c = resample_as_curve(&sc).unwrap();
        let cfg = FrenetConfig::default();
        for nd in sc.nodes().iter().step_by(97) {
            let f = frenet_frame(&c, nd.s, &cfg).unwrap();
            assert!((f.t - nd.t).max_abs() < 1e-7);
            assert!((f.n - nd.n).max_abs() < 1e-7);
            assert!((f.b - nd.b).max_abs() < 1e-7);
        }
    }

    #[test]
    fn csv_round_trip_keeps_low_orders() {
        let sc = synthesize(&spec("s^2", "s", 0.5, 2.0, 1e-3)).unwrap();
        let mut buf = Vec::new();
        sc.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("s,x,y,z,Tx,Ty,Tz,Ny,Nz,By,Bz,kappa,tau\n"));
        let back = SampledCurve::<f64>::read_csv(buf.as_slice()).unwrap();
        assert_eq!(back.nodes(), sc.nodes());
        assert_eq!(back.max_order(), Some(3));
        let c = resample_as_curve(&back).unwrap();
        assert!(matches!(c.jets(1.0, 4), Err(CurveError::DerivativeUnavailable { .. })));
        let cfg = FrenetConfig::default();
        for s in [0.7, 1.0005, 1.61] {
            assert!((curvature(&c, s).unwrap() - s * s).abs() < 1e-6 * s * s);
            assert!((torsion(&c, s, &cfg).unwrap() - s).abs() < 1e-5 * s);
        }
    }
}
