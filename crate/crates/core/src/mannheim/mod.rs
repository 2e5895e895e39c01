//! Mannheim offsets `α* = α + λN_α` and their detection.
//!
//! Expanding `α*″` with the Frenet formulas gives
//! `α*″ = (κ + λτ²)·N + λτ′·B`, so the binormal of the offset is parallel to
//! the principal normal of the base exactly when `κ + λτ² = 0`. A curve
//! therefore has a Mannheim partner at constant distance `λ` iff `−κ/τ²` is
//! constant along it. For such pairs `κ* = |λτ′|` and `τ* = τ`; when `τ′ = 0`
//! (a general helix) the partner degenerates to a straight line.

mod claims;

pub use claims::{
    audit, derived_invariants_check, eq39_check, helix_results_check, reciprocity_check, schell_check,
    theorem34_check, theorem_lambda_constant, theorem_torsion_constant, AuditReport, CausalSummary, ClaimId,
    ClaimReport, PartnerConditionSummary, Statistic, Verdict, CONSTANCY_TOL, DERIVED_TOL, DISTANCE_TOL, RECIPROCITY_TOL,
    STRAIGHT_LINE_TOL,
};

use serde::Serialize;
use thiserror::Error;

use crate::algebra::PGVector;
use crate::curve::{
    curvature, f64_of, frenet_frame, intrinsic_jets, ArcLengthCurve, CurveError, FrenetConfig, FrenetData, Grid,
};
use crate::scalar::{mean, relative_spread, Real};

/// `|τ|` below this on any node makes `−κ/τ²` meaningless.
pub const MIN_TORSION: f64 = 1e-9;
/// Partner-parallelism residual accepted for a genuine pair.
pub const PARTNER_CONDITION_TOL: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MannheimError {
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error("offset distance must be finite, got {0}")]
    InvalidLambda(f64),
    #[error("torsion {tau} at s = {s} is too small to detect a Mannheim partner")]
    TorsionTooSmall { s: f64, tau: f64 },
    #[error("not a genuine Mannheim pair: {0}")]
    NotGenuinePair(String),
}

#[derive(Clone, Debug)]
pub struct MannheimPair<T> {
    base: ArcLengthCurve<T>,
    lambda: T,
    partner: ArcLengthCurve<T>,
}

/// Builds `α* = α + λN_α` after checking that the base frame exists on `grid`.
///
/// The partner is evaluated from the base's jets, so its first coordinate is
/// the base's `s` and the correspondence `s ↦ s*` is the identity.
pub fn mannheim_offset<T: Real>(
    base: &ArcLengthCurve<T>,
    lambda: T,
    grid: &Grid<T>,
    cfg: &FrenetConfig<T>,
) -> Result<MannheimPair<T>, MannheimError> {
    if !lambda.is_finite() {
        return Err(MannheimError::InvalidLambda(f64_of(lambda)));
    }
    for s in grid.points() {
        frenet_frame(base, s, cfg)?;
    }
    let partner = base.offset(lambda, cfg.kappa_min);
    Ok(MannheimPair { base: base.clone(), lambda, partner })
}

impl<T: Real> MannheimPair<T> {
    /// Pairs an arbitrary partner with a base, bypassing the offset
    /// construction. Useful for auditing hand-made or perturbed partners.
    pub fn from_parts(base: ArcLengthCurve<T>, lambda: T, partner: ArcLengthCurve<T>) -> Self {
        Self { base, lambda, partner }
    }

    pub fn base(&self) -> &ArcLengthCurve<T> {
        &self.base
    }

    pub fn lambda(&self) -> T {
        self.lambda
    }

    pub fn partner(&self) -> &ArcLengthCurve<T> {
        &self.partner
    }
}

/// `|N.y·B*.z − N.z·B*.y|`: zero iff the base normal and partner binormal are parallel.
pub fn check_partner_condition<T: Real>(pair: &MannheimPair<T>, s: T, cfg: &FrenetConfig<T>) -> Result<T, MannheimError> {
    let base = frenet_frame(&pair.base, s, cfg)?;
    let partner = frenet_frame(&pair.partner, s, cfg)?;
    Ok(parallel_residual(&base.n, &partner.b))
}

fn parallel_residual<T: Real>(n: &PGVector<T>, b: &PGVector<T>) -> T {
    (n.y * b.z - n.z * b.y).abs()
}

/// `λ(s) = −κ/τ²` sampled on a grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LambdaSeries<T> {
    pub s: Vec<T>,
    pub lambda: Vec<T>,
    pub tau_prime: Vec<T>,
    pub mean: T,
    pub spread: T,
}

pub fn lambda_series<T: Real>(
    base: &ArcLengthCurve<T>,
    grid: &Grid<T>,
    cfg: &FrenetConfig<T>,
) -> Result<LambdaSeries<T>, MannheimError> {
    let s = grid.points();
    let mut lambda = Vec::with_capacity(s.len());
    let mut tau_prime = Vec::with_capacity(s.len());
    for &si in &s {
        let (kj, tj) = intrinsic_jets(base, si, 1, cfg)?;
        let tau = tj.value();
        if tau.abs() < T::lit(MIN_TORSION) {
            return Err(MannheimError::TorsionTooSmall { s: f64_of(si), tau: f64_of(tau) });
        }
        lambda.push(-kj.value() / (tau * tau));
        tau_prime.push(tj.derivative(1));
    }
    let mean = mean(&lambda).unwrap_or_else(T::nan);
    let spread = relative_spread(&lambda).unwrap_or_else(T::infinity);
    Ok(LambdaSeries { s, lambda, tau_prime, mean, spread })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Detection<T> {
    pub lambda: T,
    /// `|τ′| < tol` on every node: the partner is a straight line.
    pub degenerate: bool,
    pub spread: T,
}

/// Returns the constant `λ = −κ/τ²` when its relative spread over the grid is below `tol`.
pub fn is_mannheim_curve<T: Real>(
    base: &ArcLengthCurve<T>,
    grid: &Grid<T>,
    tol: T,
    cfg: &FrenetConfig<T>,
) -> Result<Option<Detection<T>>, MannheimError> {
    let ls = lambda_series(base, grid, cfg)?;
    if !(ls.spread < tol) {
        return Ok(None);
    }
    let degenerate = ls.tau_prime.iter().all(|tp| tp.abs() < tol);
    Ok(Some(Detection { lambda: ls.mean, degenerate, spread: ls.spread }))
}

/// Hyperbolic angle defined by `tanh θ = λτ`, with `u = λ·coth θ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ThetaData<T> {
    pub theta: T,
    pub u: T,
    pub defined: bool,
}

pub fn theta_from<T: Real>(lambda: T, tau: T) -> ThetaData<T> {
    let p = lambda * tau;
    if !(p.abs() < T::one()) {
        return ThetaData { theta: T::nan(), u: T::nan(), defined: false };
    }
    let theta = p.atanh();
    let u = if theta == T::zero() { T::infinity() } else { lambda / theta.tanh() };
    ThetaData { theta, u, defined: true }
}

pub fn compute_theta<T: Real>(pair: &MannheimPair<T>, s: T, cfg: &FrenetConfig<T>) -> Result<ThetaData<T>, MannheimError> {
    let f = frenet_frame(&pair.base, s, cfg)?;
    Ok(theta_from(pair.lambda, f.tau))
}

/// Everything the claim audits need at one grid node.
#[derive(Clone, Debug)]
pub struct NodeSample<T> {
    pub s: T,
    pub base: FrenetData<T>,
    pub tau_prime: T,
    pub partner_point: PGVector<T>,
    pub partner_tangent: PGVector<T>,
    pub partner_kappa: T,
    /// `None` where the partner has no trihedron (straight or lightlike pieces).
    pub partner: Option<FrenetData<T>>,
    pub theta: ThetaData<T>,
}

/// Base and partner sampled once on a grid; shared by all claim audits.
#[derive(Clone, Debug)]
pub struct PairSamples<T> {
    pub lambda: T,
    pub grid: Grid<T>,
    pub nodes: Vec<NodeSample<T>>,
    pub config: FrenetConfig<T>,
}

impl<T: Real> PairSamples<T> {
    pub fn collect(pair: &MannheimPair<T>, grid: &Grid<T>, cfg: &FrenetConfig<T>) -> Result<Self, MannheimError> {
        let mut nodes = Vec::with_capacity(grid.n);
        for s in grid.points() {
            let base = frenet_frame(&pair.base, s, cfg)?;
            let (_, tj) = intrinsic_jets(&pair.base, s, 1, cfg)?;
            let partner = match frenet_frame(&pair.partner, s, cfg) {
                Ok(f) => Some(f),
                Err(CurveError::FrameUndefined { .. } | CurveError::LightlikeAcceleration { .. }) => None,
                Err(e) => return Err(e.into()),
            };
            let [px, py, pz] = pair.partner.jets(s, 1)?;
            nodes.push(NodeSample {
                s,
                tau_prime: tj.derivative(1),
                partner_point: PGVector { x: px.value(), y: py.value(), z: pz.value() },
                partner_tangent: PGVector { x: px.derivative(1), y: py.derivative(1), z: pz.derivative(1) },
                partner_kappa: curvature(&pair.partner, s)?,
                partner,
                theta: theta_from(pair.lambda, base.tau),
                base,
            });
        }
        Ok(Self { lambda: pair.lambda, grid: *grid, nodes, config: *cfg })
    }

    /// Partner-parallelism residual per node, `None` where the partner frame is undefined.
    pub fn partner_condition(&self) -> Vec<Option<T>> {
        self.nodes.iter().map(|nd| nd.partner.as_ref().map(|p| parallel_residual(&nd.base.n, &p.b))).collect()
    }
}
