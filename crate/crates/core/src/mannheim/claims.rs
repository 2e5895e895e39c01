//! Numerical audits of the Mannheim-pair identities.
//!
//! Each audit turns one identity into a residual series over the sample grid
//! and a verdict against an explicit threshold. Identities that fail on the
//! data are reported as failing; nodes where an identity has no meaning
//! (no partner frame, `|λτ| ≥ 1`) are reported as undefined.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{MannheimError, MannheimPair, NodeSample, PairSamples, PARTNER_CONDITION_TOL};
use crate::curve::{f64_of, Causal, FrenetConfig, FrenetData, Grid};
use crate::scalar::{relative_spread, Real};

/// Distance residual for the constant-distance claim.
pub const DISTANCE_TOL: f64 = 1e-9;
/// Default relative-spread threshold for constancy claims.
pub const CONSTANCY_TOL: f64 = 1e-6;
/// Pointwise identities between curvatures, torsions and `θ`.
pub const DERIVED_TOL: f64 = 1e-6;
pub const RECIPROCITY_TOL: f64 = 1e-8;
/// Maximal partner curvature for the partner to count as a straight line.
pub const STRAIGHT_LINE_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum ClaimId {
    #[serde(rename = "Thm3.1")]
    Thm31,
    #[serde(rename = "Thm3.2")]
    Thm32,
    #[serde(rename = "Eq3.9")]
    Eq39,
    Schell,
    #[serde(rename = "Thm3.4i")]
    Thm34i,
    #[serde(rename = "Thm3.4ii")]
    Thm34ii,
    #[serde(rename = "Thm3.4iii")]
    Thm34iii,
    #[serde(rename = "Result3.1")]
    Result31,
    #[serde(rename = "Result3.2")]
    Result32,
    Reciprocity,
    DerivedTorsionEquality,
    DerivedKappaStar,
}

impl ClaimId {
    pub fn as_str(self) -> &'static str {
        match self {
            ClaimId::Thm31 => "Thm3.1",
            ClaimId::Thm32 => "Thm3.2",
            ClaimId::Eq39 => "Eq3.9",
            ClaimId::Schell => "Schell",
            ClaimId::Thm34i => "Thm3.4i",
            ClaimId::Thm34ii => "Thm3.4ii",
            ClaimId::Thm34iii => "Thm3.4iii",
            ClaimId::Result31 => "Result3.1",
            ClaimId::Result32 => "Result3.2",
            ClaimId::Reciprocity => "Reciprocity",
            ClaimId::DerivedTorsionEquality => "DerivedTorsionEquality",
            ClaimId::DerivedKappaStar => "DerivedKappaStar",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
    Undefined,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    /// Largest absolute value of the series.
    MaxAbs,
    /// `(max − min)/max(1, |mean|)`.
    RelativeSpread,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClaimReport {
    pub id: ClaimId,
    /// What the series measures.
    pub definition: String,
    pub grid: Grid<f64>,
    pub series: Vec<Option<f64>>,
    pub statistic_kind: Statistic,
    pub statistic: Option<f64>,
    pub threshold: f64,
    pub verdict: Verdict,
    pub undefined_nodes: Vec<usize>,
    /// Supporting series, keyed by name.
    pub aux: BTreeMap<String, Vec<Option<f64>>>,
    pub parameters: BTreeMap<String, f64>,
    pub notes: Vec<String>,
}

impl ClaimReport {
    fn new<T: Real>(
        id: ClaimId,
        definition: &str,
        grid: &Grid<T>,
        series: Vec<Option<T>>,
        kind: Statistic,
        threshold: f64,
    ) -> Self {
        let defined: Vec<T> = series.iter().flatten().copied().collect();
        let statistic = if defined.is_empty() {
            None
        } else {
            let v = match kind {
                Statistic::MaxAbs => defined.iter().fold(T::zero(), |m, v| {
                    if v.is_nan() {
                        T::nan()
                    } else {
                        m.max(v.abs())
                    }
                }),
                Statistic::RelativeSpread => relative_spread(&defined).unwrap_or_else(T::infinity),
            };
            Some(f64_of(v))
        };
        let verdict = match statistic {
            None => Verdict::Undefined,
            Some(v) if v < threshold => Verdict::Holds,
            Some(_) => Verdict::Fails,
        };
        Self {
            id,
            definition: definition.to_string(),
            grid: grid_f64(grid),
            undefined_nodes: series.iter().enumerate().filter(|(_, v)| v.is_none()).map(|(i, _)| i).collect(),
            series: to_f64(&series),
            statistic_kind: kind,
            statistic,
            threshold,
            verdict,
            aux: BTreeMap::new(),
            parameters: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    fn aux<T: Real>(mut self, name: &str, series: &[Option<T>]) -> Self {
        self.aux.insert(name.to_string(), to_f64(series));
        self
    }

    fn param<T: Real>(mut self, name: &str, v: T) -> Self {
        self.parameters.insert(name.to_string(), f64_of(v));
        self
    }

    fn note(mut self, text: &str) -> Self {
        self.notes.push(text.to_string());
        self
    }
}

fn grid_f64<T: Real>(g: &Grid<T>) -> Grid<f64> {
    Grid { lo: f64_of(g.lo), hi: f64_of(g.hi), n: g.n }
}

fn to_f64<T: Real>(series: &[Option<T>]) -> Vec<Option<f64>> {
    series.iter().map(|v| v.map(f64_of)).collect()
}

fn per_node<T: Real>(samples: &PairSamples<T>, f: impl Fn(&NodeSample<T>) -> Option<T>) -> Vec<Option<T>> {
    samples.nodes.iter().map(f).collect()
}

fn theta_series<T: Real>(samples: &PairSamples<T>) -> Vec<Option<T>> {
    per_node(samples, |nd| nd.theta.defined.then_some(nd.theta.theta))
}

const THETA_NOTE: &str = "theta is defined by tanh(theta) = lambda*tau; nodes with |lambda*tau| >= 1 are undefined";

/// Distance between corresponding points equals `|λ|`.
pub fn theorem_lambda_constant<T: Real>(samples: &PairSamples<T>) -> ClaimReport {
    let lam = samples.lambda.abs();
    let series = per_node(samples, |nd| Some(((nd.partner_point - nd.base.point).norm() - lam).abs()));
    ClaimReport::new(
        ClaimId::Thm31,
        "|pg_norm(partner(s) - base(s)) - |lambda||",
        &samples.grid,
        series,
        Statistic::MaxAbs,
        DISTANCE_TOL,
    )
    .param("lambda", samples.lambda)
}

/// Constancy of the base torsion.
pub fn theorem_torsion_constant<T: Real>(samples: &PairSamples<T>, tol: T) -> ClaimReport {
    let series = per_node(samples, |nd| Some(nd.base.tau));
    ClaimReport::new(ClaimId::Thm32, "tau_base(s)", &samples.grid, series, Statistic::RelativeSpread, f64_of(tol))
        .aux("theta", &theta_series(samples))
        .aux("u", &per_node(samples, |nd| nd.theta.defined.then_some(nd.theta.u)))
        .note(THETA_NOTE)
}

/// `τ = 1/u` with `u = λ·coth θ`. Holds by construction of `θ` wherever `u` is finite.
pub fn eq39_check<T: Real>(samples: &PairSamples<T>) -> ClaimReport {
    let series = per_node(samples, |nd| {
        (nd.theta.defined && nd.theta.u.is_finite()).then(|| (nd.base.tau - T::one() / nd.theta.u).abs())
    });
    ClaimReport::new(ClaimId::Eq39, "|tau_base(s) - 1/u(s)|", &samples.grid, series, Statistic::MaxAbs, DERIVED_TOL)
        .note(THETA_NOTE)
}

/// Constancy of `τ·τ*`, with the `tanh²θ/λ²` comparison series and the `τ* = tanh θ/λ` residual.
pub fn schell_check<T: Real>(samples: &PairSamples<T>, tol: T) -> ClaimReport {
    let lam = samples.lambda;
    let series = per_node(samples, |nd| nd.partner.as_ref().map(|p| nd.base.tau * p.tau));
    let lam_ok = lam != T::zero();
    let tanh2 = per_node(samples, |nd| {
        (nd.theta.defined && lam_ok).then(|| {
            let t = nd.theta.theta.tanh();
            t * t / (lam * lam)
        })
    });
    let eq311 = per_node(samples, |nd| match &nd.partner {
        Some(p) if nd.theta.defined && lam_ok => Some((p.tau - nd.theta.theta.tanh() / lam).abs()),
        _ => None,
    });
    ClaimReport::new(
        ClaimId::Schell,
        "tau_base(s) * tau_partner(s)",
        &samples.grid,
        series,
        Statistic::RelativeSpread,
        f64_of(tol),
    )
    .aux("tanh2_theta_over_lambda2", &tanh2)
    .aux("eq3.11_residual", &eq311)
    .note("nodes where the partner has no Frenet frame are undefined")
    .note(THETA_NOTE)
}

/// Central differences of `θ` on the grid, one-sided at the ends.
fn dtheta_ds<T: Real>(samples: &PairSamples<T>) -> Vec<Option<T>> {
    let th = theta_series(samples);
    let n = th.len();
    let h = (samples.grid.hi - samples.grid.lo) / T::from_usize_lossy(n - 1);
    let two_h = h + h;
    let (three, four) = (T::lit(3.0), T::lit(4.0));
    (0..n)
        .map(|i| {
            if i == 0 {
                Some((-three * th[0]? + four * th[1]? - th.get(2).copied().flatten()?) / two_h)
            } else if i == n - 1 {
                Some((three * th[i]? - four * th[i - 1]? + th.get(i.wrapping_sub(2)).copied().flatten()?) / two_h)
            } else {
                Some((th[i + 1]? - th[i - 1]?) / two_h)
            }
        })
        .collect()
}

/// The three curvature/torsion relations between base and partner through `θ`.
pub fn theorem34_check<T: Real>(samples: &PairSamples<T>) -> [ClaimReport; 3] {
    let dth = dtheta_ds(samples);
    let theta = theta_series(samples);
    let probe = per_node(samples, |nd| Some(nd.base.t.dot(&nd.partner_tangent)));
    let first: Vec<Option<T>> =
        samples.nodes.iter().zip(&dth).map(|(nd, d)| d.map(|d| (nd.partner_kappa + d).abs())).collect();
    let with_partner = |f: fn(&FrenetData<T>, &FrenetData<T>, T) -> T| {
        per_node(samples, |nd| match &nd.partner {
            Some(p) if nd.theta.defined => Some(f(&nd.base, p, nd.theta.theta)),
            _ => None,
        })
    };
    let second = with_partner(|b, p, th| (b.kappa - p.tau * th.sinh()).abs());
    let third = with_partner(|b, p, th| (b.tau + p.tau * th.cosh()).abs());
    let ds_note = "ds*/ds = 1: the partner's first coordinate is the base arc length";
    [
        ClaimReport::new(
            ClaimId::Thm34i,
            "|kappa_partner(s) + dtheta/ds(s)|",
            &samples.grid,
            first,
            Statistic::MaxAbs,
            DERIVED_TOL,
        )
        .aux("theta", &theta)
        .aux("dtheta_ds", &dth)
        .aux("eq3.13_probe", &probe)
        .note(THETA_NOTE)
        .note("dtheta/ds by central differences on the grid")
        .note("eq3.13_probe is pg_dot(T_base, T_partner), reported verbatim")
        .note(ds_note),
        ClaimReport::new(
            ClaimId::Thm34ii,
            "|kappa_base(s) - tau_partner(s) * sinh(theta(s))|",
            &samples.grid,
            second,
            Statistic::MaxAbs,
            DERIVED_TOL,
        )
        .aux("theta", &theta)
        .note(THETA_NOTE)
        .note(ds_note),
        ClaimReport::new(
            ClaimId::Thm34iii,
            "|tau_base(s) + tau_partner(s) * cosh(theta(s))|",
            &samples.grid,
            third,
            Statistic::MaxAbs,
            DERIVED_TOL,
        )
        .aux("theta", &theta)
        .note(THETA_NOTE)
        .note(ds_note),
    ]
}

/// `κ* = |λτ′|` and `τ* = τ`, checked against the partner's own jet-formula invariants.
///
/// Only meaningful for genuine pairs: fails with `NotGenuinePair` when the
/// partner frame is missing or the partner condition is violated anywhere.
pub fn derived_invariants_check<T: Real>(samples: &PairSamples<T>) -> Result<[ClaimReport; 2], MannheimError> {
    for (nd, r) in samples.nodes.iter().zip(samples.partner_condition()) {
        match r {
            None => {
                return Err(MannheimError::NotGenuinePair(format!("partner has no Frenet frame at s = {}", nd.s)))
            }
            Some(r) if !(r < T::lit(PARTNER_CONDITION_TOL)) => {
                return Err(MannheimError::NotGenuinePair(format!(
                    "partner condition residual {r:e} at s = {}",
                    nd.s
                )))
            }
            Some(_) => {}
        }
    }
    let lam = samples.lambda;
    let kappa = per_node(samples, |nd| nd.partner.as_ref().map(|p| (p.kappa - (lam * nd.tau_prime).abs()).abs()));
    let tau = per_node(samples, |nd| nd.partner.as_ref().map(|p| (p.tau - nd.base.tau).abs()));
    let expected = per_node(samples, |nd| Some((lam * nd.tau_prime).abs()));
    Ok([
        ClaimReport::new(
            ClaimId::DerivedKappaStar,
            "|kappa_partner(s) - |lambda * tau_base'(s)||",
            &samples.grid,
            kappa,
            Statistic::MaxAbs,
            DERIVED_TOL,
        )
        .aux("lambda_tau_prime_abs", &expected),
        ClaimReport::new(
            ClaimId::DerivedTorsionEquality,
            "|tau_partner(s) - tau_base(s)|",
            &samples.grid,
            tau,
            Statistic::MaxAbs,
            DERIVED_TOL,
        ),
    ])
}

/// `α = α* − λσB*` with one global sign `σ` chosen to minimise the residual.
///
/// The residual is the largest coordinate of the difference. Its
/// pseudo-Galilean norm is also reported, but that norm vanishes on every
/// lightlike vector and cannot certify the identity on its own.
pub fn reciprocity_check<T: Real>(samples: &PairSamples<T>) -> ClaimReport {
    let lam = samples.lambda;
    let diff = |nd: &NodeSample<T>, p: &FrenetData<T>, sigma: T| nd.base.point - (nd.partner_point - p.b * (lam * sigma));
    let series_for = |sigma: T| per_node(samples, |nd| nd.partner.as_ref().map(|p| diff(nd, p, sigma).max_abs()));
    let worst = |v: &[Option<T>]| v.iter().flatten().fold(T::zero(), |m, x| m.max(*x));
    let plus = series_for(T::one());
    let minus = series_for(-T::one());
    let (sigma, series) = if worst(&minus) < worst(&plus) { (-T::one(), minus) } else { (T::one(), plus) };
    let pg = per_node(samples, |nd| nd.partner.as_ref().map(|p| diff(nd, p, sigma).norm()));
    ClaimReport::new(
        ClaimId::Reciprocity,
        "max_abs(base(s) - (partner(s) - lambda * sigma * B_partner(s)))",
        &samples.grid,
        series,
        Statistic::MaxAbs,
        RECIPROCITY_TOL,
    )
    .aux("pg_norm", &pg)
    .param("sigma", sigma)
    .note("sigma is a single global sign absorbing the orientation of B_partner")
}

/// Helix test on the base and, for helices, straightness of the partner.
pub fn helix_results_check<T: Real>(samples: &PairSamples<T>, tol: T) -> [ClaimReport; 2] {
    let ratios = per_node(samples, |nd| Some(nd.base.kappa / nd.base.tau));
    let theta = theta_series(samples);
    let theta_defined: Vec<T> = theta.iter().flatten().copied().collect();
    let helix = ClaimReport::new(
        ClaimId::Result31,
        "kappa_base(s) / tau_base(s)",
        &samples.grid,
        ratios.clone(),
        Statistic::RelativeSpread,
        f64_of(tol),
    )
    .aux("theta", &theta)
    .note("verdict holds iff the base is a general helix (constant kappa/tau)")
    .note(THETA_NOTE);
    let helix = match relative_spread(&theta_defined) {
        Some(sp) if theta_defined.len() == theta.len() => helix.param("theta_spread", sp),
        _ => helix.note("theta is not defined on every node"),
    };
    let is_helix = helix.verdict == Verdict::Holds;
    let kappa_star = per_node(samples, |nd| Some(nd.partner_kappa));
    let straight = if is_helix {
        ClaimReport::new(
            ClaimId::Result32,
            "kappa_partner(s)",
            &samples.grid,
            kappa_star,
            Statistic::MaxAbs,
            STRAIGHT_LINE_TOL,
        )
        .note("verdict holds iff the partner is a straight line")
    } else {
        let mut r = ClaimReport::new(
            ClaimId::Result32,
            "kappa_partner(s)",
            &samples.grid,
            kappa_star,
            Statistic::MaxAbs,
            STRAIGHT_LINE_TOL,
        )
        .aux("kappa_over_tau", &ratios)
        .note("base is not a general helix; the premise does not apply");
        if let Some(sp) = helix.statistic {
            r.parameters.insert("kappa_over_tau_spread".into(), sp);
        }
        r.verdict = Verdict::Undefined;
        r
    };
    [helix, straight]
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CausalSummary {
    /// `timelike`, `spacelike`, `mixed` or `undefined`.
    pub character: String,
    pub timelike: usize,
    pub spacelike: usize,
    pub undefined: usize,
}

impl CausalSummary {
    fn of(it: impl Iterator<Item = Option<Causal>>) -> Self {
        let (mut t, mut s, mut u) = (0, 0, 0);
        for c in it {
            match c {
                Some(Causal::Timelike) => t += 1,
                Some(Causal::Spacelike) => s += 1,
                None => u += 1,
            }
        }
        let character = match (t, s) {
            (0, 0) => "undefined",
            (_, 0) if u == 0 => "timelike",
            (0, _) if u == 0 => "spacelike",
            _ => "mixed",
        };
        Self { character: character.to_string(), timelike: t, spacelike: s, undefined: u }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PartnerConditionSummary {
    pub definition: String,
    pub series: Vec<Option<f64>>,
    pub max: Option<f64>,
    pub threshold: f64,
    pub genuine: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditReport {
    pub curve: String,
    pub lambda: f64,
    pub grid: Grid<f64>,
    pub s: Vec<f64>,
    pub base_causal: CausalSummary,
    pub partner_causal: CausalSummary,
    pub partner_condition: PartnerConditionSummary,
    /// `max |x*(s) − s|`
    pub partner_x_drift: f64,
    pub claims: Vec<ClaimReport>,
}

impl AuditReport {
    pub fn claim(&self, id: ClaimId) -> Option<&ClaimReport> {
        self.claims.iter().find(|c| c.id == id)
    }
}

/// Runs every claim audit on a pair. `tol` is the constancy threshold.
pub fn audit<T: Real>(
    pair: &MannheimPair<T>,
    curve: &str,
    grid: &Grid<T>,
    tol: T,
    cfg: &FrenetConfig<T>,
) -> Result<AuditReport, MannheimError> {
    let samples = PairSamples::collect(pair, grid, cfg)?;
    let pc = samples.partner_condition();
    let pc_max = pc.iter().try_fold(T::zero(), |m, v| v.map(|v| m.max(v)));
    let mut claims = vec![
        theorem_lambda_constant(&samples),
        theorem_torsion_constant(&samples, tol),
        eq39_check(&samples),
        schell_check(&samples, tol),
    ];
    claims.extend(theorem34_check(&samples));
    claims.extend(helix_results_check(&samples, tol));
    claims.push(reciprocity_check(&samples));
    match derived_invariants_check(&samples) {
        Ok(r) => claims.extend(r),
        Err(e) => {
            for (id, def) in [
                (ClaimId::DerivedKappaStar, "|kappa_partner(s) - |lambda * tau_base'(s)||"),
                (ClaimId::DerivedTorsionEquality, "|tau_partner(s) - tau_base(s)|"),
            ] {
                let none: Vec<Option<T>> = vec![None; samples.nodes.len()];
                claims.push(
                    ClaimReport::new(id, def, grid, none, Statistic::MaxAbs, DERIVED_TOL)
                        .note(&format!("not evaluated: {e}")),
                );
            }
        }
    }
    Ok(AuditReport {
        curve: curve.to_string(),
        lambda: f64_of(pair.lambda()),
        grid: grid_f64(grid),
        s: samples.nodes.iter().map(|nd| f64_of(nd.s)).collect(),
        base_causal: CausalSummary::of(samples.nodes.iter().map(|nd| Some(nd.base.causal))),
        partner_causal: CausalSummary::of(samples.nodes.iter().map(|nd| nd.partner.as_ref().map(|p| p.causal))),
        partner_condition: PartnerConditionSummary {
            definition: "|N_base.y * B_partner.z - N_base.z * B_partner.y|".into(),
            series: to_f64(&pc),
            max: pc_max.map(f64_of),
            threshold: PARTNER_CONDITION_TOL,
            genuine: pc_max.is_some_and(|m| m < T::lit(PARTNER_CONDITION_TOL)),
        },
        partner_x_drift: samples
            .nodes
            .iter()
            .fold(0.0, |m, nd| m.max(f64_of((nd.partner_point.x - nd.s).abs()))),
        claims,
    })
}
