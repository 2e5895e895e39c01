//! Numerical laboratory for curves in pseudo-Galilean 3-space.
//!
//! The numeric core is generic over the scalar type ([`Real`], implemented
//! for `f32` and `f64`). The aliases at the crate root fix it to `f64`.

// Comparisons are written as `!(x > y)` on purpose so that NaN falls on the rejecting side.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod curve;
pub mod expr;
pub mod files;
pub mod jet;
pub mod mannheim;
pub mod scalar;
pub mod synthesis;

pub use algebra::{Kind, PGMotion, PGVector, Sign, Trihedron, TrihedronCheck, VectorClass};
pub use curve::{
    curvature, frenet_frame, frenet_residual, is_general_helix, to_arclength, torsion, AdmissibleCurve,
    ArcLengthCurve, Causal, CurveError, FrenetConfig, FrenetData, Grid, TorsionConvention,
};
pub use expr::{eval_jet, fd_oracle, parse_expr, EvalError, Expr, FdEstimate, Func, ParseError};
pub use jet::Jet;
pub use mannheim::{
    audit, is_mannheim_curve, mannheim_offset, AuditReport, ClaimId, ClaimReport, MannheimError, MannheimPair,
    Verdict,
};
pub use scalar::Real;
pub use synthesis::{resample_as_curve, synthesize, IntrinsicSpec, SampledCurve, SynthesisError};

pub type Vector = PGVector<f64>;
pub type Motion = PGMotion<f64>;
pub type Frame = Trihedron<f64>;
pub type Curve = AdmissibleCurve<f64>;
pub type ArcCurve = ArcLengthCurve<f64>;
pub type Pair = MannheimPair<f64>;
pub type Sampled = SampledCurve<f64>;
