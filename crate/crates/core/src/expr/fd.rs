//! Central finite differences with one Richardson step.
//!
//! Independent of the jet engine: only plain point evaluations are used.
//! Intended as a verification oracle in tests.

use super::{EvalError, Expr};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FdEstimate<T> {
    pub value: T,
    /// False when an `abs` argument touches or changes sign across the stencil.
    pub smooth: bool,
}

/// Second-order central stencil for the `k`-th derivative: `(offset, weight)` pairs
/// and the power of `h` in the denominator.
fn stencil(k: usize) -> (&'static [(i32, f64)], i32) {
    match k {
        1 => (&[(1, 0.5), (-1, -0.5)], 1),
        2 => (&[(1, 1.0), (0, -2.0), (-1, 1.0)], 2),
        3 => (&[(2, 0.5), (1, -1.0), (-1, 1.0), (-2, -0.5)], 3),
        4 => (&[(2, 1.0), (1, -4.0), (0, 6.0), (-1, -4.0), (-2, 1.0)], 4),
        5 => (&[(3, 0.5), (2, -2.0), (1, 2.5), (-1, -2.5), (-2, 2.0), (-3, -0.5)], 5),
        _ => unreachable!(),
    }
}

fn central<T: Real>(e: &Expr, t0: T, k: usize, h: T) -> Result<T, EvalError> {
    let (points, p) = stencil(k);
    let mut acc = T::zero();
    for &(off, w) in points {
        let t = t0 + T::lit(off as f64) * h;
        acc = acc + T::lit(w) * e.value(t)?;
    }
    Ok(acc / h.powi(p))
}

/// Estimates `f⁽ᵏ⁾(t0)` for `1 ≤ k ≤ 5`: `(4·D(h/2) − D(h)) / 3`.
pub fn fd_oracle<T: Real>(e: &Expr, t0: T, k: usize, h: T) -> Result<FdEstimate<T>, EvalError> {
    if !(1..=5).contains(&k) {
        return Err(EvalError::InvalidFdOrder(k));
    }
    if h <= T::zero() || !h.is_finite() {
        return Err(EvalError::InvalidStep);
    }
    let coarse = central(e, t0, k, h)?;
    let fine = central(e, t0, k, h / T::lit(2.0))?;
    let value = (T::lit(4.0) * fine - coarse) / T::lit(3.0);

    let reach = T::lit(k.div_ceil(2) as f64) * h;
    let mut smooth = true;
    for arg in e.abs_arguments() {
        let (lo, mid, hi) = (arg.value(t0 - reach)?, arg.value(t0)?, arg.value(t0 + reach)?);
        let signs = [lo, mid, hi].map(|v| v.signum());
        if [lo, mid, hi].iter().any(|v| *v == T::zero()) || signs[0] != signs[1] || signs[1] != signs[2] {
            smooth = false;
        }
    }
    Ok(FdEstimate { value, smooth })
}
