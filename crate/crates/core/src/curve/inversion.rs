//! Safeguarded Newton iteration for inverting a monotone function.

use crate::scalar::Real;

pub const INVERSION_TOL: f64 = 1e-12;
pub const MAX_NEWTON_STEPS: usize = 50;

/// Solves `f(t) = target` for `t ∈ [lo, hi]`, where `f` is strictly monotone.
///
/// `f` returns `(value, derivative)`. Newton steps that leave the current
/// bracket or fail to halve the residual are replaced by bisection, so the
/// iteration converges whenever `target` lies between `f(lo)` and `f(hi)`.
/// Returns `None` when it does not.
pub fn invert_monotone<T, E, F>(mut f: F, target: T, lo: T, hi: T) -> Result<Option<T>, E>
where
    T: Real,
    F: FnMut(T) -> Result<(T, T), E>,
{
    let tol = T::lit(INVERSION_TOL);
    let (flo, _) = f(lo)?;
    let (fhi, _) = f(hi)?;
    let (glo, ghi) = (flo - target, fhi - target);
    if glo == T::zero() {
        return Ok(Some(lo));
    }
    if ghi == T::zero() {
        return Ok(Some(hi));
    }
    if glo.signum() == ghi.signum() {
        return Ok(None);
    }
    // keep `a` on the negative side of g = f − target
    let (mut a, mut b) = if glo < T::zero() { (lo, hi) } else { (hi, lo) };
    let half = T::lit(0.5);
    let mut t = a + (b - a) * half;
    let mut last_step = (b - a).abs();
    let mut newton_steps = 0;
    loop {
        let (ft, dft) = f(t)?;
        let g = ft - target;
        if g == T::zero() {
            return Ok(Some(t));
        }
        if g < T::zero() {
            a = t;
        } else {
            b = t;
        }
        let width = (b - a).abs();
        let scale = T::one().max(t.abs());
        let newton = if newton_steps < MAX_NEWTON_STEPS && dft != T::zero() {
            newton_steps += 1;
            let cand = t - g / dft;
            let inside = (cand - a) * (cand - b) < T::zero();
            let step = (cand - t).abs();
            if inside && step <= last_step * half {
                last_step = step;
                Some(cand)
            } else {
                None
            }
        } else {
            None
        };
        let next = match newton {
            Some(c) => c,
            None => {
                last_step = width * half;
                a + (b - a) * half
            }
        };
        let moved = (next - t).abs();
        t = next;
        if moved <= tol * scale || width <= tol * scale {
            return Ok(Some(t));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bisect(f: impl Fn(f64) -> f64, target: f64, mut lo: f64, mut hi: f64) -> f64 {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if (f(mid) - target) * (f(lo) - target) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn cubic_inversion_matches_bisection() {
        let f = |t: f64| t * t * t + t;
        for target in [-2.0, -0.3, 0.0, 0.7, 1.9, 10.0] {
            let t = invert_monotone::<f64, (), _>(|t| Ok((f(t), 3.0 * t * t + 1.0)), target, -3.0, 3.0)
                .unwrap()
                .unwrap();
            assert!((f(t) - target).abs() < 1e-10);
            assert!((t - bisect(f, target, -3.0, 3.0)).abs() < 1e-11);
        }
    }

    #[test]
    fn decreasing_and_out_of_range() {
        let r = invert_monotone::<f64, (), _>(|t| Ok((-2.0 * t, -2.0)), -1.0, 0.0, 1.0).unwrap();
        assert!((r.unwrap() - 0.5).abs() < 1e-14);
        let r = invert_monotone::<f64, (), _>(|t| Ok((t, 1.0)), 5.0, 0.0, 1.0).unwrap();
        assert!(r.is_none());
    }

    #[test]
    fn bad_derivative_still_converges() {
        // derivative lies by a factor of 100: Newton steps get rejected, bisection carries on
        let r = invert_monotone::<f64, (), _>(|t| Ok((t.powi(3), 100.0)), 0.5, 0.0, 2.0).unwrap().unwrap();
        assert!((r - 0.5f64.cbrt()).abs() < 1e-11);
    }
}
