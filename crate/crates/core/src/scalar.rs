use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating-point scalar used throughout the crate: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + LowerExp + Default + Send + Sync + 'static
{
    /// Converts an `f64` constant (tolerances, literals) into the scalar type.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal representable in scalar type")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("integer representable in scalar type")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Relative spread `(max - min) / max(1, |mean|)` of a finite sample.
///
/// Returns `None` for an empty sample.
pub fn relative_spread<T: Real>(values: &[T]) -> Option<T> {
    if values.is_empty() {
        return None;
    }
    let (mut lo, mut hi, mut sum) = (values[0], values[0], T::zero());
    for &v in values {
        lo = lo.min(v);
        hi = hi.max(v);
        sum = sum + v;
    }
    let mean = sum / T::from_usize_lossy(values.len());
    Some((hi - lo) / T::one().max(mean.abs()))
}

/// Arithmetic mean; `None` for an empty slice.
pub fn mean<T: Real>(values: &[T]) -> Option<T> {
    if values.is_empty() {
        None
    } else {
        let sum = values.iter().fold(T::zero(), |acc, &v| acc + v);
        Some(sum / T::from_usize_lossy(values.len()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spread_uses_unit_floor() {
        assert!((relative_spread(&[0.1_f64, 0.3]).unwrap() - 0.2).abs() < 1e-15);
        let s = relative_spread(&[0.5_f64, 2.0]).unwrap();
        assert!((s - 1.5 / 1.25).abs() < 1e-15);
        assert_eq!(relative_spread::<f32>(&[]), None);
    }

    #[test]
    fn literal_conversion() {
        assert_eq!(f32::lit(0.5), 0.5_f32);
        assert_eq!(mean(&[1.0_f64, 2.0, 3.0]), Some(2.0));
    }
}
