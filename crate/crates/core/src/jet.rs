//! Truncated Taylor arithmetic.
//!
//! A [`Jet`] of order `K` holds the value and the first `K` derivatives of a
//! scalar function at a point, `coeffs[k] = f⁽ᵏ⁾(t0)`. Elementary functions
//! are propagated with the usual Leibniz-type recurrences, so every operation
//! costs `O(K²)` and is exact for polynomials of degree `≤ K`.

use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq)]
pub struct Jet<T> {
    coeffs: Vec<T>,
}

/// Row `n` of Pascal's triangle.
fn binomial_row<T: Real>(n: usize) -> Vec<T> {
    let mut row = vec![T::one(); n + 1];
    for k in 1..n {
        // C(n, k) = C(n, k−1)·(n−k+1)/k, exact for the small orders used here
        row[k] = row[k - 1] * T::from_usize_lossy(n - k + 1) / T::from_usize_lossy(k);
    }
    row
}

fn factorials<T: Real>(n: usize) -> Vec<T> {
    let mut f = vec![T::one(); n + 1];
    for k in 1..=n {
        f[k] = f[k - 1] * T::from_usize_lossy(k);
    }
    f
}

impl<T: Real> Jet<T> {
    /// Builds a jet from derivative values `[f, f′, f″, …]`.
    ///
    /// # Panics
    /// Panics on an empty slice.
    pub fn from_derivatives(coeffs: Vec<T>) -> Self {
        assert!(!coeffs.is_empty(), "a jet needs at least its value");
        Self { coeffs }
    }

    pub fn constant(value: T, order: usize) -> Self {
        let mut coeffs = vec![T::zero(); order + 1];
        coeffs[0] = value;
        Self { coeffs }
    }

    /// The identity function `t ↦ t` expanded at `t0`.
    pub fn variable(t0: T, order: usize) -> Self {
        let mut j = Self::constant(t0, order);
        if order >= 1 {
            j.coeffs[1] = T::one();
        }
        j
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn value(&self) -> T {
        self.coeffs[0]
    }

    /// `k`-th derivative; zero beyond the truncation order is *not* implied, so this panics there.
    pub fn derivative(&self, k: usize) -> T {
        self.coeffs[k]
    }

    pub fn derivatives(&self) -> &[T] {
        &self.coeffs
    }

    /// Jet of `f′`, one order lower.
    pub fn differentiate(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::constant(T::zero(), 0);
        }
        Self { coeffs: self.coeffs[1..].to_vec() }
    }

    pub fn truncate(&self, order: usize) -> Self {
        let n = (order + 1).min(self.coeffs.len());
        Self { coeffs: self.coeffs[..n].to_vec() }
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    /// Taylor coefficients `f⁽ᵏ⁾/k!`.
    pub fn to_taylor(&self) -> Vec<T> {
        let f = factorials::<T>(self.order());
        self.coeffs.iter().zip(&f).map(|(&c, &fk)| c / fk).collect()
    }

    pub fn from_taylor(taylor: &[T]) -> Self {
        let f = factorials::<T>(taylor.len().saturating_sub(1));
        Self::from_derivatives(taylor.iter().zip(&f).map(|(&c, &fk)| c * fk).collect())
    }

    /// Re-expands the truncated series about `t0 + delta` and returns the
    /// derivatives there up to `order` (`≤ self.order()`).
    pub fn shifted(&self, delta: T, order: usize) -> Self {
        let k_max = self.order();
        let order = order.min(k_max);
        let coeffs = (0..=order)
            .map(|m| {
                // f⁽ᵐ⁾(t0+δ) ≈ Σ_j f⁽ᵐ⁺ʲ⁾ δʲ / j!, summed with Horner from the top
                let mut acc = T::zero();
                for j in (0..=(k_max - m)).rev() {
                    acc = acc * delta / T::from_usize_lossy(j + 1) + self.coeffs[m + j];
                }
                acc
            })
            .collect();
        Self { coeffs }
    }

    fn common_order(&self, other: &Self) -> usize {
        self.order().min(other.order())
    }

    pub fn scale(&self, k: T) -> Self {
        Self { coeffs: self.coeffs.iter().map(|&c| c * k).collect() }
    }

    pub fn add_scalar(&self, k: T) -> Self {
        let mut out = self.clone();
        out.coeffs[0] = out.coeffs[0] + k;
        out
    }

    pub fn mul_jet(&self, other: &Self) -> Self {
        let n = self.common_order(other);
        let coeffs = (0..=n)
            .map(|m| {
                let c = binomial_row::<T>(m);
                (0..=m).fold(T::zero(), |acc, k| acc + c[k] * self.coeffs[k] * other.coeffs[m - k])
            })
            .collect();
        Self { coeffs }
    }

    /// Quotient; the caller guarantees `other.value() != 0`.
    pub fn div_jet(&self, other: &Self) -> Self {
        let n = self.common_order(other);
        let g0 = other.coeffs[0];
        let mut h: Vec<T> = Vec::with_capacity(n + 1);
        for m in 0..=n {
            let c = binomial_row::<T>(m);
            let s = (0..m).fold(T::zero(), |acc, k| acc + c[k] * h[k] * other.coeffs[m - k]);
            h.push((self.coeffs[m] - s) / g0);
        }
        Self { coeffs: h }
    }

    pub fn recip(&self) -> Self {
        Self::constant(T::one(), self.order()).div_jet(self)
    }

    /// Solves `h′ = u′·g(h)` style recurrences: `h⁽ⁿ⁾ = Σ C(n−1,k) u⁽ᵏ⁺¹⁾ w⁽ⁿ⁻¹⁻ᵏ⁾`.
    fn chain_term(u: &[T], w: &[T], n: usize) -> T {
        let c = binomial_row::<T>(n - 1);
        (0..n).fold(T::zero(), |acc, k| acc + c[k] * u[k + 1] * w[n - 1 - k])
    }

    pub fn exp(&self) -> Self {
        let u = &self.coeffs;
        let mut h = vec![u[0].exp()];
        for n in 1..=self.order() {
            let t = Self::chain_term(u, &h, n);
            h.push(t);
        }
        Self { coeffs: h }
    }

    /// Natural logarithm; the caller guarantees `value() > 0`.
    pub fn ln(&self) -> Self {
        let u = &self.coeffs;
        let mut h = vec![u[0].ln()];
        for n in 1..=self.order() {
            let c = binomial_row::<T>(n - 1);
            let s = (1..n).fold(T::zero(), |acc, k| acc + c[k] * u[k] * h[n - k]);
            h.push((u[n] - s) / u[0]);
        }
        Self { coeffs: h }
    }

    /// Square root; the caller guarantees `value() > 0`.
    pub fn sqrt(&self) -> Self {
        let u = &self.coeffs;
        let h0 = u[0].sqrt();
        let mut h = vec![h0];
        for n in 1..=self.order() {
            let c = binomial_row::<T>(n);
            let s = (1..n).fold(T::zero(), |acc, k| acc + c[k] * h[k] * h[n - k]);
            h.push((u[n] - s) / (h0 + h0));
        }
        Self { coeffs: h }
    }

    pub fn sin_cos(&self) -> (Self, Self) {
        let u = &self.coeffs;
        let (s0, c0) = u[0].sin_cos();
        let (mut s, mut c) = (vec![s0], vec![c0]);
        for n in 1..=self.order() {
            let sn = Self::chain_term(u, &c, n);
            let cn = -Self::chain_term(u, &s, n);
            s.push(sn);
            c.push(cn);
        }
        (Self { coeffs: s }, Self { coeffs: c })
    }

    pub fn sin(&self) -> Self {
        self.sin_cos().0
    }

    pub fn cos(&self) -> Self {
        self.sin_cos().1
    }

    pub fn sinh_cosh(&self) -> (Self, Self) {
        let u = &self.coeffs;
        let (mut s, mut c) = (vec![u[0].sinh()], vec![u[0].cosh()]);
        for n in 1..=self.order() {
            let sn = Self::chain_term(u, &c, n);
            let cn = Self::chain_term(u, &s, n);
            s.push(sn);
            c.push(cn);
        }
        (Self { coeffs: s }, Self { coeffs: c })
    }

    pub fn sinh(&self) -> Self {
        self.sinh_cosh().0
    }

    pub fn cosh(&self) -> Self {
        self.sinh_cosh().1
    }

    pub fn tanh(&self) -> Self {
        let u = &self.coeffs;
        let mut h = vec![u[0].tanh()];
        // w = 1 − h², needed up to order n−1 when producing h⁽ⁿ⁾
        let mut w: Vec<T> = Vec::new();
        for n in 1..=self.order() {
            let m = n - 1;
            let c = binomial_row::<T>(m);
            let sq = (0..=m).fold(T::zero(), |acc, k| acc + c[k] * h[k] * h[m - k]);
            w.push(if m == 0 { T::one() - sq } else { -sq });
            h.push(Self::chain_term(u, &w, n));
        }
        Self { coeffs: h }
    }

    /// Integer power by repeated squaring; valid at `value() == 0` for `n ≥ 0`.
    pub fn powi(&self, n: i32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::constant(T::one(), self.order());
        let mut e = n.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_jet(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_jet(&base);
            }
        }
        if n < 0 {
            acc.recip()
        } else {
            acc
        }
    }

    /// Real power `u^p`; the caller guarantees `value() != 0` (and `> 0` for
    /// non-integer `p`).
    pub fn powf(&self, p: T) -> Self {
        let u = &self.coeffs;
        let mut h = vec![u[0].powf(p)];
        for n in 1..=self.order() {
            // u·h′ = p·u′·h, differentiated n−1 times
            let c = binomial_row::<T>(n - 1);
            let rhs = (0..n).fold(T::zero(), |acc, k| acc + c[k] * u[k + 1] * h[n - 1 - k]);
            let lhs = (1..n).fold(T::zero(), |acc, k| acc + c[k] * u[k] * h[n - k]);
            h.push((p * rhs - lhs) / u[0]);
        }
        Self { coeffs: h }
    }

    /// `|u|` away from zero: the sign of the value is applied to every coefficient.
    pub fn abs(&self) -> Self {
        if self.coeffs[0] < T::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Composition `f ∘ g`, where `self` holds the derivatives of `f` at `g.value()`.
    pub fn compose(&self, inner: &Self) -> Self {
        let n = self.common_order(inner);
        let outer = self.truncate(n).to_taylor();
        let mut h = inner.truncate(n).to_taylor();
        h[0] = T::zero();
        // Horner in truncated power series
        let mut acc = vec![T::zero(); n + 1];
        acc[0] = outer[n];
        for k in (0..n).rev() {
            acc = series_mul(&acc, &h);
            acc[0] = acc[0] + outer[k];
        }
        Self::from_taylor(&acc)
    }

    /// Jet of the inverse function `f⁻¹` at `f(t0)`, given the jet of `f` at `t0`.
    ///
    /// Requires `f′(t0) != 0`. Uses series reversion order by order.
    pub fn inverse(&self, t0: T) -> Self {
        let n = self.order();
        if n == 0 {
            return Self::constant(t0, 0);
        }
        let a = self.to_taylor();
        let a1 = a[1];
        // b: coefficients of δ(ε) with f(t0 + δ(ε)) = f(t0) + ε
        let mut b = vec![T::zero(); n + 1];
        b[1] = T::one() / a1;
        for m in 2..=n {
            // Σ_k a_k δ^k at order m with b_m still zero
            let mut power = b.clone();
            let mut total = vec![T::zero(); n + 1];
            for ak in a.iter().skip(1) {
                for (t, p) in total.iter_mut().zip(&power) {
                    *t = *t + *ak * *p;
                }
                power = series_mul(&power, &b);
            }
            b[m] = -total[m] / a1;
        }
        b[0] = t0;
        Self::from_taylor(&b)
    }
}

fn series_mul<T: Real>(a: &[T], b: &[T]) -> Vec<T> {
    let n = a.len().min(b.len());
    (0..n)
        .map(|m| (0..=m).fold(T::zero(), |acc, k| acc + a[k] * b[m - k]))
        .collect()
}

impl<T: Real> Add for &Jet<T> {
    type Output = Jet<T>;
    fn add(self, rhs: &Jet<T>) -> Jet<T> {
        let n = self.common_order(rhs);
        Jet { coeffs: (0..=n).map(|k| self.coeffs[k] + rhs.coeffs[k]).collect() }
    }
}

impl<T: Real> Sub for &Jet<T> {
    type Output = Jet<T>;
    fn sub(self, rhs: &Jet<T>) -> Jet<T> {
        let n = self.common_order(rhs);
        Jet { coeffs: (0..=n).map(|k| self.coeffs[k] - rhs.coeffs[k]).collect() }
    }
}

impl<T: Real> Mul for &Jet<T> {
    type Output = Jet<T>;
    fn mul(self, rhs: &Jet<T>) -> Jet<T> {
        self.mul_jet(rhs)
    }
}

impl<T: Real> Div for &Jet<T> {
    type Output = Jet<T>;
    fn div(self, rhs: &Jet<T>) -> Jet<T> {
        self.div_jet(rhs)
    }
}

impl<T: Real> Neg for Jet<T> {
    type Output = Jet<T>;
    fn neg(self) -> Jet<T> {
        Jet { coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<T: Real> $tr for Jet<T> {
            type Output = Jet<T>;
            fn $m(self, rhs: Jet<T>) -> Jet<T> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn var(t0: f64, k: usize) -> Jet<f64> {
        Jet::variable(t0, k)
    }

    #[test]
    fn cube_is_exact() {
        let s = var(2.0, 3);
        let cube = &(&s * &s) * &s;
        assert_eq!(cube.derivatives(), &[8.0, 12.0, 12.0, 6.0]);
        assert_eq!(s.powi(3).derivatives(), &[8.0, 12.0, 12.0, 6.0]);
    }

    #[test]
    fn known_series() {
        let z = var(0.0, 5);
        assert_eq!(z.sinh().derivatives(), &[0.0, 1.0, 0.0, 1.0, 0.0, 1.0]);
        assert_eq!(z.cosh().derivatives(), &[1.0, 0.0, 1.0, 0.0, 1.0, 0.0]);
        assert_eq!(z.sin().derivatives(), &[0.0, 1.0, 0.0, -1.0, 0.0, 1.0]);
        assert_eq!(z.exp().derivatives(), &[1.0; 6]);
        // tanh: 0, 1, 0, −2, 0, 16
        let th = z.tanh();
        for (a, b) in th.derivatives().iter().zip([0.0, 1.0, 0.0, -2.0, 0.0, 16.0]) {
            assert_relative_eq!(*a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn ln_sqrt_powf() {
        let x = var(2.0, 4);
        let ln = x.ln();
        // d^n ln x = (−1)^{n−1} (n−1)! / x^n
        let expect = [2f64.ln(), 0.5, -0.25, 0.25, -0.375];
        for (a, b) in ln.derivatives().iter().zip(expect) {
            assert_relative_eq!(*a, b, epsilon = 1e-14);
        }
        let sq = x.sqrt();
        let p = x.powf(0.5);
        for (a, b) in sq.derivatives().iter().zip(p.derivatives()) {
            assert_relative_eq!(*a, *b, epsilon = 1e-14);
        }
        let r = x.powi(-2);
        let q = x.powf(-2.0);
        for (a, b) in r.derivatives().iter().zip(q.derivatives()) {
            assert_relative_eq!(*a, *b, epsilon = 1e-14);
        }
    }

    #[test]
    fn shift_of_polynomial_is_exact() {
        // f = t³ at t0 = 1, re-expanded at 1.5
        let j = var(1.0, 3).powi(3);
        let s = j.shifted(0.5, 3);
        assert_eq!(s.derivatives(), &[3.375, 6.75, 9.0, 6.0]);
    }

    #[test]
    fn composition_and_inverse() {
        // exp(sin t) at t = 0.3
        let t = var(0.3, 6);
        let direct = t.sin().exp();
        let outer = var(0.3_f64.sin(), 6).exp();
        let composed = outer.compose(&t.sin());
        for (a, b) in direct.derivatives().iter().zip(composed.derivatives()) {
            assert_relative_eq!(*a, *b, epsilon = 1e-12);
        }
        // inverse of x = t³ + t at t0 = 0.3, then compose back to the identity
        let x = &t.powi(3) + &t;
        let tx = x.inverse(0.3);
        let back = x.compose(&tx);
        assert_relative_eq!(back.value(), x.value(), epsilon = 1e-14);
        assert_relative_eq!(back.derivative(1), 1.0, epsilon = 1e-13);
        for k in 2..=6 {
            assert!(back.derivative(k).abs() < 1e-10, "order {k}: {}", back.derivative(k));
        }
    }

    #[test]
    fn generic_over_f32() {
        let s = Jet::<f32>::variable(2.0, 3);
        assert_eq!(s.powi(3).derivatives(), &[8.0f32, 12.0, 12.0, 6.0]);
    }
}
