use thiserror::Error;

use super::{Expr, Func};
use crate::jet::Jet;
use crate::scalar::Real;

/// Arguments of `abs` closer to zero than this are rejected: the kink has no derivative.
pub const ABS_KINK_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("domain error in `{subexpr}`: {reason}")]
    Domain { subexpr: String, reason: &'static str },
    #[error("jet order must be at least 1, got {0}")]
    InvalidOrder(usize),
    #[error("finite-difference derivative order must be in 1..=5, got {0}")]
    InvalidFdOrder(usize),
    #[error("finite-difference step must be positive")]
    InvalidStep,
}

fn domain(e: &Expr, reason: &'static str) -> EvalError {
    EvalError::Domain { subexpr: e.to_string(), reason }
}

/// Exponent of `a^b` when `b` is a constant: `Some(Ok(n))` for integers, `Some(Err(p))` otherwise.
fn constant_exponent<T: Real>(b: &Expr) -> Result<Option<Result<i32, T>>, EvalError> {
    if b.depends_on_var() {
        return Ok(None);
    }
    let p: T = b.value(T::zero())?;
    let pf = p.to_f64().unwrap_or(f64::NAN);
    if pf.fract() == 0.0 && pf.abs() <= i32::MAX as f64 {
        Ok(Some(Ok(pf as i32)))
    } else {
        Ok(Some(Err(p)))
    }
}

impl Expr {
    /// Plain value at `t`.
    pub fn value<T: Real>(&self, t: T) -> Result<T, EvalError> {
        let v = match self {
            Expr::Num(v) => T::lit(*v),
            Expr::Var => t,
            Expr::Neg(e) => -e.value(t)?,
            Expr::Add(a, b) => a.value(t)? + b.value(t)?,
            Expr::Sub(a, b) => a.value(t)? - b.value(t)?,
            Expr::Mul(a, b) => a.value(t)? * b.value(t)?,
            Expr::Div(a, b) => {
                let den = b.value(t)?;
                if den == T::zero() {
                    return Err(domain(self, "division by zero"));
                }
                a.value(t)? / den
            }
            Expr::Pow(a, b) => {
                let base = a.value(t)?;
                match constant_exponent::<T>(b)? {
                    Some(Ok(n)) => {
                        if n < 0 && base == T::zero() {
                            return Err(domain(self, "negative power of zero"));
                        }
                        base.powi(n)
                    }
                    Some(Err(p)) => {
                        if base <= T::zero() {
                            return Err(domain(self, "non-integer power of a non-positive base"));
                        }
                        base.powf(p)
                    }
                    None => {
                        if base <= T::zero() {
                            return Err(domain(self, "variable power of a non-positive base"));
                        }
                        base.powf(b.value(t)?)
                    }
                }
            }
            Expr::Call(f, e) => {
                let u = e.value(t)?;
                match f {
                    Func::Sin => u.sin(),
                    Func::Cos => u.cos(),
                    Func::Sinh => u.sinh(),
                    Func::Cosh => u.cosh(),
                    Func::Tanh => u.tanh(),
                    Func::Exp => u.exp(),
                    Func::Abs => u.abs(),
                    Func::Log => {
                        if u <= T::zero() {
                            return Err(domain(self, "logarithm of a non-positive value"));
                        }
                        u.ln()
                    }
                    Func::Sqrt => {
                        if u < T::zero() {
                            return Err(domain(self, "square root of a negative value"));
                        }
                        u.sqrt()
                    }
                }
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(domain(self, "non-finite result"))
        }
    }

    /// Value and derivatives up to `order` at `t0`.
    pub fn jet<T: Real>(&self, t0: T, order: usize) -> Result<Jet<T>, EvalError> {
        let j = match self {
            Expr::Num(v) => Jet::constant(T::lit(*v), order),
            Expr::Var => Jet::variable(t0, order),
            Expr::Neg(e) => -e.jet(t0, order)?,
            Expr::Add(a, b) => &a.jet(t0, order)? + &b.jet(t0, order)?,
            Expr::Sub(a, b) => &a.jet(t0, order)? - &b.jet(t0, order)?,
            Expr::Mul(a, b) => &a.jet(t0, order)? * &b.jet(t0, order)?,
            Expr::Div(a, b) => {
                let den = b.jet(t0, order)?;
                if den.value() == T::zero() {
                    return Err(domain(self, "division by zero"));
                }
                &a.jet(t0, order)? / &den
            }
            Expr::Pow(a, b) => {
                let base = a.jet(t0, order)?;
                match constant_exponent::<T>(b)? {
                    Some(Ok(n)) => {
                        if n < 0 && base.value() == T::zero() {
                            return Err(domain(self, "negative power of zero"));
                        }
                        base.powi(n)
                    }
                    Some(Err(p)) => {
                        if base.value() <= T::zero() {
                            return Err(domain(self, "non-integer power of a non-positive base"));
                        }
                        base.powf(p)
                    }
                    None => {
                        if base.value() <= T::zero() {
                            return Err(domain(self, "variable power of a non-positive base"));
                        }
                        (&b.jet(t0, order)? * &base.ln()).exp()
                    }
                }
            }
            Expr::Call(f, e) => {
                let u = e.jet(t0, order)?;
                match f {
                    Func::Sin => u.sin(),
                    Func::Cos => u.cos(),
                    Func::Sinh => u.sinh(),
                    Func::Cosh => u.cosh(),
                    Func::Tanh => u.tanh(),
                    Func::Exp => u.exp(),
                    Func::Log => {
                        if u.value() <= T::zero() {
                            return Err(domain(self, "logarithm of a non-positive value"));
                        }
                        u.ln()
                    }
                    Func::Sqrt => {
                        if u.value() < T::zero() {
                            return Err(domain(self, "square root of a negative value"));
                        }
                        if u.value() == T::zero() && order > 0 {
                            return Err(domain(self, "square root is not differentiable at zero"));
                        }
                        u.sqrt()
                    }
                    Func::Abs => {
                        if order > 0 && u.value().abs() <= T::lit(ABS_KINK_TOL) {
                            return Err(domain(self, "abs is not differentiable at zero"));
                        }
                        u.abs()
                    }
                }
            }
        };
        if j.is_finite() {
            Ok(j)
        } else {
            Err(domain(self, "non-finite result"))
        }
    }
}

/// Derivatives `[f(t0), f′(t0), …, f⁽ᴷ⁾(t0)]` of an expression, `K ≥ 1`.
pub fn eval_jet<T: Real>(e: &Expr, t0: T, order: usize) -> Result<Jet<T>, EvalError> {
    if order < 1 {
        return Err(EvalError::InvalidOrder(order));
    }
    e.jet(t0, order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expr;

    fn jet(text: &str, t0: f64, k: usize) -> Vec<f64> {
        eval_jet(&parse_expr(text).unwrap(), t0, k).unwrap().derivatives().to_vec()
    }

    #[test]
    fn polynomial_and_hyperbolic() {
        assert_eq!(jet("s^3", 2.0, 3), vec![8.0, 12.0, 12.0, 6.0]);
        assert_eq!(jet("sinh(s)", 0.0, 3), vec![0.0, 1.0, 0.0, 1.0]);
        let v: f64 = parse_expr("s^3/6 + s^2/2").unwrap().value(1.0).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn powers() {
        // integer power of a negative base is fine, real power is not
        assert_eq!(jet("s^2", -3.0, 2), vec![9.0, -6.0, 2.0]);
        assert!(eval_jet(&parse_expr("s^0.5").unwrap(), -1.0, 2).is_err());
        let j = jet("s^s", 2.0, 2);
        // d/ds s^s = s^s (ln s + 1)
        assert!((j[1] - 4.0 * (2f64.ln() + 1.0)).abs() < 1e-12);
        assert_eq!(jet("2^(1+1)", 0.3, 1), vec![4.0, 0.0]);
    }

    #[test]
    fn domain_errors_name_the_subexpression() {
        let err = eval_jet(&parse_expr("1 + log(s - 1)").unwrap(), 0.5, 2).unwrap_err();
        match err {
            EvalError::Domain { subexpr, .. } => assert_eq!(subexpr, "log(s - 1)"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            eval_jet(&parse_expr("1/(s-2)").unwrap(), 2.0, 1),
            Err(EvalError::Domain { .. })
        ));
        assert!(eval_jet(&parse_expr("sqrt(s)").unwrap(), -1.0, 1).is_err());
        assert!(eval_jet(&parse_expr("abs(s)").unwrap(), 0.0, 1).is_err());
        assert_eq!(jet("abs(s)", -2.0, 2), vec![2.0, -1.0, 0.0]);
        assert_eq!(eval_jet(&parse_expr("s").unwrap(), 0.0_f64, 0), Err(EvalError::InvalidOrder(0)));
    }
}
