//! Coordinate-function expressions in one parameter (`s` or `t`).
//!
//! Grammar:
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := '-' factor | power
//! power  := atom ('^' factor)?
//! atom   := number | ident | ident '(' expr ')' | '(' expr ')'
//! ```
//!
//! `^` binds tightest and associates to the right, so `-s^2` is `-(s^2)` and
//! `2^-s` is `2^(-s)`. Identifiers are the parameter (`s` or `t`), the
//! constant `pi`, and the functions listed in [`Func`].

mod eval;
mod fd;
mod parser;

use std::fmt;

pub use eval::{eval_jet, EvalError};
pub use fd::{fd_oracle, FdEstimate};
pub use parser::{parse_expr, ParseError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Sinh,
    Cosh,
    Tanh,
    Exp,
    Log,
    Sqrt,
    Abs,
}

impl Func {
    pub const ALL: [Func; 9] = [
        Func::Sin,
        Func::Cos,
        Func::Sinh,
        Func::Cosh,
        Func::Tanh,
        Func::Exp,
        Func::Log,
        Func::Sqrt,
        Func::Abs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        if name == "ln" {
            return Some(Func::Log);
        }
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

/// Expression tree. Literals parsed from text are always non-negative;
/// negative constants appear as `Neg(Num(..))`.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(f64),
    Var,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

// Named tree-building constructors, deliberately not operator overloads.
#[allow(clippy::should_implement_trait)]
impl Expr {
    pub fn num(v: f64) -> Expr {
        Expr::Num(v)
    }

    pub fn call(f: Func, arg: Expr) -> Expr {
        Expr::Call(f, Box::new(arg))
    }

    pub fn neg(e: Expr) -> Expr {
        Expr::Neg(Box::new(e))
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        Expr::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::Sub(Box::new(a), Box::new(b))
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        Expr::Mul(Box::new(a), Box::new(b))
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        Expr::Div(Box::new(a), Box::new(b))
    }

    pub fn pow(a: Expr, b: Expr) -> Expr {
        Expr::Pow(Box::new(a), Box::new(b))
    }

    /// Whether the parameter occurs anywhere in the tree.
    pub fn depends_on_var(&self) -> bool {
        match self {
            Expr::Num(_) => false,
            Expr::Var => true,
            Expr::Neg(e) | Expr::Call(_, e) => e.depends_on_var(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Pow(a, b) => {
                a.depends_on_var() || b.depends_on_var()
            }
        }
    }

    /// Arguments of every `abs(..)` call, outermost first.
    pub fn abs_arguments(&self) -> Vec<&Expr> {
        let mut out = Vec::new();
        self.collect_abs(&mut out);
        out
    }

    fn collect_abs<'a>(&'a self, out: &mut Vec<&'a Expr>) {
        match self {
            Expr::Num(_) | Expr::Var => {}
            Expr::Call(f, e) => {
                if *f == Func::Abs {
                    out.push(e);
                }
                e.collect_abs(out);
            }
            Expr::Neg(e) => e.collect_abs(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Pow(a, b) => {
                a.collect_abs(out);
                b.collect_abs(out);
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            Expr::Num(_) | Expr::Var | Expr::Call(..) => 5,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let paren = self.precedence() < min;
        if paren {
            f.write_str("(")?;
        }
        match self {
            Expr::Num(v) if *v < 0.0 || v.is_sign_negative() => write!(f, "(-{})", -v)?,
            Expr::Num(v) => write!(f, "{v}")?,
            Expr::Var => f.write_str("s")?,
            Expr::Neg(e) => {
                f.write_str("-")?;
                e.fmt_prec(f, 3)?;
            }
            Expr::Add(a, b) => {
                a.fmt_prec(f, 1)?;
                f.write_str(" + ")?;
                b.fmt_prec(f, 2)?;
            }
            Expr::Sub(a, b) => {
                a.fmt_prec(f, 1)?;
                f.write_str(" - ")?;
                b.fmt_prec(f, 2)?;
            }
            Expr::Mul(a, b) => {
                a.fmt_prec(f, 2)?;
                f.write_str("*")?;
                b.fmt_prec(f, 3)?;
            }
            Expr::Div(a, b) => {
                a.fmt_prec(f, 2)?;
                f.write_str("/")?;
                b.fmt_prec(f, 3)?;
            }
            Expr::Pow(a, b) => {
                a.fmt_prec(f, 5)?;
                f.write_str("^")?;
                b.fmt_prec(f, 3)?;
            }
            Expr::Call(func, e) => {
                write!(f, "{}(", func.name())?;
                e.fmt_prec(f, 0)?;
                f.write_str(")")?;
            }
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

impl std::str::FromStr for Expr {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_expr(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printing_respects_precedence() {
        let e = parse_expr("-s^2 + 2*(s - 1)/3").unwrap();
        assert_eq!(e.to_string(), "-s^2 + 2*(s - 1)/3");
        let e = parse_expr("(s^2)^3").unwrap();
        assert_eq!(e.to_string(), "(s^2)^3");
        let e = parse_expr("2^-s^2").unwrap();
        assert_eq!(e.to_string(), "2^-s^2");
        let e = parse_expr("a(b)".replace("a", "sinh").replace("b", "3*t").as_str()).unwrap();
        assert_eq!(e.to_string(), "sinh(3*s)");
    }

    #[test]
    fn abs_arguments_are_collected() {
        let e = parse_expr("abs(s) + abs(sin(abs(s - 1)))").unwrap();
        assert_eq!(e.abs_arguments().len(), 3);
        assert!(!parse_expr("2*pi").unwrap().depends_on_var());
    }
}
