//! A small expression language for real component functions.
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := ('-')? atom ('^' number)?
//! atom   := number | ident | ident '(' expr ')' | '(' expr ')'
//! ```
//!
//! Identifiers are the coordinates `x0..x3`, the scalar variable `t`, and
//! `sigma` (only meaningful inside proportional-pair definitions). The
//! functions are `exp`, `ln`, `sin`, `cos`. Exponents are real constants;
//! `a^b^c` groups to the right and the exponent may carry a sign (`x^-1`).

mod diff;
mod parse;
mod tape;

use std::fmt;

pub use diff::diff_expr;
pub use parse::{parse_expr, ParseError};
pub use tape::Tape;

use crate::error::{Error, Result};

/// Environment slot of `t`.
pub const VAR_T: usize = 4;
/// Environment slot of `sigma`.
pub const VAR_SIGMA: usize = 5;
/// Number of environment slots.
pub const ENV_LEN: usize = 6;

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Const(f64),
    Var(usize),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, f64),
    Exp(Box<Expr>),
    Ln(Box<Expr>),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
    Neg(Box<Expr>),
}

pub fn var_name(i: usize) -> &'static str {
    match i {
        0 => "x0",
        1 => "x1",
        2 => "x2",
        3 => "x3",
        VAR_T => "t",
        VAR_SIGMA => "sigma",
        _ => "?",
    }
}

impl Expr {
    pub fn var(i: usize) -> Expr {
        Expr::Var(i)
    }

    pub fn t() -> Expr {
        Expr::Var(VAR_T)
    }

    /// Evaluate against an environment indexed by variable slot.
    ///
    /// For fields the environment is `[x0, x1, x2, x3]`; scalar functions
    /// put `t` in slot [`VAR_T`].
    pub fn eval(&self, env: &[f64]) -> Result<f64> {
        let v = match self {
            Expr::Const(c) => *c,
            Expr::Var(i) => *env
                .get(*i)
                .ok_or_else(|| Error::domain(format!("variable {} is unbound", var_name(*i))))?,
            Expr::Add(a, b) => a.eval(env)? + b.eval(env)?,
            Expr::Sub(a, b) => a.eval(env)? - b.eval(env)?,
            Expr::Mul(a, b) => a.eval(env)? * b.eval(env)?,
            Expr::Div(a, b) => checked_div(a.eval(env)?, b.eval(env)?)?,
            Expr::Pow(a, p) => checked_pow(a.eval(env)?, *p)?,
            Expr::Exp(a) => a.eval(env)?.exp(),
            Expr::Ln(a) => checked_ln(a.eval(env)?)?,
            Expr::Sin(a) => a.eval(env)?.sin(),
            Expr::Cos(a) => a.eval(env)?.cos(),
            Expr::Neg(a) => -a.eval(env)?,
        };
        finite(v)
    }

    /// Replace variable `var` by the constant `value`, folding constants.
    pub fn substitute(&self, var: usize, value: f64) -> Expr {
        self.map_vars(&|i| (i == var).then(|| Expr::Const(value)))
    }

    /// Replace variables by expressions; `None` keeps the variable.
    pub fn map_vars(&self, f: &dyn Fn(usize) -> Option<Expr>) -> Expr {
        use Expr::*;
        match self {
            Const(c) => Const(*c),
            Var(i) => f(*i).unwrap_or(Var(*i)),
            Add(a, b) => add(a.map_vars(f), b.map_vars(f)),
            Sub(a, b) => sub(a.map_vars(f), b.map_vars(f)),
            Mul(a, b) => mul(a.map_vars(f), b.map_vars(f)),
            Div(a, b) => div(a.map_vars(f), b.map_vars(f)),
            Pow(a, p) => pow(a.map_vars(f), *p),
            Exp(a) => exp(a.map_vars(f)),
            Ln(a) => ln(a.map_vars(f)),
            Sin(a) => sin(a.map_vars(f)),
            Cos(a) => cos(a.map_vars(f)),
            Neg(a) => neg(a.map_vars(f)),
        }
    }

    /// Highest variable slot used, if any.
    pub fn max_var(&self) -> Option<usize> {
        use Expr::*;
        match self {
            Const(_) => None,
            Var(i) => Some(*i),
            Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b) => a.max_var().max(b.max_var()),
            Pow(a, _) | Exp(a) | Ln(a) | Sin(a) | Cos(a) | Neg(a) => a.max_var(),
        }
    }

    pub fn uses_var(&self, var: usize) -> bool {
        use Expr::*;
        match self {
            Const(_) => false,
            Var(i) => *i == var,
            Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b) => a.uses_var(var) || b.uses_var(var),
            Pow(a, _) | Exp(a) | Ln(a) | Sin(a) | Cos(a) | Neg(a) => a.uses_var(var),
        }
    }

    pub fn as_const(&self) -> Option<f64> {
        match self {
            Expr::Const(c) => Some(*c),
            _ => None,
        }
    }

    pub fn node_count(&self) -> usize {
        use Expr::*;
        match self {
            Const(_) | Var(_) => 1,
            Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b) => 1 + a.node_count() + b.node_count(),
            Pow(a, _) | Exp(a) | Ln(a) | Sin(a) | Cos(a) | Neg(a) => 1 + a.node_count(),
        }
    }
}

pub(crate) fn finite(v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::domain(format!("non-finite intermediate value {v}")))
    }
}

pub(crate) fn checked_div(a: f64, b: f64) -> Result<f64> {
    if b == 0.0 {
        return Err(Error::domain("division by zero"));
    }
    Ok(a / b)
}

pub(crate) fn checked_ln(a: f64) -> Result<f64> {
    if a <= 0.0 {
        return Err(Error::domain(format!("ln of non-positive value {a}")));
    }
    Ok(a.ln())
}

pub(crate) fn checked_pow(a: f64, p: f64) -> Result<f64> {
    if p == 0.0 {
        return Ok(1.0);
    }
    if p == 1.0 {
        return Ok(a);
    }
    if p == 2.0 {
        return Ok(a * a);
    }
    let integral = p.fract() == 0.0;
    if a < 0.0 && !integral {
        return Err(Error::domain(format!(
            "fractional power {p} of negative value {a}"
        )));
    }
    if a == 0.0 && p < 0.0 {
        return Err(Error::domain(format!("zero raised to negative power {p}")));
    }
    if integral && p.abs() <= 64.0 {
        return Ok(a.powi(p as i32));
    }
    Ok(a.powf(p))
}

// Smart constructors: constant folding plus zero/one elimination.

fn fold(v: f64) -> Option<Expr> {
    v.is_finite().then_some(Expr::Const(v))
}

pub fn constant(c: f64) -> Expr {
    Expr::Const(c)
}

pub fn add(a: Expr, b: Expr) -> Expr {
    match (a.as_const(), b.as_const()) {
        (Some(x), Some(y)) => fold(x + y).unwrap_or_else(|| Expr::Add(Box::new(a), Box::new(b))),
        (Some(x), _) if x == 0.0 => b,
        (_, Some(y)) if y == 0.0 => a,
        _ => Expr::Add(Box::new(a), Box::new(b)),
    }
}

pub fn sub(a: Expr, b: Expr) -> Expr {
    match (a.as_const(), b.as_const()) {
        (Some(x), Some(y)) => fold(x - y).unwrap_or_else(|| Expr::Sub(Box::new(a), Box::new(b))),
        (Some(x), _) if x == 0.0 => neg(b),
        (_, Some(y)) if y == 0.0 => a,
        _ => Expr::Sub(Box::new(a), Box::new(b)),
    }
}

pub fn mul(a: Expr, b: Expr) -> Expr {
    match (a.as_const(), b.as_const()) {
        (Some(x), Some(y)) => fold(x * y).unwrap_or_else(|| Expr::Mul(Box::new(a), Box::new(b))),
        (Some(x), _) | (_, Some(x)) if x == 0.0 => Expr::Const(0.0),
        (Some(x), _) if x == 1.0 => b,
        (_, Some(y)) if y == 1.0 => a,
        _ => Expr::Mul(Box::new(a), Box::new(b)),
    }
}

pub fn div(a: Expr, b: Expr) -> Expr {
    match (a.as_const(), b.as_const()) {
        (Some(x), Some(y)) if y != 0.0 => {
            fold(x / y).unwrap_or_else(|| Expr::Div(Box::new(a), Box::new(b)))
        }
        (Some(x), _) if x == 0.0 => Expr::Const(0.0),
        (_, Some(y)) if y == 1.0 => a,
        _ => Expr::Div(Box::new(a), Box::new(b)),
    }
}

pub fn pow(a: Expr, p: f64) -> Expr {
    if p == 0.0 {
        return Expr::Const(1.0);
    }
    if p == 1.0 {
        return a;
    }
    if let Some(x) = a.as_const() {
        if let Some(v) = checked_pow(x, p).ok().and_then(fold) {
            return v;
        }
    }
    Expr::Pow(Box::new(a), p)
}

pub fn neg(a: Expr) -> Expr {
    match a {
        Expr::Const(x) => Expr::Const(-x),
        Expr::Neg(inner) => *inner,
        other => Expr::Neg(Box::new(other)),
    }
}

macro_rules! unary_fold {
    ($name:ident, $variant:ident, $f:expr) => {
        pub fn $name(a: Expr) -> Expr {
            if let Some(x) = a.as_const() {
                let r: Option<f64> = $f(x);
                if let Some(v) = r.and_then(fold) {
                    return v;
                }
            }
            Expr::$variant(Box::new(a))
        }
    };
}

unary_fold!(exp, Exp, |x: f64| Some(x.exp()));
unary_fold!(ln, Ln, |x: f64| (x > 0.0).then(|| x.ln()));
unary_fold!(sin, Sin, |x: f64| Some(x.sin()));
unary_fold!(cos, Cos, |x: f64| Some(x.cos()));

fn fmt_num(f: &mut fmt::Formatter<'_>, v: f64) -> fmt::Result {
    // `{:?}` is the shortest representation that round-trips.
    if v < 0.0 || (v == 0.0 && v.is_sign_negative()) {
        write!(f, "(-{:?})", -v)
    } else {
        write!(f, "{v:?}")
    }
}

/// Canonical printed form: every binary node is parenthesised, so the
/// output re-parses to an equal tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Expr::*;
        match self {
            Const(c) => fmt_num(f, *c),
            Var(i) => f.write_str(var_name(*i)),
            Add(a, b) => write!(f, "({a} + {b})"),
            Sub(a, b) => write!(f, "({a} - {b})"),
            Mul(a, b) => write!(f, "({a} * {b})"),
            Div(a, b) => write!(f, "({a} / {b})"),
            Pow(a, p) => {
                write!(f, "({a}^")?;
                if *p < 0.0 {
                    write!(f, "-{:?})", -p)
                } else {
                    write!(f, "{p:?})")
                }
            }
            Exp(a) => write!(f, "exp({a})"),
            Ln(a) => write!(f, "ln({a})"),
            Sin(a) => write!(f, "sin({a})"),
            Cos(a) => write!(f, "cos({a})"),
            Neg(a) => write!(f, "(-{a})"),
        }
    }
}

impl std::str::FromStr for Expr {
    type Err = ParseError;
    fn from_str(s: &str) -> std::result::Result<Self, ParseError> {
        parse_expr(s)
    }
}
