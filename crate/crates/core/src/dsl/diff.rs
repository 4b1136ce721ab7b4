use super::{add, constant, cos, div, exp, mul, neg, pow, sin, sub, Expr};

/// Exact partial derivative with respect to variable slot `axis`.
///
/// The result is simplified by constant folding and zero/one elimination
/// only; it is otherwise the literal chain-rule expansion.
pub fn diff_expr(e: &Expr, axis: usize) -> Expr {
    use Expr::*;
    if !e.uses_var(axis) {
        return constant(0.0);
    }
    match e {
        Const(_) => constant(0.0),
        Var(i) => constant(if *i == axis { 1.0 } else { 0.0 }),
        Add(a, b) => add(diff_expr(a, axis), diff_expr(b, axis)),
        Sub(a, b) => sub(diff_expr(a, axis), diff_expr(b, axis)),
        Mul(a, b) => add(
            mul(diff_expr(a, axis), (**b).clone()),
            mul((**a).clone(), diff_expr(b, axis)),
        ),
        Div(a, b) => {
            let num = sub(
                mul(diff_expr(a, axis), (**b).clone()),
                mul((**a).clone(), diff_expr(b, axis)),
            );
            div(num, pow((**b).clone(), 2.0))
        }
        Pow(a, p) => mul(
            mul(constant(*p), pow_raw((**a).clone(), p - 1.0)),
            diff_expr(a, axis),
        ),
        Exp(a) => mul(exp((**a).clone()), diff_expr(a, axis)),
        Ln(a) => div(diff_expr(a, axis), (**a).clone()),
        Sin(a) => mul(cos((**a).clone()), diff_expr(a, axis)),
        Cos(a) => mul(neg(sin((**a).clone())), diff_expr(a, axis)),
        Neg(a) => neg(diff_expr(a, axis)),
    }
}

/// `u^q` keeping the power node even for `q = 1`, so `d(x^2)` prints as
/// `2*x^1`; `q = 0` still collapses to `1`.
fn pow_raw(a: Expr, q: f64) -> Expr {
    if q == 0.0 {
        return constant(1.0);
    }
    if let Some(c) = a.as_const() {
        return pow(constant(c), q);
    }
    Expr::Pow(Box::new(a), q)
}
