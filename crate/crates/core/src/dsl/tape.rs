use super::{checked_div, checked_ln, checked_pow, Expr};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
enum Op {
    Const(f64),
    Var(usize),
    Add,
    Sub,
    Mul,
    Div,
    Square,
    Powi(i32),
    Powf(f64),
    Exp,
    Ln,
    Sin,
    Cos,
    Neg,
}

const INLINE_STACK: usize = 32;

/// An expression flattened to postfix form for repeated evaluation.
///
/// Produces bit-identical results to [`Expr::eval`].
#[derive(Clone, Debug, PartialEq)]
pub struct Tape {
    ops: Vec<Op>,
    depth: usize,
    max_var: Option<usize>,
}

impl Tape {
    pub fn compile(e: &Expr) -> Tape {
        let mut ops = Vec::with_capacity(e.node_count());
        emit(e, &mut ops);
        let mut depth = 0usize;
        let mut cur = 0usize;
        for op in &ops {
            match op {
                Op::Const(_) | Op::Var(_) => cur += 1,
                Op::Add | Op::Sub | Op::Mul | Op::Div => cur -= 1,
                _ => {}
            }
            depth = depth.max(cur);
        }
        Tape {
            ops,
            depth,
            max_var: e.max_var(),
        }
    }

    pub fn is_const(&self) -> Option<f64> {
        match self.ops.as_slice() {
            [Op::Const(c)] => Some(*c),
            _ => None,
        }
    }

    #[inline]
    pub fn eval(&self, env: &[f64]) -> Result<f64> {
        if let [Op::Const(c)] = self.ops.as_slice() {
            return Ok(*c);
        }
        if let Some(m) = self.max_var {
            if m >= env.len() {
                return Err(Error::domain(format!(
                    "variable {} is unbound",
                    super::var_name(m)
                )));
            }
        }
        if self.depth <= INLINE_STACK {
            let mut stack = [0.0f64; INLINE_STACK];
            self.run(env, &mut stack)
        } else {
            let mut stack = vec![0.0f64; self.depth];
            self.run(env, &mut stack)
        }
    }

    fn run(&self, env: &[f64], stack: &mut [f64]) -> Result<f64> {
        let mut sp = 0usize;
        for op in &self.ops {
            match *op {
                Op::Const(c) => {
                    stack[sp] = c;
                    sp += 1;
                }
                Op::Var(i) => {
                    stack[sp] = env[i];
                    sp += 1;
                }
                Op::Add | Op::Sub | Op::Mul | Op::Div => {
                    sp -= 1;
                    let b = stack[sp];
                    let a = stack[sp - 1];
                    stack[sp - 1] = match *op {
                        Op::Add => a + b,
                        Op::Sub => a - b,
                        Op::Mul => a * b,
                        _ => checked_div(a, b)?,
                    };
                }
                _ => {
                    let a = stack[sp - 1];
                    stack[sp - 1] = match *op {
                        Op::Square => a * a,
                        Op::Powi(p) => {
                            if a == 0.0 && p < 0 {
                                return Err(Error::domain(format!(
                                    "zero raised to negative power {p}"
                                )));
                            }
                            a.powi(p)
                        }
                        Op::Powf(p) => checked_pow(a, p)?,
                        Op::Exp => a.exp(),
                        Op::Ln => checked_ln(a)?,
                        Op::Sin => a.sin(),
                        Op::Cos => a.cos(),
                        Op::Neg => -a,
                        _ => unreachable!(),
                    };
                }
            }
            if !stack[sp - 1].is_finite() {
                return Err(Error::domain(format!(
                    "non-finite intermediate value {}",
                    stack[sp - 1]
                )));
            }
        }
        Ok(stack[0])
    }
}

fn emit(e: &Expr, ops: &mut Vec<Op>) {
    use Expr::*;
    match e {
        Const(c) => ops.push(Op::Const(*c)),
        Var(i) => ops.push(Op::Var(*i)),
        Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b) => {
            emit(a, ops);
            emit(b, ops);
            ops.push(match e {
                Add(..) => Op::Add,
                Sub(..) => Op::Sub,
                Mul(..) => Op::Mul,
                _ => Op::Div,
            });
        }
        Pow(a, p) => {
            emit(a, ops);
            // Mirrors `checked_pow` so tape and tree agree bit for bit.
            let p = *p;
            if p == 0.0 {
                // `u^0 = 1`, but evaluating `u` must still raise its errors.
                ops.extend([Op::Const(0.0), Op::Mul, Op::Const(1.0), Op::Add]);
            } else if p == 2.0 {
                ops.push(Op::Square);
            } else if p.fract() == 0.0 && p.abs() <= 64.0 && p != 1.0 {
                ops.push(Op::Powi(p as i32));
            } else if p != 1.0 {
                ops.push(Op::Powf(p));
            }
        }
        Exp(a) => {
            emit(a, ops);
            ops.push(Op::Exp)
        }
        Ln(a) => {
            emit(a, ops);
            ops.push(Op::Ln)
        }
        Sin(a) => {
            emit(a, ops);
            ops.push(Op::Sin)
        }
        Cos(a) => {
            emit(a, ops);
            ops.push(Op::Cos)
        }
        Neg(a) => {
            emit(a, ops);
            ops.push(Op::Neg)
        }
    }
}
