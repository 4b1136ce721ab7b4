//! Gauss–Legendre rules and one-dimensional panel quadrature.

use std::collections::HashMap;
use std::num::NonZeroUsize;
use std::sync::{Arc, Mutex, OnceLock};

use gauss_quad::GaussLegendre;

use crate::error::{Error, Result};

/// Nodes and weights on `[-1, 1]`, ordered by increasing node.
pub type Rule = Arc<[(f64, f64)]>;

static CACHE: OnceLock<Mutex<HashMap<usize, Rule>>> = OnceLock::new();

/// The `order`-point Gauss–Legendre rule, cached process-wide.
pub fn gauss_legendre(order: usize) -> Result<Rule> {
    if order < 2 {
        return Err(Error::param(format!("quadrature order {order} must be at least 2")));
    }
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().unwrap_or_else(|p| p.into_inner());
    if let Some(r) = map.get(&order) {
        return Ok(r.clone());
    }
    let n = NonZeroUsize::new(order).expect("order checked above");
    let gl = GaussLegendre::new(n);
    let mut pairs: Vec<(f64, f64)> = gl.as_node_weight_pairs().iter().copied().collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let rule: Rule = pairs.into();
    map.insert(order, rule.clone());
    Ok(rule)
}

/// Nodes and weights mapped to `[a, b]`.
pub fn mapped(rule: &[(f64, f64)], a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    rule.iter().map(move |&(x, w)| (mid + half * x, half * w))
}

/// `∫_a^b f` with a single panel.
pub fn integrate<F>(f: F, a: f64, b: f64, order: usize) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    integrate_panels(f, &[a, b], order)
}

/// Sum of single-panel rules over consecutive breakpoints.
pub fn integrate_panels<F>(mut f: F, breaks: &[f64], order: usize) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let rule = gauss_legendre(order)?;
    let mut acc = 0.0;
    for w in breaks.windows(2) {
        for (t, wt) in mapped(&rule, w[0], w[1]) {
            acc += wt * f(t)?;
        }
    }
    Ok(acc)
}

/// Breakpoints `a, a + (b−a) r^{p−1}, …, a + (b−a) r, b` grading toward `a`.
pub fn geometric_breaks(a: f64, b: f64, panels: usize, ratio: f64) -> Vec<f64> {
    let panels = panels.max(1);
    let mut out = Vec::with_capacity(panels + 1);
    out.push(a);
    for j in (1..panels).rev() {
        out.push(a + (b - a) * ratio.powi(j as i32));
    }
    out.push(b);
    out
}
