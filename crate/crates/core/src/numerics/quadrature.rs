//! Adaptive Gauss–Legendre quadrature.

use crate::error::{Error, Result};
use std::sync::OnceLock;

/// Nodes per panel.
const ORDER: usize = 10;
/// Panel budget used by [`gauss_legendre`].
pub const DEFAULT_PANEL_CAP: usize = 200_000;

struct Rule {
    nodes: [f64; ORDER],
    weights: [f64; ORDER],
}

fn rule() -> &'static Rule {
    static RULE: OnceLock<Rule> = OnceLock::new();
    RULE.get_or_init(|| {
        let mut nodes = [0.0; ORDER];
        let mut weights = [0.0; ORDER];
        let n = ORDER as f64;
        for i in 0..ORDER.div_ceil(2) {
            // Tricomi initial guess, then Newton on P_n.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(ORDER, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[ORDER - 1 - i] = x;
            weights[i] = w;
            weights[ORDER - 1 - i] = w;
        }
        Rule { nodes, weights }
    })
}

/// `P_n(x)` and its derivative by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let r = rule();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let sum: f64 = r
        .nodes
        .iter()
        .zip(r.weights.iter())
        .map(|(x, w)| w * f(mid + half * x))
        .sum();
    half * sum
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`.
///
/// Panels are bisected until the difference between a panel estimate and
/// the sum of its two halves falls under the panel's share of `tol`.
pub fn gauss_legendre<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    gauss_legendre_with_cap(f, a, b, tol, DEFAULT_PANEL_CAP)
}

pub fn gauss_legendre_with_cap<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
    max_panels: usize,
) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) || a > b {
        return Err(Error::InvalidArgument(format!(
            "quadrature interval [{a}, {b}] must be finite and ordered"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance {tol} must be positive"
        )));
    }
    if a == b {
        return Ok(0.0);
    }
    let width = b - a;
    let mut total = 0.0;
    let mut compensation = 0.0;
    let mut panels = 1usize;
    let mut stack = vec![(a, b, panel(&f, a, b))];
    while let Some((lo, hi, whole)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let left = panel(&f, lo, mid);
        let right = panel(&f, mid, hi);
        let refined = left + right;
        let local_tol = tol * (hi - lo) / width;
        if (refined - whole).abs() <= local_tol || mid <= lo || mid >= hi {
            // Kahan summation keeps the accumulated panels at the tolerance.
            let y = refined - compensation;
            let t = total + y;
            compensation = (t - total) - y;
            total = t;
            continue;
        }
        panels += 1;
        if panels > max_panels {
            return Err(Error::QuadratureNonConvergence { panels: max_panels });
        }
        stack.push((mid, hi, right));
        stack.push((lo, mid, left));
    }
    if !total.is_finite() {
        return Err(Error::InvalidArgument(
            "integrand is not finite on the interval".into(),
        ));
    }
    Ok(total)
}
