//! Sine and cosine integrals.
//!
//! Power series are used for `|x| <= 4`. Above that, `E1(ix)` is evaluated
//! by a continued fraction (modified Lentz), which gives both `Si` and `Ci`
//! to full double precision without the accuracy floor of the asymptotic
//! auxiliary-function series.

use num_complex::Complex64;
use std::f64::consts::FRAC_PI_2;

/// Euler–Mascheroni constant.
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const SERIES_LIMIT: f64 = 4.0;
const MAX_ITER: usize = 200;

/// `Si(x) = ∫₀ˣ sin(u)/u du`, extended oddly to negative `x`.
pub fn sine_integral(x: f64) -> f64 {
    if x < 0.0 {
        return -sine_integral(-x);
    }
    if x == 0.0 {
        return 0.0;
    }
    if x.is_infinite() {
        return FRAC_PI_2;
    }
    if x <= SERIES_LIMIT {
        si_series(x)
    } else {
        exponential_integral_cf(x).1
    }
}

/// `Ci(x) = γ + ln x + ∫₀ˣ (cos u − 1)/u du` for `x > 0`.
pub fn cosine_integral(x: f64) -> f64 {
    assert!(x > 0.0, "Ci is defined for positive arguments only");
    if x <= SERIES_LIMIT {
        EULER_GAMMA + x.ln() - cin_series(x)
    } else {
        exponential_integral_cf(x).0
    }
}

/// Entire cosine integral `Cin(x) = ∫₀ˣ (1 − cos u)/u du` (even in `x`).
pub fn cin(x: f64) -> f64 {
    let x = x.abs();
    if x == 0.0 {
        0.0
    } else if x <= SERIES_LIMIT {
        cin_series(x)
    } else {
        EULER_GAMMA + x.ln() - exponential_integral_cf(x).0
    }
}

fn si_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x; // x^(2k+1) / (2k+1)!, signed
    let mut sum = 0.0;
    for k in 0..MAX_ITER {
        let contribution = term / (2 * k + 1) as f64;
        sum += contribution;
        if contribution.abs() < 1e-17 * sum.abs() {
            break;
        }
        term *= -x2 / (((2 * k + 2) * (2 * k + 3)) as f64);
    }
    sum
}

fn cin_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x2 / 2.0; // x^(2k) / (2k)!, signed
    let mut sum = 0.0;
    for k in 1..MAX_ITER {
        let contribution = term / (2 * k) as f64;
        sum += contribution;
        if contribution.abs() < 1e-17 * sum.abs() {
            break;
        }
        term *= -x2 / (((2 * k + 1) * (2 * k + 2)) as f64);
    }
    sum
}

/// Returns `(Ci(x), Si(x))` from the continued fraction for `E1(ix)`.
fn exponential_integral_cf(x: f64) -> (f64, f64) {
    let tiny = 1e-300;
    let one = Complex64::new(1.0, 0.0);
    let mut b = Complex64::new(1.0, x);
    let mut c = Complex64::new(1.0 / tiny, 0.0);
    let mut d = one / b;
    let mut h = d;
    for i in 2..MAX_ITER {
        let a = -(((i - 1) * (i - 1)) as f64);
        b += 2.0;
        d = one / (d * a + b);
        c = b + a / c;
        let del = c * d;
        h *= del;
        if (del.re - 1.0).abs() + del.im.abs() < 1e-16 {
            break;
        }
    }
    h *= Complex64::new(x.cos(), -x.sin());
    (-h.re, FRAC_PI_2 + h.im)
}
