use crate::error::{Error, Result};

const MAX_ITER: usize = 200;

/// Brent's method for a continuous nondecreasing `f` with `f(lo) <= 0 <= f(hi)`.
///
/// Stops when `|f(x)| <= tol` or the bracket has shrunk to `tol * max(1, |x|)`.
pub fn find_root_increasing<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<f64> {
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if !(fa <= 0.0 && fb >= 0.0) || lo > hi {
        return Err(Error::InvalidBracket {
            lo,
            hi,
            f_lo: fa,
            f_hi: fb,
        });
    }
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    let (mut c, mut fc) = (b, fb);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..MAX_ITER {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let width_tol = 0.5 * tol * b.abs().max(1.0);
        let half = 0.5 * (c - b);
        if fb.abs() <= tol || half.abs() <= width_tol {
            return Ok(b);
        }
        if e.abs() >= width_tol && fa.abs() > fb.abs() {
            // inverse quadratic interpolation or secant
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * half * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * half * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * half * q - (width_tol * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = half;
                e = d;
            }
        } else {
            d = half;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > width_tol {
            d
        } else {
            width_tol.copysign(half)
        };
        fb = f(b);
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_and_quadratic() {
        let r = find_root_increasing(|x| x - 1.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((r - 1.0).abs() < 1e-13);
        let r = find_root_increasing(|x| x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((r - std::f64::consts::SQRT_2).abs() < 1e-13);
    }

    #[test]
    fn endpoint_roots() {
        assert_eq!(find_root_increasing(|x| x, 0.0, 1.0, 1e-12).unwrap(), 0.0);
        assert_eq!(
            find_root_increasing(|x| x - 1.0, 0.0, 1.0, 1e-12).unwrap(),
            1.0
        );
    }

    #[test]
    fn flat_stretch_then_rise() {
        // nondecreasing with a long flat region, like a survival curve with a dark period
        let f = |x: f64| {
            if x < 5.0 {
                -1.0
            } else {
                (x - 5.0).powi(3) - 0.5
            }
        };
        let r = find_root_increasing(f, 0.0, 10.0, 1e-13).unwrap();
        assert!(f(r).abs() <= 1e-12 || (r - (5.0 + 0.5f64.cbrt())).abs() < 1e-12);
    }

    #[test]
    fn invalid_bracket() {
        let err = find_root_increasing(|x| x + 1.0, 0.0, 2.0, 1e-12).unwrap_err();
        assert!(matches!(err, Error::InvalidBracket { .. }));
    }
}
