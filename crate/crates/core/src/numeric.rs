//! Scalar quadrature, root finding and 1-D maximization.

use crate::error::{Error, Result};

const SIMPSON_MAX_DEPTH: u32 = 48;

/// Adaptive Simpson integration of `f` over `[a, b]` to absolute tolerance
/// `tol`.
pub fn adaptive_simpson(
    f: &(impl Fn(f64) -> f64 + ?Sized),
    a: f64,
    b: f64,
    tol: f64,
) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let value = simpson_step(f, a, b, fa, fm, fb, whole, tol, SIMPSON_MAX_DEPTH);
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Quadrature(format!(
            "non-finite integral on [{a}, {b}]"
        )))
    }
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &(impl Fn(f64) -> f64 + ?Sized),
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    let settled =
        delta.abs() <= 15.0 * tol || delta.abs() <= 64.0 * f64::EPSILON * (left + right).abs();
    if depth == 0 || !delta.is_finite() || settled {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Bisection on a bracketing interval until the bracket cannot shrink any
/// further in floating point. Returns the endpoint with the smaller |g|.
pub fn bisect(g: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut glo = g(lo);
    let ghi = g(hi);
    if glo == 0.0 {
        return lo;
    }
    if ghi == 0.0 {
        return hi;
    }
    let mut best = if glo.abs() < ghi.abs() { lo } else { hi };
    let mut best_abs = glo.abs().min(ghi.abs());
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let gm = g(mid);
        if gm.abs() < best_abs {
            best = mid;
            best_abs = gm.abs();
        }
        if gm == 0.0 {
            return mid;
        }
        if (gm < 0.0) == (glo < 0.0) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    best
}

/// Golden-section search for a maximum of `f` on `[a, b]`, stopping when the
/// bracket is narrower than `tol`. Returns `(argmax, max)`.
pub fn golden_section_max(
    f: &(impl Fn(f64) -> f64 + ?Sized),
    mut a: f64,
    mut b: f64,
    tol: f64,
) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    // Endpoints of the final bracket may beat the midpoint on a flat plateau.
    [(x, fx), (c, fc), (d, fd)]
        .into_iter()
        .fold((x, fx), |acc, cand| if cand.1 > acc.1 { cand } else { acc })
}

/// Global maximization on `[a, b]`: uniform grid with spacing at most `step`,
/// then golden-section refinement around the best grid point.
pub fn grid_then_golden_max(
    f: &(impl Fn(f64) -> f64 + ?Sized),
    a: f64,
    b: f64,
    step: f64,
    tol: f64,
) -> (f64, f64) {
    let n = (((b - a) / step).ceil() as usize).max(1);
    let h = (b - a) / n as f64;
    let (mut best_i, mut best_v) = (0, f(a));
    for i in 1..=n {
        let v = f(a + h * i as f64);
        if v > best_v {
            best_i = i;
            best_v = v;
        }
    }
    let x0 = a + h * best_i as f64;
    let lo = (x0 - h).max(a);
    let hi = (x0 + h).min(b);
    let (x, v) = golden_section_max(f, lo, hi, tol);
    if v >= best_v {
        (x, v)
    } else {
        (x0, best_v)
    }
}

/// Cumulative trapezoidal integral on a uniform grid; `out[0] = 0`.
pub fn cumulative_trapezoid(values: &[f64], dt: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(values.len());
    let mut acc = 0.0;
    out.push(0.0);
    for w in values.windows(2) {
        acc += 0.5 * dt * (w[0] + w[1]);
        out.push(acc);
    }
    out.truncate(values.len());
    out
}

/// Linear interpolation on a uniform grid starting at 0; clamps outside.
pub fn interp_uniform(values: &[f64], dt: f64, t: f64) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    if t <= 0.0 {
        return values[0];
    }
    let pos = t / dt;
    let i = pos.floor() as usize;
    if i + 1 >= values.len() {
        return *values.last().unwrap();
    }
    let frac = pos - i as f64;
    values[i] * (1.0 - frac) + values[i + 1] * frac
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_polynomial_and_exp() {
        let v = adaptive_simpson(&|x: f64| x * x * x - x, 0.0, 2.0, 1e-12).unwrap();
        assert!((v - 2.0).abs() < 1e-12);
        let v = adaptive_simpson(&|x: f64| (-x).exp(), 0.0, 3.0, 1e-12).unwrap();
        assert!((v - (1.0 - (-3f64).exp())).abs() < 1e-11);
    }

    #[test]
    fn simpson_near_log_singularity() {
        // ∫ tan on [0, π/2 − 1e-3] = −ln cos(π/2 − 1e-3)
        let b = std::f64::consts::FRAC_PI_2 - 1e-3;
        let v = adaptive_simpson(&|x: f64| x.tan(), 0.0, b, 1e-10).unwrap();
        assert!((v + b.cos().ln()).abs() < 1e-8);
    }

    #[test]
    fn bisect_finds_sqrt2() {
        let r = bisect(&|x: f64| x * x - 2.0, 0.0, 2.0);
        assert!((r - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn golden_finds_parabola_peak() {
        let (x, v) = golden_section_max(&|x: f64| -(x - 0.3).powi(2) + 1.0, -1.0, 1.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-8);
        assert!((v - 1.0).abs() < 1e-15);
    }

    #[test]
    fn grid_then_golden_handles_multimodal() {
        let f = |x: f64| (5.0 * x).sin() + 0.1 * x;
        let (x, _) = grid_then_golden_max(&f, 0.0, 3.0, 1e-3, 1e-10);
        // Crests sit at (π/2 + 2πk)/5; the tilt makes the last one on [0,3] highest.
        let crest = (4.0 * std::f64::consts::PI + std::f64::consts::FRAC_PI_2) / 5.0;
        assert!((x - crest).abs() < 0.01);
    }

    #[test]
    fn trapezoid_and_interp() {
        let dt = 0.5;
        let v = [0.0, 1.0, 2.0, 3.0];
        let c = cumulative_trapezoid(&v, dt);
        assert_eq!(c, vec![0.0, 0.25, 1.0, 2.25]);
        assert_eq!(interp_uniform(&v, dt, 0.75), 1.5);
        assert_eq!(interp_uniform(&v, dt, 10.0), 3.0);
    }
}
