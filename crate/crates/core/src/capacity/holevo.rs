//! Holevo capacity of unital and generalized amplitude damping channels.

use serde::Serialize;

use crate::entropy::xlog2x;
use crate::error::{ensure_range, Result};
use crate::numeric::bisect;

/// Number of scan points for the implicit equation.
pub const Q_SCAN_POINTS: usize = 2001;

/// Distance kept from ±1, where `f′` diverges.
pub const Q_EDGE: f64 = 1e-12;

/// Residual above which a root is reported as low-confidence.
pub const RESIDUAL_TOL: f64 = 1e-10;

/// `f(x) = (1+x) log2(1+x) + (1−x) log2(1−x)`.
pub fn f(x: f64) -> f64 {
    xlog2x(1.0 + x) + xlog2x(1.0 - x)
}

/// `f′(x) = log2((1+x)/(1−x))`.
pub fn f_prime(x: f64) -> f64 {
    ((1.0 + x) / (1.0 - x)).log2()
}

/// `χ(Λ_U) = f(λ)/2`.
pub fn holevo_unital(lambda: f64) -> Result<f64> {
    ensure_range("lambda", lambda, -1.0, 1.0)?;
    Ok(0.5 * f(lambda))
}

/// Solution of the implicit equation for the optimal ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HolevoSolve {
    pub q: f64,
    pub r: f64,
    pub chi: f64,
    /// `|g(q)|` at the returned root.
    pub residual: f64,
    /// Number of sign changes found by the scan.
    pub roots: usize,
    /// Set when no sign change was found or the residual exceeds
    /// [`RESIDUAL_TOL`].
    pub low_confidence: bool,
}

struct Gadc {
    lambda: f64,
    p: f64,
}

impl Gadc {
    fn radicand(&self, q: f64) -> f64 {
        let l = self.lambda;
        let shift = (q - self.p) / l + self.p * l;
        l * l + q * q - shift * shift
    }

    fn r(&self, q: f64) -> f64 {
        self.radicand(q).max(0.0).sqrt().min(1.0)
    }

    /// `g(q) = f′(r)(q − p)(1 − λ²) + r λ² f′(q)`.
    fn g(&self, q: f64) -> f64 {
        let l2 = self.lambda * self.lambda;
        let r = self.r(q);
        let fr = if r >= 1.0 {
            f_prime(1.0 - Q_EDGE)
        } else {
            f_prime(r)
        };
        fr * (q - self.p) * (1.0 - l2) + r * l2 * f_prime(q)
    }

    fn chi(&self, q: f64) -> f64 {
        0.5 * (f(self.r(q)) - f(q))
    }

    /// Scan range: where the radicand is non-negative, kept inside (−1, 1).
    fn admissible(&self) -> (f64, f64) {
        let l2 = self.lambda * self.lambda;
        let centre = self.p * (1.0 - l2);
        let lo = (centre - l2).max(-1.0 + Q_EDGE);
        let hi = (centre + l2).min(1.0 - Q_EDGE);
        (lo, hi)
    }
}

/// `χ = [f(r) − f(q)]/2` for the GADC `(λ, λ², p(1−λ²))`, with `q` a root of
/// `f′(r)(q−p)(1−λ²) + rλ²f′(q) = 0` and
/// `r = √(λ² + q² − ((q−p)/λ + pλ)²)`.
///
/// Every sign change of the scan is bisected and the root with the largest
/// χ is returned.
pub fn holevo_gadc(lambda: f64, p: f64) -> Result<HolevoSolve> {
    ensure_range("lambda", lambda, -1.0, 1.0)?;
    ensure_range("p", p, -1.0, 1.0)?;
    let lambda = lambda.abs();
    let exact = |q: f64, r: f64, chi: f64| HolevoSolve {
        q,
        r,
        chi,
        residual: 0.0,
        roots: 1,
        low_confidence: false,
    };
    if lambda == 0.0 {
        return Ok(exact(p, p.abs(), 0.0));
    }
    if lambda == 1.0 {
        return Ok(exact(0.0, 1.0, 1.0));
    }
    if p == 0.0 {
        return Ok(exact(0.0, lambda, 0.5 * f(lambda)));
    }

    let model = Gadc { lambda, p };
    let (lo, hi) = model.admissible();
    if !(hi > lo) {
        return Ok(exact(p, p.abs(), 0.0));
    }
    let g = |q: f64| model.g(q);
    let step = (hi - lo) / (Q_SCAN_POINTS - 1) as f64;
    let grid: Vec<f64> = (0..Q_SCAN_POINTS).map(|i| lo + step * i as f64).collect();
    let values: Vec<f64> = grid.iter().map(|&q| g(q)).collect();

    let mut roots = Vec::new();
    for i in 0..Q_SCAN_POINTS - 1 {
        let (a, b) = (values[i], values[i + 1]);
        if a == 0.0 {
            roots.push(grid[i]);
        } else if (a < 0.0) != (b < 0.0) && b != 0.0 {
            roots.push(bisect(&g, grid[i], grid[i + 1]));
        }
    }
    if values[Q_SCAN_POINTS - 1] == 0.0 {
        roots.push(grid[Q_SCAN_POINTS - 1]);
    }

    let (q, sign_changes) = if roots.is_empty() {
        let i = (0..Q_SCAN_POINTS)
            .min_by(|&a, &b| values[a].abs().total_cmp(&values[b].abs()))
            .unwrap();
        (grid[i], 0)
    } else {
        let best = roots
            .iter()
            .copied()
            .max_by(|&a, &b| model.chi(a).total_cmp(&model.chi(b)))
            .unwrap();
        (best, roots.len())
    };
    let residual = g(q).abs();
    Ok(HolevoSolve {
        q,
        r: model.r(q),
        chi: model.chi(q),
        residual,
        roots: sign_changes,
        low_confidence: sign_changes == 0 || residual > RESIDUAL_TOL,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unital_values() {
        assert_eq!(holevo_unital(1.0).unwrap(), 1.0);
        assert_eq!(holevo_unital(0.0).unwrap(), 0.0);
        assert!((holevo_unital(0.5).unwrap() - 0.188_721_875_540_867).abs() < 1e-12);
        assert!(holevo_unital(1.5).is_err());
    }

    #[test]
    fn unital_reduction() {
        for i in 1..50 {
            let l = i as f64 / 50.0;
            let s = holevo_gadc(l, 0.0).unwrap();
            assert_eq!(s.q, 0.0);
            assert!((s.chi - holevo_unital(l).unwrap()).abs() < 1e-9);
        }
    }

    #[test]
    fn vanishing_lambda_limit() {
        let s = holevo_gadc(1e-9, 0.97).unwrap();
        assert_eq!(s.chi, 0.0);
        assert!(!s.low_confidence);
    }

    #[test]
    fn endpoints() {
        for p in [-1.0, -0.3, 0.0, 0.5, 1.0] {
            assert_eq!(holevo_gadc(1.0, p).unwrap().chi, 1.0);
            assert_eq!(holevo_gadc(0.0, p).unwrap().chi, 0.0);
        }
    }

    #[test]
    fn residual_small_and_symmetric() {
        for &l in &[0.1, 0.3, 0.5, 0.7, 0.9] {
            for &p in &[1.0 / 3.0, 2.0 / 3.0, 0.9, 1.0] {
                let s = holevo_gadc(l, p).unwrap();
                assert!(!s.low_confidence, "({l}, {p}): {s:?}");
                assert!(s.residual < RESIDUAL_TOL);
                assert!(s.chi >= holevo_unital(l).unwrap() - 1e-12);
                assert!(s.chi <= 1.0);
                let m = holevo_gadc(l, -p).unwrap();
                assert!(
                    (s.chi - m.chi).abs() < 1e-8,
                    "({l}, {p}): {} vs {}",
                    s.chi,
                    m.chi
                );
            }
        }
    }

    #[test]
    fn negative_lambda_uses_magnitude() {
        let a = holevo_gadc(-0.4, 0.6).unwrap();
        let b = holevo_gadc(0.4, 0.6).unwrap();
        assert_eq!(a.chi, b.chi);
    }
}
