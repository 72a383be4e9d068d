//! Entanglement-assisted capacity C_E.

use serde::Serialize;

use crate::capacity::holevo::f;
use crate::entropy::{binary_entropy, xlog2x};
use crate::error::{ensure_range, Result};
use crate::numeric::grid_then_golden_max;

pub const GRID_STEP: f64 = 1e-3;
pub const GOLDEN_TOL: f64 = 1e-8;

/// `C_E(Λ_U) = f(λ) = 2χ(Λ_U)`.
pub fn ce_unital(lambda: f64) -> Result<f64> {
    ensure_range("lambda", lambda, -1.0, 1.0)?;
    Ok(f(lambda))
}

/// `F(Λ, z)` and the four environment weights at input `z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CEObjective {
    pub z: f64,
    pub value: f64,
    pub h_plus: f64,
    pub h_minus: f64,
    pub delta_plus: f64,
    pub delta_minus: f64,
}

impl CEObjective {
    pub fn weight_sum(&self) -> f64 {
        self.h_plus + self.h_minus + self.delta_plus + self.delta_minus
    }
}

/// `F = H2((1+z)/2) + H2((1+p+λ²(z−p))/2) + Σ x log2 x` over
/// `h± = (1±z)(1−λ²)(1∓p)/4` and
/// `Δ± = ¼[1 + λ² + zp(1−λ²) ± √(4(λ² + zp(1−λ²)) + (1−λ²)²(p−z)²)]`.
pub fn ce_objective(lambda: f64, p: f64, z: f64) -> CEObjective {
    let l2 = lambda * lambda;
    let damp = 1.0 - l2;
    let h_plus = 0.25 * (1.0 + z) * damp * (1.0 - p);
    let h_minus = 0.25 * (1.0 - z) * damp * (1.0 + p);
    let a = l2 + z * p * damp;
    let root = (4.0 * a + damp * damp * (p - z) * (p - z)).max(0.0).sqrt();
    let delta_plus = 0.25 * (1.0 + a + root);
    let delta_minus = (0.25 * (1.0 + a - root)).max(0.0);
    let value = binary_entropy(0.5 * (1.0 + z))
        + binary_entropy(0.5 * (1.0 + p + l2 * (z - p)))
        + xlog2x(h_plus)
        + xlog2x(h_minus)
        + xlog2x(delta_plus)
        + xlog2x(delta_minus);
    CEObjective {
        z,
        value,
        h_plus,
        h_minus,
        delta_plus,
        delta_minus,
    }
}

/// `max_z F(Λ, z)` over `z ∈ [−1, 1]`; returns `(C_E, argmax z)`.
pub fn ce_gadc(lambda: f64, p: f64) -> Result<(f64, f64)> {
    ensure_range("lambda", lambda, -1.0, 1.0)?;
    ensure_range("p", p, -1.0, 1.0)?;
    let (z, v) = grid_then_golden_max(
        &|z| ce_objective(lambda, p, z).value,
        -1.0,
        1.0,
        GRID_STEP,
        GOLDEN_TOL,
    );
    Ok((v, z))
}

/// Amplitude damping: `max_π [H2(π) + H2(πλ²) − H2(π(1−λ²))]`.
pub fn ce_ad(lambda: f64) -> Result<f64> {
    ensure_range("lambda", lambda, -1.0, 1.0)?;
    let l2 = lambda * lambda;
    let obj =
        |pi: f64| binary_entropy(pi) + binary_entropy(pi * l2) - binary_entropy(pi * (1.0 - l2));
    let (_, v) = grid_then_golden_max(&obj, 0.0, 1.0, GRID_STEP, GOLDEN_TOL);
    Ok(v)
}
