//! Holevo and entanglement-assisted capacities, bounds on the classical
//! capacity, and capacity trajectories of GADC dynamical maps.

pub mod assisted;
pub mod holevo;
pub mod sweep;

pub use assisted::{ce_ad, ce_gadc, ce_objective, ce_unital, CEObjective};
pub use holevo::{holevo_gadc, holevo_unital, HolevoSolve};
pub use sweep::{crossing_windows, trajectory, CapacityPoint, Window};

use serde::Serialize;

use crate::channel::PhaseCovariantChannel;
use crate::error::{ensure_range, Error, Result};

/// Tolerance for recognising the GADC shape `λ3 = λ1²`, `λ* = p(1 − λ1²)`.
pub const SHAPE_TOL: f64 = 1e-12;

/// `χ ≤ C ≤ C_E`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bounds {
    pub lambda: f64,
    pub p: f64,
    pub lower: f64,
    pub upper: f64,
    pub low_confidence: bool,
}

/// Recovers `(λ, p)` from a channel of the GADC shape.
pub fn gadc_parameters(ch: &PhaseCovariantChannel) -> Result<(f64, f64)> {
    let [l1, l3, ls] = ch.params();
    if (l3 - l1 * l1).abs() > SHAPE_TOL {
        return Err(Error::NotGadc(format!(
            "lambda3 = {l3} differs from lambda1^2 = {}",
            l1 * l1
        )));
    }
    let damp = 1.0 - l1 * l1;
    if damp <= SHAPE_TOL {
        if ls.abs() > SHAPE_TOL {
            return Err(Error::NotGadc(format!(
                "|lambda1| = 1 requires lambdaStar = 0, got {ls}"
            )));
        }
        return Ok((l1, 0.0));
    }
    let p = ls / damp;
    if p.abs() > 1.0 + SHAPE_TOL {
        return Err(Error::NotGadc(format!("implied p = {p} outside [-1, 1]")));
    }
    Ok((l1, p.clamp(-1.0, 1.0)))
}

/// Lower and upper bound on the classical capacity of `gadc(λ, p)`.
pub fn capacity_bounds_gadc(lambda: f64, p: f64) -> Result<Bounds> {
    ensure_range("lambda", lambda, -1.0, 1.0)?;
    ensure_range("p", p, -1.0, 1.0)?;
    let (lower, upper, low_confidence) = if p == 0.0 {
        let chi = holevo_unital(lambda)?;
        (chi, ce_unital(lambda)?, false)
    } else {
        let h = holevo_gadc(lambda, p)?;
        let upper = if p.abs() == 1.0 {
            ce_ad(lambda)?
        } else {
            ce_gadc(lambda, p)?.0
        };
        (h.chi, upper, h.low_confidence)
    };
    Ok(Bounds {
        lambda,
        p,
        lower,
        upper,
        low_confidence,
    })
}

pub fn capacity_bounds(ch: &PhaseCovariantChannel) -> Result<Bounds> {
    ch.require_valid()?;
    let (lambda, p) = gadc_parameters(ch)?;
    capacity_bounds_gadc(lambda, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{gadc, make_channel};

    #[test]
    fn unital_bounds() {
        let b = capacity_bounds(&gadc(0.5, 0.0).unwrap()).unwrap();
        assert_eq!(b.lower, holevo_unital(0.5).unwrap());
        assert_eq!(b.upper, 2.0 * b.lower);
    }

    #[test]
    fn identity_bounds() {
        let b = capacity_bounds(&PhaseCovariantChannel::identity()).unwrap();
        assert_eq!((b.lower, b.upper), (1.0, 2.0));
        let b = capacity_bounds_gadc(1.0, 0.7).unwrap();
        assert!((b.lower - 1.0).abs() < 1e-12 && (b.upper - 2.0).abs() < 1e-12);
    }

    #[test]
    fn ordered_pair() {
        let b = capacity_bounds(&gadc(0.7, 0.9).unwrap()).unwrap();
        assert!(b.lower <= b.upper);
        assert!((b.p - 0.9).abs() < 1e-12);
    }

    #[test]
    fn rejects_other_shapes() {
        let ch = make_channel(0.5, 0.3, 0.2).unwrap();
        assert!(matches!(capacity_bounds(&ch), Err(Error::NotGadc(_))));
    }
}
