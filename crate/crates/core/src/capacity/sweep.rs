//! Capacities along a GADC trajectory and the windows where the Holevo
//! capacity of the non-unital map beats C_E of the unital one.

use rayon::prelude::*;
use serde::Serialize;

use crate::capacity::{capacity_bounds_gadc, ce_unital, holevo_gadc, holevo_unital};
use crate::dynamics::GadcFamily;
use crate::error::{Error, Result};

/// One row of a capacity sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CapacityPoint {
    pub t: f64,
    pub lambda: f64,
    pub p: f64,
    pub chi: f64,
    pub c_e: f64,
    pub chi_unital: f64,
    pub c_e_unital: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<String>,
}

fn point(fam: &GadcFamily, t: f64) -> CapacityPoint {
    let lambda = fam.lambda(t).clamp(-1.0, 1.0);
    let mut flags = Vec::new();
    let mut row = CapacityPoint {
        t,
        lambda,
        p: fam.p,
        chi: f64::NAN,
        c_e: f64::NAN,
        chi_unital: f64::NAN,
        c_e_unital: f64::NAN,
        flags: Vec::new(),
    };
    match capacity_bounds_gadc(lambda, fam.p) {
        Ok(b) => {
            row.chi = b.lower;
            row.c_e = b.upper;
            if b.low_confidence {
                flags.push("low-confidence q root".to_string());
            }
        }
        Err(e) => flags.push(e.to_string()),
    }
    match (holevo_unital(lambda), ce_unital(lambda)) {
        (Ok(chi), Ok(ce)) => {
            row.chi_unital = chi;
            row.c_e_unital = ce;
        }
        (Err(e), _) | (_, Err(e)) => flags.push(e.to_string()),
    }
    row.flags = flags;
    row
}

/// `steps` rows on a uniform grid over `[0, t_max]`. Rows whose solver fails
/// carry NaN values and a flag instead of aborting the sweep.
pub fn trajectory(fam: &GadcFamily, t_max: f64, steps: usize) -> Result<Vec<CapacityPoint>> {
    if steps < 2 {
        return Err(Error::OutOfRange {
            name: "steps",
            value: steps as f64,
            min: 2.0,
            max: f64::INFINITY,
        });
    }
    if !(t_max > 0.0) || !t_max.is_finite() {
        return Err(Error::OutOfRange {
            name: "t_max",
            value: t_max,
            min: 0.0,
            max: f64::INFINITY,
        });
    }
    Ok((0..steps)
        .into_par_iter()
        .map(|i| point(fam, t_max * i as f64 / (steps - 1) as f64))
        .collect())
}

/// Time interval `[start, end]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Window {
    pub start: f64,
    pub end: f64,
}

/// Capacities below this many bits are dominated by roundoff in the
/// closed forms, so their difference carries no sign information.
pub const RESOLUTION_FLOOR: f64 = 1e-10;

/// `χ[λ(t), p] − C_E_unital[λ(t)]`, or `None` when both sides lie below
/// [`RESOLUTION_FLOOR`].
fn resolved_excess(fam: &GadcFamily, t: f64) -> Option<f64> {
    let lambda = fam.lambda(t).clamp(-1.0, 1.0);
    match (holevo_gadc(lambda, fam.p), ce_unital(lambda)) {
        (Ok(h), Ok(ce)) if h.chi.max(ce) >= RESOLUTION_FLOOR => Some(h.chi - ce),
        (Ok(_), Ok(_)) => None,
        _ => Some(f64::NAN),
    }
}

fn excess(fam: &GadcFamily, t: f64) -> f64 {
    resolved_excess(fam, t).unwrap_or(0.0)
}

/// Locates the sign change of `excess` between `inside` (positive) and
/// `outside` to within `tol`.
fn refine(fam: &GadcFamily, mut inside: f64, mut outside: f64, tol: f64) -> f64 {
    while (inside - outside).abs() > tol {
        let mid = 0.5 * (inside + outside);
        if excess(fam, mid) > 0.0 {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    0.5 * (inside + outside)
}

/// Intervals in `[0, t_max]` where `χ[λ(t), p] > C_E_unital[λ(t)]`, found on
/// the grid `t_n = n·dt` and refined by bisection to `dt/100`. Windows
/// separated by a single grid point (an isolated zero of λ, where both
/// sides vanish) are merged, and unresolved points below
/// [`RESOLUTION_FLOOR`] keep the state of the preceding point.
pub fn crossing_windows(fam: &GadcFamily, t_max: f64, dt: f64) -> Result<Vec<Window>> {
    if !(dt > 0.0) || !(t_max > 0.0) {
        return Err(Error::Degenerate(
            "crossing search needs t_max > 0 and dt > 0".into(),
        ));
    }
    if fam.p == 0.0 {
        return Ok(Vec::new());
    }
    let n = (t_max / dt).round() as usize;
    let times: Vec<f64> = (0..=n).map(|i| i as f64 * dt).collect();
    let resolved: Vec<Option<bool>> = times
        .par_iter()
        .map(|&t| resolved_excess(fam, t).map(|e| e > 0.0))
        .collect();
    let above: Vec<bool> = resolved
        .iter()
        .scan(false, |state, r| {
            *state = r.unwrap_or(*state);
            Some(*state)
        })
        .collect();

    let mut runs: Vec<(usize, usize)> = Vec::new();
    let mut i = 0;
    while i <= n {
        if above[i] {
            let start = i;
            while i < n && above[i + 1] {
                i += 1;
            }
            match runs.last_mut() {
                Some(last) if start - last.1 <= 2 => last.1 = i,
                _ => runs.push((start, i)),
            }
        }
        i += 1;
    }

    let tol = dt / 100.0;
    Ok(runs
        .into_iter()
        .map(|(a, b)| Window {
            start: if a == 0 {
                0.0
            } else {
                refine(fam, times[a], times[a - 1], tol)
            },
            end: if b == n {
                times[n]
            } else {
                refine(fam, times[b], times[b + 1], tol)
            },
        })
        .collect())
}
