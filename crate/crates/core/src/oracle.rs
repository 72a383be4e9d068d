//! Brute-force χ and C_E straight from their definitions, used to check the
//! closed forms in [`crate::capacity`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::channel::{apply, PhaseCovariantChannel};
use crate::choi::{complementary_apply, kraus, KrausSet};
use crate::entropy::{binary_entropy, entropy};
use crate::error::{Error, Result};
use crate::numeric::golden_section_max;
use crate::state::{BlochVector, DensityMatrix};

pub const DEFAULT_MAX_STATES: usize = 4;
pub const CHI_RESTARTS: usize = 200;
pub const CE_RESTARTS: usize = 100;
pub const MERIDIAN_ANGLES: usize = 180;
pub const PROB_STEP: f64 = 0.02;
pub const AXIS_STEP: f64 = 1e-3;
/// Off-axis optimum must beat the axis by this much to be flagged.
pub const OFF_AXIS_MARGIN: f64 = 1e-6;

const ASCENT_START_STEP: f64 = 0.25;
const ASCENT_MIN_STEP: f64 = 1e-7;
const ASCENT_MIN_GAIN: f64 = 1e-8;
const ASCENT_MAX_SWEEPS: usize = 5000;

/// Weighted collection of input states.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ensemble {
    pub states: Vec<BlochVector>,
    pub probs: Vec<f64>,
}

impl Ensemble {
    pub fn new(states: Vec<BlochVector>, probs: Vec<f64>) -> Result<Self> {
        if states.len() != probs.len() {
            return Err(Error::LengthMismatch(states.len(), probs.len()));
        }
        let sum: f64 = probs.iter().sum();
        if probs.iter().any(|&p| !(p >= 0.0)) || (sum - 1.0).abs() > 1e-12 {
            return Err(Error::BadWeights(sum));
        }
        for s in &states {
            BlochVector::new(s.x, s.y, s.z)?;
        }
        Ok(Self { states, probs })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum Argmax {
    Ensemble(Ensemble),
    #[serde(rename_all = "camelCase")]
    Input {
        state: BlochVector,
        off_axis_better: bool,
    },
}

/// Best value found by a brute-force search.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub value: f64,
    pub argmax: Argmax,
    pub restarts: usize,
    /// Gain of the last coordinate-ascent sweep of the winning restart.
    pub residual: f64,
}

impl OracleReport {
    /// Whether an input off the z axis beat the best on-axis input.
    pub fn off_axis_better(&self) -> bool {
        matches!(
            self.argmax,
            Argmax::Input {
                off_axis_better: true,
                ..
            }
        )
    }
}

/// `S(Σ p_k Λ[ρ_k]) − Σ p_k S(Λ[ρ_k])`.
pub fn holevo_of_ensemble(ch: &PhaseCovariantChannel, ens: &Ensemble) -> Result<f64> {
    let mut avg = crate::linalg::CMat::zeros(2);
    let mut mean_entropy = 0.0;
    for (s, &p) in ens.states.iter().zip(&ens.probs) {
        let out = apply(ch, &s.to_density())?;
        mean_entropy += p * entropy(out.matrix())?;
        avg = &avg + &out.matrix().scale_real(p);
    }
    Ok(entropy(&avg)? - mean_entropy)
}

/// `S(ρ) + S(Λ[ρ]) − S(Λ^c[ρ])`.
pub fn mutual_information(ch: &PhaseCovariantChannel, rho: &DensityMatrix) -> Result<f64> {
    let out = apply(ch, rho)?;
    let env = complementary_apply(ch, rho)?;
    Ok(entropy(rho.matrix())? + entropy(out.matrix())? - entropy(&env)?)
}

/// Entropy of a qubit state with Bloch radius `r`.
fn radius_entropy(r: f64) -> f64 {
    binary_entropy(0.5 * (1.0 + r.min(1.0)))
}

/// Ensemble of pure states `(θ_k, φ_k)` with weights `u_k² / Σu²`.
struct EnsembleParams {
    k: usize,
}

impl EnsembleParams {
    fn weights(&self, x: &[f64]) -> Vec<f64> {
        let u = &x[2 * self.k..];
        let total: f64 = u.iter().map(|v| v * v).sum();
        if total == 0.0 {
            return vec![1.0 / self.k as f64; self.k];
        }
        u.iter().map(|v| v * v / total).collect()
    }

    fn states(&self, x: &[f64]) -> Vec<BlochVector> {
        (0..self.k)
            .map(|i| BlochVector::from_angles(x[2 * i], x[2 * i + 1]))
            .collect()
    }

    fn chi(&self, ch: &PhaseCovariantChannel, x: &[f64]) -> f64 {
        fast_chi(ch, &self.states(x), &self.weights(x))
    }
}

fn fast_chi(ch: &PhaseCovariantChannel, states: &[BlochVector], probs: &[f64]) -> f64 {
    let (mut ax, mut ay, mut az, mut mean) = (0.0, 0.0, 0.0, 0.0);
    for (s, &p) in states.iter().zip(probs) {
        let o = ch.map_bloch(*s);
        ax += p * o.x;
        ay += p * o.y;
        az += p * o.z;
        mean += p * radius_entropy(o.norm());
    }
    radius_entropy((ax * ax + ay * ay + az * az).sqrt()) - mean
}

/// Coordinate ascent with step halving. Returns `(x, value, last gain)`.
fn coordinate_ascent(
    objective: impl Fn(&[f64]) -> f64,
    mut x: Vec<f64>,
    feasible: impl Fn(&[f64]) -> bool,
) -> (Vec<f64>, f64, f64) {
    let mut best = objective(&x);
    let mut step = ASCENT_START_STEP;
    let mut last_gain = f64::INFINITY;
    for _ in 0..ASCENT_MAX_SWEEPS {
        let before = best;
        for c in 0..x.len() {
            for dir in [1.0, -1.0] {
                let old = x[c];
                x[c] = old + dir * step;
                let v = if feasible(&x) {
                    objective(&x)
                } else {
                    f64::NEG_INFINITY
                };
                if v > best {
                    best = v;
                    break;
                }
                x[c] = old;
            }
        }
        last_gain = best - before;
        if last_gain < ASCENT_MIN_GAIN {
            if step < ASCENT_MIN_STEP {
                break;
            }
            step *= 0.5;
        }
    }
    (x, best, last_gain)
}

fn restart_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Best two-state ensemble in the x–z plane on a grid of angles and
/// probabilities. Returns `(θ_a, θ_b, p_a)`.
fn meridian_search(ch: &PhaseCovariantChannel) -> (f64, f64, f64, f64) {
    let angles: Vec<f64> = (0..MERIDIAN_ANGLES)
        .map(|i| std::f64::consts::TAU * i as f64 / MERIDIAN_ANGLES as f64)
        .collect();
    let n_prob = (1.0 / PROB_STEP).round() as usize;
    (0..MERIDIAN_ANGLES)
        .into_par_iter()
        .map(|i| {
            let mut best = (angles[i], angles[i], 1.0, 0.0);
            let a = BlochVector::from_angles(angles[i], 0.0);
            for j in i + 1..MERIDIAN_ANGLES {
                let b = BlochVector::from_angles(angles[j], 0.0);
                for m in 1..n_prob {
                    let p = m as f64 * PROB_STEP;
                    let v = fast_chi(ch, &[a, b], &[p, 1.0 - p]);
                    if v > best.3 {
                        best = (angles[i], angles[j], p, v);
                    }
                }
            }
            best
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(
            (0.0, 0.0, 1.0, 0.0),
            |acc, c| if c.3 > acc.3 { c } else { acc },
        )
}

/// χ maximized over ensembles of up to `max_states` pure states: a coarse
/// meridian grid, then [`CHI_RESTARTS`] seeded coordinate-ascent restarts
/// over the full sphere for each ensemble size. The value is nondecreasing
/// in `max_states`.
pub fn chi_bruteforce(
    ch: &PhaseCovariantChannel,
    max_states: usize,
    seed: u64,
) -> Result<OracleReport> {
    ch.require_valid()?;
    let single = OracleReport {
        value: 0.0,
        argmax: Argmax::Ensemble(Ensemble::new(vec![BlochVector::ORIGIN], vec![1.0])?),
        restarts: 0,
        residual: 0.0,
    };
    if max_states < 2 {
        return Ok(single);
    }
    let (ta, tb, pa, _) = meridian_search(ch);
    let mut best = single;
    let mut restarts = 0;
    for k in 2..=max_states {
        let params = EnsembleParams { k };
        let results: Vec<(Vec<f64>, f64, f64)> = (0..CHI_RESTARTS)
            .into_par_iter()
            .map(|i| {
                let x0 = if i == 0 {
                    let mut x = vec![0.0; 3 * k];
                    x[0] = ta;
                    x[2] = tb;
                    x[2 * k] = pa.sqrt();
                    x[2 * k + 1] = (1.0 - pa).sqrt();
                    x
                } else {
                    let mut rng = restart_rng(seed, (k * CHI_RESTARTS + i) as u64);
                    let mut x = Vec::with_capacity(3 * k);
                    for _ in 0..k {
                        x.push(rng.gen::<f64>().mul_add(2.0, -1.0).acos());
                        x.push(rng.gen::<f64>() * std::f64::consts::TAU);
                    }
                    for _ in 0..k {
                        x.push(rng.gen::<f64>() + 1e-3);
                    }
                    x
                };
                coordinate_ascent(|x| params.chi(ch, x), x0, |_| true)
            })
            .collect();
        restarts += results.len();
        let winner = results
            .into_iter()
            .reduce(|acc, c| if c.1 > acc.1 { c } else { acc })
            .expect("at least one restart");
        let ens = Ensemble::new(params.states(&winner.0), params.weights(&winner.0))?;
        let value = holevo_of_ensemble(ch, &ens)?;
        if value > best.value {
            best = OracleReport {
                value,
                argmax: Argmax::Ensemble(ens),
                restarts: 0,
                residual: winner.2,
            };
        }
    }
    best.restarts = restarts;
    Ok(best)
}

fn fast_mutual_information(ch: &PhaseCovariantChannel, ks: &KrausSet, v: BlochVector) -> f64 {
    let env = ks.complementary(v.to_density().matrix());
    let s_env = entropy(&env).unwrap_or(f64::NAN);
    radius_entropy(v.norm()) + radius_entropy(ch.map_bloch(v).norm()) - s_env
}

/// C_E maximized over input states: a z-axis grid refined by golden section,
/// then [`CE_RESTARTS`] seeded off-axis coordinate-ascent restarts that test
/// whether leaving the axis helps.
pub fn ce_bruteforce(ch: &PhaseCovariantChannel, seed: u64) -> Result<OracleReport> {
    ch.require_valid()?;
    let ks = kraus(ch)?;
    let on_axis = |z: f64| {
        fast_mutual_information(
            ch,
            &ks,
            BlochVector::new_unchecked(0.0, 0.0, z.clamp(-1.0, 1.0)),
        )
    };
    let n = (2.0 / AXIS_STEP).round() as usize;
    let (mut z_best, mut axis_best) = (-1.0, on_axis(-1.0));
    for i in 1..=n {
        let z = -1.0 + AXIS_STEP * i as f64;
        let v = on_axis(z);
        if v > axis_best {
            z_best = z;
            axis_best = v;
        }
    }
    let (z_ref, v_ref) = golden_section_max(
        &on_axis,
        (z_best - AXIS_STEP).max(-1.0),
        (z_best + AXIS_STEP).min(1.0),
        1e-10,
    );
    if v_ref > axis_best {
        z_best = z_ref;
        axis_best = v_ref;
    }

    let in_ball = |x: &[f64]| x[0] * x[0] + x[1] * x[1] + x[2] * x[2] <= 1.0;
    let results: Vec<(Vec<f64>, f64, f64)> = (0..CE_RESTARTS)
        .into_par_iter()
        .map(|i| {
            let mut rng = restart_rng(seed, i as u64);
            let r = rng.gen::<f64>().cbrt();
            let dir = BlochVector::from_angles(
                rng.gen::<f64>().mul_add(2.0, -1.0).acos(),
                rng.gen::<f64>() * std::f64::consts::TAU,
            );
            let x0 = vec![r * dir.x, r * dir.y, r * dir.z];
            coordinate_ascent(
                |x| fast_mutual_information(ch, &ks, BlochVector::new_unchecked(x[0], x[1], x[2])),
                x0,
                in_ball,
            )
        })
        .collect();
    let off = results
        .into_iter()
        .reduce(|acc, c| if c.1 > acc.1 { c } else { acc })
        .expect("at least one restart");

    let off_axis_better = off.1 > axis_best + OFF_AXIS_MARGIN;
    let (state, residual) = if off.1 > axis_best {
        (
            BlochVector::new_unchecked(off.0[0], off.0[1], off.0[2]),
            off.2,
        )
    } else {
        (BlochVector::new_unchecked(0.0, 0.0, z_best), 0.0)
    };
    let value = mutual_information(ch, &state.to_density())?;
    Ok(OracleReport {
        value,
        argmax: Argmax::Input {
            state,
            off_axis_better,
        },
        restarts: CE_RESTARTS,
        residual,
    })
}
