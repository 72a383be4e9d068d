//! Time-local generators `L(t) = γ+(t) L+ + γ−(t) L− + γ3(t) L3` and the
//! eigenvalues of the maps they produce.

use std::fmt;
use std::sync::Arc;

use crate::channel::{make_channel, PhaseCovariantChannel};
use crate::dynamics::family::GadcFamily;
use crate::error::{Error, Result};

/// Quadrature tolerance for cumulative rates and the λ* integral.
pub const RATE_QUAD_TOL: f64 = 1e-10;

const CELL_MAX_DEPTH: u32 = 40;

pub type RateFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Decoherence rates at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rates {
    pub gamma_plus: f64,
    pub gamma_minus: f64,
    pub gamma3: f64,
}

impl Rates {
    pub fn combine(parts: &[(f64, Rates)]) -> Rates {
        parts.iter().fold(
            Rates {
                gamma_plus: 0.0,
                gamma_minus: 0.0,
                gamma3: 0.0,
            },
            |acc, (w, r)| Rates {
                gamma_plus: acc.gamma_plus + w * r.gamma_plus,
                gamma_minus: acc.gamma_minus + w * r.gamma_minus,
                gamma3: acc.gamma3 + w * r.gamma3,
            },
        )
    }
}

/// Rate functions of a phase-covariant generator.
#[derive(Clone)]
pub struct GeneratorSpec {
    pub gamma_plus: RateFn,
    pub gamma_minus: RateFn,
    pub gamma3: RateFn,
}

impl fmt::Debug for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GeneratorSpec")
            .field("rates(0)", &self.rates(0.0))
            .finish()
    }
}

impl GeneratorSpec {
    pub fn new(
        gamma_plus: impl Fn(f64) -> f64 + Send + Sync + 'static,
        gamma_minus: impl Fn(f64) -> f64 + Send + Sync + 'static,
        gamma3: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            gamma_plus: Arc::new(gamma_plus),
            gamma_minus: Arc::new(gamma_minus),
            gamma3: Arc::new(gamma3),
        }
    }

    pub fn constant(gamma_plus: f64, gamma_minus: f64, gamma3: f64) -> Self {
        Self::new(move |_| gamma_plus, move |_| gamma_minus, move |_| gamma3)
    }

    pub fn rates(&self, t: f64) -> Rates {
        Rates {
            gamma_plus: (self.gamma_plus)(t),
            gamma_minus: (self.gamma_minus)(t),
            gamma3: (self.gamma3)(t),
        }
    }

    /// Linear combination `Σ w_i L_i` of generators.
    pub fn mix(parts: &[(f64, GeneratorSpec)]) -> GeneratorSpec {
        let parts: Arc<Vec<(f64, GeneratorSpec)>> = Arc::new(parts.to_vec());
        let pick = |sel: fn(&GeneratorSpec) -> &RateFn| -> RateFn {
            let parts = Arc::clone(&parts);
            Arc::new(move |t| parts.iter().map(|(w, g)| w * sel(g)(t)).sum())
        };
        GeneratorSpec {
            gamma_plus: pick(|g| &g.gamma_plus),
            gamma_minus: pick(|g| &g.gamma_minus),
            gamma3: pick(|g| &g.gamma3),
        }
    }

    /// Fixed five-point Gauss–Legendre estimate of a cell `[u, v]`:
    /// `[∫(γ+ + γ−), ∫γ3, ∫_u^v (γ+ − γ−)(τ) e^{−∫_τ^v (γ+ + γ−)} dτ]`.
    fn cell_estimate(&self, u: f64, v: f64) -> [f64; 3] {
        let sum_rate = |t: f64| (self.gamma_plus)(t) + (self.gamma_minus)(t);
        let decay = gauss5(&sum_rate, u, v);
        let dephase = gauss5(&*self.gamma3, u, v);
        let source = gauss5(
            &|tau: f64| {
                ((self.gamma_plus)(tau) - (self.gamma_minus)(tau))
                    * (-gauss5(&sum_rate, tau, v)).exp()
            },
            u,
            v,
        );
        [decay, dephase, source]
    }

    /// Adaptive bisection of `[u, v]`, composing the affine cell maps of the
    /// halves until they agree with the whole to `tol`.
    fn cell_adaptive(&self, u: f64, v: f64, whole: [f64; 3], tol: f64, depth: u32) -> [f64; 3] {
        let m = 0.5 * (u + v);
        let left = self.cell_estimate(u, m);
        let right = self.cell_estimate(m, v);
        let joined = compose_cells(left, right);
        let gap = joined
            .iter()
            .zip(whole)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let scale = joined.iter().map(|x| x.abs()).fold(0.0, f64::max);
        if depth == 0 || !gap.is_finite() || gap <= tol || gap <= 64.0 * f64::EPSILON * scale {
            return joined;
        }
        compose_cells(
            self.cell_adaptive(u, m, left, 0.5 * tol, depth - 1),
            self.cell_adaptive(m, v, right, 0.5 * tol, depth - 1),
        )
    }

    /// Transition map from time `a` to time `b ≥ a`:
    ///
    /// ```text
    /// λ1 ← e^{−½∫(γ+ + γ− + γ3)}, λ3 ← e^{−∫(γ+ + γ−)},
    /// λ* ← ∫_a^b (γ+ − γ−)(τ) e^{−∫_τ^b (γ+ + γ−)} dτ
    /// ```
    pub fn transition(&self, a: f64, b: f64) -> Result<[f64; 3]> {
        let [decay, dephase, source] = if a == b {
            [0.0; 3]
        } else {
            self.cell_adaptive(
                a,
                b,
                self.cell_estimate(a, b),
                RATE_QUAD_TOL,
                CELL_MAX_DEPTH,
            )
        };
        let out = [(-0.5 * (decay + dephase)).exp(), (-decay).exp(), source];
        if out.iter().all(|v| v.is_finite()) {
            Ok(out)
        } else {
            Err(Error::Quadrature(format!(
                "non-integrable rates on [{a}, {b}]"
            )))
        }
    }

    /// Propagates the eigenvalue triple `start` (valid at `times[0]`) along a
    /// monotone sequence of times, cell by cell.
    pub fn propagate(&self, start: [f64; 3], times: &[f64]) -> Result<Vec<[f64; 3]>> {
        let mut out = Vec::with_capacity(times.len());
        let Some(&first) = times.first() else {
            return Ok(out);
        };
        let _ = first;
        let mut cur = start;
        out.push(cur);
        for w in times.windows(2) {
            let (a, b) = (w[0], w[1]);
            if b >= a {
                let [e1, e3, src] = self.transition(a, b)?;
                cur = [e1 * cur[0], e3 * cur[1], e3 * cur[2] + src];
            } else {
                // Invert the forward transition b → a.
                let [e1, e3, src] = self.transition(b, a)?;
                cur = [cur[0] / e1, cur[1] / e3, (cur[2] - src) / e3];
            }
            out.push(cur);
        }
        Ok(out)
    }
}

/// Affine composition of consecutive cells `[u, m]` then `[m, v]`.
fn compose_cells(left: [f64; 3], right: [f64; 3]) -> [f64; 3] {
    [
        left[0] + right[0],
        left[1] + right[1],
        (-right[0]).exp() * left[2] + right[2],
    ]
}

fn gauss5(f: &(impl Fn(f64) -> f64 + ?Sized), a: f64, b: f64) -> f64 {
    const NODES: [f64; 5] = [
        0.0,
        0.538_469_310_105_683,
        -0.538_469_310_105_683,
        0.906_179_845_938_664,
        -0.906_179_845_938_664,
    ];
    const WEIGHTS: [f64; 5] = [
        0.568_888_888_888_889,
        0.478_628_670_499_366,
        0.478_628_670_499_366,
        0.236_926_885_056_189,
        0.236_926_885_056_189,
    ];
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    NODES
        .iter()
        .zip(WEIGHTS)
        .map(|(x, w)| w * f(mid + half * x))
        .sum::<f64>()
        * half
}

/// Channel produced at time `t` from the identity at `t = 0`:
/// λ1 = exp{−½[Γ+ + Γ− + Γ3]}, λ3 = exp[−Γ+ − Γ−],
/// λ* = λ3 ∫₀ᵗ (γ+ − γ−) exp[Γ+ + Γ−] dτ.
pub fn eigenvalues_from_rates(g: &GeneratorSpec, t: f64) -> Result<PhaseCovariantChannel> {
    if t == 0.0 {
        return Ok(PhaseCovariantChannel::identity());
    }
    let [l1, l3, ls] = g.transition(0.0, t)?;
    make_channel(l1, l3, ls)
}

/// γ± = −(λ̇/λ)(1 ± p), γ3 = 0.
pub fn gadc_generator(fam: &GadcFamily, t: f64) -> Result<Rates> {
    let lambda = fam.lambda(t);
    if lambda == 0.0 {
        return Err(Error::SingularGenerator(t));
    }
    let g = -fam.profile.derivative(t) / lambda;
    Ok(Rates {
        gamma_plus: g * (1.0 + fam.p),
        gamma_minus: g * (1.0 - fam.p),
        gamma3: 0.0,
    })
}

/// `L_U(t) = −(λ̇/λ)(L+ + L−)`.
pub fn unital_generator(fam: &GadcFamily) -> GeneratorSpec {
    let profile = fam.profile.clone();
    let rate = Arc::new(move |t: f64| -profile.derivative(t) / profile.value(t));
    let (a, b) = (Arc::clone(&rate), rate);
    GeneratorSpec::new(move |t| a(t), move |t| b(t), |_| 0.0)
}

/// `L_NU±(t) = −2(λ̇/λ) L±`.
pub fn maximally_nonunital_generator(fam: &GadcFamily, plus: bool) -> GeneratorSpec {
    let profile = fam.profile.clone();
    let rate = move |t: f64| -2.0 * profile.derivative(t) / profile.value(t);
    if plus {
        GeneratorSpec::new(rate, |_| 0.0, |_| 0.0)
    } else {
        GeneratorSpec::new(|_| 0.0, rate, |_| 0.0)
    }
}

/// `(1 − |p|) L_U + |p| L_NU^{sign p}`.
pub fn mixed_gadc_generator(fam: &GadcFamily) -> GeneratorSpec {
    let w = fam.p.abs();
    GeneratorSpec::mix(&[
        (1.0 - w, unital_generator(fam)),
        (w, maximally_nonunital_generator(fam, fam.p >= 0.0)),
    ])
}
