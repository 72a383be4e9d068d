//! Fixed-step solver for the eigenvalue equations
//!
//! ```text
//! λ̇1 = κ1∗λ1,  λ̇3 = κ3∗λ3,  λ̇* = κ3∗λ* + ∫₀ᵗ κ*(τ) dτ
//! ```
//!
//! with `λ(0) = (1, 1, 0)`. A delta component `c·δ` contributes `c·λ(t)`.
//! Both the time derivative and the memory integral use the trapezoidal rule;
//! each step is linear in the new value, so it is solved for exactly.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::dynamics::kernel::{KernelComponent, KernelSpec, KernelTerm, Smooth};
use crate::error::{Error, Result};
use crate::numeric::cumulative_trapezoid;

/// Largest accepted `T/dt`.
pub const MAX_STEPS: f64 = 1e7;

/// Trajectories abort once any |λ| exceeds this.
pub const BLOWUP: f64 = 10.0;

/// Eigenvalue trajectories on `t_n = n·dt`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectories {
    pub dt: f64,
    pub times: Vec<f64>,
    pub lambda1: Vec<f64>,
    pub lambda3: Vec<f64>,
    pub lambda_star: Vec<f64>,
}

impl Trajectories {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn at(&self, i: usize) -> [f64; 3] {
        [self.lambda1[i], self.lambda3[i], self.lambda_star[i]]
    }
}

/// Running convolution sums `Σ_{j≤n} s(t_n − t_j) y_j`.
enum Memory {
    None,
    /// Sums of (complex) exponentials, updated recursively in O(1) per step.
    Modes(Vec<Mode>),
    /// Arbitrary samples; direct O(n) sum per step.
    Direct(Vec<f64>),
}

struct Mode {
    coeff: C64,
    /// e^{−rate·dt}
    z: C64,
    /// `t·e^{−rate·t}` term
    linear: bool,
    /// Σ z^{n−j} y_j
    p: C64,
    /// Σ (t_n − t_j) z^{n−j} y_j
    q: C64,
}

impl Memory {
    fn new(k: &KernelComponent, dt: f64, n_steps: usize) -> Self {
        match &k.smooth {
            Smooth::Terms(terms) if terms.is_empty() => Memory::None,
            Smooth::Terms(terms) => {
                let mut modes = Vec::new();
                let mut push = |coeff: C64, rate: C64, linear: bool| {
                    modes.push(Mode {
                        coeff,
                        z: (-rate * dt).exp(),
                        linear,
                        p: C64::new(0.0, 0.0),
                        q: C64::new(0.0, 0.0),
                    })
                };
                for term in terms {
                    match *term {
                        KernelTerm::Exp { coeff, rate } => push(coeff.into(), rate.into(), false),
                        KernelTerm::TExp { coeff, rate } => push(coeff.into(), rate.into(), true),
                        KernelTerm::Cos { coeff, omega } => {
                            push((0.5 * coeff).into(), C64::new(0.0, omega), false);
                            push((0.5 * coeff).into(), C64::new(0.0, -omega), false);
                        }
                    }
                }
                Memory::Modes(modes)
            }
            Smooth::Sampled { .. } => Memory::Direct(k.samples(dt, n_steps)),
        }
    }

    /// `Σ_{j=0}^{n} s(t_{n+1} − t_j) y_j` given the history `y[0..=n]`.
    fn lagged_sum(&self, y: &[f64], dt: f64) -> f64 {
        match self {
            Memory::None => 0.0,
            Memory::Modes(modes) => modes
                .iter()
                .map(|m| {
                    if m.linear {
                        (m.coeff * m.z * (m.q + dt * m.p)).re
                    } else {
                        (m.coeff * m.z * m.p).re
                    }
                })
                .sum(),
            Memory::Direct(s) => {
                let n = y.len() - 1;
                (0..=n).map(|j| s[n + 1 - j] * y[j]).sum()
            }
        }
    }

    /// Appends `y_{n+1}` to the running sums.
    fn push(&mut self, y_new: f64, dt: f64) {
        if let Memory::Modes(modes) = self {
            for m in modes {
                m.q = m.z * (m.q + dt * m.p);
                m.p = m.z * m.p + y_new;
            }
        }
    }
}

struct Equation<'a> {
    delta: f64,
    smooth: Vec<f64>,
    memory: Memory,
    forcing: Option<&'a [f64]>,
    name: &'static str,
}

impl<'a> Equation<'a> {
    fn new(
        k: &KernelComponent,
        dt: f64,
        n: usize,
        forcing: Option<&'a [f64]>,
        name: &'static str,
    ) -> Self {
        Self {
            delta: k.delta_weight,
            smooth: k.samples(dt, n),
            memory: Memory::new(k, dt, n),
            forcing,
            name,
        }
    }

    fn solve(mut self, y0: f64, dt: f64, n: usize) -> Result<Vec<f64>> {
        let mut y = Vec::with_capacity(n + 1);
        y.push(y0);
        self.memory.push(y0, dt);
        let s0 = self.smooth[0];
        let force = |i: usize| self.forcing.map_or(0.0, |f| f[i]);
        // (κ∗y)_n = c y_n + dt [Σ_j s_{n−j} y_j − ½ s_n y_0 − ½ s_0 y_n]
        let mut rhs_prev = self.delta * y0 + force(0);
        let implicit = 1.0 - 0.5 * dt * (self.delta + 0.5 * dt * s0);
        for i in 0..n {
            let lagged = self.memory.lagged_sum(&y, dt);
            let known = dt * (lagged - 0.5 * self.smooth[i + 1] * y[0]) + force(i + 1);
            let y_new = (y[i] + 0.5 * dt * (rhs_prev + known)) / implicit;
            if !(y_new.abs() <= BLOWUP) {
                return Err(Error::Unstable {
                    t: (i + 1) as f64 * dt,
                    component: self.name,
                    value: y_new,
                });
            }
            rhs_prev = (self.delta + 0.5 * dt * s0) * y_new + known;
            y.push(y_new);
            self.memory.push(y_new, dt);
        }
        Ok(y)
    }
}

fn steps(t_max: f64, dt: f64) -> Result<usize> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::OutOfRange {
            name: "dt",
            value: dt,
            min: f64::MIN_POSITIVE,
            max: f64::INFINITY,
        });
    }
    if !(t_max >= 0.0) || !t_max.is_finite() {
        return Err(Error::OutOfRange {
            name: "T",
            value: t_max,
            min: 0.0,
            max: f64::INFINITY,
        });
    }
    let ratio = t_max / dt;
    if ratio > MAX_STEPS {
        return Err(Error::OutOfRange {
            name: "T/dt",
            value: ratio,
            min: 0.0,
            max: MAX_STEPS,
        });
    }
    Ok(ratio.round() as usize)
}

/// `K*(t_n) = ∫₀^{t_n} κ*` including the delta, on the solver grid.
fn star_cumulative(kernel: &KernelSpec, dt: f64, n: usize) -> Vec<f64> {
    let smooth = kernel.kappa_star.samples(dt, n);
    cumulative_trapezoid(&smooth, dt)
        .into_iter()
        .map(|v| v + kernel.kappa_star.delta_weight)
        .collect()
}

pub fn volterra_solve(kernel: &KernelSpec, t_max: f64, dt: f64) -> Result<Trajectories> {
    let n = steps(t_max, dt)?;
    let forcing = star_cumulative(kernel, dt, n);
    let lambda1 = Equation::new(&kernel.kappa1, dt, n, None, "lambda1").solve(1.0, dt, n)?;
    let lambda3 = Equation::new(&kernel.kappa3, dt, n, None, "lambda3").solve(1.0, dt, n)?;
    let lambda_star =
        Equation::new(&kernel.kappa3, dt, n, Some(&forcing), "lambda_star").solve(0.0, dt, n)?;
    Ok(Trajectories {
        dt,
        times: (0..=n).map(|i| i as f64 * dt).collect(),
        lambda1,
        lambda3,
        lambda_star,
    })
}

/// Largest `|λ*(t) − (K*∗λ3)(t)|` over the grid, with `K*(t) = ∫₀ᵗ κ*`.
pub fn convolution_identity_check(kernel: &KernelSpec, traj: &Trajectories) -> f64 {
    let n = traj.len().saturating_sub(1);
    let dt = traj.dt;
    let big_k = star_cumulative(kernel, dt, n);
    let l3 = &traj.lambda3;
    let mut worst: f64 = 0.0;
    for i in 0..=n {
        let conv = if i == 0 {
            0.0
        } else {
            let inner: f64 = (1..i).map(|j| big_k[i - j] * l3[j]).sum();
            dt * (inner + 0.5 * (big_k[i] * l3[0] + big_k[0] * l3[i]))
        };
        worst = worst.max((traj.lambda_star[i] - conv).abs());
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::kernel::KernelTerm;

    #[test]
    fn zero_kernel_is_identity() {
        let tr = volterra_solve(&KernelSpec::zero(), 2.0, 1e-2).unwrap();
        assert_eq!(tr.len(), 201);
        for i in 0..tr.len() {
            assert_eq!(tr.at(i), [1.0, 1.0, 0.0]);
        }
    }

    #[test]
    fn delta_kernel_semigroup() {
        let gamma = 1.7;
        let mut k = KernelSpec::zero();
        k.kappa1 = KernelComponent::delta(-gamma);
        let tr = volterra_solve(&k, 5.0, 1e-3).unwrap();
        for (t, l) in tr.times.iter().zip(&tr.lambda1) {
            assert!((l - (-gamma * t).exp()).abs() < 1e-6);
        }
    }

    #[test]
    fn recursive_and_direct_memory_agree() {
        let terms = vec![
            KernelTerm::Exp {
                coeff: -0.4,
                rate: 0.7,
            },
            KernelTerm::TExp {
                coeff: 0.3,
                rate: 1.1,
            },
            KernelTerm::Cos {
                coeff: -0.5,
                omega: 1.3,
            },
        ];
        let closed = KernelComponent::from_terms(-0.2, terms);
        let dt = 1e-2;
        let n = 500;
        let sampled = KernelComponent::sampled(-0.2, dt, closed.samples(dt, n));
        let mk = |c: &KernelComponent| KernelSpec {
            kappa1: c.clone(),
            kappa3: c.clone(),
            kappa_star: c.clone(),
        };
        let a = volterra_solve(&mk(&closed), 5.0, dt).unwrap();
        let b = volterra_solve(&mk(&sampled), 5.0, dt).unwrap();
        for i in 0..a.len() {
            for (x, y) in a.at(i).iter().zip(b.at(i)) {
                assert!((x - y).abs() < 1e-12, "step {i}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn rejects_bad_grid_and_blowup() {
        assert!(volterra_solve(&KernelSpec::zero(), 1.0, 0.0).is_err());
        assert!(volterra_solve(&KernelSpec::zero(), 1e6, 1e-3).is_err());
        let mut k = KernelSpec::zero();
        k.kappa3 = KernelComponent::delta(3.0);
        assert!(matches!(
            volterra_solve(&k, 5.0, 1e-3),
            Err(Error::Unstable { .. })
        ));
    }

    #[test]
    fn unital_kernel_has_zero_convolution_residual() {
        let mut k = KernelSpec::zero();
        k.kappa3 = KernelComponent::delta(-1.0);
        let tr = volterra_solve(&k, 3.0, 1e-3).unwrap();
        assert_eq!(convolution_identity_check(&k, &tr), 0.0);
    }
}
