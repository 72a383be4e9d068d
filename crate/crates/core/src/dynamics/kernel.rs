//! Memory-kernel components.
//!
//! Each scalar kernel is `c·δ(t) + smooth(t)`. The delta is kept symbolic and
//! contributes with full weight under convolution and Laplace transform
//! (`L[δ] = 1`). Smooth parts are either closed-form sums of elementary terms
//! (with an exact rational Laplace transform) or samples on a uniform grid.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numeric::{cumulative_trapezoid, interp_uniform};

/// Upper limit for numeric Laplace transforms of sampled functions.
pub const LAPLACE_T_MAX: f64 = 40.0;

/// Elementary smooth term with a rational Laplace transform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelTerm {
    /// `coeff · e^{−rate·t}` ↔ `coeff / (s + rate)`
    Exp { coeff: f64, rate: f64 },
    /// `coeff · t · e^{−rate·t}` ↔ `coeff / (s + rate)²`
    TExp { coeff: f64, rate: f64 },
    /// `coeff · cos(omega·t)` ↔ `coeff · s / (s² + omega²)`
    Cos { coeff: f64, omega: f64 },
}

impl KernelTerm {
    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            KernelTerm::Exp { coeff, rate } => coeff * (-rate * t).exp(),
            KernelTerm::TExp { coeff, rate } => coeff * t * (-rate * t).exp(),
            KernelTerm::Cos { coeff, omega } => coeff * (omega * t).cos(),
        }
    }

    /// `∫₀ᵗ term`.
    pub fn integral(&self, t: f64) -> f64 {
        match *self {
            KernelTerm::Exp { coeff, rate } => {
                if rate.abs() * t < 1e-8 {
                    coeff * t * (1.0 - 0.5 * rate * t)
                } else {
                    coeff * (1.0 - (-rate * t).exp()) / rate
                }
            }
            KernelTerm::TExp { coeff, rate } => {
                if rate.abs() * t < 1e-6 {
                    coeff * t * t * (0.5 - rate * t / 3.0)
                } else {
                    let e = (-rate * t).exp();
                    coeff * (1.0 - e * (1.0 + rate * t)) / (rate * rate)
                }
            }
            KernelTerm::Cos { coeff, omega } => {
                if omega == 0.0 {
                    coeff * t
                } else {
                    coeff * (omega * t).sin() / omega
                }
            }
        }
    }

    pub fn laplace(&self, s: f64) -> f64 {
        match *self {
            KernelTerm::Exp { coeff, rate } => coeff / (s + rate),
            KernelTerm::TExp { coeff, rate } => coeff / ((s + rate) * (s + rate)),
            KernelTerm::Cos { coeff, omega } => coeff * s / (s * s + omega * omega),
        }
    }

    fn scaled(&self, w: f64) -> KernelTerm {
        match *self {
            KernelTerm::Exp { coeff, rate } => KernelTerm::Exp {
                coeff: w * coeff,
                rate,
            },
            KernelTerm::TExp { coeff, rate } => KernelTerm::TExp {
                coeff: w * coeff,
                rate,
            },
            KernelTerm::Cos { coeff, omega } => KernelTerm::Cos {
                coeff: w * coeff,
                omega,
            },
        }
    }

    fn coeff(&self) -> f64 {
        match *self {
            KernelTerm::Exp { coeff, .. }
            | KernelTerm::TExp { coeff, .. }
            | KernelTerm::Cos { coeff, .. } => coeff,
        }
    }
}

/// Smooth part of a kernel.
#[derive(Debug, Clone, PartialEq)]
pub enum Smooth {
    Terms(Vec<KernelTerm>),
    Sampled { dt: f64, values: Arc<Vec<f64>> },
}

/// A scalar memory kernel `delta_weight·δ(t) + smooth(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelComponent {
    pub delta_weight: f64,
    pub smooth: Smooth,
}

impl KernelComponent {
    pub fn zero() -> Self {
        Self {
            delta_weight: 0.0,
            smooth: Smooth::Terms(Vec::new()),
        }
    }

    pub fn delta(weight: f64) -> Self {
        Self {
            delta_weight: weight,
            smooth: Smooth::Terms(Vec::new()),
        }
    }

    pub fn from_terms(delta_weight: f64, terms: Vec<KernelTerm>) -> Self {
        let terms = terms.into_iter().filter(|t| t.coeff() != 0.0).collect();
        Self {
            delta_weight,
            smooth: Smooth::Terms(terms),
        }
    }

    pub fn sampled(delta_weight: f64, dt: f64, values: Vec<f64>) -> Self {
        Self {
            delta_weight,
            smooth: Smooth::Sampled {
                dt,
                values: Arc::new(values),
            },
        }
    }

    /// Whether the smooth part has a closed-form (rational) Laplace transform.
    pub fn has_rational_form(&self) -> bool {
        matches!(self.smooth, Smooth::Terms(_))
    }

    /// Smooth part at `t` (the delta is not included).
    pub fn eval(&self, t: f64) -> f64 {
        match &self.smooth {
            Smooth::Terms(terms) => terms.iter().map(|term| term.eval(t)).sum(),
            Smooth::Sampled { dt, values } => interp_uniform(values, *dt, t),
        }
    }

    /// `∫₀ᵗ smooth`.
    pub fn smooth_integral(&self, t: f64) -> f64 {
        match &self.smooth {
            Smooth::Terms(terms) => terms.iter().map(|term| term.integral(t)).sum(),
            Smooth::Sampled { dt, values } => {
                let cum = cumulative_trapezoid(values, *dt);
                interp_uniform(&cum, *dt, t)
            }
        }
    }

    /// `∫₀ᵗ κ(τ) dτ` with the delta counted at full weight (t ≥ 0).
    pub fn cumulative(&self, t: f64) -> f64 {
        self.delta_weight + self.smooth_integral(t)
    }

    /// Laplace transform `κ̃(s)`: exact for closed-form parts, numeric
    /// otherwise.
    pub fn laplace(&self, s: f64) -> f64 {
        match &self.smooth {
            Smooth::Terms(terms) => {
                self.delta_weight + terms.iter().map(|t| t.laplace(s)).sum::<f64>()
            }
            Smooth::Sampled { dt, values } => {
                self.delta_weight + laplace_of_samples(values, *dt, s)
            }
        }
    }

    /// Numeric Laplace transform of the smooth part by trapezoidal quadrature
    /// on `[0, t_max]`, plus the delta weight.
    pub fn numeric_laplace(&self, s: f64, t_max: f64, dt: f64) -> f64 {
        let n = (t_max / dt).round() as usize;
        let samples: Vec<f64> = (0..=n).map(|i| self.eval(i as f64 * dt)).collect();
        self.delta_weight + laplace_of_samples(&samples, dt, s)
    }

    /// Smooth samples on `t_n = n·dt`, `n = 0..=n_steps`.
    pub fn samples(&self, dt: f64, n_steps: usize) -> Vec<f64> {
        match &self.smooth {
            Smooth::Sampled { dt: own, values } if (own - dt).abs() < 1e-15 * dt.max(1.0) => {
                let mut v: Vec<f64> = values.iter().copied().take(n_steps + 1).collect();
                let last = *values.last().unwrap_or(&0.0);
                v.resize(n_steps + 1, last);
                v
            }
            _ => (0..=n_steps).map(|i| self.eval(i as f64 * dt)).collect(),
        }
    }

    /// Linear combination `Σ w_i κ_i`. Closed-form parts stay closed-form;
    /// any sampled part forces the result onto that sample grid.
    pub fn combine(parts: &[(f64, &KernelComponent)]) -> Result<KernelComponent> {
        let delta_weight = parts.iter().map(|(w, k)| w * k.delta_weight).sum();
        let grid = parts.iter().find_map(|(_, k)| match &k.smooth {
            Smooth::Sampled { dt, values } => Some((*dt, values.len())),
            Smooth::Terms(_) => None,
        });
        match grid {
            None => {
                let terms = parts
                    .iter()
                    .flat_map(|(w, k)| match &k.smooth {
                        Smooth::Terms(ts) => ts.iter().map(|t| t.scaled(*w)).collect::<Vec<_>>(),
                        Smooth::Sampled { .. } => unreachable!(),
                    })
                    .collect();
                Ok(KernelComponent::from_terms(delta_weight, terms))
            }
            Some((dt, len)) => {
                let mut values = vec![0.0; len];
                for (w, k) in parts {
                    if let Smooth::Sampled {
                        dt: other,
                        values: v,
                    } = &k.smooth
                    {
                        if (other - dt).abs() > 1e-12 * dt || v.len() != len {
                            return Err(Error::Degenerate(
                                "cannot combine sampled kernels on different grids".into(),
                            ));
                        }
                    }
                    let s = k.samples(dt, len - 1);
                    for (acc, x) in values.iter_mut().zip(s) {
                        *acc += w * x;
                    }
                }
                Ok(KernelComponent::sampled(delta_weight, dt, values))
            }
        }
    }
}

/// Trapezoidal Laplace transform of uniform samples, truncated at
/// [`LAPLACE_T_MAX`], with the tail estimated as `f(T)·e^{−sT}/s`.
pub fn laplace_of_samples(values: &[f64], dt: f64, s: f64) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let n_max = ((LAPLACE_T_MAX / dt).round() as usize).min(values.len() - 1);
    let mut acc = 0.0;
    for (i, v) in values[..=n_max].iter().enumerate() {
        let w = if i == 0 || i == n_max { 0.5 } else { 1.0 };
        acc += w * v * (-s * i as f64 * dt).exp();
    }
    let t_end = n_max as f64 * dt;
    acc * dt + values[n_max] * (-s * t_end).exp() / s
}

/// The three scalar kernels in `K[σ1] = κ1 σ1`, `K[σ3] = κ3 σ3`,
/// `K[I] = κ* σ3`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelSpec {
    pub kappa1: KernelComponent,
    pub kappa3: KernelComponent,
    pub kappa_star: KernelComponent,
}

impl KernelSpec {
    pub fn zero() -> Self {
        Self {
            kappa1: KernelComponent::zero(),
            kappa3: KernelComponent::zero(),
            kappa_star: KernelComponent::zero(),
        }
    }

    pub fn has_rational_form(&self) -> bool {
        self.kappa1.has_rational_form()
            && self.kappa3.has_rational_form()
            && self.kappa_star.has_rational_form()
    }

    /// Laplace-domain eigenvalues `λ̃1 = 1/(s − κ̃1)`, `λ̃3 = 1/(s − κ̃3)`,
    /// `λ̃* = κ̃*/(s(s − κ̃3))`.
    pub fn laplace_eigenvalues(&self, s: f64) -> [f64; 3] {
        let k1 = self.kappa1.laplace(s);
        let k3 = self.kappa3.laplace(s);
        let ks = self.kappa_star.laplace(s);
        [1.0 / (s - k1), 1.0 / (s - k3), ks / (s * (s - k3))]
    }
}

/// Kernel written in the dissipator basis, `K = k+ L+ + k− L− + k3 L3`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelRates {
    pub k_plus: KernelComponent,
    pub k_minus: KernelComponent,
    pub k3: KernelComponent,
}

impl KernelRates {
    /// Convex (or general linear) mixture of kernels.
    pub fn mix(parts: &[(f64, &KernelRates)]) -> Result<KernelRates> {
        let pick = |f: fn(&KernelRates) -> &KernelComponent| -> Result<KernelComponent> {
            let v: Vec<(f64, &KernelComponent)> = parts.iter().map(|(w, k)| (*w, f(k))).collect();
            KernelComponent::combine(&v)
        };
        Ok(KernelRates {
            k_plus: pick(|k| &k.k_plus)?,
            k_minus: pick(|k| &k.k_minus)?,
            k3: pick(|k| &k.k3)?,
        })
    }
}

/// κ1 = −½(k+ + k− + k3), κ3 = −(k+ + k−), κ* = k+ − k−.
pub fn kernel_from_k(k: &KernelRates) -> Result<KernelSpec> {
    Ok(KernelSpec {
        kappa1: KernelComponent::combine(&[(-0.5, &k.k_plus), (-0.5, &k.k_minus), (-0.5, &k.k3)])?,
        kappa3: KernelComponent::combine(&[(-1.0, &k.k_plus), (-1.0, &k.k_minus)])?,
        kappa_star: KernelComponent::combine(&[(1.0, &k.k_plus), (-1.0, &k.k_minus)])?,
    })
}

/// k± = (−κ3 ± κ*)/2, k3 = κ3 − 2κ1.
pub fn k_from_kernel(kernel: &KernelSpec) -> Result<KernelRates> {
    Ok(KernelRates {
        k_plus: KernelComponent::combine(&[(-0.5, &kernel.kappa3), (0.5, &kernel.kappa_star)])?,
        k_minus: KernelComponent::combine(&[(-0.5, &kernel.kappa3), (-0.5, &kernel.kappa_star)])?,
        k3: KernelComponent::combine(&[(1.0, &kernel.kappa3), (-2.0, &kernel.kappa1)])?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exp(coeff: f64, rate: f64) -> KernelTerm {
        KernelTerm::Exp { coeff, rate }
    }

    #[test]
    fn symmetric_k_gives_unital_kernel() {
        let k = KernelComponent::from_terms(0.3, vec![exp(1.0, 2.0)]);
        let rates = KernelRates {
            k_plus: k.clone(),
            k_minus: k,
            k3: KernelComponent::from_terms(
                0.0,
                vec![KernelTerm::Cos {
                    coeff: 0.4,
                    omega: 1.5,
                }],
            ),
        };
        let spec = kernel_from_k(&rates).unwrap();
        assert_eq!(spec.kappa_star.delta_weight, 0.0);
        for t in [0.0, 0.5, 2.0] {
            assert!(spec.kappa_star.eval(t).abs() < 1e-15);
        }
    }

    #[test]
    fn constant_k_plus() {
        let rates = KernelRates {
            k_plus: KernelComponent::from_terms(0.0, vec![exp(1.0, 0.0)]),
            k_minus: KernelComponent::zero(),
            k3: KernelComponent::zero(),
        };
        let spec = kernel_from_k(&rates).unwrap();
        for t in [0.0, 1.0, 7.0] {
            assert_eq!(spec.kappa1.eval(t), -0.5);
            assert_eq!(spec.kappa3.eval(t), -1.0);
            assert_eq!(spec.kappa_star.eval(t), 1.0);
        }
    }

    #[test]
    fn closed_form_laplace_matches_quadrature() {
        let comp = KernelComponent::from_terms(
            -0.4,
            vec![
                exp(0.7, 1.3),
                KernelTerm::TExp {
                    coeff: -0.2,
                    rate: 0.9,
                },
                KernelTerm::Cos {
                    coeff: 0.5,
                    omega: 2f64.sqrt(),
                },
            ],
        );
        for s in [0.5, 1.0, 2.0] {
            let exact = comp.laplace(s);
            let numeric = comp.numeric_laplace(s, LAPLACE_T_MAX, 1e-3);
            assert!(
                (exact - numeric).abs() < 1e-5,
                "s={s}: {exact} vs {numeric}"
            );
        }
    }

    #[test]
    fn integrals_match_quadrature() {
        let terms = [
            exp(0.7, 1.3),
            exp(2.0, 0.0),
            KernelTerm::TExp {
                coeff: -0.2,
                rate: 0.9,
            },
            KernelTerm::Cos {
                coeff: 0.5,
                omega: 1.7,
            },
        ];
        for term in terms {
            let t = 2.3;
            let num = crate::numeric::adaptive_simpson(&|x| term.eval(x), 0.0, t, 1e-12).unwrap();
            assert!((term.integral(t) - num).abs() < 1e-10, "{term:?}");
        }
    }

    #[test]
    fn combine_sampled_and_terms() {
        let dt = 0.1;
        let sampled = KernelComponent::sampled(0.5, dt, (0..=10).map(|i| i as f64).collect());
        let terms = KernelComponent::from_terms(1.0, vec![exp(1.0, 0.0)]);
        let c = KernelComponent::combine(&[(2.0, &sampled), (-1.0, &terms)]).unwrap();
        assert_eq!(c.delta_weight, 0.0);
        assert!((c.eval(0.3) - (2.0 * 3.0 - 1.0)).abs() < 1e-12);
    }
}
