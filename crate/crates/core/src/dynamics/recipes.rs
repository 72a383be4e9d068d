//! Kernel construction from the ℓ-parameterization
//! `λ_j(t) = 1 − ∫₀ᵗ ℓ_j`, `λ*(t) = −∫₀ᵗ ℓ*`.
//!
//! With the resolvent `m = ℓ + ℓ∗m` (that is `m̃ = ℓ̃/(1 − ℓ̃)`), the kernel
//! `κ̃ = −s·m̃` is `κ(t) = −m(0)·δ(t) − m′(t)`. For κ* the resolvent is
//! `m* = ℓ* + ℓ3∗m*`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::dynamics::family::{sample_derivative, GadcFamily, Profile};
use crate::dynamics::kernel::{
    kernel_from_k, laplace_of_samples, KernelComponent, KernelRates, KernelSpec, KernelTerm,
};
use crate::error::{ensure_finite, Error, Result};
use crate::numeric::{cumulative_trapezoid, interp_uniform};

/// Slack for the admissibility inequalities, which are tight (equalities)
/// for several textbook parameter choices.
pub const CONDITION_TOL: f64 = 1e-12;

/// Number of sample times used for condition reports.
pub const CONDITION_SAMPLES: usize = 2001;

/// `h(ξ, t) = (1 − e^{−ξt})/ξ`, with `h(0, t) = t`.
pub fn h_decay(xi: f64, t: f64) -> f64 {
    if xi.abs() * t < 1e-8 {
        t * (1.0 - 0.5 * xi * t)
    } else {
        -(-xi * t).exp_m1() / xi
    }
}

/// One of the functions `ℓ1, ℓ3, ℓ*`.
#[derive(Debug, Clone, PartialEq)]
pub enum EllFunction {
    /// `amplitude · e^{−rate·t}`
    Exponential {
        amplitude: f64,
        rate: f64,
    },
    Sampled {
        dt: f64,
        values: Arc<Vec<f64>>,
    },
}

impl EllFunction {
    pub fn zero() -> Self {
        EllFunction::Exponential {
            amplitude: 0.0,
            rate: 0.0,
        }
    }

    pub fn exponential(amplitude: f64, rate: f64) -> Self {
        EllFunction::Exponential { amplitude, rate }
    }

    pub fn sampled(dt: f64, values: Vec<f64>) -> Self {
        EllFunction::Sampled {
            dt,
            values: Arc::new(values),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            EllFunction::Exponential { amplitude, rate } => amplitude * (-rate * t).exp(),
            EllFunction::Sampled { dt, values } => interp_uniform(values, *dt, t),
        }
    }

    /// `∫₀ᵗ ℓ`.
    pub fn integral(&self, t: f64) -> f64 {
        match self {
            EllFunction::Exponential { amplitude, rate } => amplitude * h_decay(*rate, t),
            EllFunction::Sampled { dt, values } => {
                let cum = cumulative_trapezoid(values, *dt);
                interp_uniform(&cum, *dt, t)
            }
        }
    }

    pub fn laplace(&self, s: f64) -> f64 {
        match self {
            EllFunction::Exponential { amplitude, rate } => amplitude / (s + rate),
            EllFunction::Sampled { dt, values } => laplace_of_samples(values, *dt, s),
        }
    }

    pub fn scaled(&self, w: f64) -> Self {
        match self {
            EllFunction::Exponential { amplitude, rate } => EllFunction::Exponential {
                amplitude: w * amplitude,
                rate: *rate,
            },
            EllFunction::Sampled { dt, values } => {
                EllFunction::sampled(*dt, values.iter().map(|v| w * v).collect())
            }
        }
    }

    fn samples(&self, dt: f64, n_steps: usize) -> Vec<f64> {
        (0..=n_steps).map(|i| self.eval(i as f64 * dt)).collect()
    }

    fn sample_dt(&self) -> Option<f64> {
        match self {
            EllFunction::Sampled { dt, .. } => Some(*dt),
            EllFunction::Exponential { .. } => None,
        }
    }
}

/// The triple `(ℓ1, ℓ3, ℓ*)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EllParameterization {
    pub ell1: EllFunction,
    pub ell3: EllFunction,
    pub ell_star: EllFunction,
}

impl EllParameterization {
    pub fn zero() -> Self {
        Self {
            ell1: EllFunction::zero(),
            ell3: EllFunction::zero(),
            ell_star: EllFunction::zero(),
        }
    }

    /// `(λ1, λ3, λ*)` at `t`.
    pub fn eigenvalues(&self, t: f64) -> [f64; 3] {
        [
            1.0 - self.ell1.integral(t),
            1.0 - self.ell3.integral(t),
            -self.ell_star.integral(t),
        ]
    }

    /// Conditions (C1) `|∫ℓ*| ≤ ∫ℓ3` and (C2)
    /// `½(∫ℓ3 + |∫ℓ*|) ≤ ∫ℓ1 ≤ 2 − ½(∫ℓ3 + |∫ℓ*|)` on `n` points of `[0, t_max]`.
    pub fn conditions(&self, t_max: f64, n: usize) -> Vec<Check> {
        let mut c1 = Check::new("C1: |int l*| <= int l3");
        let mut c2 = Check::new("C2: (int l3 + |int l*|)/2 <= int l1 <= 2 - (int l3 + |int l*|)/2");
        let n = n.max(2);
        for i in 0..n {
            let t = t_max * i as f64 / (n - 1) as f64;
            let i1 = self.ell1.integral(t);
            let i3 = self.ell3.integral(t);
            let is = self.ell_star.integral(t).abs();
            c1.record(t, i3 - is);
            let half = 0.5 * (i3 + is);
            c2.record(t, (i1 - half).min(2.0 - half - i1));
        }
        vec![c1, c2]
    }
}

/// Outcome of one sampled inequality: the smallest margin seen and where.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub worst_margin: f64,
    pub worst_t: Option<f64>,
}

impl Check {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            passed: true,
            worst_margin: f64::INFINITY,
            worst_t: None,
        }
    }

    fn fixed(name: &'static str, margin: f64) -> Self {
        Self {
            name,
            passed: margin >= -CONDITION_TOL,
            worst_margin: margin,
            worst_t: None,
        }
    }

    fn record(&mut self, t: f64, margin: f64) {
        if margin < self.worst_margin {
            self.worst_margin = margin;
            self.worst_t = Some(t);
        }
        if !(margin >= -CONDITION_TOL) {
            self.passed = false;
        }
    }
}

/// A constructed kernel together with its target eigenvalues and the
/// sufficient conditions that were checked.
#[derive(Debug, Clone)]
pub struct KernelRecipe {
    pub kernel: KernelSpec,
    pub closed_form: EllParameterization,
    pub checks: Vec<Check>,
}

impl KernelRecipe {
    pub fn admissible(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// `κ = −cδ + c(ξ−c)e^{−(ξ−c)t}` for `ℓ = c·e^{−ξt}`.
fn exp_kernel(c: f64, xi: f64) -> KernelComponent {
    KernelComponent::from_terms(
        -c,
        vec![KernelTerm::Exp {
            coeff: c * (xi - c),
            rate: xi - c,
        }],
    )
}

/// κ* for `ℓ* = c*·e^{−ξ*t}` and `ℓ3 = c3·e^{−ξ3t}`.
fn exp_star_kernel(c_star: f64, xi_star: f64, c3: f64, xi3: f64) -> KernelComponent {
    let a = xi3 - c3;
    let gap = xi_star - a;
    if gap.abs() < 1e-9 * (1.0 + xi_star.abs()) {
        // Double pole: m* = c*(1 + c3 t) e^{−ξ* t}.
        return KernelComponent::from_terms(
            -c_star,
            vec![
                KernelTerm::Exp {
                    coeff: -c_star * (c3 - xi_star),
                    rate: xi_star,
                },
                KernelTerm::TExp {
                    coeff: c_star * xi_star * c3,
                    rate: xi_star,
                },
            ],
        );
    }
    let amp_star = c_star * (xi3 - xi_star) / (a - xi_star);
    let amp_a = c_star * c3 / gap;
    KernelComponent::from_terms(
        -c_star,
        vec![
            KernelTerm::Exp {
                coeff: amp_star * xi_star,
                rate: xi_star,
            },
            KernelTerm::Exp {
                coeff: amp_a * a,
                rate: a,
            },
        ],
    )
}

/// Samples of the resolvent `m = f + g∗m` (trapezoidal rule).
fn resolvent(f: &[f64], g: &[f64], dt: f64) -> Vec<f64> {
    let n = f.len();
    let mut m = vec![0.0; n];
    if n == 0 {
        return m;
    }
    m[0] = f[0];
    let denom = 1.0 - 0.5 * dt * g[0];
    for i in 1..n {
        let mut acc = 0.5 * g[i] * m[0];
        for j in 1..i {
            acc += g[i - j] * m[j];
        }
        m[i] = (f[i] + dt * acc) / denom;
    }
    m
}

fn kernel_from_resolvent(m: &[f64], dt: f64) -> KernelComponent {
    let dm = sample_derivative(m, dt);
    KernelComponent::sampled(-m[0], dt, dm.into_iter().map(|v| -v).collect())
}

/// Kernel `κ̃1 = −sℓ̃1/(1−ℓ̃1)`, `κ̃3 = −sℓ̃3/(1−ℓ̃3)`, `κ̃* = −sℓ̃*/(1−ℓ̃3)`.
///
/// Exponential ℓ's give closed-form kernels; otherwise the resolvent is
/// computed on a grid of spacing `dt` (or the sample spacing of the ℓ's)
/// up to `t_max`. Conditions are reported on `[0, t_max]`.
pub fn theorem1_kernel(ell: &EllParameterization, t_max: f64, dt: f64) -> Result<KernelRecipe> {
    ensure_finite("t_max", t_max)?;
    let all_exp = [&ell.ell1, &ell.ell3, &ell.ell_star]
        .iter()
        .all(|e| matches!(e, EllFunction::Exponential { .. }));
    let kernel = if all_exp {
        let (c1, x1) = exp_params(&ell.ell1);
        let (c3, x3) = exp_params(&ell.ell3);
        let (cs, xs) = exp_params(&ell.ell_star);
        KernelSpec {
            kappa1: exp_kernel(c1, x1),
            kappa3: exp_kernel(c3, x3),
            kappa_star: exp_star_kernel(cs, xs, c3, x3),
        }
    } else {
        let dt = [&ell.ell1, &ell.ell3, &ell.ell_star]
            .iter()
            .find_map(|e| e.sample_dt())
            .unwrap_or(dt);
        if !(dt > 0.0) || !(t_max > 0.0) {
            return Err(Error::Degenerate(
                "numeric resolvent needs dt > 0 and t_max > 0".into(),
            ));
        }
        let n = (t_max / dt).round() as usize;
        let l1 = ell.ell1.samples(dt, n);
        let l3 = ell.ell3.samples(dt, n);
        let ls = ell.ell_star.samples(dt, n);
        KernelSpec {
            kappa1: kernel_from_resolvent(&resolvent(&l1, &l1, dt), dt),
            kappa3: kernel_from_resolvent(&resolvent(&l3, &l3, dt), dt),
            kappa_star: kernel_from_resolvent(&resolvent(&ls, &l3, dt), dt),
        }
    };
    Ok(KernelRecipe {
        kernel,
        closed_form: ell.clone(),
        checks: ell.conditions(t_max, CONDITION_SAMPLES),
    })
}

fn exp_params(e: &EllFunction) -> (f64, f64) {
    match e {
        EllFunction::Exponential { amplitude, rate } => (*amplitude, *rate),
        EllFunction::Sampled { .. } => unreachable!("checked by caller"),
    }
}

/// Exponential family `ℓ_μ = η e^{−ξ_μ t}` with `ξ* ≥ ξ3 ≥ ξ1 ≥ η ≥ 0`.
///
/// The kernel is written out term by term rather than through
/// [`theorem1_kernel`], so the two can be compared.
pub fn example1_kernel(
    eta: f64,
    xi1: f64,
    xi3: f64,
    xi_star: f64,
    t_max: f64,
) -> Result<KernelRecipe> {
    for (name, v) in [
        ("eta", eta),
        ("xi1", xi1),
        ("xi3", xi3),
        ("xiStar", xi_star),
    ] {
        ensure_finite(name, v)?;
    }
    if !(xi_star >= xi3 && xi3 >= xi1 && xi1 >= eta && eta >= 0.0) {
        return Err(Error::Ordering(format!(
            "need xiStar >= xi3 >= xi1 >= eta >= 0, got xiStar={xi_star}, xi3={xi3}, xi1={xi1}, eta={eta}"
        )));
    }
    let kappa = |xi: f64| {
        KernelComponent::from_terms(
            -eta,
            vec![KernelTerm::Exp {
                coeff: eta * (xi - eta),
                rate: xi - eta,
            }],
        )
    };
    let kappa_star = if eta == 0.0 {
        KernelComponent::zero()
    } else {
        let norm = eta / (eta + xi_star - xi3);
        KernelComponent::from_terms(
            -eta,
            vec![
                KernelTerm::Exp {
                    coeff: norm * eta * (xi3 - eta),
                    rate: xi3 - eta,
                },
                KernelTerm::Exp {
                    coeff: norm * xi_star * (xi_star - xi3),
                    rate: xi_star,
                },
            ],
        )
    };
    let ell = EllParameterization {
        ell1: EllFunction::exponential(eta, xi1),
        ell3: EllFunction::exponential(eta, xi3),
        ell_star: EllFunction::exponential(eta, xi_star),
    };
    Ok(KernelRecipe {
        kernel: KernelSpec {
            kappa1: kappa(xi1),
            kappa3: kappa(xi3),
            kappa_star,
        },
        checks: ell.conditions(t_max, CONDITION_SAMPLES),
        closed_form: ell,
    })
}

/// Single-function kernel: `ℓ1 = ℓ/a1`, `ℓ3 = ℓ/a3`, `ℓ* = ∓ℓ/a*`, so that
/// `λ_j = 1 − ∫ℓ/a_j` and `λ* = ±∫ℓ/a*`.
pub fn single_function_kernel(
    a1: f64,
    a3: f64,
    a_star: f64,
    ell: &EllFunction,
    sign: f64,
    t_max: f64,
    dt: f64,
) -> Result<KernelRecipe> {
    for (name, v) in [("a1", a1), ("a3", a3), ("aStar", a_star)] {
        ensure_finite(name, v)?;
        if v <= 0.0 {
            return Err(Error::Recipe(format!("{name} must be positive, got {v}")));
        }
    }
    if sign != 1.0 && sign != -1.0 {
        return Err(Error::Recipe(format!("sign must be +1 or -1, got {sign}")));
    }
    let param = EllParameterization {
        ell1: ell.scaled(1.0 / a1),
        ell3: ell.scaled(1.0 / a3),
        ell_star: ell.scaled(-sign / a_star),
    };
    let mut recipe = theorem1_kernel(&param, t_max, dt)?;

    let bound = 4.0 / (2.0 / a1 + 1.0 / a3 + 1.0 / a_star);
    let mut nonneg = Check::new("int l >= 0");
    let mut upper = Check::new("int l <= 4 (2/a1 + 1/a3 + 1/aStar)^-1");
    for i in 0..CONDITION_SAMPLES {
        let t = t_max * i as f64 / (CONDITION_SAMPLES - 1) as f64;
        let integral = ell.integral(t);
        nonneg.record(t, integral);
        upper.record(t, bound - integral);
    }
    let mut checks = vec![
        Check::fixed("a3 <= aStar", a_star - a3),
        Check::fixed(
            "a1 <= 2 a3 aStar/(a3 + aStar)",
            2.0 * a3 * a_star / (a3 + a_star) - a1,
        ),
        nonneg,
        upper,
    ];
    checks.append(&mut recipe.checks);
    recipe.checks = checks;
    Ok(recipe)
}

/// Kernel of the GADC family through the mixture
/// `K = (1 − |p|) K_U + |p| K_NU^{sign p}` with
/// `K_U = −(κ3/2)(L+ + L−) + (κ3 − 2κ1) L3` and
/// `K_NU± = −κ3 L± + (κ3 − 2κ1) L3`.
pub fn gadc_kernel(fam: &GadcFamily, t_max: f64, dt: f64) -> Result<KernelSpec> {
    let (kappa1, kappa3) = profile_kernels(&fam.profile, t_max, dt)?;
    let k3 = KernelComponent::combine(&[(1.0, &kappa3), (-2.0, &kappa1)])?;
    let half = KernelComponent::combine(&[(-0.5, &kappa3)])?;
    let full = KernelComponent::combine(&[(-1.0, &kappa3)])?;
    let unital = KernelRates {
        k_plus: half.clone(),
        k_minus: half,
        k3: k3.clone(),
    };
    let nonunital = if fam.p >= 0.0 {
        KernelRates {
            k_plus: full,
            k_minus: KernelComponent::zero(),
            k3,
        }
    } else {
        KernelRates {
            k_plus: KernelComponent::zero(),
            k_minus: full,
            k3,
        }
    };
    let w = fam.p.abs();
    let mixed = KernelRates::mix(&[(1.0 - w, &unital), (w, &nonunital)])?;
    kernel_from_k(&mixed)
}

/// `(κ1, κ3)` with `κ̃1 = s − 1/λ̃` and `κ̃3 = s − 1/(λ²)~`.
fn profile_kernels(
    profile: &Profile,
    t_max: f64,
    dt: f64,
) -> Result<(KernelComponent, KernelComponent)> {
    match profile {
        Profile::ExpDecay => Ok((KernelComponent::delta(-1.0), KernelComponent::delta(-2.0))),
        Profile::Cosine => Ok((
            KernelComponent::from_terms(
                0.0,
                vec![KernelTerm::Exp {
                    coeff: -1.0,
                    rate: 0.0,
                }],
            ),
            KernelComponent::from_terms(
                0.0,
                vec![KernelTerm::Cos {
                    coeff: -2.0,
                    omega: std::f64::consts::SQRT_2,
                }],
            ),
        )),
        Profile::Tabulated {
            dt: own,
            values,
            slopes,
        } => {
            let n_own = values.len() - 1;
            let n = ((t_max / own).ceil() as usize).min(n_own);
            if n < 2 {
                return Err(Error::Degenerate(format!(
                    "tabulated profile too short for t_max = {t_max} (dt = {dt})"
                )));
            }
            // ℓ1 = −λ̇, ℓ3 = −2λλ̇
            let l1: Vec<f64> = slopes[..=n].iter().map(|d| -d).collect();
            let l3: Vec<f64> = values[..=n]
                .iter()
                .zip(&slopes[..=n])
                .map(|(v, d)| -2.0 * v * d)
                .collect();
            let k1 = kernel_from_resolvent(&resolvent(&l1, &l1, *own), *own);
            let k3 = kernel_from_resolvent(&resolvent(&l3, &l3, *own), *own);
            Ok((k1, k3))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ExpEll {
    #[serde(default = "one")]
    pub amplitude: f64,
    pub rate: f64,
}

fn one() -> f64 {
    1.0
}

/// JSON recipe, e.g. `{"recipe":"example1","eta":0.5,"xi1":1,"xi3":1,"xiStar":1}`
/// or `{"recipe":"single","a1":1,"a3":1,"aStar":1,"ell":"exp","rate":1,"sign":1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "recipe", rename_all = "lowercase")]
pub enum RecipeSpec {
    #[serde(rename_all = "camelCase")]
    Example1 {
        eta: f64,
        xi1: f64,
        xi3: f64,
        xi_star: f64,
    },
    #[serde(rename_all = "camelCase")]
    Single {
        a1: f64,
        a3: f64,
        a_star: f64,
        ell: String,
        rate: f64,
        #[serde(default = "one")]
        amplitude: f64,
        sign: f64,
    },
    #[serde(rename_all = "camelCase")]
    Theorem1 {
        ell1: ExpEll,
        ell3: ExpEll,
        ell_star: ExpEll,
    },
}

impl RecipeSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Recipe(e.to_string()))
    }

    pub fn build(&self, t_max: f64, dt: f64) -> Result<KernelRecipe> {
        match self {
            RecipeSpec::Example1 {
                eta,
                xi1,
                xi3,
                xi_star,
            } => example1_kernel(*eta, *xi1, *xi3, *xi_star, t_max),
            RecipeSpec::Single {
                a1,
                a3,
                a_star,
                ell,
                rate,
                amplitude,
                sign,
            } => {
                if ell != "exp" {
                    return Err(Error::Recipe(format!(
                        "unsupported ell \"{ell}\" (expected \"exp\")"
                    )));
                }
                single_function_kernel(
                    *a1,
                    *a3,
                    *a_star,
                    &EllFunction::exponential(*amplitude, *rate),
                    *sign,
                    t_max,
                    dt,
                )
            }
            RecipeSpec::Theorem1 {
                ell1,
                ell3,
                ell_star,
            } => {
                let e = |x: &ExpEll| EllFunction::exponential(x.amplitude, x.rate);
                let param = EllParameterization {
                    ell1: e(ell1),
                    ell3: e(ell3),
                    ell_star: e(ell_star),
                };
                theorem1_kernel(&param, t_max, dt)
            }
        }
    }
}
