//! Generalized amplitude damping dynamical maps λ1 = λ(t), λ3 = λ(t)²,
//! λ* = p(1 − λ(t)²).

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::Arc;

use crate::channel::{gadc, PhaseCovariantChannel};
use crate::error::{ensure_range, Error, Result};
use crate::numeric::interp_uniform;

/// Time profile λ(t) with λ(0) = 1.
#[derive(Debug, Clone, PartialEq)]
pub enum Profile {
    /// e^{−t}
    ExpDecay,
    /// cos t
    Cosine,
    /// Samples on a uniform grid `t_n = n·dt`, linearly interpolated.
    Tabulated {
        dt: f64,
        values: Arc<Vec<f64>>,
        slopes: Arc<Vec<f64>>,
    },
}

impl Profile {
    pub fn tabulated(dt: f64, values: Vec<f64>) -> Result<Self> {
        if !(dt > 0.0) || values.len() < 3 {
            return Err(Error::Degenerate(
                "tabulated profile needs dt > 0 and at least 3 samples".into(),
            ));
        }
        if (values[0] - 1.0).abs() > 1e-9 {
            return Err(Error::Degenerate(format!(
                "tabulated profile must start at 1, got {}",
                values[0]
            )));
        }
        if values
            .iter()
            .any(|v| !v.is_finite() || v.abs() > 1.0 + 1e-12)
        {
            return Err(Error::Degenerate(
                "tabulated profile values must lie in [-1, 1]".into(),
            ));
        }
        let slopes = sample_derivative(&values, dt);
        Ok(Profile::Tabulated {
            dt,
            values: Arc::new(values),
            slopes: Arc::new(slopes),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Profile::ExpDecay => "exp",
            Profile::Cosine => "cos",
            Profile::Tabulated { .. } => "tabulated",
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        match self {
            Profile::ExpDecay => (-t).exp(),
            Profile::Cosine => t.cos(),
            Profile::Tabulated { dt, values, .. } => interp_uniform(values, *dt, t),
        }
    }

    /// dλ/dt; central differences on the samples for tabulated profiles.
    pub fn derivative(&self, t: f64) -> f64 {
        match self {
            Profile::ExpDecay => -(-t).exp(),
            Profile::Cosine => -t.sin(),
            Profile::Tabulated { dt, slopes, .. } => interp_uniform(slopes, *dt, t),
        }
    }

    /// Zeros of λ on `(0, t_max]`.
    pub fn zeros(&self, t_max: f64) -> Vec<f64> {
        match self {
            Profile::ExpDecay => Vec::new(),
            Profile::Cosine => (0..)
                .map(|k| FRAC_PI_2 + PI * k as f64)
                .take_while(|&z| z <= t_max)
                .collect(),
            Profile::Tabulated { dt, values, .. } => {
                let mut zeros = Vec::new();
                for (i, w) in values.windows(2).enumerate() {
                    let t0 = i as f64 * dt;
                    if t0 > t_max {
                        break;
                    }
                    if w[1] == 0.0 {
                        zeros.push(t0 + dt);
                    } else if w[0] != 0.0 && (w[0] < 0.0) != (w[1] < 0.0) {
                        zeros.push(t0 + dt * w[0] / (w[0] - w[1]));
                    }
                }
                zeros.retain(|&z| z <= t_max);
                zeros
            }
        }
    }
}

/// Second-order finite-difference derivative of uniform samples.
pub(crate) fn sample_derivative(values: &[f64], dt: f64) -> Vec<f64> {
    let n = values.len();
    let mut d = vec![0.0; n];
    if n < 3 {
        return d;
    }
    d[0] = (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * dt);
    for i in 1..n - 1 {
        d[i] = (values[i + 1] - values[i - 1]) / (2.0 * dt);
    }
    d[n - 1] = (3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) / (2.0 * dt);
    d
}

/// A profile plus a constant non-unitality parameter `p ∈ [−1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GadcFamily {
    pub profile: Profile,
    pub p: f64,
}

impl GadcFamily {
    pub fn new(profile: Profile, p: f64) -> Result<Self> {
        ensure_range("p", p, -1.0, 1.0)?;
        Ok(Self { profile, p })
    }

    pub fn lambda(&self, t: f64) -> f64 {
        self.profile.value(t)
    }

    /// Exact eigenvalue triple at `t`.
    pub fn channel(&self, t: f64) -> Result<PhaseCovariantChannel> {
        gadc(self.lambda(t).clamp(-1.0, 1.0), self.p)
    }

    pub fn eigenvalues(&self, t: f64) -> [f64; 3] {
        let l = self.lambda(t);
        [l, l * l, self.p * (1.0 - l * l)]
    }

    /// Same profile with a different `p`.
    pub fn with_p(&self, p: f64) -> Result<Self> {
        Self::new(self.profile.clone(), p)
    }
}
