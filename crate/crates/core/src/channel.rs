//! Phase-covariant qubit channels.
//!
//! A channel is described by three real numbers: the transverse eigenvalue
//! `lambda1` (shared by σ1 and σ2), the longitudinal eigenvalue `lambda3`
//! and the translation `lambda_star` along σ3. In Bloch coordinates
//!
//! ```text
//! (x, y, z) ↦ (λ1 x, λ1 y, λ3 z + λ*)
//! ```

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, ensure_range, Error, Result};
use crate::linalg::{pauli, CMat};
use crate::state::{BlochVector, DensityMatrix};

/// Slack used by the complete-positivity tests.
pub const CP_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", from = "RawChannel")]
pub struct PhaseCovariantChannel {
    pub lambda1: f64,
    pub lambda3: f64,
    pub lambda_star: f64,
    #[serde(skip)]
    valid: bool,
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct RawChannel {
    lambda1: f64,
    lambda3: f64,
    lambda_star: f64,
}

impl From<RawChannel> for PhaseCovariantChannel {
    fn from(raw: RawChannel) -> Self {
        Self::from_parts(raw.lambda1, raw.lambda3, raw.lambda_star)
    }
}

/// The two quadratic CP margins; both must be non-negative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CpMargins {
    /// `1 − |λ*| − |λ3|`
    pub translation: f64,
    /// `(1 + λ3)² − 4λ1² − λ*²`
    pub ellipsoid: f64,
}

impl PhaseCovariantChannel {
    fn from_parts(lambda1: f64, lambda3: f64, lambda_star: f64) -> Self {
        let mut ch = Self {
            lambda1,
            lambda3,
            lambda_star,
            valid: false,
        };
        ch.valid = is_cp(&ch).0;
        ch
    }

    pub fn identity() -> Self {
        Self::from_parts(1.0, 1.0, 0.0)
    }

    /// Whether the parameters satisfy the CP conditions.
    #[inline]
    pub fn is_valid(&self) -> bool {
        self.valid
    }

    pub fn require_valid(&self) -> Result<&Self> {
        if self.valid {
            Ok(self)
        } else {
            Err(Error::InvalidChannel {
                lambda1: self.lambda1,
                lambda3: self.lambda3,
                lambda_star: self.lambda_star,
            })
        }
    }

    #[inline]
    pub fn is_unital(&self) -> bool {
        self.lambda_star == 0.0
    }

    /// Bloch-vector action.
    #[inline]
    pub fn map_bloch(&self, v: BlochVector) -> BlochVector {
        BlochVector::new_unchecked(
            self.lambda1 * v.x,
            self.lambda1 * v.y,
            self.lambda3 * v.z + self.lambda_star,
        )
    }

    /// Action on an arbitrary 2×2 operator (not necessarily Hermitian or
    /// unit-trace), extended linearly from the Pauli eigen-relations.
    pub fn map_operator(&self, x: &CMat) -> CMat {
        let (a, b, c, d) = (x[(0, 0)], x[(0, 1)], x[(1, 0)], x[(1, 1)]);
        let tr = a + d;
        let z = a - d;
        let half = 0.5;
        CMat::from_rows([
            [
                tr * half * (1.0 + self.lambda_star) + z * half * self.lambda3,
                b * self.lambda1,
            ],
            [
                c * self.lambda1,
                tr * half * (1.0 - self.lambda_star) - z * half * self.lambda3,
            ],
        ])
    }

    /// Parameters as an array `[λ1, λ3, λ*]`.
    pub fn params(&self) -> [f64; 3] {
        [self.lambda1, self.lambda3, self.lambda_star]
    }

    /// Composition `self ∘ inner` (apply `inner` first).
    pub fn compose(&self, inner: &PhaseCovariantChannel) -> PhaseCovariantChannel {
        Self::from_parts(
            self.lambda1 * inner.lambda1,
            self.lambda3 * inner.lambda3,
            self.lambda3 * inner.lambda_star + self.lambda_star,
        )
    }
}

/// Builds a channel; validity is recorded as a flag rather than enforced.
pub fn make_channel(lambda1: f64, lambda3: f64, lambda_star: f64) -> Result<PhaseCovariantChannel> {
    ensure_finite("lambda1", lambda1)?;
    ensure_finite("lambda3", lambda3)?;
    ensure_finite("lambdaStar", lambda_star)?;
    Ok(PhaseCovariantChannel::from_parts(
        lambda1,
        lambda3,
        lambda_star,
    ))
}

/// Quadratic (necessary and sufficient) complete-positivity test.
pub fn is_cp(ch: &PhaseCovariantChannel) -> (bool, CpMargins) {
    let margins = CpMargins {
        translation: 1.0 - ch.lambda_star.abs() - ch.lambda3.abs(),
        ellipsoid: (1.0 + ch.lambda3).powi(2)
            - 4.0 * ch.lambda1 * ch.lambda1
            - ch.lambda_star * ch.lambda_star,
    };
    let ok = margins.translation >= -CP_TOL && margins.ellipsoid >= -CP_TOL;
    (ok, margins)
}

/// Sufficient linear CP conditions `λ3 + |λ*| ≤ 1`,
/// `1 − 2|λ1| + λ3 − |λ*| ≥ 0`. `λ3` enters without absolute value.
pub fn is_cp_linear(ch: &PhaseCovariantChannel) -> bool {
    is_cp_linear_with_tol(ch, CP_TOL)
}

pub fn is_cp_linear_with_tol(ch: &PhaseCovariantChannel, tol: f64) -> bool {
    let a = ch.lambda3 + ch.lambda_star.abs() <= 1.0 + tol;
    let b = 1.0 - 2.0 * ch.lambda1.abs() + ch.lambda3 - ch.lambda_star.abs() >= -tol;
    a && b
}

pub fn apply(ch: &PhaseCovariantChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    ch.require_valid()?;
    Ok(ch.map_bloch(rho.to_bloch()).to_density())
}

/// ρ* = ½[I + λ*/(1−λ3) σ3].
pub fn stationary_state(ch: &PhaseCovariantChannel) -> Result<DensityMatrix> {
    if ch.lambda_star == 0.0 {
        return Ok(DensityMatrix::maximally_mixed());
    }
    if (1.0 - ch.lambda3).abs() < 1e-15 {
        return Err(Error::Degenerate(
            "lambda3 = 1 with lambdaStar != 0 has no stationary state".into(),
        ));
    }
    let z = ch.lambda_star / (1.0 - ch.lambda3);
    if z.abs() > 1.0 + 1e-12 {
        return Err(Error::Degenerate(format!(
            "stationary Bloch coordinate {z} lies outside the ball"
        )));
    }
    Ok(BlochVector::new_unchecked(0.0, 0.0, z.clamp(-1.0, 1.0)).to_density())
}

/// NU(Λ) = |λ*| / (1 − |λ3|).
pub fn non_unitality(ch: &PhaseCovariantChannel) -> Result<f64> {
    let denom = 1.0 - ch.lambda3.abs();
    if denom.abs() < 1e-15 {
        return Err(Error::Degenerate(
            "non-unitality undefined for |lambda3| = 1".into(),
        ));
    }
    Ok(ch.lambda_star.abs() / denom)
}

/// Generalized amplitude damping: λ1 = λ, λ3 = λ², λ* = p(1 − λ²).
///
/// `p = −1` is amplitude damping toward |1⟩, `p = +1` the inverse process
/// toward |0⟩ and `p = 0` the unital member.
pub fn gadc(lambda: f64, p: f64) -> Result<PhaseCovariantChannel> {
    ensure_range("lambda", lambda, -1.0, 1.0)?;
    ensure_range("p", p, -1.0, 1.0)?;
    let l2 = lambda * lambda;
    Ok(PhaseCovariantChannel::from_parts(
        lambda,
        l2,
        p * (1.0 - l2),
    ))
}

/// Convex combination of channels, parameter by parameter.
pub fn mix(channels: &[PhaseCovariantChannel], weights: &[f64]) -> Result<PhaseCovariantChannel> {
    if channels.len() != weights.len() || channels.is_empty() {
        return Err(Error::LengthMismatch(channels.len(), weights.len()));
    }
    check_weights(weights)?;
    let mut acc = [0.0; 3];
    for (ch, &w) in channels.iter().zip(weights) {
        ch.require_valid()?;
        for (a, v) in acc.iter_mut().zip(ch.params()) {
            *a += w * v;
        }
    }
    Ok(PhaseCovariantChannel::from_parts(acc[0], acc[1], acc[2]))
}

pub(crate) fn check_weights(weights: &[f64]) -> Result<()> {
    let sum: f64 = weights.iter().sum();
    if weights.iter().any(|&w| !(w >= 0.0)) || (sum - 1.0).abs() > 1e-12 {
        return Err(Error::BadWeights(sum));
    }
    Ok(())
}

/// U(φ) = exp(−iσ3φ).
pub fn phase_rotation(phi: f64) -> CMat {
    CMat::from_rows([
        [C64::from_polar(1.0, -phi), C64::new(0.0, 0.0)],
        [C64::new(0.0, 0.0), C64::from_polar(1.0, phi)],
    ])
}

/// Checks Λ[U X U†] = U Λ[X] U† on the matrix units for every sampled φ.
pub fn is_phase_covariant(map: impl Fn(&CMat) -> CMat, phi_samples: &[f64]) -> bool {
    phi_samples.iter().all(|&phi| {
        let u = phase_rotation(phi);
        let ud = u.adjoint();
        (0..2).all(|i| {
            (0..2).all(|j| {
                let x = pauli::unit(i, j);
                let lhs = map(&(&(&u * &x) * &ud));
                let rhs = &(&u * &map(&x)) * &ud;
                lhs.max_abs_diff(&rhs) < 1e-10
            })
        })
    })
}

pub fn covariance_check(ch: &PhaseCovariantChannel, phi_samples: &[f64]) -> bool {
    is_phase_covariant(|x| ch.map_operator(x), phi_samples)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn make_channel_examples() {
        assert!(make_channel(1.0, 1.0, 0.0).unwrap().is_valid());
        assert!(make_channel(0.5, 0.25, 0.3).unwrap().is_valid());
        assert!(!make_channel(1.0, 1.0, 0.1).unwrap().is_valid());
        assert!(matches!(
            make_channel(f64::NAN, 0.0, 0.0),
            Err(Error::NonFinite { .. })
        ));
        assert!(make_channel(0.0, f64::INFINITY, 0.0).is_err());
    }

    #[test]
    fn cp_margins() {
        let (ok, m) = is_cp(&PhaseCovariantChannel::identity());
        assert!(ok);
        assert_eq!((m.translation, m.ellipsoid), (0.0, 0.0));

        let (ok, m) = is_cp(&make_channel(0.5, 0.25, 0.3).unwrap());
        assert!(ok);
        assert!(close(m.translation, 0.45, 1e-15));
        assert!(close(m.ellipsoid, 0.4725, 1e-15));

        let (ok, m) = is_cp(&make_channel(0.9, 0.05, 0.2).unwrap());
        assert!(!ok);
        assert!(close(m.translation, 0.75, 1e-15));
        assert!(close(m.ellipsoid, -2.1775, 1e-14));
    }

    #[test]
    fn linear_conditions_are_only_sufficient() {
        assert!(is_cp_linear(&PhaseCovariantChannel::identity()));
        let ch = make_channel(0.5, 0.25, 0.3).unwrap();
        assert!(!is_cp_linear(&ch));
        assert!(ch.is_valid());
        assert!(is_cp_linear(&make_channel(0.4, 0.25, 0.3).unwrap()));
    }

    #[test]
    fn apply_examples() {
        let id = PhaseCovariantChannel::identity();
        let rho = BlochVector::new(0.2, -0.3, 0.4).unwrap().to_density();
        assert!(
            apply(&id, &rho)
                .unwrap()
                .matrix()
                .max_abs_diff(rho.matrix())
                < 1e-15
        );

        let unital = gadc(0.3, 0.0).unwrap();
        let mixed = DensityMatrix::maximally_mixed();
        assert_eq!(apply(&unital, &mixed).unwrap(), mixed);

        let ch = gadc(0.6, 0.5).unwrap();
        let up = BlochVector::new(0.0, 0.0, 1.0).unwrap().to_density();
        let out = apply(&ch, &up).unwrap().to_bloch();
        assert!(close(out.z, 0.68, 1e-15));

        let bad = make_channel(1.0, 1.0, 0.1).unwrap();
        assert!(matches!(
            apply(&bad, &up),
            Err(Error::InvalidChannel { .. })
        ));
    }

    #[test]
    fn map_operator_agrees_with_bloch_action() {
        let ch = make_channel(0.4, 0.3, -0.2).unwrap();
        let v = BlochVector::new(0.1, 0.5, -0.6).unwrap();
        let via_op = DensityMatrix::new(ch.map_operator(v.to_density().matrix())).unwrap();
        let via_bloch = ch.map_bloch(v).to_density();
        assert!(via_op.matrix().max_abs_diff(via_bloch.matrix()) < 1e-15);
    }

    #[test]
    fn stationary_state_examples() {
        let s = stationary_state(&gadc(0.7, 0.0).unwrap()).unwrap();
        assert_eq!(s, DensityMatrix::maximally_mixed());

        let s = stationary_state(&gadc(0.6, 1.0).unwrap()).unwrap();
        assert!(close(s.to_bloch().z, 1.0, 1e-15));

        let s = stationary_state(&gadc(0.6, 0.5).unwrap()).unwrap();
        let m = s.matrix();
        assert!(close(m[(0, 0)].re, 0.75, 1e-15));
        assert!(close(m[(1, 1)].re, 0.25, 1e-15));

        let degenerate = make_channel(0.5, 1.0, 0.1).unwrap();
        assert!(matches!(
            stationary_state(&degenerate),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn non_unitality_examples() {
        assert_eq!(non_unitality(&gadc(0.5, 0.0).unwrap()).unwrap(), 0.0);
        for lambda in [0.0, 0.3, 0.9] {
            for p in [-0.7, 0.2, 1.0] {
                let nu = non_unitality(&gadc(lambda, p).unwrap()).unwrap();
                assert!(close(nu, p.abs(), 1e-14));
            }
        }
        assert_eq!(
            non_unitality(&make_channel(0.5, 0.5, 0.5).unwrap()).unwrap(),
            1.0
        );
        assert!(non_unitality(&PhaseCovariantChannel::identity()).is_err());
    }

    #[test]
    fn gadc_examples() {
        let id = gadc(1.0, 0.37).unwrap();
        assert_eq!(id.params(), [1.0, 1.0, 0.0]);
        let ch = gadc(0.6, 0.5).unwrap();
        assert!(close(ch.lambda1, 0.6, 0.0));
        assert!(close(ch.lambda3, 0.36, 1e-15));
        assert!(close(ch.lambda_star, 0.32, 1e-15));
        let damp = gadc(0.0, -1.0).unwrap();
        assert_eq!(damp.params(), [0.0, 0.0, -1.0]);
        let out = damp.map_bloch(BlochVector::new_unchecked(0.3, 0.1, 0.9));
        assert_eq!((out.x, out.y, out.z), (0.0, 0.0, -1.0));
        assert!(gadc(1.1, 0.0).is_err());
        assert!(gadc(0.5, -1.5).is_err());
    }

    #[test]
    fn mixing() {
        let ch = gadc(0.4, 0.2).unwrap();
        assert_eq!(mix(&[ch], &[1.0]).unwrap(), ch);

        let lambda: f64 = 0.7;
        let p = 0.35;
        let l2 = lambda * lambda;
        let unital = make_channel(lambda, l2, 0.0).unwrap();
        let nu_plus = make_channel(lambda, l2, 1.0 - l2).unwrap();
        let mixed = mix(&[unital, nu_plus], &[1.0 - p, p]).unwrap();
        let target = gadc(lambda, p).unwrap();
        for (a, b) in mixed.params().iter().zip(target.params()) {
            assert!(close(*a, b, 1e-15));
        }

        let half = mix(
            &[gadc(0.6, 1.0).unwrap(), gadc(0.6, -1.0).unwrap()],
            &[0.5, 0.5],
        )
        .unwrap();
        assert_eq!(half.params(), gadc(0.6, 0.0).unwrap().params());

        assert!(matches!(
            mix(&[ch, ch], &[0.5, 0.6]),
            Err(Error::BadWeights(_))
        ));
        assert!(matches!(
            mix(&[ch], &[0.5, 0.5]),
            Err(Error::LengthMismatch(1, 2))
        ));
    }

    #[test]
    fn covariance() {
        let phis = [0.3, 1.1, 2.9];
        assert!(covariance_check(&gadc(0.6, 0.5).unwrap(), &phis));
        assert!(covariance_check(&PhaseCovariantChannel::identity(), &phis));
        // Pauli-diagonal map with λ2 ≠ λ1 is not phase covariant.
        let broken = |x: &CMat| {
            let (l1, l2, l3) = (0.8, 0.3, 0.5);
            let tr = |s: &CMat| (x * s).trace();
            let mut out = pauli::identity().scale(tr(&pauli::identity()));
            out = &out + &pauli::sigma1().scale(tr(&pauli::sigma1()) * l1);
            out = &out + &pauli::sigma2().scale(tr(&pauli::sigma2()) * l2);
            out = &out + &pauli::sigma3().scale(tr(&pauli::sigma3()) * l3);
            out.scale_real(0.5)
        };
        assert!(!is_phase_covariant(broken, &phis));
    }

    #[test]
    fn json_shape() {
        let ch = make_channel(0.5, 0.25, 0.3).unwrap();
        let s = serde_json::to_string(&ch).unwrap();
        assert_eq!(s, r#"{"lambda1":0.5,"lambda3":0.25,"lambdaStar":0.3}"#);
        let back: PhaseCovariantChannel = serde_json::from_str(&s).unwrap();
        assert_eq!(back, ch);
        assert!(back.is_valid());
        let bad: PhaseCovariantChannel =
            serde_json::from_str(r#"{"lambda1":1,"lambda3":1,"lambdaStar":0.1}"#).unwrap();
        assert!(!bad.is_valid());
    }
}
