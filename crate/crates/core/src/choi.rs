//! Choi matrix, Kraus decomposition and the complementary channel.

use num_complex::Complex64 as C64;

use crate::channel::PhaseCovariantChannel;
use crate::entropy::PSD_TOL;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, pauli, CMat};
use crate::state::DensityMatrix;

/// Choi eigenvalues below this are dropped when extracting Kraus operators.
pub const KRAUS_CUTOFF: f64 = 1e-12;

/// `(Λ ⊗ id)[|Ω⟩⟨Ω|]` with |Ω⟩ = (|00⟩ + |11⟩)/√2; the output factor comes
/// first, so entry `[(a, i), (b, j)]` equals `½ Λ[|i⟩⟨j|]_{ab}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiMatrix(CMat);

impl ChoiMatrix {
    pub fn matrix(&self) -> &CMat {
        &self.0
    }

    /// Trace over the output factor; equals I/2 for trace-preserving maps.
    pub fn input_marginal(&self) -> CMat {
        CMat::from_fn(2, |i, j| self.0[(i, j)] + self.0[(2 + i, 2 + j)])
    }

    pub fn min_eigenvalue(&self) -> f64 {
        hermitian_eig(&self.0)
            .map(|e| e.values[0])
            .unwrap_or(f64::NAN)
    }

    pub fn is_psd(&self) -> bool {
        self.min_eigenvalue() >= -PSD_TOL
    }
}

/// Kraus operators `K_i` with Σ K_i† K_i = I.
#[derive(Debug, Clone)]
pub struct KrausSet {
    pub operators: Vec<CMat>,
}

impl KrausSet {
    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    /// ‖Σ K†K − I‖ (max entry).
    pub fn completeness_residual(&self) -> f64 {
        let sum = self
            .operators
            .iter()
            .fold(CMat::zeros(2), |acc, k| &acc + &(&k.adjoint() * k));
        sum.max_abs_diff(&CMat::identity(2))
    }

    pub fn apply(&self, rho: &CMat) -> CMat {
        self.operators
            .iter()
            .fold(CMat::zeros(2), |acc, k| &acc + &(&(k * rho) * &k.adjoint()))
    }

    /// Environment state `(Λ^c[ρ])_{ij} = Tr(K_i ρ K_j†)`.
    pub fn complementary(&self, rho: &CMat) -> CMat {
        let n = self.operators.len();
        let left: Vec<CMat> = self.operators.iter().map(|k| k * rho).collect();
        let adj: Vec<CMat> = self.operators.iter().map(CMat::adjoint).collect();
        CMat::from_fn(n, |i, j| (&left[i] * &adj[j]).trace())
    }
}

pub fn choi(ch: &PhaseCovariantChannel) -> ChoiMatrix {
    let mut c = CMat::zeros(4);
    for i in 0..2 {
        for j in 0..2 {
            let out = ch.map_operator(&pauli::unit(i, j));
            for a in 0..2 {
                for b in 0..2 {
                    c[(2 * a + i, 2 * b + j)] = out[(a, b)] * 0.5;
                }
            }
        }
    }
    ChoiMatrix(c)
}

/// Kraus operators from the Choi eigendecomposition, `K = √(2μ) unvec(v)`.
pub fn kraus(ch: &PhaseCovariantChannel) -> Result<KrausSet> {
    let c = choi(ch);
    let eig = hermitian_eig(c.matrix())?;
    if eig.values[0] < -PSD_TOL {
        return Err(Error::InvalidChannel {
            lambda1: ch.lambda1,
            lambda3: ch.lambda3,
            lambda_star: ch.lambda_star,
        });
    }
    let mut operators = Vec::with_capacity(4);
    for (idx, &mu) in eig.values.iter().enumerate().rev() {
        if mu < KRAUS_CUTOFF {
            continue;
        }
        let scale = C64::new((2.0 * mu).sqrt(), 0.0);
        let v = eig.vectors.column(idx);
        operators.push(CMat::from_fn(2, |a, i| v[2 * a + i] * scale));
    }
    Ok(KrausSet { operators })
}

/// Λ^c[ρ] for the Stinespring dilation built from [`kraus`].
pub fn complementary_apply(ch: &PhaseCovariantChannel, rho: &DensityMatrix) -> Result<CMat> {
    Ok(kraus(ch)?.complementary(rho.matrix()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{gadc, make_channel};
    use crate::entropy::entropy;
    use crate::state::BlochVector;

    #[test]
    fn identity_has_rank_one_choi() {
        let id = PhaseCovariantChannel::identity();
        let k = kraus(&id).unwrap();
        assert_eq!(k.len(), 1);
        // Global phase of the single Kraus operator is arbitrary.
        let k0 = &k.operators[0];
        let phase = k0[(0, 0)];
        assert!((phase.norm() - 1.0).abs() < 1e-12);
        assert!(k0.max_abs_diff(&CMat::identity(2).scale(phase)) < 1e-12);
        let c = choi(&id);
        assert!(
            c.input_marginal()
                .max_abs_diff(&CMat::identity(2).scale_real(0.5))
                < 1e-15
        );
    }

    #[test]
    fn full_damping_is_constant_map() {
        let ch = gadc(0.0, -1.0).unwrap();
        let k = kraus(&ch).unwrap();
        assert!(k.completeness_residual() < 1e-12);
        let target = CMat::from_real_diag(&[0.0, 1.0]);
        for v in [
            BlochVector::new(0.0, 0.0, 1.0).unwrap(),
            BlochVector::new(0.6, -0.2, 0.1).unwrap(),
        ] {
            let out = k.apply(v.to_density().matrix());
            assert!(out.max_abs_diff(&target) < 1e-12);
        }
    }

    #[test]
    fn gadc_has_four_kraus_operators() {
        let ch = gadc(0.6, 0.5).unwrap();
        let k = kraus(&ch).unwrap();
        assert_eq!(k.len(), 4);
        assert!(k.completeness_residual() < 1e-10);
        let rho = BlochVector::new(0.3, 0.2, -0.4).unwrap().to_density();
        let out = k.apply(rho.matrix());
        assert!(out.max_abs_diff(ch.map_bloch(rho.to_bloch()).to_density().matrix()) < 1e-12);
    }

    #[test]
    fn invalid_channel_has_negative_choi() {
        let bad = make_channel(0.9, 0.05, 0.2).unwrap();
        assert!(!choi(&bad).is_psd());
        assert!(matches!(kraus(&bad), Err(Error::InvalidChannel { .. })));
    }

    #[test]
    fn complement_of_identity_is_pure() {
        let id = PhaseCovariantChannel::identity();
        let rho = BlochVector::new(0.1, 0.2, 0.3).unwrap().to_density();
        let env = complementary_apply(&id, &rho).unwrap();
        assert_eq!(env.dim(), 1);
        assert!((env[(0, 0)].re - 1.0).abs() < 1e-12);
        assert!(entropy(&env).unwrap().abs() < 1e-12);
    }

    #[test]
    fn complement_of_constant_channel_carries_input_entropy() {
        let ch = gadc(0.0, -1.0).unwrap();
        for v in [
            BlochVector::new(0.0, 0.0, 0.0).unwrap(),
            BlochVector::new(0.5, 0.1, -0.3).unwrap(),
        ] {
            let rho = v.to_density();
            let env = complementary_apply(&ch, &rho).unwrap();
            let s_env = entropy(&env).unwrap();
            assert!((s_env - rho.entropy()).abs() < 1e-10);
            assert!((env.trace().re - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn complement_has_unit_trace() {
        let ch = gadc(0.6, 0.0).unwrap();
        let env = complementary_apply(&ch, &DensityMatrix::maximally_mixed()).unwrap();
        assert!((env.trace().re - 1.0).abs() < 1e-12);
        assert!(env.hermiticity_defect() < 1e-12);
        let s = entropy(&env).unwrap();
        assert!(s > 0.0 && s <= 2.0);
    }
}
