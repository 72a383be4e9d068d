//! Entropies in bits, with 0·log 0 := 0.

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, CMat};

/// Eigenvalues below `-PSD_TOL` make a state unacceptable.
pub const PSD_TOL: f64 = 1e-10;

/// `x·log2(x)`, zero for `x ≤ 0`.
#[inline]
pub fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// Binary entropy `H2(x) = −x log2 x − (1−x) log2(1−x)`.
#[inline]
pub fn binary_entropy(x: f64) -> f64 {
    -xlog2x(x) - xlog2x(1.0 - x)
}

/// Shannon entropy of a probability vector.
pub fn shannon(probs: &[f64]) -> f64 {
    -probs.iter().map(|&p| xlog2x(p)).sum::<f64>()
}

/// Von Neumann entropy `−Tr(ρ log2 ρ)` of a Hermitian PSD unit-trace matrix.
pub fn entropy(rho: &CMat) -> Result<f64> {
    let values = hermitian_eigenvalues(rho)?;
    if let Some(&min) = values.first() {
        if min < -PSD_TOL {
            return Err(Error::NotPositive(min));
        }
    }
    Ok(shannon(&values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pauli;
    use num_complex::Complex64 as C64;

    #[test]
    fn maximally_mixed_is_one_bit() {
        let rho = CMat::identity(2).scale_real(0.5);
        assert!((entropy(&rho).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pure_state_is_zero() {
        let plus = (&CMat::identity(2) + &pauli::sigma1()).scale_real(0.5);
        assert!(entropy(&plus).unwrap().abs() < 1e-12);
    }

    #[test]
    fn diag_three_quarters() {
        let rho = CMat::from_real_diag(&[0.75, 0.25]);
        // H2(0.75) = 2 − (3/4) log2 3
        let expected = 2.0 - 0.75 * 3f64.log2();
        assert!((entropy(&rho).unwrap() - expected).abs() < 1e-14);
        assert!((expected - 0.811278).abs() < 1e-6);
    }

    #[test]
    fn four_level_mixed() {
        let rho = CMat::identity(4).scale_real(0.25);
        assert!((entropy(&rho).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_negative_spectrum() {
        let m = CMat::from_real_diag(&[1.1, -0.1]);
        assert!(matches!(entropy(&m), Err(Error::NotPositive(_))));
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = CMat::identity(2).scale_real(0.5);
        m[(0, 1)] = C64::new(0.1, 0.0);
        assert!(matches!(entropy(&m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn binary_entropy_endpoints() {
        assert_eq!(binary_entropy(0.0), 0.0);
        assert_eq!(binary_entropy(1.0), 0.0);
        assert_eq!(binary_entropy(0.5), 1.0);
    }
}
