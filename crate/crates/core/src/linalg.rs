//! Small dense complex matrices (n ≤ 4) and a cyclic Jacobi Hermitian
//! eigensolver.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Off-diagonal Frobenius norm at which Jacobi sweeps stop.
pub const JACOBI_TOL: f64 = 1e-13;
/// Tolerance used to accept a matrix as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;
const MAX_SWEEPS: usize = 64;

/// Square complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    n: usize,
    data: Vec<C64>,
}

impl CMat {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![ZERO; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Builds a matrix from rows; panics if the rows are ragged.
    pub fn from_rows<const N: usize>(rows: [[C64; N]; N]) -> Self {
        Self {
            n: N,
            data: rows.iter().flat_map(|r| r.iter().copied()).collect(),
        }
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(*d, 0.0);
        }
        m
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn trace(&self) -> C64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &CMat) -> CMat {
        let (a, b) = (self.n, other.n);
        CMat::from_fn(a * b, |i, j| self[(i / b, j / b)] * other[(i % b, j % b)])
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise deviation from Hermiticity.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.n {
            for j in i..self.n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &CMat) -> f64 {
        assert_eq!(self.n, other.n, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    fn off_diagonal_norm(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    acc += self[(i, j)].norm_sqr();
                }
            }
        }
        acc.sqrt()
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.n).map(|i| self[(i, j)]).collect()
    }
}

impl Index<(usize, usize)> for CMat {
    type Output = C64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for CMat {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.n + j]
    }
}

impl Mul for &CMat {
    type Output = CMat;
    fn mul(self, rhs: &CMat) -> CMat {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        let n = self.n;
        let mut out = CMat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl Add for &CMat {
    type Output = CMat;
    fn add(self, rhs: &CMat) -> CMat {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        CMat {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &CMat {
    type Output = CMat;
    fn sub(self, rhs: &CMat) -> CMat {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        CMat {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

/// The Pauli basis. σ± = (σ1 ± iσ2)/2, so σ+ = |0⟩⟨1| and σ− = |1⟩⟨0|.
pub mod pauli {
    use super::*;

    pub fn identity() -> CMat {
        CMat::identity(2)
    }

    pub fn sigma1() -> CMat {
        CMat::from_rows([[ZERO, ONE], [ONE, ZERO]])
    }

    pub fn sigma2() -> CMat {
        CMat::from_rows([[ZERO, C64::new(0.0, -1.0)], [C64::new(0.0, 1.0), ZERO]])
    }

    pub fn sigma3() -> CMat {
        CMat::from_rows([[ONE, ZERO], [ZERO, -ONE]])
    }

    pub fn sigma_plus() -> CMat {
        CMat::from_rows([[ZERO, ONE], [ZERO, ZERO]])
    }

    pub fn sigma_minus() -> CMat {
        CMat::from_rows([[ZERO, ZERO], [ONE, ZERO]])
    }

    /// Matrix unit |i⟩⟨j| on a qubit.
    pub fn unit(i: usize, j: usize) -> CMat {
        CMat::from_fn(2, |a, b| if a == i && b == j { ONE } else { ZERO })
    }
}

/// Result of a Hermitian eigendecomposition: eigenvalues ascending, with the
/// matching orthonormal eigenvectors stored as columns of `vectors`.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: CMat,
}

impl Eigen {
    /// `V diag(values) V†`.
    pub fn reconstruct(&self) -> CMat {
        let d = CMat::from_real_diag(&self.values);
        &(&self.vectors * &d) * &self.vectors.adjoint()
    }
}

/// Cyclic Jacobi diagonalization of a Hermitian matrix.
///
/// Each rotation first removes the phase of the pivot `a_pq` and then applies
/// the real symmetric Jacobi rotation to the resulting 2×2 block.
pub fn hermitian_eig(matrix: &CMat) -> Result<Eigen> {
    let defect = matrix.hermiticity_defect();
    if defect > HERMITIAN_TOL {
        return Err(Error::NotHermitian(defect));
    }
    let n = matrix.dim();
    // Symmetrize so that rounding noise in the input does not feed the sweeps.
    let mut a = CMat::from_fn(n, |i, j| 0.5 * (matrix[(i, j)] + matrix[(j, i)].conj()));
    let mut v = CMat::identity(n);

    for _ in 0..MAX_SWEEPS {
        if a.off_diagonal_norm() < JACOBI_TOL {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag < 1e-300 {
                    continue;
                }
                let phase = apq / mag;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (2.0 * mag);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // J = D·R with D = diag(1, e^{-iφ}) on (p, q) and the real
                // rotation R = [[c, s], [-s, c]].
                let jpp = C64::new(c, 0.0);
                let jpq = C64::new(s, 0.0);
                let jqp = -phase.conj() * s;
                let jqq = phase.conj() * c;
                // A <- A J (columns p, q)
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * jpp + akq * jqp;
                    a[(k, q)] = akp * jpq + akq * jqq;
                }
                // A <- J† A (rows p, q)
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
                    a[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * jpp + vkq * jqp;
                    v[(k, q)] = vkp * jpq + vkq * jqq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = CMat::from_fn(n, |r, c| v[(r, order[c])]);
    Ok(Eigen { values, vectors })
}

/// Eigenvalues only.
pub fn hermitian_eigenvalues(matrix: &CMat) -> Result<Vec<f64>> {
    hermitian_eig(matrix).map(|e| e.values)
}
