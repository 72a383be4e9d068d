//! Qubit states in Bloch and matrix form.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::entropy::PSD_TOL;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, pauli, CMat};

/// Slack on the Bloch-ball constraint.
pub const BALL_TOL: f64 = 1e-12;

/// Coordinates of ρ = ½(I + xσ1 + yσ2 + zσ3).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub const ORIGIN: BlochVector = BlochVector {
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let v = Self { x, y, z };
        if !(x.is_finite() && y.is_finite() && z.is_finite()) {
            return Err(Error::InvalidState(format!(
                "non-finite Bloch vector {v:?}"
            )));
        }
        if v.norm_sqr() > 1.0 + BALL_TOL {
            return Err(Error::InvalidState(format!(
                "Bloch vector outside the unit ball (|r|^2 = {})",
                v.norm_sqr()
            )));
        }
        Ok(v)
    }

    /// Unchecked constructor for points already known to lie in the ball.
    #[inline]
    pub const fn new_unchecked(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    /// Pure state at polar angle `theta` and azimuth `phi`.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        Self {
            x: theta.sin() * phi.cos(),
            y: theta.sin() * phi.sin(),
            z: theta.cos(),
        }
    }

    #[inline]
    pub fn norm_sqr(&self) -> f64 {
        self.x * self.x + self.y * self.y + self.z * self.z
    }

    #[inline]
    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix::from_bloch(*self)
    }
}

/// A 2×2 density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(CMat);

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(m: CMat) -> Result<Self> {
        if m.dim() != 2 {
            return Err(Error::InvalidState(format!(
                "expected 2x2, got {0}x{0}",
                m.dim()
            )));
        }
        let tr = m.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > 1e-12 {
            return Err(Error::InvalidState(format!("trace {tr} != 1")));
        }
        let values = hermitian_eigenvalues(&m)?;
        if values[0] < -PSD_TOL {
            return Err(Error::NotPositive(values[0]));
        }
        Ok(Self(m))
    }

    pub fn from_bloch(v: BlochVector) -> Self {
        let half = 0.5;
        Self(CMat::from_rows([
            [
                C64::new(half * (1.0 + v.z), 0.0),
                C64::new(half * v.x, -half * v.y),
            ],
            [
                C64::new(half * v.x, half * v.y),
                C64::new(half * (1.0 - v.z), 0.0),
            ],
        ]))
    }

    pub fn maximally_mixed() -> Self {
        Self::from_bloch(BlochVector::ORIGIN)
    }

    /// Diagonal state diag(p0, 1 − p0).
    pub fn diagonal(p0: f64) -> Result<Self> {
        Self::new(CMat::from_real_diag(&[p0, 1.0 - p0]))
    }

    pub fn to_bloch(&self) -> BlochVector {
        let m = &self.0;
        BlochVector {
            x: (&pauli::sigma1() * m).trace().re,
            y: (&pauli::sigma2() * m).trace().re,
            z: (&pauli::sigma3() * m).trace().re,
        }
    }

    pub fn matrix(&self) -> &CMat {
        &self.0
    }

    pub fn into_matrix(self) -> CMat {
        self.0
    }

    pub fn entropy(&self) -> f64 {
        // Validated on construction, so the eigensolver cannot fail.
        crate::entropy::entropy(&self.0).unwrap_or(0.0)
    }
}
