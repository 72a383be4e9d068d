//! The dissipators L+, L−, L3 as real 4×4 matrices acting on affine Bloch
//! coordinates `(1, x, y, z)`.

use num_complex::Complex64 as C64;

use crate::linalg::{pauli, CMat};

/// Real 4×4 matrix on `(1, x, y, z)`; row 0 is the trace component.
pub type SuperOp = [[f64; 4]; 4];

fn basis() -> [CMat; 4] {
    [
        pauli::identity(),
        pauli::sigma1(),
        pauli::sigma2(),
        pauli::sigma3(),
    ]
}

/// Matrix of `op` in the Pauli basis: column `j` holds the coordinates of
/// `op[σ_j]` where `X = ½ Σ_j c_j σ_j` with `c = (Tr X, Tr σ1X, …)`.
pub fn to_pauli_matrix(op: impl Fn(&CMat) -> CMat) -> SuperOp {
    let b = basis();
    let mut m = [[0.0; 4]; 4];
    for (j, sj) in b.iter().enumerate() {
        let out = op(sj);
        for (i, si) in b.iter().enumerate() {
            // op[σ_j] = ½ Σ_i Tr(σ_i op[σ_j]) σ_i
            m[i][j] = 0.5 * (si * &out).trace().re;
        }
    }
    m
}

fn anticommutator(a: &CMat, b: &CMat) -> CMat {
    &(a * b) + &(b * a)
}

/// L±[X] = σ± X σ∓ − ½{σ∓σ±, X}.
pub fn dissipator_pm(plus: bool) -> impl Fn(&CMat) -> CMat {
    let (s, sd) = if plus {
        (pauli::sigma_plus(), pauli::sigma_minus())
    } else {
        (pauli::sigma_minus(), pauli::sigma_plus())
    };
    move |x: &CMat| {
        let jump = &(&s * x) * &sd;
        let anti = anticommutator(&(&sd * &s), x).scale(C64::new(-0.5, 0.0));
        &jump + &anti
    }
}

/// L3[X] = ¼(σ3 X σ3 − X).
pub fn dephasing(x: &CMat) -> CMat {
    let s3 = pauli::sigma3();
    (&(&(&s3 * x) * &s3) - x).scale_real(0.25)
}

pub fn l_plus() -> SuperOp {
    to_pauli_matrix(dissipator_pm(true))
}

pub fn l_minus() -> SuperOp {
    to_pauli_matrix(dissipator_pm(false))
}

pub fn l_3() -> SuperOp {
    to_pauli_matrix(dephasing)
}

/// `γ+ L+ + γ− L− + γ3 L3`.
pub fn combine(gamma_plus: f64, gamma_minus: f64, gamma3: f64) -> SuperOp {
    let (a, b, c) = (l_plus(), l_minus(), l_3());
    let mut m = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            m[i][j] = gamma_plus * a[i][j] + gamma_minus * b[i][j] + gamma3 * c[i][j];
        }
    }
    m
}
