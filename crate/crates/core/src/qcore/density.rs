//! 4×4 two-qubit density matrices and the per-arm noise channels.
//!
//! Basis ordering is `{|00⟩, |01⟩, |10⟩, |11⟩}` with Alice's qubit first.

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;

use super::state::PureQubit;

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
const EIGEN_TOL: f64 = 1e-10;

/// Which transmitter's arm a channel acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arm {
    A,
    B,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Single-qubit Paulis `[I, X, Y, Z]`.
pub fn paulis() -> [Matrix2<Complex64>; 4] {
    let o = c(0.0, 0.0);
    let l = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    [
        Matrix2::new(l, o, o, l),
        Matrix2::new(o, l, l, o),
        Matrix2::new(o, -i, i, o),
        Matrix2::new(l, o, o, -l),
    ]
}

/// Lift a single-qubit operator onto one arm of the pair.
pub fn on_arm(op: &Matrix2<Complex64>, arm: Arm) -> Matrix4<Complex64> {
    let id = Matrix2::<Complex64>::identity();
    match arm {
        Arm::A => op.kronecker(&id).fixed_view::<4, 4>(0, 0).into_owned(),
        Arm::B => id.kronecker(op).fixed_view::<4, 4>(0, 0).into_owned(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitDensity {
    matrix: Matrix4<Complex64>,
}

impl TwoQubitDensity {
    /// Wrap a matrix without validation. Use [`TwoQubitDensity::validate`]
    /// when the source is untrusted.
    pub fn from_matrix(matrix: Matrix4<Complex64>) -> Self {
        TwoQubitDensity { matrix }
    }

    /// `|a⟩⟨a| ⊗ |b⟩⟨b|`
    pub fn product(alice: &PureQubit, bob: &PureQubit) -> Self {
        let a = alice.amplitudes();
        let b = bob.amplitudes();
        let psi = [a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]];
        Self::from_matrix(Matrix4::from_fn(|r, col| psi[r] * psi[col].conj()))
    }

    pub fn matrix(&self) -> &Matrix4<Complex64> {
        &self.matrix
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// Tr(ρ·op) for a Hermitian observable.
    pub fn expectation(&self, op: &Matrix4<Complex64>) -> f64 {
        (self.matrix * op).trace().re
    }

    /// ⟨ψ|ρ|ψ⟩ for a (not necessarily normalized) 4-vector.
    pub fn projection(&self, psi: &[Complex64; 4]) -> f64 {
        let mut acc = c(0.0, 0.0);
        for r in 0..4 {
            for col in 0..4 {
                acc += psi[r].conj() * self.matrix[(r, col)] * psi[col];
            }
        }
        acc.re
    }

    pub fn eigenvalues(&self) -> [f64; 4] {
        // symmetrize first so round-off cannot break the Hermitian solver
        let h = (self.matrix + self.matrix.adjoint()) * c(0.5, 0.0);
        let ev = h.symmetric_eigenvalues();
        [ev[0], ev[1], ev[2], ev[3]]
    }

    pub fn is_hermitian(&self) -> bool {
        (self.matrix - self.matrix.adjoint())
            .iter()
            .all(|z| z.norm() <= HERMITIAN_TOL)
    }

    /// Hermitian, unit trace, and positive semidefinite within tolerance.
    pub fn validate(&self) -> bool {
        let tr = self.trace();
        self.is_hermitian()
            && (tr.re - 1.0).abs() <= TRACE_TOL
            && tr.im.abs() <= TRACE_TOL
            && self.eigenvalues().iter().all(|&l| l >= -EIGEN_TOL)
    }

    /// Conjugate by a unitary: `U ρ U†`.
    pub fn conjugate(&self, u: &Matrix4<Complex64>) -> Self {
        Self::from_matrix(u * self.matrix * u.adjoint())
    }

    /// Reduced state of one arm.
    pub fn partial_trace(&self, keep: Arm) -> Matrix2<Complex64> {
        let m = &self.matrix;
        let mut out = Matrix2::<Complex64>::zeros();
        for i in 0..2 {
            for j in 0..2 {
                out[(i, j)] = match keep {
                    Arm::A => m[(2 * i, 2 * j)] + m[(2 * i + 1, 2 * j + 1)],
                    Arm::B => m[(i, j)] + m[(2 + i, 2 + j)],
                };
            }
        }
        out
    }
}

/// Single-arm depolarizing map `ρ → (1−p)ρ + p·(I/2 ⊗ Tr_arm ρ)`.
///
/// The replacement term is computed as the Pauli twirl
/// `¼ Σ_k σ_k ρ σ_k` on the selected arm.
pub fn apply_depolarizing(rho: &TwoQubitDensity, arm: Arm, p: f64) -> TwoQubitDensity {
    if p == 0.0 {
        return rho.clone();
    }
    let mut twirl = Matrix4::<Complex64>::zeros();
    for sigma in paulis() {
        let s = on_arm(&sigma, arm);
        twirl += s * rho.matrix() * s;
    }
    let m = rho.matrix() * c(1.0 - p, 0.0) + twirl * c(p / 4.0, 0.0);
    TwoQubitDensity::from_matrix(m)
}

/// Single-arm dephasing `ρ → (1−d/2)ρ + (d/2)·ZρZ`.
///
/// Scales the arm's X/Y coherences by `1−d` and leaves Z populations alone.
pub fn apply_dephasing(rho: &TwoQubitDensity, arm: Arm, d: f64) -> TwoQubitDensity {
    if d == 0.0 {
        return rho.clone();
    }
    let z = on_arm(&paulis()[3], arm);
    let m = rho.matrix() * c(1.0 - d / 2.0, 0.0) + z * rho.matrix() * z * c(d / 2.0, 0.0);
    TwoQubitDensity::from_matrix(m)
}
