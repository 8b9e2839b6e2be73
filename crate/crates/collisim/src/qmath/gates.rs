//! Unitary operators, in particular the partial-swap gate that drives every
//! interaction in the collision model.

use std::f64::consts::TAU;

use num_complex::Complex64 as C64;

use super::matrix::{bit_of, swap_bits, ComplexMatrix, MAX_QUBITS};
use super::states::DensityMatrix;
use super::QmathError;

/// Tolerance on `max |U†U - 1|` for a valid unitary.
pub const UNITARITY_TOL: f64 = 1e-12;

/// Matrix with a verified unitarity certificate.
#[derive(Clone, Debug, PartialEq)]
pub struct Unitary {
    matrix: ComplexMatrix,
}

impl Unitary {
    /// Validating constructor: requires `U†U = 1` within [`UNITARITY_TOL`].
    pub fn new(matrix: ComplexMatrix) -> Result<Self, QmathError> {
        let gram = matrix.adjoint().matmul(&matrix)?;
        let dev = gram.max_abs_diff(&ComplexMatrix::identity(matrix.dim()));
        if dev > UNITARITY_TOL {
            return Err(QmathError::NotUnitary(dev));
        }
        Ok(Self { matrix })
    }

    fn from_trusted(matrix: ComplexMatrix) -> Self {
        Self { matrix }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// `U m U†` on a raw matrix.
    pub fn conjugate(&self, m: &ComplexMatrix) -> Result<ComplexMatrix, QmathError> {
        self.matrix.matmul(m)?.matmul(&self.matrix.adjoint())
    }

    /// `U ρ U†` on a state; unitary conjugation preserves the density-matrix
    /// invariants.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix, QmathError> {
        Ok(DensityMatrix::from_trusted(self.conjugate(rho.matrix())?))
    }
}

/// The swap gate on qubits `a` and `b`, identity elsewhere.
pub fn swap_matrix(a: usize, b: usize, total_qubits: usize) -> Result<ComplexMatrix, QmathError> {
    check_pair(a, b, total_qubits)?;
    let dim = 1usize << total_qubits;
    let pa = bit_of(a, total_qubits);
    let pb = bit_of(b, total_qubits);
    let mut m = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        m[(swap_bits(i, pa, pb), i)] = C64::new(1.0, 0.0);
    }
    Ok(m)
}

/// Partial-swap unitary `cos(strength)·1 + i·sin(strength)·S_{a,b}` embedded
/// in a `total_qubits` register. Strengths outside `[0, 2π]` are wrapped with
/// a warning since the gate is periodic and an out-of-range value usually
/// means a configuration typo.
pub fn partial_swap(
    strength: f64,
    subsystem_a: usize,
    subsystem_b: usize,
    total_qubits: usize,
) -> Result<Unitary, QmathError> {
    check_pair(subsystem_a, subsystem_b, total_qubits)?;
    let strength = normalize_angle(strength, "partial swap strength");
    let dim = 1usize << total_qubits;
    let pa = bit_of(subsystem_a, total_qubits);
    let pb = bit_of(subsystem_b, total_qubits);
    let (s, c) = strength.sin_cos();
    let i_sin = C64::new(0.0, s);
    let mut m = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        m[(i, i)] += C64::new(c, 0.0);
        m[(i, swap_bits(i, pa, pb))] += i_sin;
    }
    Ok(Unitary::from_trusted(m))
}

/// Wraps an angle into `[0, 2π]`, warning when it had to move.
pub(crate) fn normalize_angle(angle: f64, what: &str) -> f64 {
    if (0.0..=TAU).contains(&angle) {
        angle
    } else {
        let wrapped = angle.rem_euclid(TAU);
        log::warn!("{what} {angle} outside [0, 2*pi]; reduced to {wrapped}");
        wrapped
    }
}

fn check_pair(a: usize, b: usize, total_qubits: usize) -> Result<(), QmathError> {
    if total_qubits > MAX_QUBITS {
        return Err(QmathError::TooManyQubits { qubits: total_qubits, max: MAX_QUBITS });
    }
    if a >= total_qubits {
        return Err(QmathError::QubitOutOfRange { index: a, qubits: total_qubits });
    }
    if b >= total_qubits {
        return Err(QmathError::QubitOutOfRange { index: b, qubits: total_qubits });
    }
    if a == b {
        return Err(QmathError::EqualQubits(a));
    }
    Ok(())
}
