//! Density matrices and the real pure-state family used for initial
//! conditions.

use std::f64::consts::TAU;

use num_complex::Complex64 as C64;

use super::eigen::hermitian_eigenvalues;
use super::matrix::ComplexMatrix;
use super::QmathError;

/// Tolerance on `max |ρ - ρ†|` for a valid density matrix.
pub const HERMITICITY_TOL: f64 = 1e-10;
/// Tolerance on `|tr ρ - 1|`.
pub const TRACE_TOL: f64 = 1e-10;
/// Eigenvalues may undershoot zero by at most this much.
pub const PSD_TOL: f64 = 1e-10;

/// Hermitian, unit-trace, positive-semidefinite matrix over one or more
/// qubits. All constructors either validate or are only reachable through
/// operations that preserve the invariants.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validating constructor.
    pub fn new(matrix: ComplexMatrix) -> Result<Self, QmathError> {
        let herm = matrix.hermiticity_error();
        if herm > HERMITICITY_TOL {
            return Err(QmathError::InvalidDensity("not Hermitian within tolerance"));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(QmathError::InvalidDensity("trace differs from one"));
        }
        let min_eig = hermitian_eigenvalues(&matrix)
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -PSD_TOL {
            return Err(QmathError::InvalidDensity("negative eigenvalue"));
        }
        Ok(Self { matrix })
    }

    /// Wraps a matrix that is known to satisfy the invariants because it was
    /// produced by an invariant-preserving operation.
    pub(crate) fn from_trusted(matrix: ComplexMatrix) -> Self {
        Self { matrix }
    }

    /// Projector onto the computational basis state `|index>` of an
    /// `n_qubits` register.
    pub fn basis_state(n_qubits: usize, index: usize) -> Self {
        let dim = 1usize << n_qubits;
        assert!(index < dim, "basis index out of range");
        let mut m = ComplexMatrix::zeros(dim);
        m[(index, index)] = C64::new(1.0, 0.0);
        Self { matrix: m }
    }

    /// Single-qubit ground state `|0><0|`.
    pub fn ground() -> Self {
        Self::basis_state(1, 0)
    }

    /// Single-qubit excited state `|1><1|`.
    pub fn excited() -> Self {
        Self::basis_state(1, 1)
    }

    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        Self { matrix: ComplexMatrix::identity(dim).scale(C64::new(1.0 / dim as f64, 0.0)) }
    }

    /// Single-qubit mixture `diag(1 - excited_population, excited_population)`.
    pub fn diagonal_mixture(excited_population: f64) -> Result<Self, QmathError> {
        if !(0.0..=1.0).contains(&excited_population) {
            return Err(QmathError::InvalidDensity("population outside [0, 1]"));
        }
        let mut m = ComplexMatrix::zeros(2);
        m[(0, 0)] = C64::new(1.0 - excited_population, 0.0);
        m[(1, 1)] = C64::new(excited_population, 0.0);
        Ok(Self { matrix: m })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn n_qubits(&self) -> usize {
        self.matrix.n_qubits()
    }

    /// Kronecker product of two states; `self` becomes the leftmost factor.
    pub fn tensor(&self, other: &Self) -> Self {
        Self { matrix: self.matrix.kron(&other.matrix) }
    }

    /// Reduced state over the kept qubits, ascending.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self, QmathError> {
        Ok(Self { matrix: self.matrix.partial_trace(keep)? })
    }

    /// Conjugation by the partial-swap unitary on qubits `a` and `b`.
    pub fn apply_partial_swap(&self, strength: f64, a: usize, b: usize) -> Result<Self, QmathError> {
        Ok(Self { matrix: self.matrix.apply_partial_swap(strength, a, b)? })
    }

    /// `tr ρ²`; equals 1 exactly for pure states.
    pub fn purity(&self) -> f64 {
        self.matrix.matmul(&self.matrix).expect("square").trace().re
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix)
    }

    /// Re-checks the type invariants; useful in tests on long-running
    /// trajectories.
    pub fn validate(&self) -> Result<(), QmathError> {
        Self::new(self.matrix.clone()).map(|_| ())
    }
}

/// Pure single-qubit state with real amplitudes `(cos θ, sin θ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochPureState {
    theta: f64,
}

impl BlochPureState {
    /// Angles are periodic; values outside `[0, 2π]` are wrapped.
    pub fn new(theta: f64) -> Self {
        let theta = if (0.0..=TAU).contains(&theta) { theta } else { theta.rem_euclid(TAU) };
        Self { theta }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// The 2×2 density matrix
    /// `[[cos²θ, cosθ·sinθ], [cosθ·sinθ, sin²θ]]`.
    pub fn density(&self) -> DensityMatrix {
        let (s, c) = self.theta.sin_cos();
        let mut m = ComplexMatrix::zeros(2);
        m[(0, 0)] = C64::new(c * c, 0.0);
        m[(0, 1)] = C64::new(c * s, 0.0);
        m[(1, 0)] = C64::new(c * s, 0.0);
        m[(1, 1)] = C64::new(s * s, 0.0);
        DensityMatrix::from_trusted(m)
    }
}
