//! Dense complex linear algebra and quantum primitives for small qubit
//! registers: states, partial-swap gates, partial traces, and the
//! trace-distance / trace-norm functionals.

mod eigen;
mod gates;
mod matrix;
mod metrics;
mod states;

pub use eigen::hermitian_eigenvalues;
pub use gates::{partial_swap, swap_matrix, Unitary, UNITARITY_TOL};
pub use matrix::{commutator, ComplexMatrix, MAX_QUBITS};
pub use metrics::{fidelity_with_ground, trace_distance, trace_norm};
pub use states::{BlochPureState, DensityMatrix, HERMITICITY_TOL, PSD_TOL, TRACE_TOL};

pub(crate) use gates::normalize_angle;

use thiserror::Error;

/// Errors from the linear-algebra layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QmathError {
    #[error("dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("entry count {found} does not match the expected {expected}")]
    BadEntryCount { found: usize, expected: usize },
    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),
    #[error("qubit index {index} out of range for a {qubits}-qubit register")]
    QubitOutOfRange { index: usize, qubits: usize },
    #[error("subsystem indices must differ (both are {0})")]
    EqualQubits(usize),
    #[error("{qubits} qubits exceeds the {max}-qubit guard")]
    TooManyQubits { qubits: usize, max: usize },
    #[error("keep set is empty")]
    EmptyKeepSet,
    #[error("matrix is not unitary (max deviation {0:.3e})")]
    NotUnitary(f64),
    #[error("invalid density matrix: {0}")]
    InvalidDensity(&'static str),
    #[error("expected a single-qubit state, got dimension {0}")]
    NotSingleQubit(usize),
}
