//! Collision-model simulation of a qubit repeatedly interacting with a
//! chain of identically prepared environment qubits.
//!
//! Every interaction is a partial swap `cos γ·1 + i sin γ·S`; consecutive
//! environment qubits are coupled by a second partial swap of strength `δ`
//! that carries information (and, optionally, correlations) forward along
//! the chain. The crate provides:
//!
//! - [`qmath`]: dense complex matrices, density matrices, partial-swap
//!   gates, partial traces, trace distance and trace norm;
//! - [`engine`]: the iterative two-qubit reduced dynamics under both
//!   correlation-handling strategies, a Monte Carlo collision gate, and an
//!   exact full-chain oracle;
//! - [`nonmarkov`]: distance series, the discretized backflow measure with
//!   pair optimization, parameter sweeps, and correlation-bound
//!   diagnostics.
//!
//! Sweeps and grid searches run data-parallel under the default `parallel`
//! feature and fall back to sequential iteration without it; results are
//! reduced in input order either way, so outputs are identical.

pub mod engine;
mod exec;
pub mod nonmarkov;
pub mod qmath;

pub use engine::{
    correlation_matrix, run_exact_oracle, run_system_samples, run_trajectory,
    run_trajectory_with, step, EngineError, JointRecord, ModelParams, RecordDetail,
    SimulationState, StepRecord, StrategyKind, SystemSample, TrajectoryRecord,
};
pub use nonmarkov::{
    blp_measure, delta_sweep, distance_series, distance_series_from_samples, optimize_measure,
    sec_bound_series, threshold_sweep, DistanceSeries, MeasureResult, NonmarkovError,
    SecBoundEntry, SecBoundSeries,
};
pub use qmath::{
    commutator, fidelity_with_ground, hermitian_eigenvalues, partial_swap, swap_matrix,
    trace_distance, trace_norm, BlochPureState, ComplexMatrix, DensityMatrix, QmathError,
    Unitary,
};
