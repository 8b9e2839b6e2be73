//! Iterative collision dynamics: a system qubit meets a chain of identically
//! prepared environment qubits through partial-swap collisions, with an
//! intra-environment partial swap carrying each outgoing qubit's content to
//! the next one.
//!
//! One iteration, in physical order:
//!
//! 1. a fresh environment qubit is appended in the prepared state;
//! 2. the intra-environment partial swap (strength `delta`) couples the
//!    outgoing and fresh qubits — skipped on the first iteration, which has
//!    no predecessor;
//! 3. the outgoing qubit is traced out (its future is inert);
//! 4. the system collides with the fresh qubit (strength `gamma`); in
//!    Monte Carlo mode this happens only if a uniform draw falls below the
//!    collision probability;
//! 5. under [`StrategyKind::EraseCorrelations`] the joint state is replaced
//!    by the product of its marginals.
//!
//! The active state between iterations is therefore always a two-qubit
//! density matrix (system ⊗ current environment qubit).

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::qmath::{
    normalize_angle, ComplexMatrix, DensityMatrix, QmathError, HERMITICITY_TOL, MAX_QUBITS,
    TRACE_TOL,
};

/// How system–environment correlations are handled after each collision.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StrategyKind {
    /// Strategy 1: correlations with the just-used environment qubit are
    /// erased right after the collision.
    EraseCorrelations,
    /// Strategy 2: correlations ride along until the qubit is traced out for
    /// good.
    RetainCorrelations,
}

impl StrategyKind {
    /// Maps the conventional numeric labels 1 and 2.
    pub fn from_label(label: u8) -> Option<Self> {
        match label {
            1 => Some(Self::EraseCorrelations),
            2 => Some(Self::RetainCorrelations),
            _ => None,
        }
    }

    pub fn label(&self) -> u8 {
        match self {
            Self::EraseCorrelations => 1,
            Self::RetainCorrelations => 2,
        }
    }
}

/// Errors from the collision engine.
#[derive(Debug, Error)]
pub enum EngineError {
    #[error("steps must be at least 1")]
    ZeroSteps,
    #[error("collision probability {0} is outside [0, 1]")]
    BadProbability(f64),
    #[error("environment preparation must be a single-qubit state (got dimension {0})")]
    EnvNotSingleQubit(usize),
    #[error("initial system state must be a single qubit (got dimension {0})")]
    SystemNotSingleQubit(usize),
    #[error("step budget of {0} iterations is exhausted")]
    StepBudgetExhausted(usize),
    #[error("simulation state violates invariants: {0}")]
    InvalidState(&'static str),
    #[error("joint state must cover exactly two qubits (got dimension {0})")]
    NotTwoQubits(usize),
    #[error("chain of {chain} qubits plus the system exceeds the {max}-qubit guard")]
    ChainTooLong { chain: usize, max: usize },
    #[error("{steps} steps exceed the chain length {chain}")]
    StepsExceedChain { steps: usize, chain: usize },
    #[error(transparent)]
    Qmath(#[from] QmathError),
}

/// All model knobs for a run.
#[derive(Clone, Debug)]
pub struct ModelParams {
    gamma: f64,
    delta: f64,
    steps: usize,
    strategy: StrategyKind,
    env_prep: DensityMatrix,
    collision_probability: f64,
    seed: u64,
}

impl ModelParams {
    /// Deterministic model with the environment prepared in the ground
    /// state. Swap strengths outside `[0, 2π]` are wrapped with a warning.
    pub fn new(
        gamma: f64,
        delta: f64,
        steps: usize,
        strategy: StrategyKind,
    ) -> Result<Self, EngineError> {
        if steps == 0 {
            return Err(EngineError::ZeroSteps);
        }
        Ok(Self {
            gamma: normalize_angle(gamma, "system-environment swap strength"),
            delta: normalize_angle(delta, "intra-environment swap strength"),
            steps,
            strategy,
            env_prep: DensityMatrix::ground(),
            collision_probability: 1.0,
            seed: 0,
        })
    }

    pub fn with_env_prep(mut self, env_prep: DensityMatrix) -> Result<Self, EngineError> {
        if env_prep.dim() != 2 {
            return Err(EngineError::EnvNotSingleQubit(env_prep.dim()));
        }
        self.env_prep = env_prep;
        Ok(self)
    }

    pub fn with_collision_probability(mut self, p: f64) -> Result<Self, EngineError> {
        if !(0.0..=1.0).contains(&p) {
            return Err(EngineError::BadProbability(p));
        }
        self.collision_probability = p;
        Ok(self)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_strategy(mut self, strategy: StrategyKind) -> Self {
        self.strategy = strategy;
        self
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = normalize_angle(delta, "intra-environment swap strength");
        self
    }

    pub fn with_steps(mut self, steps: usize) -> Result<Self, EngineError> {
        if steps == 0 {
            return Err(EngineError::ZeroSteps);
        }
        self.steps = steps;
        Ok(self)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn strategy(&self) -> StrategyKind {
        self.strategy
    }

    pub fn env_prep(&self) -> &DensityMatrix {
        &self.env_prep
    }

    pub fn collision_probability(&self) -> f64 {
        self.collision_probability
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Active joint state (system ⊗ current environment qubit) plus the step
/// counter and the generator driving Monte Carlo draws.
#[derive(Clone, Debug)]
pub struct SimulationState {
    joint: DensityMatrix,
    step: usize,
    rng: ChaCha8Rng,
    last_collision: bool,
}

impl SimulationState {
    /// Initial state at step 0: the system next to one prepared (never yet
    /// collided) environment qubit.
    pub fn initial(system: &DensityMatrix, params: &ModelParams) -> Result<Self, EngineError> {
        if system.dim() != 2 {
            return Err(EngineError::SystemNotSingleQubit(system.dim()));
        }
        Ok(Self {
            joint: system.tensor(&params.env_prep),
            step: 0,
            rng: ChaCha8Rng::seed_from_u64(params.seed),
            last_collision: false,
        })
    }

    pub fn joint(&self) -> &DensityMatrix {
        &self.joint
    }

    pub fn step_index(&self) -> usize {
        self.step
    }

    /// Whether the most recent iteration's collision actually fired.
    pub fn last_collision_occurred(&self) -> bool {
        self.last_collision
    }

    /// Reduced system state.
    pub fn system(&self) -> DensityMatrix {
        self.joint.partial_trace(&[0]).expect("two-qubit joint")
    }

    /// Reduced state of the active environment qubit.
    pub fn environment(&self) -> DensityMatrix {
        self.joint.partial_trace(&[1]).expect("two-qubit joint")
    }
}

/// Joint-state bookkeeping attached to a trajectory entry.
#[derive(Clone, Debug)]
pub struct JointRecord {
    /// Reduced state of the active environment qubit.
    pub environment: DensityMatrix,
    /// Correlation matrix `χ = ρ_SE - ρ_S ⊗ ρ_E` of the active pair.
    pub correlation: ComplexMatrix,
}

/// Per-step observables; entry 0 is the initial condition.
#[derive(Clone, Debug)]
pub struct StepRecord {
    pub step: usize,
    pub system: DensityMatrix,
    pub collision_occurred: bool,
    pub joint: Option<JointRecord>,
}

/// Full record of a trajectory: `steps + 1` entries.
#[derive(Clone, Debug)]
pub struct TrajectoryRecord {
    entries: Vec<StepRecord>,
}

impl TrajectoryRecord {
    pub fn entries(&self) -> &[StepRecord] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of iterations the trajectory covers.
    pub fn steps(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn system_state(&self, step: usize) -> &DensityMatrix {
        &self.entries[step].system
    }

    /// Rebuilds the stored two-qubit joint state `χ + ρ_S ⊗ ρ_E`; `None` if
    /// the trajectory was recorded without joint bookkeeping.
    pub fn joint_state(&self, step: usize) -> Option<DensityMatrix> {
        let entry = &self.entries[step];
        let joint = entry.joint.as_ref()?;
        let product = entry.system.tensor(&joint.environment);
        Some(DensityMatrix::from_trusted(&joint.correlation + product.matrix()))
    }
}

/// How much per-step detail a trajectory records.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RecordDetail {
    /// Reduced system states only; enough for distance series.
    SystemOnly,
    /// Also keep the active environment state and correlation matrix.
    WithJoint,
}

/// Executes one iteration of the collision model.
pub fn step(state: SimulationState, params: &ModelParams) -> Result<SimulationState, EngineError> {
    if state.step >= params.steps {
        return Err(EngineError::StepBudgetExhausted(params.steps));
    }
    let joint = state.joint.matrix();
    if joint.hermiticity_error() > HERMITICITY_TOL {
        return Err(EngineError::InvalidState("joint state is not Hermitian"));
    }
    let trace = joint.trace();
    if (trace.re - 1.0).abs() > TRACE_TOL || trace.im.abs() > TRACE_TOL {
        return Err(EngineError::InvalidState("joint state trace differs from one"));
    }

    let mut rng = state.rng;
    // One draw per iteration regardless of the threshold, so runs at
    // different collision probabilities share the same draw sequence.
    let draw: f64 = rng.random();
    let collide = draw < params.collision_probability;

    let pre = pre_collision_joint(joint, params.env_prep.matrix(), params.delta, state.step == 0);
    let post = if collide { pre.apply_partial_swap(params.gamma, 0, 1)? } else { pre };
    let joint = match params.strategy {
        StrategyKind::RetainCorrelations => post,
        StrategyKind::EraseCorrelations => {
            let sys = post.partial_trace(&[0])?;
            let env = post.partial_trace(&[1])?;
            sys.kron(&env)
        }
    };

    Ok(SimulationState {
        joint: DensityMatrix::from_trusted(joint),
        step: state.step + 1,
        rng,
        last_collision: collide,
    })
}

/// The (system, fresh-environment) joint state right before the collision:
/// append the prepared qubit, run the intra-environment swap against the
/// outgoing one, and trace the outgoing one out.
///
/// Carrying the bystander system index through
/// `Tr_E[V (ρ_SE ⊗ φ_F) V†]` with `V = cos δ·1 + i sin δ·S_EF` collapses the
/// three-qubit detour to a closed form on 4×4 matrices:
///
/// ```text
/// pre = cos²δ·(ρ_S ⊗ φ) + sin²δ·ρ + i·cosδ·sinδ·[ρ, 1 ⊗ φ]
/// ```
fn pre_collision_joint(
    joint: &ComplexMatrix,
    env_prep: &ComplexMatrix,
    delta: f64,
    first_iteration: bool,
) -> ComplexMatrix {
    let sys = joint.partial_trace(&[0]).expect("two-qubit joint");
    let refreshed = sys.kron(env_prep);
    if first_iteration {
        return refreshed;
    }
    let (s, c) = delta.sin_cos();
    let embedded = ComplexMatrix::identity(2).kron(env_prep);
    let cross = &joint.matmul(&embedded).expect("dim 4") - &embedded.matmul(joint).expect("dim 4");
    let mut out = refreshed.scale(C64::new(c * c, 0.0));
    out = &out + &joint.scale(C64::new(s * s, 0.0));
    &out + &cross.scale(C64::new(0.0, c * s))
}

/// Runs a full trajectory with joint-state bookkeeping.
pub fn run_trajectory(
    initial_system: &DensityMatrix,
    params: &ModelParams,
) -> Result<TrajectoryRecord, EngineError> {
    run_trajectory_with(initial_system, params, RecordDetail::WithJoint)
}

/// Runs a full trajectory with the requested level of per-step detail.
pub fn run_trajectory_with(
    initial_system: &DensityMatrix,
    params: &ModelParams,
    detail: RecordDetail,
) -> Result<TrajectoryRecord, EngineError> {
    let mut state = SimulationState::initial(initial_system, params)?;
    let mut entries = Vec::with_capacity(params.steps + 1);
    entries.push(record_entry(&state, detail));
    for _ in 0..params.steps {
        state = step(state, params)?;
        entries.push(record_entry(&state, detail));
    }
    Ok(TrajectoryRecord { entries })
}

fn record_entry(state: &SimulationState, detail: RecordDetail) -> StepRecord {
    let system = state.system();
    let joint = match detail {
        RecordDetail::SystemOnly => None,
        RecordDetail::WithJoint => {
            let environment = state.environment();
            let product = system.tensor(&environment);
            let correlation = state.joint.matrix() - product.matrix();
            Some(JointRecord { environment, correlation })
        }
    };
    StepRecord { step: state.step, system, collision_occurred: state.last_collision, joint }
}

/// Compact system-state sample, enough to evaluate single-qubit trace
/// distances without touching the eigensolver.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SystemSample {
    pub ground_population: f64,
    pub coherence_re: f64,
    pub coherence_im: f64,
}

impl SystemSample {
    pub fn from_state(rho: &DensityMatrix) -> Result<Self, EngineError> {
        if rho.dim() != 2 {
            return Err(EngineError::SystemNotSingleQubit(rho.dim()));
        }
        let m = rho.matrix();
        Ok(Self {
            ground_population: m[(0, 0)].re,
            coherence_re: m[(0, 1)].re,
            coherence_im: m[(0, 1)].im,
        })
    }

    /// Trace distance between two single-qubit states. The difference is a
    /// traceless Hermitian 2×2 matrix with eigenvalues `±sqrt(Δp² + |Δc|²)`.
    pub fn trace_distance(&self, other: &Self) -> f64 {
        let dp = self.ground_population - other.ground_population;
        let dre = self.coherence_re - other.coherence_re;
        let dim = self.coherence_im - other.coherence_im;
        (dp * dp + dre * dre + dim * dim).sqrt().clamp(0.0, 1.0)
    }
}

/// Runs a trajectory keeping only compact system samples; the fast path for
/// grid searches and sweeps.
pub fn run_system_samples(
    initial_system: &DensityMatrix,
    params: &ModelParams,
) -> Result<Vec<SystemSample>, EngineError> {
    let mut state = SimulationState::initial(initial_system, params)?;
    let mut samples = Vec::with_capacity(params.steps + 1);
    samples.push(sample_from_joint(state.joint.matrix()));
    for _ in 0..params.steps {
        state = step(state, params)?;
        samples.push(sample_from_joint(state.joint.matrix()));
    }
    Ok(samples)
}

/// System sample read directly off a two-qubit joint in the ordered basis
/// {|00>, |01>, |10>, |11>}: the system marginal sums the environment index.
fn sample_from_joint(joint: &ComplexMatrix) -> SystemSample {
    let p = joint[(0, 0)].re + joint[(1, 1)].re;
    let coh = joint[(0, 2)] + joint[(1, 3)];
    SystemSample { ground_population: p, coherence_re: coh.re, coherence_im: coh.im }
}

/// Correlation matrix `χ = ρ_SE - ρ_S ⊗ ρ_E` of a two-qubit state.
pub fn correlation_matrix(joint: &DensityMatrix) -> Result<ComplexMatrix, EngineError> {
    if joint.dim() != 4 {
        return Err(EngineError::NotTwoQubits(joint.dim()));
    }
    let sys = joint.partial_trace(&[0])?;
    let env = joint.partial_trace(&[1])?;
    Ok(joint.matrix() - &sys.matrix().kron(env.matrix()))
}

/// Evolves the complete (system + chain) register with no intermediate
/// tracing, recording the reduced system state after each iteration. This is
/// the exact reference the two-qubit engine is checked against.
pub fn run_exact_oracle(
    initial_system: &DensityMatrix,
    params: &ModelParams,
    chain_length: usize,
) -> Result<TrajectoryRecord, EngineError> {
    if initial_system.dim() != 2 {
        return Err(EngineError::SystemNotSingleQubit(initial_system.dim()));
    }
    if chain_length + 1 > MAX_QUBITS {
        return Err(EngineError::ChainTooLong { chain: chain_length, max: MAX_QUBITS });
    }
    if params.steps > chain_length {
        return Err(EngineError::StepsExceedChain { steps: params.steps, chain: chain_length });
    }

    let mut full = initial_system.matrix().clone();
    for _ in 0..chain_length {
        full = full.kron(params.env_prep.matrix());
    }

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut entries = Vec::with_capacity(params.steps + 1);
    entries.push(StepRecord {
        step: 0,
        system: initial_system.clone(),
        collision_occurred: false,
        joint: Some(JointRecord {
            environment: params.env_prep.clone(),
            correlation: ComplexMatrix::zeros(4),
        }),
    });

    for n in 1..=params.steps {
        if n >= 2 {
            full = full.apply_partial_swap(params.delta, n - 1, n)?;
        }
        let draw: f64 = rng.random();
        let collide = draw < params.collision_probability;
        if collide {
            full = full.apply_partial_swap(params.gamma, 0, n)?;
        }

        let system = DensityMatrix::from_trusted(full.partial_trace(&[0])?);
        let pair = full.partial_trace(&[0, n])?;
        let environment = DensityMatrix::from_trusted(pair.partial_trace(&[1])?);
        let correlation = &pair - &system.matrix().kron(environment.matrix());
        entries.push(StepRecord {
            step: n,
            system,
            collision_occurred: collide,
            joint: Some(JointRecord { environment, correlation }),
        });
    }
    Ok(TrajectoryRecord { entries })
}
