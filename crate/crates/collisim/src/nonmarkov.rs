//! Trace-distance series, the discretized non-Markovianity measure with
//! optimization over initial state pairs, and the correlation-based upper
//! bound on trace-distance growth.

use std::f64::consts::PI;

use thiserror::Error;

use crate::engine::{
    run_system_samples, EngineError, ModelParams, SystemSample, TrajectoryRecord,
};
use crate::exec::try_map_collect;
use crate::qmath::{
    commutator, swap_matrix, trace_distance, trace_norm, BlochPureState, ComplexMatrix,
    DensityMatrix, QmathError,
};

/// Errors from the non-Markovianity layer.
#[derive(Debug, Error)]
pub enum NonmarkovError {
    #[error("trajectory lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("a distance series needs at least two entries (got {0})")]
    SeriesTooShort(usize),
    #[error("optimization grid must have at least two points (got {0})")]
    GridTooSmall(usize),
    #[error("sweep values must be non-empty")]
    EmptySweep,
    #[error("collision threshold {0} is outside [0, 1]")]
    BadThreshold(f64),
    #[error("trajectories carry no joint-state records")]
    MissingJointRecords,
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Qmath(#[from] QmathError),
}

/// Trace-distance values per step, one entry per recorded state.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceSeries {
    values: Vec<f64>,
}

impl DistanceSeries {
    /// Wraps raw values; each must lie in `[0, 1]`.
    pub fn from_values(values: Vec<f64>) -> Result<Self, NonmarkovError> {
        if values.len() < 2 {
            return Err(NonmarkovError::SeriesTooShort(values.len()));
        }
        debug_assert!(values.iter().all(|v| (0.0..=1.0).contains(v)));
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Pointwise trace distance between the reduced system states of two
/// trajectories.
pub fn distance_series(
    traj1: &TrajectoryRecord,
    traj2: &TrajectoryRecord,
) -> Result<DistanceSeries, NonmarkovError> {
    if traj1.len() != traj2.len() {
        return Err(NonmarkovError::LengthMismatch(traj1.len(), traj2.len()));
    }
    let values = traj1
        .entries()
        .iter()
        .zip(traj2.entries())
        .map(|(a, b)| trace_distance(&a.system, &b.system))
        .collect::<Result<Vec<_>, _>>()?;
    DistanceSeries::from_values(values)
}

/// Same series computed from compact samples.
pub fn distance_series_from_samples(
    s1: &[SystemSample],
    s2: &[SystemSample],
) -> Result<DistanceSeries, NonmarkovError> {
    if s1.len() != s2.len() {
        return Err(NonmarkovError::LengthMismatch(s1.len(), s2.len()));
    }
    let values = s1.iter().zip(s2).map(|(a, b)| a.trace_distance(b)).collect();
    DistanceSeries::from_values(values)
}

/// Discretized measure: the sum of all positive step-to-step increments of
/// the trace distance, together with the maximal runs of consecutive
/// increases (inclusive step ranges).
pub fn blp_measure(series: &DistanceSeries) -> Result<(f64, Vec<(usize, usize)>), NonmarkovError> {
    if series.len() < 2 {
        return Err(NonmarkovError::SeriesTooShort(series.len()));
    }
    let values = series.values();
    let mut total = 0.0;
    let mut intervals: Vec<(usize, usize)> = Vec::new();
    let mut open: Option<(usize, usize)> = None;
    for n in 1..values.len() {
        let increment = values[n] - values[n - 1];
        if increment > 0.0 {
            total += increment;
            open = match open {
                Some((a, _)) => Some((a, n)),
                None => Some((n, n)),
            };
        } else if let Some(run) = open.take() {
            intervals.push(run);
        }
    }
    if let Some(run) = open {
        intervals.push(run);
    }
    Ok((total, intervals))
}

/// Sum of positive increments only; the hot loop of the pair search.
fn positive_variation(s1: &[SystemSample], s2: &[SystemSample]) -> f64 {
    let mut total = 0.0;
    let mut prev = s1[0].trace_distance(&s2[0]);
    for (a, b) in s1.iter().zip(s2).skip(1) {
        let d = a.trace_distance(b);
        if d > prev {
            total += d - prev;
        }
        prev = d;
    }
    total
}

/// Result of maximizing the measure over pairs of initial states.
#[derive(Clone, Debug)]
pub struct MeasureResult {
    /// The maximized measure.
    pub n_value: f64,
    /// Initial-state angles achieving it.
    pub best_pair: (f64, f64),
    /// Step ranges where the winning pair's distance increased.
    pub increase_intervals: Vec<(usize, usize)>,
    /// Number of grid points the search used.
    pub grid_resolution: usize,
}

/// Maximizes the measure over all unordered pairs of pure initial states
/// with angles on a uniform grid over `[0, π)` (the state family is
/// π-periodic up to a global sign). Ties resolve to the lexicographically
/// smallest pair.
pub fn optimize_measure(params: &ModelParams, grid: usize) -> Result<MeasureResult, NonmarkovError> {
    if grid < 2 {
        return Err(NonmarkovError::GridTooSmall(grid));
    }
    let thetas: Vec<f64> = (0..grid).map(|i| i as f64 * PI / grid as f64).collect();
    let trajectories = try_map_collect(thetas.clone(), |theta| {
        run_system_samples(&BlochPureState::new(theta).density(), params)
    })?;

    let pairs: Vec<(usize, usize)> =
        (0..grid).flat_map(|i| ((i + 1)..grid).map(move |j| (i, j))).collect();
    let scores = crate::exec::map_collect(pairs.clone(), |(i, j)| {
        positive_variation(&trajectories[i], &trajectories[j])
    });

    // Strict comparison over lexicographically ordered pairs implements the
    // tie-break deterministically.
    let mut best = 0usize;
    for (idx, score) in scores.iter().enumerate() {
        if *score > scores[best] {
            best = idx;
        }
    }
    let (i, j) = pairs[best];
    let series = distance_series_from_samples(&trajectories[i], &trajectories[j])?;
    let (n_value, increase_intervals) = blp_measure(&series)?;
    Ok(MeasureResult {
        n_value,
        best_pair: (thetas[i], thetas[j]),
        increase_intervals,
        grid_resolution: grid,
    })
}

/// One optimized measure per intra-environment strength; embarrassingly
/// parallel and deterministic.
pub fn delta_sweep(
    params_base: &ModelParams,
    delta_values: &[f64],
    grid: usize,
) -> Result<Vec<(f64, MeasureResult)>, NonmarkovError> {
    if delta_values.is_empty() {
        return Err(NonmarkovError::EmptySweep);
    }
    try_map_collect(delta_values.to_vec(), |delta| {
        let params = params_base.clone().with_delta(delta);
        optimize_measure(&params, grid).map(|m| (delta, m))
    })
}

/// One optimized measure per collision threshold. Every entry reuses the
/// base seed, so runs at different thresholds share their draw sequence.
pub fn threshold_sweep(
    params_base: &ModelParams,
    thresholds: &[f64],
    grid: usize,
) -> Result<Vec<(f64, MeasureResult)>, NonmarkovError> {
    if thresholds.is_empty() {
        return Err(NonmarkovError::EmptySweep);
    }
    if let Some(&bad) = thresholds.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(NonmarkovError::BadThreshold(bad));
    }
    try_map_collect(thresholds.to_vec(), |p| {
        let params = params_base.clone().with_collision_probability(p)?;
        optimize_measure(&params, grid).map(|m| (p, m))
    })
}

/// Per-step diagnostics comparing the discrete trace-distance derivative
/// with the two terms of the correlation-based upper bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SecBoundEntry {
    pub step: usize,
    /// `D_n - D_{n-1}`.
    pub discrete_derivative: f64,
    /// Environment-difference term, `½·min_k ‖Tr_E[H, ρ_k^S ⊗ (ρ_1^E - ρ_2^E)]‖₁`.
    pub env_term: f64,
    /// Correlation term, `½·‖Tr_E[H, χ_1 - χ_2]‖₁`.
    pub sec_term: f64,
}

/// Bound diagnostics per step; entry 0 is the initial condition with all
/// terms zero.
#[derive(Clone, Debug)]
pub struct SecBoundSeries {
    entries: Vec<SecBoundEntry>,
}

impl SecBoundSeries {
    pub fn entries(&self) -> &[SecBoundEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Evaluates the bound terms along a pair of recorded trajectories.
///
/// The generator `H` is the bare swap operator of the imminent collision
/// (the partial swap is its exponential), and both terms are evaluated on
/// the pre-collision joint states, reconstructed from the records of the
/// previous step by appending a prepared qubit, running the
/// intra-environment swap, and tracing the outgoing qubit.
pub fn sec_bound_series(
    traj1: &TrajectoryRecord,
    traj2: &TrajectoryRecord,
    params: &ModelParams,
) -> Result<SecBoundSeries, NonmarkovError> {
    if traj1.len() != traj2.len() {
        return Err(NonmarkovError::LengthMismatch(traj1.len(), traj2.len()));
    }
    let generator = swap_matrix(0, 1, 2)?;
    let mut entries = Vec::with_capacity(traj1.len());
    entries.push(SecBoundEntry { step: 0, discrete_derivative: 0.0, env_term: 0.0, sec_term: 0.0 });

    let mut prev_distance =
        trace_distance(traj1.system_state(0), traj2.system_state(0))?;
    for n in 1..traj1.len() {
        let pre1 = pre_collision_from_record(traj1, n, params)?;
        let pre2 = pre_collision_from_record(traj2, n, params)?;

        let sys1 = pre1.partial_trace(&[0])?;
        let env1 = pre1.partial_trace(&[1])?;
        let sys2 = pre2.partial_trace(&[0])?;
        let env2 = pre2.partial_trace(&[1])?;
        let env_diff = &env1 - &env2;
        let chi1 = &pre1 - &sys1.kron(&env1);
        let chi2 = &pre2 - &sys2.kron(&env2);

        let env_term = 0.5
            * [&sys1, &sys2]
                .iter()
                .map(|sys| {
                    let embedded = sys.kron(&env_diff);
                    let traced = commutator(&generator, &embedded)
                        .expect("dim 4")
                        .partial_trace(&[0])
                        .expect("two qubits");
                    trace_norm(&traced)
                })
                .fold(f64::INFINITY, f64::min);

        let chi_diff = &chi1 - &chi2;
        let sec_term = 0.5
            * trace_norm(
                &commutator(&generator, &chi_diff)
                    .expect("dim 4")
                    .partial_trace(&[0])
                    .expect("two qubits"),
            );

        let distance = trace_distance(traj1.system_state(n), traj2.system_state(n))?;
        entries.push(SecBoundEntry {
            step: n,
            discrete_derivative: distance - prev_distance,
            env_term,
            sec_term,
        });
        prev_distance = distance;
    }
    Ok(SecBoundSeries { entries })
}

/// Pre-collision joint state at step `n`, reconstructed from the recorded
/// post-iteration joint of step `n - 1`.
fn pre_collision_from_record(
    traj: &TrajectoryRecord,
    n: usize,
    params: &ModelParams,
) -> Result<ComplexMatrix, NonmarkovError> {
    let joint: DensityMatrix =
        traj.joint_state(n - 1).ok_or(NonmarkovError::MissingJointRecords)?;
    let three = joint.matrix().kron(params.env_prep().matrix());
    let three =
        if n == 1 { three } else { three.apply_partial_swap(params.delta(), 1, 2)? };
    Ok(three.partial_trace(&[0, 2])?)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    use super::*;
    use crate::engine::{run_trajectory, StrategyKind};

    fn series(values: &[f64]) -> DistanceSeries {
        DistanceSeries::from_values(values.to_vec()).unwrap()
    }

    fn params(gamma: f64, delta: f64, steps: usize, strategy: StrategyKind) -> ModelParams {
        ModelParams::new(gamma, delta, steps, strategy).unwrap()
    }

    #[test]
    fn identical_trajectories_give_a_zero_series() {
        let p = params(0.05, FRAC_PI_2, 50, StrategyKind::RetainCorrelations);
        let t = run_trajectory(&DensityMatrix::excited(), &p).unwrap();
        let d = distance_series(&t, &t).unwrap();
        assert!(d.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn monotone_series_has_zero_measure_and_no_intervals() {
        let s = series(&[1.0, 0.8, 0.5, 0.5, 0.2]);
        let (value, intervals) = blp_measure(&s).unwrap();
        assert_eq!(value, 0.0);
        assert!(intervals.is_empty());
    }

    #[test]
    fn sawtooth_series_counts_one_unit_per_rise() {
        // 1,0,1,0,... over n steps accumulates floor(n/2).
        for n in [6usize, 7, 100] {
            let values: Vec<f64> = (0..=n).map(|k| if k % 2 == 0 { 1.0 } else { 0.0 }).collect();
            let (value, intervals) = blp_measure(&series(&values)).unwrap();
            assert_eq!(value, (n / 2) as f64);
            assert_eq!(intervals.len(), n / 2);
            assert!(intervals.iter().all(|&(a, b)| a == b && a % 2 == 0));
        }
    }

    #[test]
    fn oscillating_closed_form_accumulates_one_unit_per_period() {
        let gamma = 0.05_f64;
        let n = 30_000usize;
        let values: Vec<f64> = (0..=n).map(|k| (k as f64 * gamma).cos().powi(2)).collect();
        let (value, _) = blp_measure(&series(&values)).unwrap();
        let expected = n as f64 * gamma / PI;
        assert!((value - expected).abs() <= 1.0, "measure {value}, expected about {expected}");
    }

    #[test]
    fn measure_intervals_are_disjoint_and_ordered() {
        let s = series(&[0.2, 0.5, 0.4, 0.6, 0.7, 0.1, 0.3]);
        let (value, intervals) = blp_measure(&s).unwrap();
        assert!((value - (0.3 + 0.3 + 0.2)).abs() < 1e-15);
        assert_eq!(intervals, vec![(1, 1), (3, 4), (6, 6)]);
    }

    #[test]
    fn full_swap_dynamics_picks_the_computational_pair() {
        let p = params(0.05, FRAC_PI_2, 2000, StrategyKind::RetainCorrelations);
        let result = optimize_measure(&p, 16).unwrap();
        assert!((result.best_pair.0 - 0.0).abs() < 1e-12);
        assert!((result.best_pair.1 - FRAC_PI_2).abs() < 1e-12);
        assert!(result.n_value > 0.0);
    }

    #[test]
    fn erase_strategy_picks_the_superposition_pair() {
        let p = params(0.05, FRAC_PI_2, 2000, StrategyKind::EraseCorrelations);
        let result = optimize_measure(&p, 16).unwrap();
        assert!((result.best_pair.0 - FRAC_PI_4).abs() < 1e-12, "got {:?}", result.best_pair);
        assert!((result.best_pair.1 - 3.0 * FRAC_PI_4).abs() < 1e-12, "got {:?}", result.best_pair);
        assert!(result.n_value > 0.0);
    }

    #[test]
    fn homogenization_limit_is_markovian_for_every_pair() {
        let p = params(0.05, 0.0, 500, StrategyKind::RetainCorrelations);
        let result = optimize_measure(&p, 8).unwrap();
        assert!(result.n_value <= 1e-9, "measure {}", result.n_value);
    }

    #[test]
    fn refining_the_grid_never_loses_measure() {
        let p = params(0.05, FRAC_PI_2, 400, StrategyKind::RetainCorrelations);
        let coarse = optimize_measure(&p, 8).unwrap();
        let fine = optimize_measure(&p, 16).unwrap();
        assert!(fine.n_value >= coarse.n_value - 1e-12);
    }

    #[test]
    fn delta_sweep_orders_strategies_and_vanishes_at_zero() {
        let base = params(0.05, FRAC_PI_2, 1000, StrategyKind::RetainCorrelations);
        let deltas: Vec<f64> = (0..10).map(|i| i as f64 * FRAC_PI_2 / 9.0).collect();
        let retain = delta_sweep(&base, &deltas, 8).unwrap();
        let erase =
            delta_sweep(&base.clone().with_strategy(StrategyKind::EraseCorrelations), &deltas, 8)
                .unwrap();
        assert!(retain[0].1.n_value <= 1e-9);
        assert!(erase[0].1.n_value <= 1e-9);
        for (r, e) in retain.iter().zip(&erase) {
            assert!(r.1.n_value >= e.1.n_value - 1e-9, "delta {}", r.0);
        }
        let expected = 1000.0 * 0.05 / PI;
        let last = retain.last().unwrap();
        assert!((last.1.n_value - expected).abs() <= 1.0);
    }

    #[test]
    fn threshold_sweep_boundaries_behave() {
        let base = params(0.05, FRAC_PI_2, 500, StrategyKind::RetainCorrelations).with_seed(7);
        let sweep = threshold_sweep(&base, &[0.0, 1.0], 4).unwrap();
        assert_eq!(sweep[0].1.n_value, 0.0);
        let deterministic = optimize_measure(&base, 4).unwrap();
        assert!((sweep[1].1.n_value - deterministic.n_value).abs() < 1e-15);

        assert!(matches!(
            threshold_sweep(&base, &[0.5, 1.2], 4),
            Err(NonmarkovError::BadThreshold(_))
        ));
    }

    #[test]
    fn bound_terms_vanish_for_identical_inputs() {
        let p = params(0.05, FRAC_PI_2, 40, StrategyKind::RetainCorrelations);
        let t = run_trajectory(&DensityMatrix::excited(), &p).unwrap();
        let bound = sec_bound_series(&t, &t, &p).unwrap();
        for entry in bound.entries() {
            assert_eq!(entry.discrete_derivative, 0.0);
            assert!(entry.env_term < 1e-14);
            assert!(entry.sec_term < 1e-14);
        }
    }

    #[test]
    fn orthogonal_inputs_have_null_env_term_and_known_sec_term() {
        let gamma = 0.05;
        let p = params(gamma, FRAC_PI_2, 300, StrategyKind::RetainCorrelations);
        let t1 = run_trajectory(&DensityMatrix::ground(), &p).unwrap();
        let t2 = run_trajectory(&DensityMatrix::excited(), &p).unwrap();
        let bound = sec_bound_series(&t1, &t2, &p).unwrap();
        for entry in bound.entries().iter().skip(1) {
            assert!(entry.env_term < 1e-12, "step {}: env {}", entry.step, entry.env_term);
            // Hand expansion of the pre-collision correlations gives
            // sec_term = |sin(2(n-1)γ)|.
            let expected = (2.0 * (entry.step as f64 - 1.0) * gamma).sin().abs();
            assert!(
                (entry.sec_term - expected).abs() < 1e-10,
                "step {}: sec {} vs {}",
                entry.step,
                entry.sec_term,
                expected
            );
        }
    }

    #[test]
    fn erase_strategy_has_null_sec_term() {
        let p = params(0.05, FRAC_PI_2, 100, StrategyKind::EraseCorrelations);
        let t1 = run_trajectory(&BlochPureState::new(FRAC_PI_4).density(), &p).unwrap();
        let t2 = run_trajectory(&BlochPureState::new(3.0 * FRAC_PI_4).density(), &p).unwrap();
        let bound = sec_bound_series(&t1, &t2, &p).unwrap();
        for entry in bound.entries() {
            assert!(entry.sec_term < 1e-12, "step {}", entry.step);
        }
    }

    #[test]
    fn missing_joint_records_are_reported() {
        use crate::engine::{run_trajectory_with, RecordDetail};
        let p = params(0.05, FRAC_PI_2, 10, StrategyKind::RetainCorrelations);
        let slim = run_trajectory_with(&DensityMatrix::ground(), &p, RecordDetail::SystemOnly)
            .unwrap();
        let full = run_trajectory(&DensityMatrix::excited(), &p).unwrap();
        assert!(matches!(
            sec_bound_series(&slim, &full, &p),
            Err(NonmarkovError::MissingJointRecords)
        ));
    }
}
