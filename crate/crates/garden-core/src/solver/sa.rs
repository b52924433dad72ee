//! Simulated annealing sampler with a geometric inverse-temperature ladder.

use alloc::vec::Vec;

use libm::{exp, log};

use crate::qubo::{Assignment, QuboModel};
use crate::rng;
use crate::solver::engine::{FlipState, FlipView};
use crate::solver::{SampleSet, SolverError, SolverParams, Stop};

/// Self-scaling default inverse-temperature range.
///
/// Hot end: a move at the largest possible gain is accepted with
/// probability 1/2. Cold end: the smallest nonzero coefficient is a
/// 100:1 barrier. Clipped to keep the ladder ordered and finite.
pub fn default_beta_range(view: &FlipView) -> (f64, f64) {
    let max_gain = view.max_gain_bound().max(1e-12);
    let min_coeff = view.min_nonzero_coeff().max(1e-12);
    let mut lo = log(2.0) / max_gain;
    let mut hi = log(100.0) / min_coeff;
    lo = lo.clamp(1e-9, 1e9);
    hi = hi.clamp(1e-9, 1e9);
    if lo >= hi {
        lo = hi / 100.0;
    }
    (lo, hi)
}

/// Run `num_reads` independent annealing reads over the view and return the
/// final state of each read.
///
/// Each read owns the generator stream `(seed, read index)`, so the result
/// does not depend on how reads are scheduled. With `sweeps = 0` the random
/// initial states are returned unchanged.
pub fn sweep_states(
    view: &FlipView,
    num_reads: usize,
    sweeps: usize,
    beta_range: Option<(f64, f64)>,
    seed: u64,
    stop: &dyn Stop,
) -> Vec<Vec<u8>> {
    let n = view.num_vars();
    let (beta_lo, beta_hi) = beta_range.unwrap_or_else(|| default_beta_range(view));
    let log_lo = log(beta_lo);
    let log_hi = log(beta_hi);

    let mut finals = Vec::with_capacity(num_reads);
    for read in 0..num_reads {
        let mut rng = rng::stream_rng(seed, read as u64);
        let init = Assignment::random(&mut rng, n);
        let mut state = FlipState::new(view, init.bits().to_vec());
        for sweep in 0..sweeps {
            let frac = if sweeps > 1 { sweep as f64 / (sweeps - 1) as f64 } else { 0.0 };
            let beta = exp(log_lo + (log_hi - log_lo) * frac);
            for k in 0..n {
                let delta = state.gain(k);
                if delta <= 0.0 || rng::unit_f64(&mut rng) < exp(-beta * delta) {
                    state.flip(k);
                }
            }
        }
        finals.push(state.into_bits());
        if stop.should_stop() {
            break;
        }
    }
    finals
}

/// Simulated annealing on an integer model.
///
/// `num_reads` independent single-bit-flip Metropolis runs over a geometric
/// ladder from `beta_range.0` to `beta_range.1`, `sweeps` full passes each.
/// Deterministic given the seed; every read's final state is recorded with
/// its exact integer energy.
pub fn solve_sa(
    model: &QuboModel,
    params: &SolverParams,
    stop: &dyn Stop,
) -> Result<SampleSet, SolverError> {
    params.validate()?;
    let view = FlipView::from_model(model);
    let finals = sweep_states(
        &view,
        params.num_reads,
        params.sweeps,
        params.beta_range,
        params.seed,
        stop,
    );
    let assignments = finals
        .into_iter()
        .map(|b| Assignment::new(b).expect("bits are binary"));
    Ok(SampleSet::from_assignments("sa", model, params.clone(), assignments))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{generate_instance, CompanionsMatrix, SamplingMode};
    use crate::qubo::build_qubo;
    use crate::solver::{solve_exhaustive, NoStop};

    #[test]
    fn zero_sweeps_returns_initial_states() {
        let catalog = CompanionsMatrix::example();
        let inst = generate_instance(4, &catalog, SamplingMode::WithoutReplacement, 9).unwrap();
        let model = build_qubo(&inst);
        let params = SolverParams { num_reads: 5, sweeps: 0, seed: 31, ..Default::default() };
        let set = solve_sa(&model, &params, &NoStop).unwrap();
        assert_eq!(set.total_occurrences(), 5);
        // the raw initial states are exactly the per-read stream draws
        let view = FlipView::from_model(&model);
        let raw = sweep_states(&view, 5, 0, None, 31, &NoStop);
        for bits in raw {
            let a = Assignment::new(bits).unwrap();
            assert!(set.samples.iter().any(|s| s.assignment == a));
        }
    }

    #[test]
    fn never_beats_the_oracle_and_finds_optimum() {
        let catalog = CompanionsMatrix::example();
        let inst = generate_instance(4, &catalog, SamplingMode::WithoutReplacement, 7).unwrap();
        let model = build_qubo(&inst);
        let optimum = solve_exhaustive(&model).unwrap().best().unwrap().energy;
        let params = SolverParams { num_reads: 50, sweeps: 200, seed: 2, ..Default::default() };
        let set = solve_sa(&model, &params, &NoStop).unwrap();
        let best = set.best().unwrap().energy;
        assert!(best >= optimum);
        // 50 reads at 200 sweeps on 16 variables: expect at least one hit
        assert_eq!(best, optimum);
    }

    #[test]
    fn deterministic_given_seed() {
        let catalog = CompanionsMatrix::example();
        let inst = generate_instance(6, &catalog, SamplingMode::WithoutReplacement, 4).unwrap();
        let model = build_qubo(&inst);
        let params = SolverParams { num_reads: 8, sweeps: 50, seed: 77, ..Default::default() };
        let a = solve_sa(&model, &params, &NoStop).unwrap();
        let b = solve_sa(&model, &params, &NoStop).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn default_beta_range_is_ordered() {
        let catalog = CompanionsMatrix::example();
        let inst = generate_instance(4, &catalog, SamplingMode::WithoutReplacement, 0).unwrap();
        let view = FlipView::from_model(&build_qubo(&inst));
        let (lo, hi) = default_beta_range(&view);
        assert!(lo > 0.0 && lo < hi);
    }
}
