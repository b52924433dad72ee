//! Large-model decomposition: clamp most variables, tabu-solve the rest.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::qubo::{Assignment, QuboModel};
use crate::rng;
use crate::solver::engine::{FlipState, FlipView};
use crate::solver::{solve_tabu, SampleSet, SolverError, SolverParams, Stop};

/// Decomposition outer loop.
///
/// Keeps an incumbent assignment and sweeps over it in blocks of
/// `subproblem_size` variables: the block is left free, everything else is
/// clamped, and the induced sub-QUBO is solved with [`solve_tabu`].
/// Strict improvements replace the incumbent. The first pass orders
/// variables by flip-gain magnitude; later passes use fresh random
/// permutations. Terminates after two consecutive passes with no
/// improvement, or when `stop` fires.
pub fn solve_partitioned(
    model: &QuboModel,
    params: &SolverParams,
    stop: &dyn Stop,
) -> Result<SampleSet, SolverError> {
    let trajectory = run_partitioned(model, params, stop)?;
    let (bits, _) = trajectory.last().expect("trajectory starts with the initial incumbent").clone();
    let assignment = Assignment::new(bits).expect("bits are binary");
    Ok(SampleSet::from_assignments(
        "partitioned",
        model,
        params.clone(),
        core::iter::once(assignment),
    ))
}

/// Incumbent trajectory of the outer loop: the initial state followed by
/// every accepted improvement, each with its exact energy.
pub(crate) fn run_partitioned(
    model: &QuboModel,
    params: &SolverParams,
    stop: &dyn Stop,
) -> Result<Vec<(Vec<u8>, i64)>, SolverError> {
    params.validate()?;
    if params.subproblem_size < 2 {
        return Err(SolverError::InvalidParams("subproblem_size must be at least 2"));
    }
    let n = model.num_vars();
    let view = FlipView::from_model(model);

    let mut rng = rng::stream_rng(params.seed, u64::MAX);
    let mut incumbent = Assignment::random(&mut rng, n).bits().to_vec();
    let mut incumbent_energy = model
        .energy(&Assignment::new(incumbent.clone()).expect("bits are binary"))
        .expect("length matches");
    let mut trajectory = alloc::vec![(incumbent.clone(), incumbent_energy)];

    let window = params.subproblem_size.min(n);
    let patience = 2usize;
    let max_passes = 64usize;
    let mut stale_passes = 0usize;
    let mut outer: u64 = 0;

    for pass in 0..max_passes {
        if stale_passes >= patience || stop.should_stop() {
            break;
        }
        let order: Vec<usize> = if pass == 0 {
            // rank variables by impact under the initial incumbent
            let state = FlipState::new(&view, incumbent.clone());
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&a, &b| {
                state.gain(b).abs().partial_cmp(&state.gain(a).abs()).unwrap().then(a.cmp(&b))
            });
            order
        } else {
            let mut order: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                let j = rng::index_below(&mut rng, i + 1);
                order.swap(i, j);
            }
            order
        };

        let mut improved = false;
        for block in order.chunks(window) {
            if stop.should_stop() {
                break;
            }
            let mut free = block.to_vec();
            free.sort_unstable();

            let sub = clamp_subproblem(model, &incumbent, &free);
            let sub_seed = params.seed.wrapping_add(outer.wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let sub_params = SolverParams { seed: sub_seed, ..params.clone() };
            let sub_set = solve_tabu(&sub, &sub_params, stop)?;
            outer += 1;

            if let Some(best) = sub_set.best() {
                let mut candidate = incumbent.clone();
                for (pos, &k) in free.iter().enumerate() {
                    candidate[k] = best.assignment.bits()[pos];
                }
                let cand_energy = model
                    .energy(&Assignment::new(candidate.clone()).expect("bits are binary"))
                    .expect("length matches");
                if cand_energy < incumbent_energy {
                    incumbent = candidate;
                    incumbent_energy = cand_energy;
                    trajectory.push((incumbent.clone(), incumbent_energy));
                    improved = true;
                }
            }
        }
        if improved {
            stale_passes = 0;
        } else {
            stale_passes += 1;
        }
    }
    Ok(trajectory)
}

/// Sub-QUBO over `free` (ascending variable ids) with every other variable
/// clamped to its incumbent bit.
///
/// The offset absorbs the clamped-only contribution, so the sub energy of a
/// sub-assignment equals the full energy of the merged assignment exactly.
fn clamp_subproblem(model: &QuboModel, incumbent: &[u8], free: &[usize]) -> QuboModel {
    let pos_of: BTreeMap<usize, usize> =
        free.iter().enumerate().map(|(pos, &k)| (k, pos)).collect();

    let mut clamped_bits = incumbent.to_vec();
    for &k in free {
        clamped_bits[k] = 0;
    }
    let clamped_energy = model
        .energy(&Assignment::new(clamped_bits).expect("bits are binary"))
        .expect("length matches");

    let mut terms: Vec<((u32, u32), i64)> = Vec::new();
    for ((a, b), c) in model.terms() {
        let fa = pos_of.get(&(a as usize));
        let fb = pos_of.get(&(b as usize));
        match (fa, fb) {
            (Some(&pa), Some(&pb)) => terms.push(((pa as u32, pb as u32), c)),
            (Some(&pa), None) => {
                if incumbent[b as usize] == 1 {
                    terms.push(((pa as u32, pa as u32), c));
                }
            }
            (None, Some(&pb)) => {
                if incumbent[a as usize] == 1 {
                    terms.push(((pb as u32, pb as u32), c));
                }
            }
            (None, None) => {}
        }
    }
    QuboModel::from_terms(free.len(), 0, terms, clamped_energy)
}
