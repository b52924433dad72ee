//! Multistart tabu search over single-bit flips.

use alloc::vec;
use alloc::vec::Vec;

use crate::qubo::{Assignment, QuboModel};
use crate::rng;
use crate::solver::engine::{FlipState, FlipView};
use crate::solver::{SampleSet, SolverError, SolverParams, Stop};

/// Multistart tabu search: random restart, then steepest single-flip moves
/// with a recency tabu list and aspiration on the incumbent.
///
/// A flipped variable is tabu for `tenure` moves unless flipping it would
/// improve the best energy seen in the restart. With `tenure = 0` the walk
/// is plain steepest descent and stops at the first local minimum. Each
/// restart records its best state; restarts use independent generator
/// streams `(seed, restart index)`.
pub fn solve_tabu(
    model: &QuboModel,
    params: &SolverParams,
    stop: &dyn Stop,
) -> Result<SampleSet, SolverError> {
    params.validate()?;
    let view = FlipView::from_model(model);
    let n = view.num_vars();
    let mut bests: Vec<Vec<u8>> = Vec::with_capacity(params.restarts);

    'restarts: for restart in 0..params.restarts {
        let mut rng = rng::stream_rng(params.seed, restart as u64);
        let init = Assignment::random(&mut rng, n);
        let mut state = FlipState::new(&view, init.bits().to_vec());

        let mut best_bits = state.bits().to_vec();
        let mut best_energy = state.energy();
        // iteration of the last flip per variable; tabu while
        // iter - last_flip <= tenure
        let mut last_flip: Vec<i64> = vec![i64::MIN / 2; n];
        let max_iters = (20 * n).max(200);
        let stagnation_limit = (4 * n).max(50);
        let mut stagnant = 0usize;

        for iter in 0..max_iters as i64 {
            let mut chosen: Option<(usize, f64)> = None;
            for k in 0..n {
                let gain = state.gain(k);
                let tabu = iter - last_flip[k] <= params.tenure as i64;
                let aspires = state.energy() + gain < best_energy;
                if tabu && !aspires {
                    continue;
                }
                match chosen {
                    Some((_, g)) if g <= gain => {}
                    _ => chosen = Some((k, gain)),
                }
            }
            let Some((k, gain)) = chosen else { break };
            if params.tenure == 0 && gain >= 0.0 {
                // plain steepest descent reached a local minimum
                break;
            }
            state.flip(k);
            last_flip[k] = iter;
            if state.energy() < best_energy {
                best_energy = state.energy();
                best_bits = state.bits().to_vec();
                stagnant = 0;
            } else {
                stagnant += 1;
                if stagnant >= stagnation_limit {
                    break;
                }
            }
            if iter % 256 == 0 && stop.should_stop() {
                bests.push(best_bits);
                break 'restarts;
            }
        }
        bests.push(best_bits);
        if stop.should_stop() {
            break;
        }
    }

    let assignments = bests
        .into_iter()
        .map(|b| Assignment::new(b).expect("bits are binary"));
    Ok(SampleSet::from_assignments("tabu", model, params.clone(), assignments))
}
