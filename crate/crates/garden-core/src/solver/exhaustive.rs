//! Exact ground-state enumeration for small models.

use alloc::vec;
use alloc::vec::Vec;

use crate::qubo::{Assignment, QuboModel};
use crate::solver::{SampleSet, SolverError, SolverParams};

/// Hard variable cap for exhaustive enumeration.
pub const EXHAUSTIVE_CAP: usize = 25;

/// Reported minima are capped at this many distinct states.
const REPORT_CAP: usize = 64;

/// Enumerate all `2^n` assignments and return every global minimum (up to a
/// reporting cap) with the exact minimum energy.
///
/// Walks a Gray-code sequence so each step flips one bit, with integer
/// incremental gains; refuses models above [`EXHAUSTIVE_CAP`] variables.
pub fn solve_exhaustive(model: &QuboModel) -> Result<SampleSet, SolverError> {
    let n = model.num_vars();
    if n > EXHAUSTIVE_CAP {
        return Err(SolverError::TooManyVariables { num_vars: n, cap: EXHAUSTIVE_CAP });
    }

    let (diag, neighbors) = model.adjacency();
    let mut bits = vec![0u8; n];
    let mut gains: Vec<i64> = diag.clone();
    let mut energy = model.offset();

    let mut best_energy = energy;
    let mut minima: Vec<Vec<u8>> = vec![bits.clone()];

    let total: u64 = 1u64 << n;
    for g in 1..total {
        let k = g.trailing_zeros() as usize;
        energy += gains[k];
        let was_set = bits[k] == 1;
        bits[k] ^= 1;
        gains[k] = -gains[k];
        let dy: i64 = if was_set { -1 } else { 1 };
        for &(kp, c) in &neighbors[k] {
            let kp = kp as usize;
            gains[kp] += (1 - 2 * bits[kp] as i64) * c * dy;
        }

        if energy < best_energy {
            best_energy = energy;
            minima.clear();
            minima.push(bits.clone());
        } else if energy == best_energy && minima.len() < REPORT_CAP {
            minima.push(bits.clone());
        }
    }

    let params = SolverParams { num_reads: 1, ..SolverParams::default() };
    let assignments = minima
        .into_iter()
        .map(|b| Assignment::new(b).expect("bits are binary"));
    Ok(SampleSet::from_assignments("exhaustive", model, params, assignments))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{generate_instance, CompanionsMatrix, SamplingMode};
    use crate::qubo::build_qubo;
    use crate::rng;
    use alloc::collections::BTreeMap;

    /// Second, naive enumerator: evaluate every bitstring from scratch.
    fn naive_minimum(model: &QuboModel) -> i64 {
        let n = model.num_vars();
        let mut best = i64::MAX;
        for mask in 0u64..(1 << n) {
            let bits: Vec<u8> = (0..n).map(|k| ((mask >> k) & 1) as u8).collect();
            let e = model.energy(&Assignment::new(bits).unwrap()).unwrap();
            if e < best {
                best = e;
            }
        }
        best
    }

    #[test]
    fn random_models_match_naive_enumeration() {
        // random sparse integer QUBOs, 16 variables
        for seed in 0..5u64 {
            let mut rng = rng::stream_rng(400 + seed, 0);
            let n = 16usize;
            let mut terms: BTreeMap<(u32, u32), i64> = BTreeMap::new();
            for _ in 0..60 {
                let a = rng::index_below(&mut rng, n) as u32;
                let b = rng::index_below(&mut rng, n) as u32;
                let c = rng::index_below(&mut rng, 9) as i64 - 4;
                *terms.entry(if a <= b { (a, b) } else { (b, a) }).or_insert(0) += c;
            }
            let model = QuboModel::from_terms(n, 0, terms, 3);
            let set = solve_exhaustive(&model).unwrap();
            assert_eq!(set.best().unwrap().energy, naive_minimum(&model));
        }
    }

    #[test]
    fn satisfiable_instance_reaches_zero() {
        // all-friendly 2x2 catalog: ground state must sit exactly at 0
        let companions = CompanionsMatrix::new(
            alloc::vec![alloc::string::String::from("big"), alloc::string::String::from("small")],
            alloc::vec![0, 1],
            alloc::vec![alloc::vec![-1, -1], alloc::vec![-1, -1]],
        )
        .unwrap();
        let inst = generate_instance(2, &companions, SamplingMode::WithoutReplacement, 1).unwrap();
        let model = build_qubo(&inst);
        let set = solve_exhaustive(&model).unwrap();
        assert_eq!(set.best().unwrap().energy, 0);
    }

    #[test]
    fn cap_is_enforced() {
        let model = QuboModel::from_terms(26, 0, core::iter::empty(), 0);
        assert!(matches!(
            solve_exhaustive(&model),
            Err(SolverError::TooManyVariables { num_vars: 26, cap: 25 })
        ));
    }
}
