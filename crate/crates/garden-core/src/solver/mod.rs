//! Classical QUBO solvers: exact enumeration, simulated annealing,
//! multistart tabu search, and a decomposition solver.

pub mod engine;
mod exhaustive;
mod partition;
mod sa;
mod tabu;

pub use engine::FlipState;
pub use exhaustive::solve_exhaustive;
pub use partition::solve_partitioned;
pub use sa::{default_beta_range, solve_sa, sweep_states};
pub use tabu::solve_tabu;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::qubo::{Assignment, QuboModel};

/// Abort signal checked periodically by the iterative solvers.
///
/// The core crate has no clock; std callers wire a wall-clock budget in
/// through this trait.
pub trait Stop {
    fn should_stop(&self) -> bool;
}

/// Never stops.
pub struct NoStop;

impl Stop for NoStop {
    fn should_stop(&self) -> bool {
        false
    }
}

/// Solver parameter record shared by all solvers.
#[derive(Clone, Debug, PartialEq)]
pub struct SolverParams {
    pub num_reads: usize,
    /// Full single-flip passes per SA read.
    pub sweeps: usize,
    /// Inverse-temperature range for SA; `None` derives it from the model.
    pub beta_range: Option<(f64, f64)>,
    /// Tabu tenure (moves a flipped variable stays locked).
    pub tenure: usize,
    pub restarts: usize,
    pub subproblem_size: usize,
    /// Wall-clock budget in seconds, enforced by the caller via [`Stop`].
    pub time_budget: Option<f64>,
    pub seed: u64,
}

impl Default for SolverParams {
    fn default() -> Self {
        Self {
            num_reads: 1,
            sweeps: 1000,
            beta_range: None,
            tenure: 20,
            restarts: 100,
            subproblem_size: 50,
            time_budget: None,
            seed: 0,
        }
    }
}

impl SolverParams {
    pub fn validate(&self) -> Result<(), SolverError> {
        if self.num_reads == 0 {
            return Err(SolverError::InvalidParams("num_reads must be positive"));
        }
        if self.restarts == 0 {
            return Err(SolverError::InvalidParams("restarts must be positive"));
        }
        if let Some((lo, hi)) = self.beta_range {
            if !(lo > 0.0 && hi > lo) {
                return Err(SolverError::InvalidParams("beta_range must satisfy 0 < low < high"));
            }
        }
        Ok(())
    }
}

/// One distinct assignment with its exact energy and multiplicity.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleRecord {
    pub assignment: Assignment,
    pub energy: i64,
    pub occurrences: u64,
    /// Fraction of chains that were not unanimous, for unembedded samples.
    pub chain_break_fraction: Option<f64>,
}

/// Batch of samples from one solver run, sorted ascending by energy.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleSet {
    pub solver_name: String,
    pub samples: Vec<SampleRecord>,
    /// Seconds; 0 inside the core crate, filled in by timing callers.
    pub wall_time: f64,
    pub seed: u64,
    pub params: SolverParams,
}

impl SampleSet {
    /// Build a sample set from raw assignments.
    ///
    /// Every energy is recomputed against the model on insertion; identical
    /// assignments merge their occurrence counts. Records are sorted by
    /// `(energy, bits)` so equal-seed runs serialize identically.
    pub fn from_assignments<I>(
        solver_name: &str,
        model: &QuboModel,
        params: SolverParams,
        assignments: I,
    ) -> Self
    where
        I: IntoIterator<Item = Assignment>,
    {
        let mut records: Vec<SampleRecord> = Vec::new();
        for a in assignments {
            let energy = model.energy(&a).expect("assignment length matches model");
            records.push(SampleRecord { assignment: a, energy, occurrences: 1, chain_break_fraction: None });
        }
        let seed = params.seed;
        let mut set = Self { solver_name: String::from(solver_name), samples: records, wall_time: 0.0, seed, params };
        set.normalize();
        set
    }

    /// Sort by `(energy, bits, chain_break_fraction)` and merge duplicates.
    pub fn normalize(&mut self) {
        self.samples.sort_by(|a, b| {
            (a.energy, &a.assignment, a.chain_break_fraction.map(OrdF64))
                .cmp(&(b.energy, &b.assignment, b.chain_break_fraction.map(OrdF64)))
        });
        let mut merged: Vec<SampleRecord> = Vec::with_capacity(self.samples.len());
        for rec in self.samples.drain(..) {
            match merged.last_mut() {
                Some(last)
                    if last.assignment == rec.assignment
                        && last.chain_break_fraction == rec.chain_break_fraction =>
                {
                    last.occurrences += rec.occurrences;
                }
                _ => merged.push(rec),
            }
        }
        self.samples = merged;
    }

    /// Lowest-energy record, if any.
    pub fn best(&self) -> Option<&SampleRecord> {
        self.samples.first()
    }

    /// Total number of samples (sum of occurrence counts).
    pub fn total_occurrences(&self) -> u64 {
        self.samples.iter().map(|s| s.occurrences).sum()
    }
}

/// Total order on finite f64 metadata for deterministic sorting.
#[derive(PartialEq, PartialOrd)]
struct OrdF64(f64);

impl Eq for OrdF64 {}

#[allow(clippy::derive_ord_xor_partial_ord)]
impl Ord for OrdF64 {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        self.partial_cmp(other).unwrap_or(core::cmp::Ordering::Equal)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolverError {
    /// Exhaustive enumeration refuses models above its variable cap.
    TooManyVariables { num_vars: usize, cap: usize },
    InvalidParams(&'static str),
}

impl fmt::Display for SolverError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::TooManyVariables { num_vars, cap } => {
                write!(f, "variable cap exceeded: {num_vars} variables, exhaustive cap is {cap}")
            }
            Self::InvalidParams(msg) => write!(f, "invalid solver parameters: {msg}"),
        }
    }
}
