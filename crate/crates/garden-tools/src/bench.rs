//! Benchmark protocols: chain-strength scans, sweep scans, and the
//! multi-solver comparison harness.
//!
//! Every scan point derives its own seed from the master seed and the
//! point index, so results are independent of worker count and identical
//! across reruns. Only the `seconds` columns vary run to run.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Instant;

use anyhow::{anyhow, bail, Result};
use num_rational::Ratio;

use garden_core::qubo::{Assignment, QuboModel};
use garden_core::solver::{
    solve_exhaustive, solve_partitioned, solve_sa, solve_tabu, SampleSet, SolverParams, Stop,
};
use garden_core::stats::wilson_interval;
use garden_core::topology::{embed_qubo, unembed, Embedding, HardwareGraph};

use crate::formats::{ComparisonRow, ScanPoint};
use crate::timer::BudgetTimer;

/// Mix a point index into a master seed.
pub fn point_seed(master: u64, index: u64) -> u64 {
    master.wrapping_add(index.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// The default relative chain strength grid: 0.05 to 2.00 in steps of
/// 0.05, held exactly as ratios over 20.
pub fn default_rcs_grid() -> Vec<Ratio<i64>> {
    (1..=40).map(|i| Ratio::new(i, 20)).collect()
}

/// Log-spaced distinct sweep counts covering `[lo, hi]`.
pub fn log_spaced_sweeps(points: usize, lo: usize, hi: usize) -> Vec<usize> {
    assert!(points >= 2 && lo >= 1 && hi > lo);
    let (lo_f, hi_f) = (lo as f64, hi as f64);
    let mut out: Vec<usize> = Vec::with_capacity(points);
    for i in 0..points {
        let t = i as f64 / (points - 1) as f64;
        let v = (lo_f * (hi_f / lo_f).powf(t)).round() as usize;
        let v = match out.last() {
            Some(&prev) => v.max(prev + 1),
            None => v,
        };
        out.push(v.min(hi));
    }
    out
}

/// Successes of a sample set against a known minimum energy.
pub fn count_successes(set: &SampleSet, optimum: i64) -> (u64, u64) {
    let hits = set
        .samples
        .iter()
        .filter(|r| r.energy == optimum)
        .map(|r| r.occurrences)
        .sum();
    (hits, set.total_occurrences())
}

/// Run `count` independent jobs on up to `workers` threads, preserving
/// index order in the output.
fn run_indexed<T, F>(count: usize, workers: usize, job: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync,
{
    let workers = workers.max(1).min(count.max(1));
    let next = AtomicUsize::new(0);
    let mut slots: Vec<Option<Result<T>>> = (0..count).map(|_| None).collect();
    let slot_refs: Vec<_> = slots.iter_mut().map(std::sync::Mutex::new).collect();

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= count {
                    break;
                }
                let result = job(i);
                **slot_refs[i].lock().unwrap() = Some(result);
            });
        }
    });

    slots
        .into_iter()
        .enumerate()
        .map(|(i, slot)| slot.ok_or_else(|| anyhow!("job {i} produced no result"))?)
        .collect()
}

/// Scan configuration shared by both scan protocols.
#[derive(Clone, Debug)]
pub struct ScanConfig {
    pub reads: usize,
    pub sweeps: usize,
    pub seed: u64,
    pub workers: usize,
    pub time_budget: Option<f64>,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self { reads: 1000, sweeps: 100, seed: 0, workers: 1, time_budget: None }
    }
}

/// Success rate against relative chain strength.
///
/// Each grid point embeds the model with that chain strength, draws
/// annealed samples on the physical graph, unembeds them by majority
/// vote, and scores against `optimum`.
pub fn run_rcs_scan(
    model: &QuboModel,
    emb: &Embedding,
    hw: &HardwareGraph,
    grid: &[Ratio<i64>],
    optimum: i64,
    cfg: &ScanConfig,
) -> Result<Vec<ScanPoint>> {
    let budget = BudgetTimer::new(cfg.time_budget);
    run_indexed(grid.len(), cfg.workers, |i| {
        let start = Instant::now();
        let rcs = grid[i];
        let physical = embed_qubo(model, emb, hw, rcs)
            .map_err(|e| anyhow!("embedding with rcs {rcs}: {e}"))?;
        let view = physical.flip_view();
        let states = garden_core::solver::sweep_states(
            &view,
            cfg.reads,
            cfg.sweeps,
            None,
            point_seed(cfg.seed, i as u64),
            &budget,
        );
        let samples: Vec<(Assignment, u64)> = states
            .into_iter()
            .map(|bits| Assignment::new(bits).map(|a| (a, 1)))
            .collect::<Result<_, _>>()
            .map_err(|e| anyhow!("invalid sampler output: {e}"))?;
        let set = unembed(&samples, emb, &physical, model)
            .map_err(|e| anyhow!("unembedding: {e}"))?;
        Ok(scan_point(rcs_axis(rcs), &set, optimum, start.elapsed().as_secs_f64()))
    })
}

fn rcs_axis(rcs: Ratio<i64>) -> f64 {
    *rcs.numer() as f64 / *rcs.denom() as f64
}

/// Success rate against the number of annealing sweeps on the logical
/// model, the classical stand-in for an annealing-time scan.
pub fn run_sweep_scan(
    model: &QuboModel,
    grid: &[usize],
    optimum: i64,
    cfg: &ScanConfig,
) -> Result<Vec<ScanPoint>> {
    let budget = BudgetTimer::new(cfg.time_budget);
    run_indexed(grid.len(), cfg.workers, |i| {
        let start = Instant::now();
        let params = SolverParams {
            num_reads: cfg.reads,
            sweeps: grid[i],
            seed: point_seed(cfg.seed, i as u64),
            ..Default::default()
        };
        let set = solve_sa(model, &params, &budget).map_err(|e| anyhow!("sa: {e}"))?;
        Ok(scan_point(grid[i] as f64, &set, optimum, start.elapsed().as_secs_f64()))
    })
}

fn scan_point(axis: f64, set: &SampleSet, optimum: i64, seconds: f64) -> ScanPoint {
    let (hits, total) = count_successes(set, optimum);
    let (rate, ci_low, ci_high) = if total > 0 {
        wilson_interval(hits, total)
    } else {
        (0.0, 0.0, 0.0)
    };
    ScanPoint {
        axis,
        rate,
        ci_low,
        ci_high,
        n: total,
        best_energy: set.best().map_or(0, |r| r.energy),
        seconds,
    }
}

/// Solvers the comparison harness can dispatch.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolverKind {
    Exhaustive,
    Sa,
    Tabu,
    Partitioned,
}

impl SolverKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Exhaustive => "exhaustive",
            Self::Sa => "sa",
            Self::Tabu => "tabu",
            Self::Partitioned => "partitioned",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "exhaustive" => Ok(Self::Exhaustive),
            "sa" => Ok(Self::Sa),
            "tabu" => Ok(Self::Tabu),
            "partitioned" => Ok(Self::Partitioned),
            other => bail!("unknown solver {other:?}"),
        }
    }

    pub fn run(
        self,
        model: &QuboModel,
        params: &SolverParams,
        stop: &dyn Stop,
    ) -> Result<SampleSet> {
        let set = match self {
            Self::Exhaustive => solve_exhaustive(model),
            Self::Sa => solve_sa(model, params, stop),
            Self::Tabu => solve_tabu(model, params, stop),
            Self::Partitioned => solve_partitioned(model, params, stop),
        };
        set.map_err(|e| anyhow!("{} solver: {e}", self.name()))
    }
}

/// Run every solver on every instance; each `(instance, solver)` cell gets
/// its own time budget and derived seed. A row counts as a success when it
/// matches the best energy any solver found on that instance.
pub fn compare_solvers(
    instances: &[(String, QuboModel)],
    solvers: &[SolverKind],
    base_params: &SolverParams,
    per_cell_budget: Option<f64>,
    workers: usize,
) -> Result<Vec<ComparisonRow>> {
    let cells = instances.len() * solvers.len();
    let raw = run_indexed(cells, workers, |cell| {
        let (inst_idx, solver_idx) = (cell / solvers.len(), cell % solvers.len());
        let (name, model) = &instances[inst_idx];
        let solver = solvers[solver_idx];
        let params = SolverParams {
            seed: point_seed(base_params.seed, cell as u64),
            time_budget: per_cell_budget,
            ..base_params.clone()
        };
        let budget = BudgetTimer::new(per_cell_budget);
        let start = Instant::now();
        let set = solver.run(model, &params, &budget)?;
        let energy = set
            .best()
            .map(|r| r.energy)
            .ok_or_else(|| anyhow!("{} returned no samples on {name}", solver.name()))?;
        Ok(ComparisonRow {
            instance: name.clone(),
            vars: model.num_vars(),
            solver: solver.name().to_string(),
            energy,
            seconds: start.elapsed().as_secs_f64(),
            success: false,
        })
    })?;

    let mut rows = raw;
    for inst_idx in 0..instances.len() {
        let slice = inst_idx * solvers.len()..(inst_idx + 1) * solvers.len();
        let best = rows[slice.clone()].iter().map(|r| r.energy).min().unwrap();
        for row in &mut rows[slice] {
            row.success = row.energy == best;
        }
    }
    Ok(rows)
}
