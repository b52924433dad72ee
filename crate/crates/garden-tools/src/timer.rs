//! Wall-clock stop condition for the core solvers.

use std::time::{Duration, Instant};

use garden_core::solver::Stop;

/// Stops solver loops once an optional wall-clock budget is spent.
#[derive(Clone, Copy, Debug)]
pub struct BudgetTimer {
    start: Instant,
    budget: Option<Duration>,
}

impl BudgetTimer {
    pub fn new(budget_seconds: Option<f64>) -> Self {
        Self {
            start: Instant::now(),
            budget: budget_seconds.map(Duration::from_secs_f64),
        }
    }

    pub fn elapsed(&self) -> f64 {
        self.start.elapsed().as_secs_f64()
    }
}

impl Stop for BudgetTimer {
    fn should_stop(&self) -> bool {
        match self.budget {
            Some(budget) => self.start.elapsed() >= budget,
            None => false,
        }
    }
}
