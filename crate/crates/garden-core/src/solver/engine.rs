//! Shared single-flip bookkeeping for the heuristic solvers.
//!
//! The flip gain of variable `k` is the energy delta of flipping it:
//! `(1 - 2 y_k) * (diag_k + sum of coefficients to set neighbours)`.
//! Coefficients are held as `f64`; integer models stay exact because every
//! partial sum fits comfortably in 53 bits at the problem sizes in play.

use alloc::vec;
use alloc::vec::Vec;

use crate::qubo::QuboModel;

/// Sparse coefficient view the flip engine operates on.
#[derive(Clone, Debug)]
pub struct FlipView {
    pub diag: Vec<f64>,
    pub neighbors: Vec<Vec<(u32, f64)>>,
    pub offset: f64,
}

impl FlipView {
    pub fn num_vars(&self) -> usize {
        self.diag.len()
    }

    pub fn from_model(model: &QuboModel) -> Self {
        let (diag_i, neigh_i) = model.adjacency();
        FlipView {
            diag: diag_i.into_iter().map(|c| c as f64).collect(),
            neighbors: neigh_i
                .into_iter()
                .map(|row| row.into_iter().map(|(k, c)| (k, c as f64)).collect())
                .collect(),
            offset: model.offset() as f64,
        }
    }

    /// Largest possible flip-gain magnitude, used for the SA hot end.
    pub fn max_gain_bound(&self) -> f64 {
        (0..self.num_vars())
            .map(|k| {
                self.diag[k].abs()
                    + self.neighbors[k].iter().map(|(_, c)| c.abs()).sum::<f64>()
            })
            .fold(0.0, f64::max)
    }

    /// Smallest nonzero coefficient magnitude, used for the SA cold end.
    pub fn min_nonzero_coeff(&self) -> f64 {
        let mut min = f64::INFINITY;
        for k in 0..self.num_vars() {
            let d = self.diag[k].abs();
            if d > 0.0 && d < min {
                min = d;
            }
            for &(_, c) in &self.neighbors[k] {
                let c = c.abs();
                if c > 0.0 && c < min {
                    min = c;
                }
            }
        }
        if min.is_finite() {
            min
        } else {
            1.0
        }
    }
}

/// Mutable assignment with incrementally maintained energy and gains.
pub struct FlipState<'a> {
    view: &'a FlipView,
    bits: Vec<u8>,
    gains: Vec<f64>,
    energy: f64,
}

impl<'a> FlipState<'a> {
    pub fn new(view: &'a FlipView, bits: Vec<u8>) -> Self {
        debug_assert_eq!(bits.len(), view.num_vars());
        let mut state = Self { view, bits, gains: vec![0.0; view.num_vars()], energy: 0.0 };
        state.recompute();
        state
    }

    /// Recompute energy and all gains from scratch.
    pub fn recompute(&mut self) {
        let n = self.view.num_vars();
        self.energy = self.view.offset;
        for k in 0..n {
            let yk = self.bits[k] as f64;
            let mut local = self.view.diag[k];
            self.energy += self.view.diag[k] * yk;
            let mut half = 0.0;
            for &(kp, c) in &self.view.neighbors[k] {
                let ykp = self.bits[kp as usize] as f64;
                local += c * ykp;
                half += c * yk * ykp;
            }
            self.energy += half / 2.0;
            self.gains[k] = (1.0 - 2.0 * yk) * local;
        }
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    /// Energy delta of flipping `k`.
    pub fn gain(&self, k: usize) -> f64 {
        self.gains[k]
    }

    pub fn num_vars(&self) -> usize {
        self.bits.len()
    }

    /// Flip variable `k`, updating energy and neighbour gains.
    pub fn flip(&mut self, k: usize) {
        self.energy += self.gains[k];
        let was_set = self.bits[k] == 1;
        self.bits[k] ^= 1;
        self.gains[k] = -self.gains[k];
        let dy = if was_set { -1.0 } else { 1.0 };
        for &(kp, c) in &self.view.neighbors[k] {
            let kp = kp as usize;
            self.gains[kp] += (1.0 - 2.0 * self.bits[kp] as f64) * c * dy;
        }
    }

    pub fn into_bits(self) -> Vec<u8> {
        self.bits
    }
}
