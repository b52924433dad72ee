//! Exact integer QUBO compilation and evaluation for garden problems.
//!
//! Variables follow the unary encoding `k = t*i + j` (pot `i`, species `j`).
//! The model keeps a strictly upper-triangular sparse coefficient map plus
//! the constant offset dropped during expansion, so the global minimum of a
//! fully friendly satisfiable instance is exactly 0. All arithmetic is
//! integer arithmetic; there is no tolerance anywhere.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use alloc::vec;
use core::fmt;

use rand_chacha::ChaCha8Rng;

use crate::instance::ProblemInstance;
use crate::rng;

/// Sparse upper-triangular QUBO with integer coefficients and offset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuboModel {
    num_vars: usize,
    /// Species stride of the index map (`k = t*i + j`); 0 for models that
    /// did not come from a garden instance (e.g. sub-QUBOs).
    species_stride: usize,
    terms: BTreeMap<(u32, u32), i64>,
    offset: i64,
}

impl QuboModel {
    /// Assemble a model from raw terms, folding duplicates and pruning zeros.
    pub fn from_terms<I>(num_vars: usize, species_stride: usize, terms: I, offset: i64) -> Self
    where
        I: IntoIterator<Item = ((u32, u32), i64)>,
    {
        let mut map: BTreeMap<(u32, u32), i64> = BTreeMap::new();
        for ((a, b), coeff) in terms {
            let key = if a <= b { (a, b) } else { (b, a) };
            debug_assert!((key.1 as usize) < num_vars);
            *map.entry(key).or_insert(0) += coeff;
        }
        map.retain(|_, c| *c != 0);
        Self { num_vars, species_stride, terms: map, offset }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// Species count `t` of the originating instance, if any.
    pub fn species_stride(&self) -> usize {
        self.species_stride
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    /// Sorted `((k, k'), coefficient)` pairs with `k <= k'`.
    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), i64)> + '_ {
        self.terms.iter().map(|(&kk, &c)| (kk, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Largest coefficient magnitude, 0 for an empty model.
    pub fn max_abs_coefficient(&self) -> i64 {
        self.terms.values().map(|c| c.abs()).max().unwrap_or(0)
    }

    /// Distinct off-diagonal pairs with nonzero coefficient.
    pub fn logical_edges(&self) -> Vec<(u32, u32)> {
        self.terms.keys().copied().filter(|&(a, b)| a != b).collect()
    }

    /// Energy of an assignment: `sum_{k<=k'} y_k Q_{kk'} y_k' + offset`.
    pub fn energy(&self, a: &Assignment) -> Result<i64, QuboError> {
        if a.len() != self.num_vars {
            return Err(QuboError::LengthMismatch { expected: self.num_vars, got: a.len() });
        }
        let bits = a.bits();
        let mut e = self.offset;
        for (&(k, kp), &c) in &self.terms {
            if bits[k as usize] == 1 && bits[kp as usize] == 1 {
                e += c;
            }
        }
        Ok(e)
    }

    /// Diagonal coefficients plus per-variable off-diagonal neighbor lists.
    ///
    /// This is the view the flip-based solvers work from: the energy delta
    /// of flipping `k` is `(1 - 2 y_k) * (diag[k] + sum over set neighbors)`.
    pub fn adjacency(&self) -> (Vec<i64>, Vec<Vec<(u32, i64)>>) {
        let mut diag = vec![0i64; self.num_vars];
        let mut neighbors: Vec<Vec<(u32, i64)>> = vec![Vec::new(); self.num_vars];
        for (&(k, kp), &c) in &self.terms {
            if k == kp {
                diag[k as usize] = c;
            } else {
                neighbors[k as usize].push((kp, c));
                neighbors[kp as usize].push((k, c));
            }
        }
        (diag, neighbors)
    }
}

/// A binary assignment over the model's variables.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Assignment {
    bits: Vec<u8>,
}

impl Assignment {
    pub fn new(bits: Vec<u8>) -> Result<Self, QuboError> {
        for (i, &b) in bits.iter().enumerate() {
            if b > 1 {
                return Err(QuboError::BadBit { index: i, value: b });
            }
        }
        Ok(Self { bits })
    }

    pub fn zeros(n: usize) -> Self {
        Self { bits: vec![0; n] }
    }

    /// Uniformly random assignment, one generator call per variable.
    pub fn random(rng: &mut ChaCha8Rng, n: usize) -> Self {
        let bits = (0..n).map(|_| (rng::index_below(rng, 2)) as u8).collect();
        Self { bits }
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

/// Constraint-by-constraint audit of an assignment against an instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvaluationReport {
    /// QUBO energy including the offset.
    pub energy: i64,
    /// Adjacency cost term alone (0 iff every neighbouring pair is friendly).
    pub cost: i64,
    /// Pots not holding exactly one plant.
    pub pot_violations: Vec<usize>,
    /// Species whose placed count differs from `c_j`.
    pub count_violations: Vec<usize>,
    /// `(pot, species)` pairs breaking the size/row-parity rule.
    pub size_violations: Vec<(usize, usize)>,
    /// True iff all three violation lists are empty.
    pub success: bool,
}

/// Compile an instance into its exact integer QUBO.
///
/// Expansion of the penalized objective, term by term:
/// - cost couplings `J_{ii'} * C_{jj'}` between `(i, j)` and `(i', j')`;
/// - fill-all-pots: `-l1` on each diagonal, `+2*l1` across species pairs
///   within a pot;
/// - place-all-plants: `l2*(1 - 2*c_j)` on diagonals, `+2*l2` across pot
///   pairs within a species;
/// - size rule: `l3*(i%2 - s_j)^2` on diagonals.
///
/// The offset restores the dropped constants `|E| + l1*n + l2*sum c_j^2`.
pub fn build_qubo(instance: &ProblemInstance) -> QuboModel {
    let n = instance.num_pots();
    let t = instance.num_species();
    let (l1, l2, l3) = instance.lambdas;
    let idx = |i: usize, j: usize| (t * i + j) as u32;

    let mut terms: BTreeMap<(u32, u32), i64> = BTreeMap::new();
    let mut add = |a: u32, b: u32, c: i64| {
        if c != 0 {
            let key = if a <= b { (a, b) } else { (b, a) };
            let entry = terms.entry(key).or_insert(0);
            *entry += c;
            if *entry == 0 {
                terms.remove(&key);
            }
        }
    };

    // cost couplings over adjacent pots
    for &(i, ip) in instance.garden.edges() {
        for j in 0..t {
            for jp in 0..t {
                add(idx(i, j), idx(ip, jp), instance.companions.relation(j, jp) as i64);
            }
        }
    }

    // constraint 1: each pot holds exactly one plant
    for i in 0..n {
        for j in 0..t {
            add(idx(i, j), idx(i, j), -l1);
            for jp in (j + 1)..t {
                add(idx(i, j), idx(i, jp), 2 * l1);
            }
        }
    }

    // constraint 2: each species appears exactly c_j times
    for j in 0..t {
        let c_j = instance.counts[j] as i64;
        for i in 0..n {
            add(idx(i, j), idx(i, j), l2 * (1 - 2 * c_j));
            for ip in (i + 1)..n {
                add(idx(i, j), idx(ip, j), 2 * l2);
            }
        }
    }

    // constraint 3: large plants in even rows, small in odd rows
    for i in 0..n {
        let parity = (i % 2) as i64;
        for j in 0..t {
            let s = instance.companions.sizes()[j] as i64;
            add(idx(i, j), idx(i, j), l3 * (parity - s) * (parity - s));
        }
    }

    let count_sq: i64 = instance.counts.iter().map(|&c| (c as i64) * (c as i64)).sum();
    let offset = instance.garden.edges().len() as i64 + l1 * n as i64 + l2 * count_sq;

    QuboModel { num_vars: n * t, species_stride: t, terms, offset }
}

/// Evaluate an assignment against the instance's cost and constraints.
///
/// The energy field is computed directly from the penalized objective and
/// equals `build_qubo(instance).energy(a)` exactly.
pub fn evaluate(instance: &ProblemInstance, a: &Assignment) -> Result<EvaluationReport, QuboError> {
    let n = instance.num_pots();
    let t = instance.num_species();
    if a.len() != n * t {
        return Err(QuboError::LengthMismatch { expected: n * t, got: a.len() });
    }
    let bits = a.bits();
    let x = |i: usize, j: usize| bits[t * i + j] as i64;
    let (l1, l2, l3) = instance.lambdas;

    let mut cost = 0i64;
    for &(i, ip) in instance.garden.edges() {
        let mut pair = 1i64;
        for j in 0..t {
            if x(i, j) == 0 {
                continue;
            }
            for jp in 0..t {
                pair += instance.companions.relation(j, jp) as i64 * x(ip, jp);
            }
        }
        cost += pair;
    }

    let mut pot_violations = Vec::new();
    let mut pot_penalty = 0i64;
    for i in 0..n {
        let filled: i64 = (0..t).map(|j| x(i, j)).sum();
        if filled != 1 {
            pot_violations.push(i);
        }
        pot_penalty += (1 - filled) * (1 - filled);
    }

    let mut count_violations = Vec::new();
    let mut count_penalty = 0i64;
    for j in 0..t {
        let placed: i64 = (0..n).map(|i| x(i, j)).sum();
        let c_j = instance.counts[j] as i64;
        if placed != c_j {
            count_violations.push(j);
        }
        count_penalty += (c_j - placed) * (c_j - placed);
    }

    let mut size_violations = Vec::new();
    let mut size_penalty = 0i64;
    for i in 0..n {
        let parity = (i % 2) as i64;
        for j in 0..t {
            let s = instance.companions.sizes()[j] as i64;
            let term = (parity - s) * (parity - s) * x(i, j);
            if term != 0 {
                size_violations.push((i, j));
            }
            size_penalty += term;
        }
    }

    let energy = cost + l1 * pot_penalty + l2 * count_penalty + l3 * size_penalty;
    let success = pot_violations.is_empty() && count_violations.is_empty() && size_violations.is_empty();
    Ok(EvaluationReport { energy, cost, pot_violations, count_violations, size_violations, success })
}

/// Decode an assignment into a pot -> species placement map.
///
/// Pot `i` maps to the sorted set `{ j : y_{t*i+j} = 1 }`.
pub fn decode(a: &Assignment, t: usize) -> Result<Vec<Vec<usize>>, QuboError> {
    if t == 0 || a.len() % t != 0 {
        return Err(QuboError::NotDivisible { len: a.len(), t });
    }
    let n = a.len() / t;
    let bits = a.bits();
    Ok((0..n)
        .map(|i| (0..t).filter(|&j| bits[t * i + j] == 1).collect())
        .collect())
}

/// Encode a pot -> species placement back into an assignment.
pub fn encode(placement: &[Vec<usize>], t: usize) -> Result<Assignment, QuboError> {
    let mut bits = vec![0u8; placement.len() * t];
    for (i, species) in placement.iter().enumerate() {
        for &j in species {
            if j >= t {
                return Err(QuboError::NotDivisible { len: j, t });
            }
            bits[t * i + j] = 1;
        }
    }
    Ok(Assignment { bits })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuboError {
    LengthMismatch { expected: usize, got: usize },
    NotDivisible { len: usize, t: usize },
    BadBit { index: usize, value: u8 },
}

impl fmt::Display for QuboError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::LengthMismatch { expected, got } => {
                write!(f, "assignment length {got} does not match {expected} variables")
            }
            Self::NotDivisible { len, t } => {
                write!(f, "assignment length {len} is not divisible by species count {t}")
            }
            Self::BadBit { index, value } => {
                write!(f, "bit {index} has value {value}, must be 0 or 1")
            }
        }
    }
}
