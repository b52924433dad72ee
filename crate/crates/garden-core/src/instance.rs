//! Garden problem instances: species catalogs, garden grids, and the two
//! sampling protocols used to generate benchmark problems.

use alloc::string::String;
use alloc::vec::Vec;
use alloc::vec;
use core::fmt;

use crate::rng;

/// Symmetric `t x t` species relationship matrix.
///
/// Entries are `-1` (friendly), `0` (neutral), `+1` (antagonistic). Each
/// species also carries a size flag: `0` for large, `1` for small.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompanionsMatrix {
    species_names: Vec<String>,
    sizes: Vec<u8>,
    values: Vec<Vec<i8>>,
}

impl CompanionsMatrix {
    /// Validate and construct a companions matrix.
    pub fn new(
        species_names: Vec<String>,
        sizes: Vec<u8>,
        values: Vec<Vec<i8>>,
    ) -> Result<Self, InstanceError> {
        let t = values.len();
        if t == 0 {
            return Err(InstanceError::EmptyCatalog);
        }
        if species_names.len() != t {
            return Err(InstanceError::NamesLengthMismatch {
                expected: t,
                got: species_names.len(),
            });
        }
        if sizes.len() != t {
            return Err(InstanceError::SizesLengthMismatch {
                expected: t,
                got: sizes.len(),
            });
        }
        for (j, row) in values.iter().enumerate() {
            if row.len() != t {
                return Err(InstanceError::RowLengthMismatch { row: j, got: row.len() });
            }
            for (jp, &v) in row.iter().enumerate() {
                if !(-1..=1).contains(&v) {
                    return Err(InstanceError::EntryOutOfRange { row: j, col: jp, value: v as i64 });
                }
                if values[jp][j] != v {
                    return Err(InstanceError::Asymmetric { row: j, col: jp });
                }
            }
        }
        for (j, &s) in sizes.iter().enumerate() {
            if s > 1 {
                return Err(InstanceError::SizeFlagOutOfRange { species: j, value: s as i64 });
            }
        }
        Ok(Self { species_names, sizes, values })
    }

    /// Number of species.
    pub fn num_species(&self) -> usize {
        self.values.len()
    }

    pub fn species_names(&self) -> &[String] {
        &self.species_names
    }

    /// Size flags, `0` = large, `1` = small.
    pub fn sizes(&self) -> &[u8] {
        &self.sizes
    }

    pub fn values(&self) -> &[Vec<i8>] {
        &self.values
    }

    /// Relationship between species `j` and `j'`.
    pub fn relation(&self, j: usize, jp: usize) -> i8 {
        self.values[j][jp]
    }

    /// Catalog indices of large (`s = 0`) species.
    pub fn large_species(&self) -> Vec<usize> {
        (0..self.num_species()).filter(|&j| self.sizes[j] == 0).collect()
    }

    /// Catalog indices of small (`s = 1`) species.
    pub fn small_species(&self) -> Vec<usize> {
        (0..self.num_species()).filter(|&j| self.sizes[j] == 1).collect()
    }

    /// Sub-catalog restricted to the given species, in the given order.
    pub fn restrict(&self, species: &[usize]) -> Self {
        let names = species.iter().map(|&j| self.species_names[j].clone()).collect();
        let sizes = species.iter().map(|&j| self.sizes[j]).collect();
        let values = species
            .iter()
            .map(|&j| species.iter().map(|&jp| self.values[j][jp]).collect())
            .collect();
        Self { species_names: names, sizes, values }
    }

    /// The bundled 18-species example catalog (9 large, 9 small).
    ///
    /// Relations are loosely based on common companion-planting folklore;
    /// the matrix is illustrative, not horticultural advice.
    pub fn example() -> Self {
        let names = [
            "tomato", "corn", "cabbage", "potato", "pumpkin", "zucchini", "broccoli", "pepper",
            "beans", "lettuce", "radish", "carrot", "onion", "basil", "spinach", "beet", "pea",
            "strawberry",
        ];
        let sizes: Vec<u8> = vec![0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1, 1, 1, 1];
        let friendly: &[(usize, usize)] = &[
            (0, 9), (0, 11), (0, 12), (0, 13),
            (1, 8), (1, 16), (1, 4),
            (2, 12), (2, 14), (2, 15),
            (3, 8), (3, 14),
            (4, 8),
            (5, 10), (5, 13),
            (6, 12), (6, 14), (6, 15),
            (7, 12), (7, 13),
            (8, 10), (8, 17),
            (9, 10), (9, 11), (9, 17),
            (10, 16),
            (11, 12), (11, 16),
            (12, 15),
            (14, 17),
        ];
        let antagonistic: &[(usize, usize)] = &[
            (0, 1), (0, 2), (0, 3),
            (2, 17),
            (3, 4), (3, 5),
            (6, 17),
            (7, 8),
            (8, 12),
            (12, 16),
            (10, 14),
        ];
        let t = names.len();
        let mut values = vec![vec![0i8; t]; t];
        for &(a, b) in friendly {
            values[a][b] = -1;
            values[b][a] = -1;
        }
        for &(a, b) in antagonistic {
            values[a][b] = 1;
            values[b][a] = 1;
        }
        Self::new(names.iter().map(|s| String::from(*s)).collect(), sizes, values)
            .expect("example catalog is valid")
    }
}

/// Garden topology as an undirected planar graph over pots `0..n`.
///
/// Edges are stored strictly upper-triangular: `(i, i')` with `i < i'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GardenGraph {
    num_pots: usize,
    edges: Vec<(usize, usize)>,
    layout: GardenLayout,
}

/// Layout descriptor for a garden graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GardenLayout {
    /// 2-row grid with `cols` columns, numbered column-major so that pot `i`
    /// sits in row `i % 2` and column `i / 2`.
    TwoRowGrid { cols: usize },
    /// Adjacency supplied directly; row parity of pot `i` is still taken as
    /// `i % 2` when evaluating the size constraint.
    Custom,
}

impl GardenGraph {
    /// Build the 2-row rectangular garden for an even number of pots.
    ///
    /// Columns are numbered column-major: pot `2c` is the top (even-row) pot
    /// of column `c`, pot `2c + 1` the bottom one. Edges are the vertical
    /// pair in each column plus horizontal pairs within each row, giving
    /// `n/2 + (n - 2)` edges.
    pub fn grid(n: usize) -> Result<Self, InstanceError> {
        if n < 2 || n % 2 != 0 {
            return Err(InstanceError::BadPotCount { n });
        }
        let cols = n / 2;
        let mut edges = Vec::with_capacity(cols + n - 2);
        for c in 0..cols {
            edges.push((2 * c, 2 * c + 1));
        }
        for i in 0..n.saturating_sub(2) {
            edges.push((i, i + 2));
        }
        edges.sort_unstable();
        Ok(Self { num_pots: n, edges, layout: GardenLayout::TwoRowGrid { cols } })
    }

    /// Build a garden from an explicit edge list.
    ///
    /// Pairs must satisfy `i < i' < n`; duplicates are rejected. An edge
    /// list matching the 2-row grid is recognised as such, so gardens
    /// round-trip through their edge lists. Row-parity semantics (`i % 2`)
    /// are not validated for custom graphs.
    pub fn from_edges(n: usize, mut edges: Vec<(usize, usize)>) -> Result<Self, InstanceError> {
        if n < 1 {
            return Err(InstanceError::BadPotCount { n });
        }
        edges.sort_unstable();
        for w in edges.windows(2) {
            if w[0] == w[1] {
                return Err(InstanceError::DuplicateEdge { i: w[0].0, ip: w[0].1 });
            }
        }
        for &(i, ip) in &edges {
            if i >= ip || ip >= n {
                return Err(InstanceError::BadEdge { i, ip, n });
            }
        }
        let layout = match Self::grid(n) {
            Ok(grid) if grid.edges == edges => grid.layout,
            _ => GardenLayout::Custom,
        };
        Ok(Self { num_pots: n, edges, layout })
    }

    pub fn num_pots(&self) -> usize {
        self.num_pots
    }

    /// Upper-triangular adjacency pairs, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn layout(&self) -> GardenLayout {
        self.layout
    }
}

/// The two instance-generation protocols.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SamplingMode {
    /// Draw `n/2` distinct large and `n/2` distinct small species; the
    /// instance is restricted to the sampled species, so it has `n^2`
    /// variables.
    WithoutReplacement,
    /// Draw species with replacement; all catalog species stay in play, so
    /// the instance has `n * t` variables.
    WithReplacement,
}

/// A fully specified garden optimization problem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemInstance {
    pub garden: GardenGraph,
    /// Effective species catalog (restricted for without-replacement).
    pub companions: CompanionsMatrix,
    /// Map from effective species index to the original catalog index.
    pub catalog_indices: Vec<usize>,
    /// Plants to place per effective species; sums to `n`.
    pub counts: Vec<u64>,
    /// Penalty multipliers `(lambda1, lambda2, lambda3)`.
    pub lambdas: (i64, i64, i64),
    pub seed: u64,
    pub mode: SamplingMode,
}

impl ProblemInstance {
    /// Number of binary variables `n * t_effective`.
    pub fn num_vars(&self) -> usize {
        self.garden.num_pots() * self.companions.num_species()
    }

    /// Effective species count.
    pub fn num_species(&self) -> usize {
        self.companions.num_species()
    }

    pub fn num_pots(&self) -> usize {
        self.garden.num_pots()
    }

    /// Check the structural invariants (`sum c_j = n`, size balance).
    pub fn validate(&self) -> Result<(), InstanceError> {
        let n = self.garden.num_pots() as u64;
        let total: u64 = self.counts.iter().sum();
        if total != n {
            return Err(InstanceError::CountSumMismatch { expected: n, got: total });
        }
        if self.counts.len() != self.companions.num_species() {
            return Err(InstanceError::SizesLengthMismatch {
                expected: self.companions.num_species(),
                got: self.counts.len(),
            });
        }
        let large: u64 = self
            .counts
            .iter()
            .zip(self.companions.sizes())
            .filter(|(_, &s)| s == 0)
            .map(|(&c, _)| c)
            .sum();
        if large * 2 != n {
            return Err(InstanceError::SizeImbalance { large, n });
        }
        if self.lambdas.0 <= 0 || self.lambdas.1 <= 0 || self.lambdas.2 <= 0 {
            return Err(InstanceError::NonPositiveLambda);
        }
        Ok(())
    }
}

/// Generate a problem instance under one of the two sampling protocols.
///
/// `n/2` large and `n/2` small species are drawn from the catalog, the
/// 2-row garden is attached, and the multipliers default to `(2, 2, 1)`.
/// Identical `(n, catalog, mode, seed)` reproduce the identical instance.
pub fn generate_instance(
    n: usize,
    catalog: &CompanionsMatrix,
    mode: SamplingMode,
    seed: u64,
) -> Result<ProblemInstance, InstanceError> {
    let garden = GardenGraph::grid(n)?;
    let large = catalog.large_species();
    let small = catalog.small_species();
    if large.is_empty() {
        return Err(InstanceError::NoLargeSpecies);
    }
    if small.is_empty() {
        return Err(InstanceError::NoSmallSpecies);
    }
    let half = n / 2;
    let mut rng = rng::stream_rng(seed, 0);

    let (catalog_indices, counts) = match mode {
        SamplingMode::WithoutReplacement => {
            if half > large.len() || half > small.len() {
                return Err(InstanceError::NotEnoughSpecies {
                    needed: half,
                    large: large.len(),
                    small: small.len(),
                });
            }
            let mut picked = rng::sample_without_replacement(&mut rng, &large, half);
            picked.extend(rng::sample_without_replacement(&mut rng, &small, half));
            picked.sort_unstable();
            let counts = vec![1u64; picked.len()];
            (picked, counts)
        }
        SamplingMode::WithReplacement => {
            let t = catalog.num_species();
            let mut counts = vec![0u64; t];
            for _ in 0..half {
                counts[large[rng::index_below(&mut rng, large.len())]] += 1;
            }
            for _ in 0..half {
                counts[small[rng::index_below(&mut rng, small.len())]] += 1;
            }
            ((0..t).collect(), counts)
        }
    };

    let companions = catalog.restrict(&catalog_indices);
    let instance = ProblemInstance {
        garden,
        companions,
        catalog_indices,
        counts,
        lambdas: (2, 2, 1),
        seed,
        mode,
    };
    instance.validate()?;
    Ok(instance)
}

/// Errors from instance construction and validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InstanceError {
    EmptyCatalog,
    NamesLengthMismatch { expected: usize, got: usize },
    SizesLengthMismatch { expected: usize, got: usize },
    RowLengthMismatch { row: usize, got: usize },
    EntryOutOfRange { row: usize, col: usize, value: i64 },
    SizeFlagOutOfRange { species: usize, value: i64 },
    Asymmetric { row: usize, col: usize },
    BadPotCount { n: usize },
    BadEdge { i: usize, ip: usize, n: usize },
    DuplicateEdge { i: usize, ip: usize },
    NotEnoughSpecies { needed: usize, large: usize, small: usize },
    NoLargeSpecies,
    NoSmallSpecies,
    CountSumMismatch { expected: u64, got: u64 },
    SizeImbalance { large: u64, n: u64 },
    NonPositiveLambda,
}

impl fmt::Display for InstanceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::EmptyCatalog => write!(f, "species catalog is empty"),
            Self::NamesLengthMismatch { expected, got } => {
                write!(f, "species names length {got} does not match matrix size {expected}")
            }
            Self::SizesLengthMismatch { expected, got } => {
                write!(f, "sizes length {got} does not match matrix size {expected}")
            }
            Self::RowLengthMismatch { row, got } => {
                write!(f, "matrix row {row} has length {got}, matrix is not square")
            }
            Self::EntryOutOfRange { row, col, value } => {
                write!(f, "entry out of range at ({row}, {col}): {value} not in {{-1, 0, 1}}")
            }
            Self::SizeFlagOutOfRange { species, value } => {
                write!(f, "size flag for species {species} is {value}, must be 0 or 1")
            }
            Self::Asymmetric { row, col } => {
                write!(f, "asymmetric matrix at ({row}, {col})")
            }
            Self::BadPotCount { n } => {
                write!(f, "pot count {n} must be an even integer >= 2")
            }
            Self::BadEdge { i, ip, n } => {
                write!(f, "edge ({i}, {ip}) invalid for {n} pots (need i < i' < n)")
            }
            Self::DuplicateEdge { i, ip } => write!(f, "duplicate edge ({i}, {ip})"),
            Self::NotEnoughSpecies { needed, large, small } => write!(
                f,
                "need {needed} large and {needed} small species, catalog has {large} large / {small} small"
            ),
            Self::NoLargeSpecies => write!(f, "catalog has no large species"),
            Self::NoSmallSpecies => write!(f, "catalog has no small species"),
            Self::CountSumMismatch { expected, got } => {
                write!(f, "plant counts sum to {got}, expected {expected}")
            }
            Self::SizeImbalance { large, n } => {
                write!(f, "{large} large plants for {n} pots, expected n/2")
            }
            Self::NonPositiveLambda => write!(f, "penalty multipliers must be positive"),
        }
    }
}
