//! Annealer hardware graphs (Chimera, Pegasus), minor embedding, chain
//! strength, and majority-vote unembedding.

mod embedding;
mod physical;

pub use embedding::{find_embedding, validate_embedding, Embedding};
pub use physical::{embed_qubo, unembed, PhysicalModel, Rational};

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

/// Hardware topology family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TopologyKind {
    Chimera,
    Pegasus,
}

impl fmt::Display for TopologyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Chimera => write!(f, "chimera"),
            Self::Pegasus => write!(f, "pegasus"),
        }
    }
}

/// A (working) hardware graph: the full-yield topology minus any disabled
/// nodes and couplers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HardwareGraph {
    kind: TopologyKind,
    m: usize,
    nodes: BTreeSet<u32>,
    edges: BTreeSet<(u32, u32)>,
    adj: BTreeMap<u32, Vec<u32>>,
}

/// Pegasus qubit-offset lists (vertical, horizontal), matching the
/// published coordinate construction.
const PEGASUS_OFFSETS: [[u32; 12]; 2] = [
    [2, 2, 2, 2, 6, 6, 6, 6, 10, 10, 10, 10],
    [6, 6, 6, 6, 10, 10, 10, 10, 2, 2, 2, 2],
];

impl HardwareGraph {
    /// Build a full-yield or working graph.
    ///
    /// Disabled elements must exist in the full-yield graph.
    pub fn build(
        kind: TopologyKind,
        m: usize,
        disabled_nodes: &[u32],
        disabled_edges: &[(u32, u32)],
    ) -> Result<Self, TopologyError> {
        let (nodes, mut edges) = match kind {
            TopologyKind::Chimera => {
                if m < 1 {
                    return Err(TopologyError::InvalidSize { kind, m });
                }
                chimera_full_yield(m)
            }
            TopologyKind::Pegasus => {
                if m < 2 {
                    return Err(TopologyError::InvalidSize { kind, m });
                }
                pegasus_full_yield(m)
            }
        };

        let mut nodes: BTreeSet<u32> = nodes.into_iter().collect();
        for &n in disabled_nodes {
            if !nodes.remove(&n) {
                return Err(TopologyError::DisabledNodeNotInGraph(n));
            }
        }
        for &(a, b) in disabled_edges {
            let key = if a < b { (a, b) } else { (b, a) };
            if !edges.remove(&key) {
                return Err(TopologyError::DisabledEdgeNotInGraph(key.0, key.1));
            }
        }
        edges.retain(|&(a, b)| nodes.contains(&a) && nodes.contains(&b));

        let mut adj: BTreeMap<u32, Vec<u32>> = nodes.iter().map(|&n| (n, Vec::new())).collect();
        for &(a, b) in &edges {
            adj.get_mut(&a).unwrap().push(b);
            adj.get_mut(&b).unwrap().push(a);
        }
        Ok(Self { kind, m, nodes, edges, adj })
    }

    /// Full-yield Chimera `C_m`.
    pub fn chimera(m: usize) -> Result<Self, TopologyError> {
        Self::build(TopologyKind::Chimera, m, &[], &[])
    }

    /// Full-yield Pegasus `P_m`.
    pub fn pegasus(m: usize) -> Result<Self, TopologyError> {
        Self::build(TopologyKind::Pegasus, m, &[], &[])
    }

    pub fn kind(&self) -> TopologyKind {
        self.kind
    }

    pub fn size(&self) -> usize {
        self.m
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = u32> + '_ {
        self.nodes.iter().copied()
    }

    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_node(&self, n: u32) -> bool {
        self.nodes.contains(&n)
    }

    pub fn has_edge(&self, a: u32, b: u32) -> bool {
        let key = if a < b { (a, b) } else { (b, a) };
        self.edges.contains(&key)
    }

    /// Sorted neighbour list; empty for unknown nodes.
    pub fn neighbors(&self, n: u32) -> &[u32] {
        self.adj.get(&n).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn max_degree(&self) -> usize {
        self.adj.values().map(Vec::len).max().unwrap_or(0)
    }
}

/// Chimera `C_m`: an `m x m` grid of `K_{4,4}` cells.
///
/// Node id for cell `(r, c)`, side `u` (0 = vertical, 1 = horizontal),
/// index `k` is `((r*m + c)*2 + u)*4 + k`. Vertical qubits couple to the
/// same-index qubit in the cell below, horizontal ones to the right
/// neighbour cell. `8m^2` nodes, `16m^2 + 8m(m-1)` edges.
fn chimera_full_yield(m: usize) -> (Vec<u32>, BTreeSet<(u32, u32)>) {
    let id = |r: usize, c: usize, u: usize, k: usize| (((r * m + c) * 2 + u) * 4 + k) as u32;
    let mut nodes = Vec::with_capacity(8 * m * m);
    let mut edges = BTreeSet::new();
    for r in 0..m {
        for c in 0..m {
            for u in 0..2 {
                for k in 0..4 {
                    nodes.push(id(r, c, u, k));
                }
            }
            // intra-cell K_{4,4}
            for k in 0..4 {
                for kp in 0..4 {
                    edges.insert((id(r, c, 0, k).min(id(r, c, 1, kp)), id(r, c, 0, k).max(id(r, c, 1, kp))));
                }
            }
            if r + 1 < m {
                for k in 0..4 {
                    edges.insert((id(r, c, 0, k).min(id(r + 1, c, 0, k)), id(r, c, 0, k).max(id(r + 1, c, 0, k))));
                }
            }
            if c + 1 < m {
                for k in 0..4 {
                    edges.insert((id(r, c, 1, k).min(id(r, c + 1, 1, k)), id(r, c, 1, k).max(id(r, c + 1, 1, k))));
                }
            }
        }
    }
    (nodes, edges)
}

/// Pegasus `P_m` from the published `(u, w, k, z)` coordinates.
///
/// `u` is the orientation, `w` the perpendicular strip in `0..m`, `k` the
/// track in `0..12`, `z` the position along the strip in `0..m-1`; node id
/// is `((u*m + w)*12 + k)*(m-1) + z`. A vertical qubit `(0, w, k, z)` sits
/// at column `12w + k` spanning rows `[12z + S0[k], 12z + S0[k] + 12)`;
/// horizontal qubits are transposed with offsets `S1`. Couplers are
/// external (consecutive `z`), odd (paired `k`), and internal (crossings).
fn pegasus_full_yield(m: usize) -> (Vec<u32>, BTreeSet<(u32, u32)>) {
    let span = m - 1;
    let id = |u: usize, w: usize, k: usize, z: usize| (((u * m + w) * 12 + k) * span + z) as u32;
    let mut nodes = Vec::with_capacity(24 * m * span);
    let mut edges = BTreeSet::new();
    let mut add = |a: u32, b: u32| {
        edges.insert((a.min(b), a.max(b)));
    };

    for u in 0..2 {
        for w in 0..m {
            for k in 0..12 {
                for z in 0..span {
                    nodes.push(id(u, w, k, z));
                    // external coupler along the strip
                    if z + 1 < span {
                        add(id(u, w, k, z), id(u, w, k, z + 1));
                    }
                    // odd coupler between paired tracks
                    if k % 2 == 0 {
                        add(id(u, w, k, z), id(u, w, k + 1, z));
                    }
                }
            }
        }
    }

    // internal couplers: a vertical and a horizontal qubit that cross
    let s0 = &PEGASUS_OFFSETS[0];
    let s1 = &PEGASUS_OFFSETS[1];
    for w in 0..m {
        for k in 0..12 {
            for z in 0..span {
                let col = (12 * w + k) as i64;
                let row_lo = 12 * z as i64 + s0[k] as i64;
                for row in row_lo..row_lo + 12 {
                    let (wp, kp) = ((row / 12) as usize, (row % 12) as usize);
                    if wp >= m {
                        continue;
                    }
                    let shifted = col - s1[kp] as i64;
                    if shifted < 0 {
                        continue;
                    }
                    let zp = (shifted / 12) as usize;
                    if zp < span {
                        add(id(0, w, k, z), id(1, wp, kp, zp));
                    }
                }
            }
        }
    }
    (nodes, edges)
}

/// Errors from graph construction, embedding, and chain mechanics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TopologyError {
    InvalidSize { kind: TopologyKind, m: usize },
    DisabledNodeNotInGraph(u32),
    DisabledEdgeNotInGraph(u32, u32),
    EmptyLogicalGraph,
    MissingChain(u32),
    EmptyChain(u32),
    NodeNotInGraph(u32),
    OverlappingChains(u32, u32),
    DisconnectedChain(u32),
    MissingCoupler(u32, u32),
    NonPositiveChainStrength,
    LengthMismatch { expected: usize, got: usize },
}

impl fmt::Display for TopologyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::InvalidSize { kind, m } => write!(f, "invalid {kind} size parameter {m}"),
            Self::DisabledNodeNotInGraph(n) => write!(f, "disabled node {n} not in graph"),
            Self::DisabledEdgeNotInGraph(a, b) => write!(f, "disabled edge ({a}, {b}) not in graph"),
            Self::EmptyLogicalGraph => write!(f, "logical graph has no edges"),
            Self::MissingChain(k) => write!(f, "no chain for logical variable {k}"),
            Self::EmptyChain(k) => write!(f, "empty chain for logical variable {k}"),
            Self::NodeNotInGraph(n) => write!(f, "chain node {n} not in the working graph"),
            Self::OverlappingChains(a, b) => write!(f, "chains of variables {a} and {b} overlap"),
            Self::DisconnectedChain(k) => write!(f, "chain of variable {k} is not connected"),
            Self::MissingCoupler(a, b) => {
                write!(f, "no working coupler between chains of variables {a} and {b}")
            }
            Self::NonPositiveChainStrength => write!(f, "relative chain strength must be positive"),
            Self::LengthMismatch { expected, got } => {
                write!(f, "sample has {got} bits, physical model has {expected}")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chimera_counts_match_closed_forms() {
        for m in 1..=16usize {
            let g = HardwareGraph::chimera(m).unwrap();
            assert_eq!(g.num_nodes(), 8 * m * m, "m = {m}");
            assert_eq!(g.num_edges(), 16 * m * m + 8 * m * (m - 1), "m = {m}");
            assert!(g.max_degree() <= 6);
        }
    }

    #[test]
    fn chimera_3_and_16() {
        let c3 = HardwareGraph::chimera(3).unwrap();
        assert_eq!(c3.num_nodes(), 72);
        assert_eq!(c3.num_edges(), 192);
        let c16 = HardwareGraph::chimera(16).unwrap();
        assert_eq!(c16.num_nodes(), 2048);
        assert_eq!(c16.num_edges(), 6016);
    }

    #[test]
    fn pegasus_node_count_closed_form() {
        for m in 2..=16usize {
            let g = HardwareGraph::pegasus(m).unwrap();
            assert_eq!(g.num_nodes(), 24 * m * (m - 1), "m = {m}");
            assert!(g.max_degree() <= 15, "m = {m}");
        }
    }

    #[test]
    fn pegasus_16_scale() {
        let p16 = HardwareGraph::pegasus(16).unwrap();
        assert!(p16.num_nodes() > 5000);
        assert!(p16.num_edges() > 35000);
        assert_eq!(p16.max_degree(), 15);
        // exact counts cross-checked against a separate implementation of
        // the coordinate definition
        assert_eq!(p16.num_nodes(), 5760);
        assert_eq!(p16.num_edges(), 40656);
    }

    #[test]
    fn pegasus_small_sizes_pinned() {
        // (m, nodes, edges) cross-checked as above
        for (m, nodes, edges) in [(2usize, 48, 168), (3, 144, 720), (4, 288, 1632)] {
            let g = HardwareGraph::pegasus(m).unwrap();
            assert_eq!(g.num_nodes(), nodes, "m = {m}");
            assert_eq!(g.num_edges(), edges, "m = {m}");
        }
    }

    #[test]
    fn pegasus_interior_degree_is_15() {
        // 12 internal + 2 external + 1 odd for qubits away from the boundary
        let g = HardwareGraph::pegasus(6).unwrap();
        let hist: alloc::vec::Vec<usize> = g.nodes().map(|n| g.neighbors(n).len()).collect();
        assert!(hist.iter().any(|&d| d == 15));
        assert!(hist.iter().all(|&d| d <= 15));
    }

    #[test]
    fn working_graph_removes_disabled_elements() {
        let full = HardwareGraph::chimera(2).unwrap();
        assert!(full.has_edge(1, 4));
        let g = HardwareGraph::build(TopologyKind::Chimera, 2, &[0], &[(1, 4)]).unwrap();
        assert_eq!(g.num_nodes(), full.num_nodes() - 1);
        // incident edges of node 0 go with it, plus the disabled coupler
        assert_eq!(g.num_edges(), full.num_edges() - full.neighbors(0).len() - 1);
        assert!(!g.has_node(0));
        assert!(!g.has_edge(1, 4));
        assert!(g.neighbors(0).is_empty());
    }

    #[test]
    fn disabling_unknown_elements_fails() {
        assert!(matches!(
            HardwareGraph::build(TopologyKind::Chimera, 1, &[999], &[]),
            Err(TopologyError::DisabledNodeNotInGraph(999))
        ));
        assert!(matches!(
            HardwareGraph::build(TopologyKind::Chimera, 1, &[], &[(0, 1)]),
            Err(TopologyError::DisabledEdgeNotInGraph(0, 1))
        ));
    }
}
