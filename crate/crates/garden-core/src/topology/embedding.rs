//! Minor embedding via rip-up-and-reroute chain search, plus the
//! embedding validator.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;

use rand_chacha::rand_core::RngCore;
use rand_chacha::ChaCha8Rng;

use crate::rng;
use crate::topology::{HardwareGraph, TopologyError};

/// Map from logical variable to its chain of hardware nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    chains: BTreeMap<u32, BTreeSet<u32>>,
}

impl Embedding {
    pub fn from_chains(chains: BTreeMap<u32, BTreeSet<u32>>) -> Self {
        Self { chains }
    }

    pub fn chains(&self) -> &BTreeMap<u32, BTreeSet<u32>> {
        &self.chains
    }

    pub fn chain(&self, var: u32) -> Option<&BTreeSet<u32>> {
        self.chains.get(&var)
    }

    pub fn num_chains(&self) -> usize {
        self.chains.len()
    }

    pub fn max_chain_length(&self) -> usize {
        self.chains.values().map(BTreeSet::len).max().unwrap_or(0)
    }

    /// All hardware nodes used by any chain, sorted.
    pub fn used_nodes(&self) -> Vec<u32> {
        let set: BTreeSet<u32> = self.chains.values().flatten().copied().collect();
        set.into_iter().collect()
    }
}

/// Check disjointness, chain connectivity, and coupler coverage.
pub fn validate_embedding(
    emb: &Embedding,
    logical_edges: &[(u32, u32)],
    hw: &HardwareGraph,
) -> Result<(), TopologyError> {
    let mut owner: BTreeMap<u32, u32> = BTreeMap::new();
    for (&var, chain) in emb.chains() {
        if chain.is_empty() {
            return Err(TopologyError::EmptyChain(var));
        }
        for &node in chain {
            if !hw.has_node(node) {
                return Err(TopologyError::NodeNotInGraph(node));
            }
            if let Some(&other) = owner.get(&node) {
                return Err(TopologyError::OverlappingChains(other, var));
            }
            owner.insert(node, var);
        }
        // connectivity within the working graph
        let start = *chain.iter().next().unwrap();
        let mut seen: BTreeSet<u32> = BTreeSet::new();
        let mut queue: Vec<u32> = vec![start];
        seen.insert(start);
        while let Some(node) = queue.pop() {
            for &nb in hw.neighbors(node) {
                if chain.contains(&nb) && seen.insert(nb) {
                    queue.push(nb);
                }
            }
        }
        if seen.len() != chain.len() {
            return Err(TopologyError::DisconnectedChain(var));
        }
    }
    for &(a, b) in logical_edges {
        let ca = emb.chain(a).ok_or(TopologyError::MissingChain(a))?;
        let cb = emb.chain(b).ok_or(TopologyError::MissingChain(b))?;
        let coupled = ca
            .iter()
            .any(|&na| hw.neighbors(na).iter().any(|nb| cb.contains(nb)));
        if !coupled {
            return Err(TopologyError::MissingCoupler(a, b));
        }
    }
    Ok(())
}

/// Hardware graph with dense node indices for the router's arrays.
struct DenseGraph {
    /// dense index -> hardware node id
    ids: Vec<u32>,
    adj: Vec<Vec<u32>>,
}

impl DenseGraph {
    fn build(hw: &HardwareGraph) -> Self {
        let ids: Vec<u32> = hw.nodes().collect();
        let index: BTreeMap<u32, u32> =
            ids.iter().enumerate().map(|(i, &n)| (n, i as u32)).collect();
        let adj = ids
            .iter()
            .map(|&n| hw.neighbors(n).iter().map(|nb| index[nb]).collect())
            .collect();
        Self { ids, adj }
    }

    fn len(&self) -> usize {
        self.ids.len()
    }
}

/// Find a minor embedding of the logical graph into the working graph.
///
/// Each attempt routes every chain with weighted shortest paths that
/// penalise nodes already claimed by other chains, then re-routes
/// variables over several passes until the chains are node-disjoint.
/// Attempts differ in their variable orders and tie-breaks. Dense logical
/// graphs that defeat the router fall back to a clique template on
/// full-yield Chimera. `None` means no embedding was found, which is a
/// result, not an error.
pub fn find_embedding(
    logical_edges: &[(u32, u32)],
    hw: &HardwareGraph,
    seed: u64,
    tries: usize,
) -> Result<Option<Embedding>, TopologyError> {
    if logical_edges.is_empty() {
        return Err(TopologyError::EmptyLogicalGraph);
    }
    let mut adj: BTreeMap<u32, BTreeSet<u32>> = BTreeMap::new();
    for &(a, b) in logical_edges {
        adj.entry(a).or_default().insert(b);
        adj.entry(b).or_default().insert(a);
    }
    let mut vars: Vec<u32> = adj.keys().copied().collect();
    vars.sort_by_key(|v| (usize::MAX - adj[v].len(), *v));
    let graph = DenseGraph::build(hw);

    for try_idx in 0..tries {
        let mut rng = rng::stream_rng(seed, try_idx as u64);
        if let Some(emb) = attempt(&vars, &adj, &graph, &mut rng) {
            validate_embedding(&emb, logical_edges, hw)?;
            return Ok(Some(emb));
        }
    }

    let num_vars = vars.iter().max().map_or(0, |&v| v as usize + 1);
    if let Some(emb) = chimera_clique_embedding(num_vars, hw) {
        if validate_embedding(&emb, logical_edges, hw).is_ok() {
            return Ok(Some(emb));
        }
    }
    Ok(None)
}

const ROUTER_PASSES: usize = 24;
const UNREACHABLE: u64 = u64::MAX;

/// Cost of routing through a node claimed by `usage` chains, with a
/// congestion history multiplier and a random low-bit tie-break.
fn node_weight(usage: u32, history: u64, jitter: u64) -> u64 {
    let base = if usage == 0 {
        1
    } else {
        1u64 << (11 * usage.min(4) as u64)
    };
    base.saturating_mul(1 + history).saturating_mul(256).saturating_add(jitter)
}

fn attempt(
    vars: &[u32],
    adj: &BTreeMap<u32, BTreeSet<u32>>,
    graph: &DenseGraph,
    rng: &mut ChaCha8Rng,
) -> Option<Embedding> {
    let n = graph.len();
    let mut chains: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    let mut usage: Vec<u32> = vec![0; n];
    let mut history: Vec<u64> = vec![0; n];

    for pass in 0..ROUTER_PASSES {
        let mut order = vars.to_vec();
        if pass > 0 {
            shuffle(&mut order, rng);
        }
        let jitter: Vec<u64> = (0..n).map(|_| rng.next_u64() % 256).collect();
        for &var in &order {
            if let Some(old) = chains.remove(&var) {
                for d in old {
                    usage[d as usize] -= 1;
                }
            }
            let placed: Vec<&Vec<u32>> =
                adj[&var].iter().filter_map(|t| chains.get(t)).collect();
            let chain = if placed.is_empty() {
                let min = *usage.iter().min().unwrap();
                let free: Vec<u32> = (0..n as u32).filter(|&d| usage[d as usize] == min).collect();
                vec![free[rng::index_below(rng, free.len())]]
            } else {
                route_chain(graph, &usage, &history, &jitter, &placed)?
            };
            for &d in &chain {
                usage[d as usize] += 1;
            }
            chains.insert(var, chain);
        }
        if usage.iter().all(|&u| u <= 1) {
            let resolved = chains
                .into_iter()
                .map(|(var, chain)| {
                    (var, chain.into_iter().map(|d| graph.ids[d as usize]).collect())
                })
                .collect();
            return Some(Embedding { chains: resolved });
        }
        // contested nodes get permanently more expensive
        for (d, &u) in usage.iter().enumerate() {
            if u > 1 {
                history[d] += (u - 1) as u64;
            }
        }
    }
    None
}

/// Deterministic clique template on full-yield Chimera: variable `4a + k`
/// takes vertical qubit `k` down column `a` and horizontal qubit `k`
/// across row `a`, restricted to the top-left `blocks x blocks` cells.
/// Any two chains meet in the cell where one's row crosses the other's
/// column, so the template carries any logical graph on those variables.
fn chimera_clique_embedding(num_vars: usize, hw: &HardwareGraph) -> Option<Embedding> {
    use crate::topology::TopologyKind;
    if hw.kind() != TopologyKind::Chimera || num_vars == 0 {
        return None;
    }
    let m = hw.size();
    let blocks = num_vars.div_ceil(4);
    if blocks > m {
        return None;
    }
    let mut chains: BTreeMap<u32, BTreeSet<u32>> = BTreeMap::new();
    for i in 0..num_vars {
        let (a, k) = (i / 4, i % 4);
        let mut chain: BTreeSet<u32> = BTreeSet::new();
        for r in 0..=a {
            chain.insert((((r * m + a) * 2) * 4 + k) as u32);
        }
        for c in a..blocks {
            chain.insert((((a * m + c) * 2 + 1) * 4 + k) as u32);
        }
        chains.insert(i as u32, chain);
    }
    Some(Embedding::from_chains(chains))
}

/// Route a chain that touches every chain in `targets`.
///
/// Runs one multi-source shortest-path search per target chain, picks the
/// root minimising the summed path costs, and takes the union of the paths
/// from the root back to each target. Overlap with other chains is allowed
/// here; the pass loop drives it out via the node weights.
fn route_chain(
    graph: &DenseGraph,
    usage: &[u32],
    history: &[u64],
    jitter: &[u64],
    targets: &[&Vec<u32>],
) -> Option<Vec<u32>> {
    let n = graph.len();
    let mut dists: Vec<Vec<u64>> = Vec::with_capacity(targets.len());
    let mut parents: Vec<Vec<u32>> = Vec::with_capacity(targets.len());
    for chain in targets {
        let (dist, parent) = shortest_paths(graph, usage, history, jitter, chain);
        dists.push(dist);
        parents.push(parent);
    }

    let mut root: Option<(u128, u32)> = None;
    for d in 0..n as u32 {
        if dists.iter().any(|dist| dist[d as usize] == UNREACHABLE) {
            continue;
        }
        let paths: u128 = dists.iter().map(|dist| dist[d as usize] as u128).sum();
        // every nonzero path sum already pays the root's weight; charge it
        // exactly once overall so used roots are never free
        let w = node_weight(usage[d as usize], history[d as usize], jitter[d as usize]) as u128;
        let nonzero = dists.iter().filter(|dist| dist[d as usize] > 0).count() as u128;
        let total = paths + w - nonzero * w;
        if root.is_none_or(|(best, _)| total < best) {
            root = Some((total, d));
        }
    }
    let (_, root) = root?;

    let mut chain: BTreeSet<u32> = BTreeSet::new();
    chain.insert(root);
    for (dist, parent) in dists.iter().zip(&parents) {
        let mut cur = root;
        while dist[cur as usize] != 0 {
            chain.insert(cur);
            cur = parent[cur as usize];
        }
    }
    Some(chain.into_iter().collect())
}

/// Weighted shortest paths from a multi-node source; entering a node pays
/// its [`node_weight`]. Source nodes cost 0.
fn shortest_paths(
    graph: &DenseGraph,
    usage: &[u32],
    history: &[u64],
    jitter: &[u64],
    sources: &[u32],
) -> (Vec<u64>, Vec<u32>) {
    let n = graph.len();
    let mut dist = vec![UNREACHABLE; n];
    let mut parent = vec![0u32; n];
    let mut heap: alloc::collections::BinaryHeap<Reverse<(u64, u32)>> =
        alloc::collections::BinaryHeap::new();
    for &s in sources {
        dist[s as usize] = 0;
        parent[s as usize] = s;
        heap.push(Reverse((0, s)));
    }
    while let Some(Reverse((d, node))) = heap.pop() {
        if d > dist[node as usize] {
            continue;
        }
        for &nb in &graph.adj[node as usize] {
            let nd = d.saturating_add(node_weight(
                usage[nb as usize],
                history[nb as usize],
                jitter[nb as usize],
            ));
            if nd < dist[nb as usize] {
                dist[nb as usize] = nd;
                parent[nb as usize] = node;
                heap.push(Reverse((nd, nb)));
            }
        }
    }
    (dist, parent)
}

fn shuffle(items: &mut [u32], rng: &mut ChaCha8Rng) {
    for i in (1..items.len()).rev() {
        let j = rng::index_below(rng, i + 1);
        items.swap(i, j);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::TopologyKind;

    #[test]
    fn subgraph_embeds_with_unit_chains() {
        // a 4-cycle is a subgraph of one chimera cell
        let hw = HardwareGraph::chimera(1).unwrap();
        let logical = [(0u32, 1u32), (1, 2), (2, 3), (0, 3)];
        let emb = find_embedding(&logical, &hw, 0, 10).unwrap().expect("embeddable");
        validate_embedding(&emb, &logical, &hw).unwrap();
    }

    #[test]
    fn k5_on_single_cell_needs_chains_or_fails() {
        // K5 is not a subgraph of K_{4,4}; any embedding must chain
        let hw = HardwareGraph::chimera(1).unwrap();
        let mut logical = Vec::new();
        for a in 0..5u32 {
            for b in (a + 1)..5 {
                logical.push((a, b));
            }
        }
        if let Some(emb) = find_embedding(&logical, &hw, 3, 20).unwrap() {
            validate_embedding(&emb, &logical, &hw).unwrap();
            assert!(emb.max_chain_length() >= 2);
        }
    }

    #[test]
    fn k5_on_chimera_2() {
        let hw = HardwareGraph::chimera(2).unwrap();
        let mut logical = Vec::new();
        for a in 0..5u32 {
            for b in (a + 1)..5 {
                logical.push((a, b));
            }
        }
        let emb = find_embedding(&logical, &hw, 1, 50).unwrap().expect("K5 fits in C2");
        validate_embedding(&emb, &logical, &hw).unwrap();
    }

    #[test]
    fn validator_rejects_corrupted_embeddings() {
        let hw = HardwareGraph::chimera(2).unwrap();
        let logical = [(0u32, 1u32), (1, 2), (0, 2)];
        let emb = find_embedding(&logical, &hw, 9, 20).unwrap().expect("embeddable");

        // fuzz: corrupt the embedding in assorted ways, validator must reject
        let mut rng = crate::rng::stream_rng(123, 0);
        for round in 0..50 {
            let mut chains = emb.chains().clone();
            let vars: Vec<u32> = chains.keys().copied().collect();
            let v = vars[crate::rng::index_below(&mut rng, vars.len())];
            match round % 4 {
                0 => {
                    chains.get_mut(&v).unwrap().clear(); // empty chain
                }
                1 => {
                    chains.get_mut(&v).unwrap().insert(9999); // node outside graph
                }
                2 => {
                    // overlap: copy another chain's node in
                    let other = vars[(vars.iter().position(|&x| x == v).unwrap() + 1) % vars.len()];
                    let stolen = *chains[&other].iter().next().unwrap();
                    chains.get_mut(&v).unwrap().insert(stolen);
                }
                _ => {
                    // disconnect: add a far-away free node
                    let far = hw
                        .nodes()
                        .find(|n| {
                            !chains.values().any(|c| c.contains(n))
                                && !chains[&v].iter().any(|&c| hw.has_edge(*n, c))
                        })
                        .unwrap();
                    chains.get_mut(&v).unwrap().insert(far);
                }
            }
            let corrupted = Embedding::from_chains(chains);
            assert!(validate_embedding(&corrupted, &logical, &hw).is_err(), "round {round}");
        }
    }

    #[test]
    fn dense_graphs_use_the_clique_template() {
        // K16 defeats the router quickly but fits the clique template
        let hw = HardwareGraph::chimera(16).unwrap();
        let mut logical = Vec::new();
        for a in 0..16u32 {
            for b in (a + 1)..16 {
                logical.push((a, b));
            }
        }
        let emb = find_embedding(&logical, &hw, 0, 1).unwrap().expect("K16 fits in C16");
        validate_embedding(&emb, &logical, &hw).unwrap();
        assert_eq!(emb.num_chains(), 16);
        assert!(emb.max_chain_length() <= 5);
    }

    #[test]
    fn clique_template_respects_missing_nodes() {
        // knock out a node the template needs; the fallback must not emit
        // an embedding that uses it
        let hw = HardwareGraph::build(TopologyKind::Chimera, 2, &[0], &[]).unwrap();
        let mut logical = Vec::new();
        for a in 0..8u32 {
            for b in (a + 1)..8 {
                logical.push((a, b));
            }
        }
        if let Some(emb) = find_embedding(&logical, &hw, 0, 3).unwrap() {
            validate_embedding(&emb, &logical, &hw).unwrap();
        }
    }

    #[test]
    fn empty_logical_graph_is_an_error() {
        let hw = HardwareGraph::chimera(1).unwrap();
        assert!(matches!(
            find_embedding(&[], &hw, 0, 5),
            Err(TopologyError::EmptyLogicalGraph)
        ));
    }

    #[test]
    fn chimera_into_pegasus() {
        // composing the generators: embed a C2 graph into P4
        let c2 = HardwareGraph::chimera(2).unwrap();
        let logical: Vec<(u32, u32)> = c2.edges().collect();
        let p4 = HardwareGraph::build(TopologyKind::Pegasus, 4, &[], &[]).unwrap();
        let emb = find_embedding(&logical, &p4, 5, 20).unwrap().expect("C2 fits in P4");
        validate_embedding(&emb, &logical, &p4).unwrap();
    }
}
