//! Seeded random generators for graphs, demands, set families, and problem
//! instances. Used by the test suites and the CLI's `gen` subcommand;
//! everything is driven by a caller-supplied RNG so runs reproduce exactly.

use crate::demand::{check_crossing_gsupermodular, Demand};
use crate::graph::{in_degree, NodeId, NodeSet, UGraph};
use crate::rat::{rat, Rat};
use crate::setfam::{weakly_cross_free, Copartition, Partition, Pocp};
use crate::solver::Instance;
use crate::uncross::SetFamily;
use rand::Rng;

/// Random graph where each node pair gets an edge independently; a second
/// pass can add parallel copies so multi-edges show up in the mix.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, p: f64, parallel_p: f64) -> UGraph {
    let mut g = UGraph::new(n);
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v).unwrap();
                if rng.gen_bool(parallel_p) {
                    g.add_edge(u, v).unwrap();
                }
            }
        }
    }
    g
}

/// Uniform-ish random partition with at least two parts.
pub fn random_partition<R: Rng>(rng: &mut R, n: usize, root: NodeId) -> Partition {
    loop {
        let blocks = rng.gen_range(2..=n);
        let assign: Vec<usize> = (0..n).map(|_| rng.gen_range(0..blocks)).collect();
        let mut used: Vec<usize> = assign.clone();
        used.sort_unstable();
        used.dedup();
        if used.len() < 2 {
            continue;
        }
        let mut parts = vec![NodeSet::empty(); used.len()];
        for (v, &b) in assign.iter().enumerate() {
            let slot = used.iter().position(|&u| u == b).unwrap();
            parts[slot].insert(v);
        }
        return Partition::new(parts, root, n).unwrap();
    }
}

/// A random laminar family over `[0, n)`, as the internal node sets of a
/// random recursive splitting of the ground set.
pub fn random_laminar_tree<R: Rng>(rng: &mut R, n: usize) -> Vec<NodeSet> {
    let mut nodes = Vec::new();
    let mut stack = vec![NodeSet::full(n)];
    while let Some(set) = stack.pop() {
        nodes.push(set);
        let members: Vec<NodeId> = set.iter().collect();
        if members.len() <= 1 {
            continue;
        }
        // Split into two nonempty halves at random.
        loop {
            let mut left = NodeSet::empty();
            let mut right = NodeSet::empty();
            for &v in &members {
                if rng.gen_bool(0.5) {
                    left.insert(v);
                } else {
                    right.insert(v);
                }
            }
            if !left.is_empty() && !right.is_empty() {
                stack.push(left);
                stack.push(right);
                break;
            }
        }
    }
    nodes
}

/// Picks an antichain of tree sets that partitions the ground set: walk from
/// the full set, stopping at each node with some probability.
pub fn tree_partition<R: Rng>(
    rng: &mut R,
    tree: &[NodeSet],
    n: usize,
    root: NodeId,
) -> Partition {
    fn descend<R: Rng>(
        rng: &mut R,
        tree: &[NodeSet],
        current: NodeSet,
        out: &mut Vec<NodeSet>,
        top: bool,
    ) {
        let children: Vec<NodeSet> = maximal_proper_subsets(tree, current);
        if children.is_empty() || (!top && rng.gen_bool(0.45)) {
            out.push(current);
            return;
        }
        for c in children {
            descend(rng, tree, c, out, false);
        }
    }
    loop {
        let mut parts = Vec::new();
        descend(rng, tree, NodeSet::full(n), &mut parts, true);
        if parts.len() >= 2 {
            return Partition::new(parts, root, n).unwrap();
        }
    }
}

fn maximal_proper_subsets(tree: &[NodeSet], of: NodeSet) -> Vec<NodeSet> {
    let inside: Vec<NodeSet> = tree
        .iter()
        .copied()
        .filter(|s| *s != of && s.is_subset_of(of))
        .collect();
    let mut maximal: Vec<NodeSet> = Vec::new();
    for s in &inside {
        if !inside.iter().any(|t| t != s && s.is_subset_of(*t)) && !maximal.contains(s) {
            maximal.push(*s);
        }
    }
    maximal.sort();
    maximal
}

/// Partition or co-partition drawn from one laminar tree; any two values
/// drawn from the same tree are cross-free.
pub fn tree_pocp<R: Rng>(rng: &mut R, tree: &[NodeSet], n: usize, root: NodeId) -> Pocp {
    let p = tree_partition(rng, tree, n, root);
    if rng.gen_bool(0.5) {
        Pocp::Copart(Copartition::complement_of(&p, n))
    } else {
        Pocp::Part(p)
    }
}

/// Samples a weakly cross-free pair (cross-free, residues incomparable) by
/// rejection over tree-derived families.
pub fn weakly_cross_free_pair<R: Rng>(rng: &mut R, n: usize, root: NodeId) -> (Pocp, Pocp) {
    loop {
        let tree = random_laminar_tree(rng, n);
        for _ in 0..60 {
            let a = tree_pocp(rng, &tree, n, root);
            let b = tree_pocp(rng, &tree, n, root);
            if weakly_cross_free(&a, &b, n) {
                return (a, b);
            }
        }
    }
}

/// Cross-free regular multiset family: disjoint union of the parts of a few
/// tree-derived partitions and co-partitions.
pub fn random_crossfree_regular_family<R: Rng>(
    rng: &mut R,
    n: usize,
    root: NodeId,
) -> (SetFamily, Vec<Pocp>) {
    let tree = random_laminar_tree(rng, n);
    let count = rng.gen_range(1..=3);
    let mut sets = Vec::new();
    let mut sources = Vec::new();
    for _ in 0..count {
        let p = tree_pocp(rng, &tree, n, root);
        sets.extend(p.parts().iter().copied());
        sources.push(p);
    }
    (SetFamily::new(n, sets).unwrap(), sources)
}

/// Random demand that is crossing supermodular relative to `g`.
///
/// Mix of rooted-connectivity demands, in-degree-complement tables
/// (supermodular outright), and sparse rejection-sampled tables.
pub fn random_demand<R: Rng>(rng: &mut R, n: usize, g: &UGraph, max_k: u32) -> Demand {
    match rng.gen_range(0..4) {
        0 | 1 => {
            let k = rng.gen_range(1..=max_k);
            let l = rng.gen_range(0..=k);
            Demand::kl(k, l, rng.gen_range(0..n))
        }
        2 => in_degree_complement_table(rng, n, max_k),
        _ => loop {
            if let Some(f) = sparse_table(rng, n, g) {
                break f;
            }
        },
    }
}

/// Table demand `f(S) = k - (arcs entering S)` for a small random arc set;
/// nonnegative because the arc count stays at most `k`.
pub fn in_degree_complement_table<R: Rng>(rng: &mut R, n: usize, max_k: u32) -> Demand {
    let k = rng.gen_range(1..=max_k) as i64;
    let arcs: Vec<(usize, usize)> = (0..k)
        .map(|_| loop {
            let u = rng.gen_range(0..n);
            let v = rng.gen_range(0..n);
            if u != v {
                return (u, v);
            }
        })
        .collect();
    let mut entries = Vec::new();
    for s in NodeSet::proper_subsets(n) {
        let v = k - in_degree(&arcs, s) as i64;
        if v > 0 {
            entries.push((s, v as u32));
        }
    }
    Demand::table(n, entries).unwrap()
}

fn sparse_table<R: Rng>(rng: &mut R, n: usize, g: &UGraph) -> Option<Demand> {
    let entries: Vec<(NodeSet, u32)> = (0..rng.gen_range(1..4))
        .map(|_| {
            (
                NodeSet(rng.gen_range(1..NodeSet::full(n).0)),
                rng.gen_range(1..3u32),
            )
        })
        .collect();
    let f = Demand::table(n, entries).ok()?;
    match check_crossing_gsupermodular(&f, g) {
        Ok(None) => Some(f),
        _ => None,
    }
}

/// Knobs for [`random_feasible_instance`].
#[derive(Clone, Debug)]
pub struct InstanceParams {
    pub n: usize,
    /// Free-edge probability per node pair.
    pub free_p: f64,
    /// Cap on purchasable edges.
    pub max_buy: usize,
    /// Largest `k` for generated demands.
    pub max_k: u32,
    /// Allow tabulated demands (not just rooted-connectivity ones).
    pub table_demands: bool,
}

impl Default for InstanceParams {
    fn default() -> Self {
        InstanceParams { n: 6, free_p: 0.35, max_buy: 12, max_k: 2, table_demands: true }
    }
}

/// Generates an instance that is feasible by construction: purchasable
/// edges are added until the combined graph is orientable for the demand.
pub fn random_feasible_instance<R: Rng>(rng: &mut R, params: &InstanceParams) -> Instance {
    loop {
        let n = params.n;
        let free = random_graph(rng, n, params.free_p, 0.15);
        let demand = if params.table_demands {
            random_demand(rng, n, &free, params.max_k)
        } else {
            let k = rng.gen_range(1..=params.max_k);
            let l = rng.gen_range(0..=k);
            Demand::kl(k, l, rng.gen_range(0..n))
        };
        if let Some(inst) = try_complete_instance(rng, free, demand, params.max_buy) {
            return inst;
        }
    }
}

/// Like [`random_feasible_instance`], but for a caller-chosen demand.
pub fn feasible_instance_with_demand<R: Rng>(
    rng: &mut R,
    n: usize,
    free_p: f64,
    max_buy: usize,
    demand: &Demand,
) -> Instance {
    loop {
        let free = random_graph(rng, n, free_p, 0.15);
        if let Some(inst) = try_complete_instance(rng, free, demand.clone(), max_buy) {
            return inst;
        }
    }
}

fn try_complete_instance<R: Rng>(
    rng: &mut R,
    free: UGraph,
    demand: Demand,
    max_buy: usize,
) -> Option<Instance> {
    let n = free.n();
    let root = match &demand {
        Demand::Kl { root, .. } => *root,
        Demand::Table { .. } => rng.gen_range(0..n),
    };
    let mut combined = free.clone();
    let mut buys: Vec<((usize, usize), Rat)> = Vec::new();
    loop {
        if crate::orient::is_f_orientable(&combined, &demand, root).unwrap() {
            // Pad with a few extra purchasable edges so the LP has slack
            // to play with.
            while buys.len() < max_buy && rng.gen_bool(0.4) {
                let u = rng.gen_range(0..n);
                let v = rng.gen_range(0..n);
                if u != v {
                    combined.add_edge(u, v).unwrap();
                    buys.push(((u, v), random_cost(rng)));
                }
            }
            return Instance::new(n, free.edges().to_vec(), buys, demand, root).ok();
        }
        if buys.len() >= max_buy {
            return None; // budget exhausted before feasibility
        }
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u == v {
            continue;
        }
        combined.add_edge(u, v).unwrap();
        buys.push(((u, v), random_cost(rng)));
    }
}

fn random_cost<R: Rng>(rng: &mut R) -> Rat {
    rat(rng.gen_range(0..=20), rng.gen_range(1..=4))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setfam::cross_free;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn tree_pocps_are_pairwise_cross_free() {
        let mut rng = StdRng::seed_from_u64(71);
        for _ in 0..30 {
            let n = 7;
            let tree = random_laminar_tree(&mut rng, n);
            let a = tree_pocp(&mut rng, &tree, n, 0);
            let b = tree_pocp(&mut rng, &tree, n, 0);
            assert!(cross_free(&a, &b, n));
        }
    }

    #[test]
    fn weak_pairs_are_weakly_cross_free() {
        let mut rng = StdRng::seed_from_u64(72);
        for _ in 0..20 {
            let (a, b) = weakly_cross_free_pair(&mut rng, 6, 0);
            assert!(weakly_cross_free(&a, &b, 6));
        }
    }

    #[test]
    fn generated_demands_pass_the_supermodularity_check() {
        let mut rng = StdRng::seed_from_u64(73);
        for _ in 0..40 {
            let n = 5;
            let g = random_graph(&mut rng, n, 0.4, 0.1);
            let f = random_demand(&mut rng, n, &g, 2);
            assert_eq!(check_crossing_gsupermodular(&f, &g).unwrap(), None);
        }
    }

    #[test]
    fn regular_families_are_regular_and_cross_free() {
        let mut rng = StdRng::seed_from_u64(74);
        for _ in 0..30 {
            let n = 6;
            let (fam, sources) = random_crossfree_regular_family(&mut rng, n, 0);
            let t = fam.regularity().expect("must be regular");
            let expected: usize = sources
                .iter()
                .map(|p| if p.is_partition() { 1 } else { p.parts().len() - 1 })
                .sum();
            assert_eq!(t, expected);
            assert!(fam.is_cross_free());
        }
    }
}
