//! Node-indexed multigraphs and the cut functions used throughout the crate.
//!
//! Graphs are small and dense-indexed (nodes `0..n`), edges are positional so
//! parallel edges are first-class, and node sets are bitmasks. All weighted
//! cut quantities are exact rationals.

use crate::error::Error;
use crate::rat::Rat;
use num_traits::Zero;
use std::fmt;

/// Dense node index in `[0, n)`.
pub type NodeId = usize;

/// Largest supported node count (sets are stored in a `u64` mask).
pub const MAX_NODES: usize = 63;

/// A subset of the node set `[0, n)`, stored as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct NodeSet(pub u64);

impl NodeSet {
    /// The empty set.
    pub fn empty() -> Self {
        NodeSet(0)
    }

    /// The full set `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_NODES);
        if n == 0 {
            NodeSet(0)
        } else {
            NodeSet(u64::MAX >> (64 - n))
        }
    }

    /// Singleton `{v}`.
    pub fn singleton(v: NodeId) -> Self {
        NodeSet(1 << v)
    }

    /// Builds a set from an iterator of node ids.
    pub fn from_nodes<I: IntoIterator<Item = NodeId>>(nodes: I) -> Self {
        let mut mask = 0u64;
        for v in nodes {
            debug_assert!(v < MAX_NODES);
            mask |= 1 << v;
        }
        NodeSet(mask)
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.0 >> v & 1 == 1
    }

    pub fn insert(&mut self, v: NodeId) {
        self.0 |= 1 << v;
    }

    pub fn remove(&mut self, v: NodeId) {
        self.0 &= !(1 << v);
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    /// Complement with respect to the ground set `[0, n)`.
    pub fn complement(&self, n: usize) -> Self {
        NodeSet(!self.0 & Self::full(n).0)
    }

    pub fn union(&self, other: NodeSet) -> Self {
        NodeSet(self.0 | other.0)
    }

    pub fn intersection(&self, other: NodeSet) -> Self {
        NodeSet(self.0 & other.0)
    }

    pub fn difference(&self, other: NodeSet) -> Self {
        NodeSet(self.0 & !other.0)
    }

    pub fn is_subset_of(&self, other: NodeSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint_from(&self, other: NodeSet) -> bool {
        self.0 & other.0 == 0
    }

    /// Iterates the member node ids in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = NodeId> + '_ {
        let mask = self.0;
        (0..64).filter(move |v| mask >> v & 1 == 1)
    }

    /// True if `self` and `other` cross: both of them, their difference in
    /// each direction, and the complement of their union are all nonempty.
    pub fn crosses(&self, other: NodeSet, n: usize) -> bool {
        !self.intersection(other).is_empty()
            && !self.difference(other).is_empty()
            && !other.difference(*self).is_empty()
            && self.union(other) != NodeSet::full(n)
    }

    /// All subsets of `[0, n)`, the empty and full set included.
    pub fn all_subsets(n: usize) -> impl Iterator<Item = NodeSet> {
        debug_assert!(n <= 24, "subset enumeration is exponential");
        (0u64..(1 << n)).map(NodeSet)
    }

    /// All proper nonempty subsets of `[0, n)`.
    pub fn proper_subsets(n: usize) -> impl Iterator<Item = NodeSet> {
        (1u64..Self::full(n).0).map(NodeSet)
    }
}

impl fmt::Debug for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        let mut first = true;
        for v in self.iter() {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
            first = false;
        }
        write!(f, "}}")
    }
}

/// Undirected multigraph on nodes `0..n`. Edge identity is positional, so
/// parallel edges are distinct; self-loops are rejected.
#[derive(Clone, PartialEq, Eq)]
pub struct UGraph {
    n: usize,
    edges: Vec<(NodeId, NodeId)>,
}

impl UGraph {
    pub fn new(n: usize) -> Self {
        assert!(n <= MAX_NODES, "node count exceeds bitmask capacity");
        UGraph { n, edges: Vec::new() }
    }

    pub fn from_edges(n: usize, edges: &[(NodeId, NodeId)]) -> Result<Self, Error> {
        let mut g = UGraph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: NodeId, v: NodeId) -> Result<usize, Error> {
        if u == v {
            return Err(Error::Invalid(format!("self-loop at node {u}")));
        }
        if u >= self.n || v >= self.n {
            return Err(Error::Invalid(format!(
                "edge ({u},{v}) out of range for {} nodes",
                self.n
            )));
        }
        self.edges.push((u, v));
        Ok(self.edges.len() - 1)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Weighted cut: sum of `weights` over edges with exactly one endpoint
    /// in `s`. Empty and full `s` give 0.
    pub fn weighted_cut(&self, weights: &[Rat], s: NodeSet) -> Rat {
        debug_assert_eq!(weights.len(), self.edges.len());
        let mut total = Rat::zero();
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            if s.contains(u) != s.contains(v) {
                total += &weights[i];
            }
        }
        total
    }

    /// Unweighted cut size `d(S)`.
    pub fn cut_size(&self, s: NodeSet) -> usize {
        self.edges
            .iter()
            .filter(|&&(u, v)| s.contains(u) != s.contains(v))
            .count()
    }

    /// Number of edges with one endpoint in `S \ T` and the other in `T \ S`.
    pub fn cross_pair(&self, s: NodeSet, t: NodeSet) -> usize {
        let s_only = s.difference(t);
        let t_only = t.difference(s);
        self.edges
            .iter()
            .filter(|&&(u, v)| {
                (s_only.contains(u) && t_only.contains(v))
                    || (t_only.contains(u) && s_only.contains(v))
            })
            .count()
    }

    /// Minimum cut size over all proper nonempty node sets, computed with
    /// `n - 1` max-flow runs against a fixed terminal.
    ///
    /// Returns 0 for disconnected graphs.
    pub fn edge_connectivity(&self) -> usize {
        assert!(self.n >= 2, "edge connectivity needs at least two nodes");
        // Undirected flow: each edge supplies unit capacity both ways.
        let mut arcs = Vec::with_capacity(2 * self.edges.len());
        for &(u, v) in &self.edges {
            arcs.push((u, v));
            arcs.push((v, u));
        }
        let caps: Vec<Rat> = vec![Rat::from_integer(1.into()); arcs.len()];
        let mut best: Option<usize> = None;
        for t in 1..self.n {
            let flow = max_flow(self.n, &arcs, &caps, 0, t);
            let value = flow
                .value
                .to_integer()
                .try_into()
                .expect("unit-capacity flow fits a usize");
            best = Some(best.map_or(value, |b| b.min(value)));
        }
        best.unwrap_or(0)
    }
}

impl fmt::Debug for UGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UGraph(n={}, edges={:?})", self.n, self.edges)
    }
}

/// Mixed multigraph: fixed arcs plus undirected edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedGraph {
    pub n: usize,
    pub arcs: Vec<(NodeId, NodeId)>,
    pub uedges: Vec<(NodeId, NodeId)>,
}

impl MixedGraph {
    pub fn new(n: usize) -> Self {
        assert!(n <= MAX_NODES);
        MixedGraph { n, arcs: Vec::new(), uedges: Vec::new() }
    }

    pub fn add_arc(&mut self, u: NodeId, v: NodeId) {
        assert!(u != v && u < self.n && v < self.n);
        self.arcs.push((u, v));
    }

    pub fn add_uedge(&mut self, u: NodeId, v: NodeId) {
        assert!(u != v && u < self.n && v < self.n);
        self.uedges.push((u, v));
    }

    /// Number of arcs entering `s`.
    pub fn arc_in_degree(&self, s: NodeSet) -> usize {
        self.arcs
            .iter()
            .filter(|&&(u, v)| s.contains(v) && !s.contains(u))
            .count()
    }
}

/// Weighted in-cut of a directed arc list: sum of `weights` over arcs with
/// head in `s` and tail outside.
pub fn in_cut(arcs: &[(NodeId, NodeId)], weights: &[Rat], s: NodeSet) -> Rat {
    debug_assert_eq!(arcs.len(), weights.len());
    let mut total = Rat::zero();
    for (i, &(u, v)) in arcs.iter().enumerate() {
        if s.contains(v) && !s.contains(u) {
            total += &weights[i];
        }
    }
    total
}

/// Unweighted in-degree of a node set.
pub fn in_degree(arcs: &[(NodeId, NodeId)], s: NodeSet) -> usize {
    arcs.iter()
        .filter(|&&(u, v)| s.contains(v) && !s.contains(u))
        .count()
}

/// Result of a max-flow computation: the exact flow value and a minimum-cut
/// witness given as the set of nodes on the source side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxFlow {
    pub value: Rat,
    pub source_side: NodeSet,
}

/// Exact max flow from `s` to `t` by augmenting shortest paths.
///
/// Capacities are nonnegative rationals; parallel arcs are kept separate.
/// The returned cut satisfies strong duality exactly: its capacity equals
/// the flow value.
pub fn max_flow(
    n: usize,
    arcs: &[(NodeId, NodeId)],
    caps: &[Rat],
    s: NodeId,
    t: NodeId,
) -> MaxFlow {
    assert_ne!(s, t, "max flow needs distinct terminals");
    assert_eq!(arcs.len(), caps.len());
    let m = arcs.len();
    // Residual arcs: 2i forward, 2i+1 backward.
    let mut residual: Vec<Rat> = Vec::with_capacity(2 * m);
    for c in caps {
        debug_assert!(*c >= Rat::zero());
        residual.push(c.clone());
        residual.push(Rat::zero());
    }
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, &(u, v)) in arcs.iter().enumerate() {
        out[u].push(2 * i);
        out[v].push(2 * i + 1);
    }
    let head = |ri: usize| -> NodeId {
        let (u, v) = arcs[ri / 2];
        if ri % 2 == 0 {
            v
        } else {
            u
        }
    };

    let mut value = Rat::zero();
    loop {
        // BFS for a shortest augmenting path.
        let mut pred: Vec<Option<usize>> = vec![None; n];
        let mut seen = NodeSet::singleton(s);
        let mut queue = std::collections::VecDeque::from([s]);
        'bfs: while let Some(u) = queue.pop_front() {
            for &ri in &out[u] {
                let v = head(ri);
                if !seen.contains(v) && residual[ri] > Rat::zero() {
                    seen.insert(v);
                    pred[v] = Some(ri);
                    if v == t {
                        break 'bfs;
                    }
                    queue.push_back(v);
                }
            }
        }
        if !seen.contains(t) {
            return MaxFlow { value, source_side: seen };
        }
        // Bottleneck along the path.
        let mut bottleneck: Option<Rat> = None;
        let mut v = t;
        while v != s {
            let ri = pred[v].unwrap();
            bottleneck = Some(match bottleneck {
                None => residual[ri].clone(),
                Some(b) => b.min(residual[ri].clone()),
            });
            v = head(ri ^ 1);
        }
        let aug = bottleneck.unwrap();
        let mut v = t;
        while v != s {
            let ri = pred[v].unwrap();
            residual[ri] -= &aug;
            residual[ri ^ 1] += &aug;
            v = head(ri ^ 1);
        }
        value += aug;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn unit_weights(m: usize) -> Vec<Rat> {
        vec![rat_int(1); m]
    }

    #[test]
    fn triangle_vertex_cut() {
        let g = UGraph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let w = unit_weights(3);
        assert_eq!(g.weighted_cut(&w, NodeSet::singleton(0)), rat_int(2));
        assert_eq!(g.weighted_cut(&w, NodeSet::empty()), rat_int(0));
        assert_eq!(g.weighted_cut(&w, NodeSet::full(3)), rat_int(0));
    }

    #[test]
    fn cross_pair_on_triangle() {
        let g = UGraph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let s = NodeSet::from_nodes([0, 1]);
        let t = NodeSet::from_nodes([1, 2]);
        // Only edge {0,2} runs between S\T = {0} and T\S = {2}.
        assert_eq!(g.cross_pair(s, t), 1);
        let a = NodeSet::singleton(0);
        let b = NodeSet::singleton(1);
        let g2 = UGraph::from_edges(4, &[(2, 3)]).unwrap();
        assert_eq!(g2.cross_pair(a, b), 0);
    }

    #[test]
    fn in_cut_basics() {
        let arcs = [(0, 1)];
        let w = unit_weights(1);
        assert_eq!(in_cut(&arcs, &w, NodeSet::singleton(1)), rat_int(1));
        assert_eq!(in_cut(&arcs, &w, NodeSet::full(2)), rat_int(0));
    }

    #[test]
    fn max_flow_parallel_arcs() {
        let arcs = [(0, 1), (0, 1)];
        let caps = unit_weights(2);
        let f = max_flow(2, &arcs, &caps, 0, 1);
        assert_eq!(f.value, rat_int(2));
    }

    #[test]
    fn max_flow_disconnected() {
        let arcs = [(1, 0)];
        let caps = unit_weights(1);
        let f = max_flow(3, &arcs, &caps, 0, 1);
        assert_eq!(f.value, rat_int(0));
        assert!(f.source_side.contains(0));
        assert!(!f.source_side.contains(1));
    }

    #[test]
    fn max_flow_fractional_capacities() {
        let arcs = [(0, 1), (1, 2), (0, 2)];
        let caps = vec![rat(1, 3), rat(1, 2), rat(1, 6)];
        let f = max_flow(3, &arcs, &caps, 0, 2);
        // Path 0->1->2 carries 1/3, direct arc 1/6.
        assert_eq!(f.value, rat(1, 2));
    }

    #[test]
    fn edge_connectivity_cycle_and_complete() {
        let c5 = UGraph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        assert_eq!(c5.edge_connectivity(), 2);
        let mut k4 = UGraph::new(4);
        for u in 0..4 {
            for v in (u + 1)..4 {
                k4.add_edge(u, v).unwrap();
            }
        }
        assert_eq!(k4.edge_connectivity(), 3);
    }

    fn random_graph(rng: &mut StdRng, n: usize, p: f64) -> UGraph {
        let mut g = UGraph::new(n);
        for u in 0..n {
            for v in (u + 1)..n {
                if rng.gen_bool(p) {
                    g.add_edge(u, v).unwrap();
                }
            }
        }
        g
    }

    #[test]
    fn weighted_cut_matches_enumeration_oracle() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..50 {
            let g = random_graph(&mut rng, 6, 0.5);
            let w: Vec<Rat> = (0..g.edge_count())
                .map(|_| rat(rng.gen_range(0..8), rng.gen_range(1..5)))
                .collect();
            let s = NodeSet(rng.gen_range(0..64));
            // Edge-by-edge brute count.
            let mut expect = rat_int(0);
            for (i, &(u, v)) in g.edges().iter().enumerate() {
                let inside = (s.contains(u) as u8) + (s.contains(v) as u8);
                if inside == 1 {
                    expect += &w[i];
                }
            }
            assert_eq!(g.weighted_cut(&w, s), expect);
        }
    }

    #[test]
    fn cross_pair_matches_enumeration_oracle() {
        let mut rng = StdRng::seed_from_u64(12);
        for _ in 0..50 {
            let g = random_graph(&mut rng, 7, 0.5);
            let s = NodeSet(rng.gen_range(0..128));
            let t = NodeSet(rng.gen_range(0..128));
            let mut expect = 0;
            for &(u, v) in g.edges() {
                for (a, b) in [(u, v), (v, u)] {
                    if s.contains(a) && !t.contains(a) && t.contains(b) && !s.contains(b) {
                        expect += 1;
                        break;
                    }
                }
            }
            assert_eq!(g.cross_pair(s, t), expect);
        }
    }

    #[test]
    fn in_cut_matches_enumeration_oracle() {
        let mut rng = StdRng::seed_from_u64(13);
        for _ in 0..50 {
            let n = 6;
            let m = rng.gen_range(0..12);
            let arcs: Vec<(usize, usize)> = (0..m)
                .map(|_| loop {
                    let u = rng.gen_range(0..n);
                    let v = rng.gen_range(0..n);
                    if u != v {
                        return (u, v);
                    }
                })
                .collect();
            let w: Vec<Rat> = (0..m).map(|_| rat(rng.gen_range(0..6), 1)).collect();
            let s = NodeSet(rng.gen_range(0..64));
            let mut expect = rat_int(0);
            for (i, &(u, v)) in arcs.iter().enumerate() {
                if s.contains(v) && !s.contains(u) {
                    expect += &w[i];
                }
            }
            assert_eq!(in_cut(&arcs, &w, s), expect);
        }
    }

    #[test]
    fn max_flow_matches_cut_enumeration_oracle() {
        let mut rng = StdRng::seed_from_u64(14);
        for _ in 0..40 {
            let n = 6;
            let m = rng.gen_range(1..14);
            let arcs: Vec<(usize, usize)> = (0..m)
                .map(|_| loop {
                    let u = rng.gen_range(0..n);
                    let v = rng.gen_range(0..n);
                    if u != v {
                        return (u, v);
                    }
                })
                .collect();
            let caps: Vec<Rat> = (0..m)
                .map(|_| rat(rng.gen_range(0..5), rng.gen_range(1..4)))
                .collect();
            let f = max_flow(n, &arcs, &caps, 0, 1);
            // Oracle: min capacity over all s-t cuts.
            let mut best: Option<Rat> = None;
            for s in NodeSet::all_subsets(n) {
                if !s.contains(0) || s.contains(1) {
                    continue;
                }
                let mut cap = rat_int(0);
                for (i, &(u, v)) in arcs.iter().enumerate() {
                    if s.contains(u) && !s.contains(v) {
                        cap += &caps[i];
                    }
                }
                best = Some(match best {
                    None => cap,
                    Some(b) => b.min(cap),
                });
            }
            assert_eq!(f.value, best.unwrap());
            // Strong duality on the returned witness.
            let mut witness_cap = rat_int(0);
            for (i, &(u, v)) in arcs.iter().enumerate() {
                if f.source_side.contains(u) && !f.source_side.contains(v) {
                    witness_cap += &caps[i];
                }
            }
            assert_eq!(f.value, witness_cap);
        }
    }

    #[test]
    fn edge_connectivity_matches_cut_enumeration_oracle() {
        let mut rng = StdRng::seed_from_u64(15);
        for _ in 0..30 {
            let g = random_graph(&mut rng, 7, 0.45);
            let mut best = usize::MAX;
            for s in NodeSet::proper_subsets(7) {
                best = best.min(g.cut_size(s));
            }
            assert_eq!(g.edge_connectivity(), best);
        }
    }

    #[test]
    fn cut_complement_symmetry_and_submodularity() {
        let mut rng = StdRng::seed_from_u64(16);
        for _ in 0..40 {
            let g = random_graph(&mut rng, 6, 0.5);
            let w: Vec<Rat> = (0..g.edge_count())
                .map(|_| rat(rng.gen_range(0..6), rng.gen_range(1..4)))
                .collect();
            let s = NodeSet(rng.gen_range(0..64));
            let t = NodeSet(rng.gen_range(0..64));
            assert_eq!(
                g.weighted_cut(&w, s),
                g.weighted_cut(&w, s.complement(6))
            );
            let lhs = g.weighted_cut(&w, s) + g.weighted_cut(&w, t);
            let rhs = g.weighted_cut(&w, s.intersection(t)) + g.weighted_cut(&w, s.union(t));
            assert!(lhs >= rhs, "cut function must be submodular");
        }
    }

    #[test]
    fn in_cut_complement_totals() {
        let mut rng = StdRng::seed_from_u64(17);
        for _ in 0..30 {
            let n = 6;
            let arcs: Vec<(usize, usize)> = (0..10)
                .map(|_| loop {
                    let u = rng.gen_range(0..n);
                    let v = rng.gen_range(0..n);
                    if u != v {
                        return (u, v);
                    }
                })
                .collect();
            let w: Vec<Rat> = (0..arcs.len()).map(|_| rat(rng.gen_range(0..4), 1)).collect();
            let s = NodeSet(rng.gen_range(0..64));
            let crossing: Rat = arcs
                .iter()
                .zip(&w)
                .filter(|(&(u, v), _)| s.contains(u) != s.contains(v))
                .map(|(_, wi)| wi.clone())
                .sum();
            assert_eq!(
                in_cut(&arcs, &w, s) + in_cut(&arcs, &w, s.complement(n)),
                crossing
            );
        }
    }

    #[test]
    fn rejects_self_loops() {
        let mut g = UGraph::new(3);
        assert!(g.add_edge(1, 1).is_err());
    }
}
