//! Partitions, co-partitions, and subpartitions of the node set.
//!
//! These families index the rows of the augmentation LP. A *partition*
//! covers every node exactly once; a *co-partition* covers every node all
//! but once (equivalently, the complements of its parts form a partition).
//! Each family carries a root node: the first stored part of a partition
//! contains the root, the first stored part of a co-partition is the unique
//! part avoiding it. Remaining parts are kept in ascending bitmask order so
//! values compare deterministically.
//!
//! The *residue* of a family is the subpartition driving all structural
//! comparisons: for a partition the non-root parts, for a co-partition the
//! complements of the non-first parts. Two families are *strongly
//! cross-free* when their parts are pairwise non-crossing and their residues
//! are disjoint or comparable under domination (strong domination when the
//! kinds differ). Pairs that are cross-free but fail the residue condition
//! are *weakly cross-free*; those are exactly the inputs the uncrossing
//! operator in [`crate::uncross`] consumes.

use crate::error::Error;
use crate::graph::{NodeId, NodeSet};
use std::fmt;

/// Desk-scale cap on the ground set for partition enumeration.
pub const MAX_ENUM_NODES: usize = 12;

/// A collection of pairwise disjoint nonempty node sets.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubPartition {
    parts: Vec<NodeSet>,
}

impl SubPartition {
    pub fn new(mut parts: Vec<NodeSet>) -> Result<Self, Error> {
        parts.sort();
        let mut seen = NodeSet::empty();
        for p in &parts {
            if p.is_empty() {
                return Err(Error::Invalid("empty part in subpartition".into()));
            }
            if !seen.is_disjoint_from(*p) {
                return Err(Error::Invalid("overlapping parts in subpartition".into()));
            }
            seen = seen.union(*p);
        }
        Ok(SubPartition { parts })
    }

    pub fn parts(&self) -> &[NodeSet] {
        &self.parts
    }

    /// Union of all parts.
    pub fn support(&self) -> NodeSet {
        self.parts
            .iter()
            .fold(NodeSet::empty(), |acc, p| acc.union(*p))
    }

    pub fn is_disjoint_from(&self, other: &SubPartition) -> bool {
        self.support().is_disjoint_from(other.support())
    }
}

impl fmt::Debug for SubPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.parts).finish()
    }
}

/// How one subpartition relates to another under domination.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domination {
    /// Some part of the candidate fits in no part of the dominator.
    None,
    /// Every part of the candidate lies inside some part of the dominator.
    Dominates,
    /// Every part of the candidate lies inside one common part.
    StronglyDominates,
}

/// Does `q` dominate `p`? Strong domination implies domination.
///
/// An empty `p` is vacuously strongly dominated.
pub fn domination(q: &SubPartition, p: &SubPartition) -> Domination {
    if p.parts.is_empty() {
        return Domination::StronglyDominates;
    }
    let supp = p.support();
    if q.parts.iter().any(|big| supp.is_subset_of(*big)) {
        return Domination::StronglyDominates;
    }
    let covered = p
        .parts
        .iter()
        .all(|small| q.parts.iter().any(|big| small.is_subset_of(*big)));
    if covered {
        Domination::Dominates
    } else {
        Domination::None
    }
}

/// A partition of the node set into at least two nonempty parts. The part
/// containing the root is stored first.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    parts: Vec<NodeSet>,
    root: NodeId,
}

impl Partition {
    pub fn new(parts: Vec<NodeSet>, root: NodeId, n: usize) -> Result<Self, Error> {
        if parts.len() < 2 {
            return Err(Error::Invalid("partition needs at least two parts".into()));
        }
        let mut seen = NodeSet::empty();
        for p in &parts {
            if p.is_empty() {
                return Err(Error::Invalid("empty part in partition".into()));
            }
            if !seen.is_disjoint_from(*p) {
                return Err(Error::Invalid("overlapping parts in partition".into()));
            }
            seen = seen.union(*p);
        }
        if seen != NodeSet::full(n) {
            return Err(Error::Invalid("partition does not cover the node set".into()));
        }
        let root_at = parts
            .iter()
            .position(|p| p.contains(root))
            .expect("cover includes the root");
        let mut ordered = parts;
        let root_part = ordered.remove(root_at);
        ordered.sort();
        ordered.insert(0, root_part);
        Ok(Partition { parts: ordered, root })
    }

    pub fn parts(&self) -> &[NodeSet] {
        &self.parts
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    /// Part containing the root.
    pub fn root_part(&self) -> NodeSet {
        self.parts[0]
    }

    /// Index of the part containing `v`.
    pub fn part_of(&self, v: NodeId) -> usize {
        self.parts
            .iter()
            .position(|p| p.contains(v))
            .expect("partition covers every node")
    }

    /// The non-root parts, as a subpartition.
    pub fn residue(&self) -> SubPartition {
        SubPartition::new(self.parts[1..].to_vec()).expect("parts are disjoint")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Partition{:?}", self.parts)
    }
}

/// A co-partition of the node set: every node lies in all but exactly one
/// part. The unique part avoiding the root is stored first.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Copartition {
    parts: Vec<NodeSet>,
    root: NodeId,
}

impl Copartition {
    pub fn new(parts: Vec<NodeSet>, root: NodeId, n: usize) -> Result<Self, Error> {
        if parts.len() < 2 {
            return Err(Error::Invalid("co-partition needs at least two parts".into()));
        }
        // Complements of the parts must partition the node set.
        let mut seen = NodeSet::empty();
        for p in &parts {
            let comp = p.complement(n);
            if comp.is_empty() {
                return Err(Error::Invalid("co-partition part equals the node set".into()));
            }
            if !seen.is_disjoint_from(comp) {
                return Err(Error::Invalid(
                    "co-partition part complements overlap".into(),
                ));
            }
            seen = seen.union(comp);
        }
        if seen != NodeSet::full(n) {
            return Err(Error::Invalid(
                "co-partition does not cover every node all but once".into(),
            ));
        }
        let first_at = parts
            .iter()
            .position(|p| !p.contains(root))
            .expect("exactly one part avoids the root");
        let mut ordered = parts;
        let first = ordered.remove(first_at);
        ordered.sort();
        ordered.insert(0, first);
        Ok(Copartition { parts: ordered, root })
    }

    /// Builds the co-partition whose parts are the complements of the given
    /// partition's parts.
    pub fn complement_of(p: &Partition, n: usize) -> Self {
        let parts = p.parts().iter().map(|s| s.complement(n)).collect();
        Copartition::new(parts, p.root(), n).expect("complements of a partition always fit")
    }

    pub fn parts(&self) -> &[NodeSet] {
        &self.parts
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    /// Index of the unique part *not* containing `v`.
    pub fn missing_part_of(&self, v: NodeId) -> usize {
        self.parts
            .iter()
            .position(|p| !p.contains(v))
            .expect("every node misses exactly one part")
    }

    /// Complements of the non-first parts, as a subpartition. Its support is
    /// exactly the first stored part.
    pub fn residue(&self, n: usize) -> SubPartition {
        let parts = self.parts[1..].iter().map(|s| s.complement(n)).collect();
        SubPartition::new(parts).expect("complements of co-partition parts are disjoint")
    }

    /// The partition formed by complementing every part.
    pub fn complement_partition(&self, n: usize) -> Partition {
        let parts = self.parts.iter().map(|s| s.complement(n)).collect();
        Partition::new(parts, self.root, n).expect("complements form a partition")
    }
}

impl fmt::Debug for Copartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Copartition{:?}", self.parts)
    }
}

/// A partition or a co-partition — the row index type of the LP.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pocp {
    Part(Partition),
    Copart(Copartition),
}

impl Pocp {
    pub fn parts(&self) -> &[NodeSet] {
        match self {
            Pocp::Part(p) => p.parts(),
            Pocp::Copart(c) => c.parts(),
        }
    }

    pub fn root(&self) -> NodeId {
        match self {
            Pocp::Part(p) => p.root(),
            Pocp::Copart(c) => c.root(),
        }
    }

    pub fn is_partition(&self) -> bool {
        matches!(self, Pocp::Part(_))
    }

    /// Residue subpartition (see module docs).
    pub fn residue(&self, n: usize) -> SubPartition {
        match self {
            Pocp::Part(p) => p.residue(),
            Pocp::Copart(c) => c.residue(n),
        }
    }

    /// Node label such that an edge crosses the family iff its endpoint
    /// labels differ: the containing part for a partition, the missing part
    /// for a co-partition.
    fn labels(&self, n: usize) -> Vec<usize> {
        match self {
            Pocp::Part(p) => (0..n).map(|v| p.part_of(v)).collect(),
            Pocp::Copart(c) => (0..n).map(|v| c.missing_part_of(v)).collect(),
        }
    }

    /// Indices of the edges that run between the exclusive regions of two
    /// distinct parts.
    pub fn crossing_edges(&self, n: usize, edges: &[(NodeId, NodeId)]) -> Vec<usize> {
        let labels = self.labels(n);
        edges
            .iter()
            .enumerate()
            .filter(|(_, &(u, v))| labels[u] != labels[v])
            .map(|(i, _)| i)
            .collect()
    }

    /// Number of crossing edges, parallel edges counted with multiplicity.
    pub fn crossing_count(&self, n: usize, edges: &[(NodeId, NodeId)]) -> usize {
        let labels = self.labels(n);
        edges.iter().filter(|&&(u, v)| labels[u] != labels[v]).count()
    }
}

impl fmt::Debug for Pocp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pocp::Part(p) => p.fmt(f),
            Pocp::Copart(c) => c.fmt(f),
        }
    }
}

/// Are all part pairs of the two families non-crossing?
pub fn cross_free(a: &Pocp, b: &Pocp, n: usize) -> bool {
    a.parts()
        .iter()
        .all(|s| b.parts().iter().all(|t| !s.crosses(*t, n)))
}

/// Strong cross-freeness: cross-free parts, plus residues that are disjoint
/// or comparable (strong domination required across kinds).
pub fn strongly_cross_free(a: &Pocp, b: &Pocp, n: usize) -> bool {
    if !cross_free(a, b, n) {
        return false;
    }
    let ra = a.residue(n);
    let rb = b.residue(n);
    if ra.is_disjoint_from(&rb) {
        return true;
    }
    let ab = domination(&rb, &ra);
    let ba = domination(&ra, &rb);
    if a.is_partition() == b.is_partition() {
        ab != Domination::None || ba != Domination::None
    } else {
        ab == Domination::StronglyDominates || ba == Domination::StronglyDominates
    }
}

/// Cross-free but not strongly cross-free.
pub fn weakly_cross_free(a: &Pocp, b: &Pocp, n: usize) -> bool {
    cross_free(a, b, n) && !strongly_cross_free(a, b, n)
}

/// Equivalent test for a partition/co-partition pair: some co-partition part
/// contained in some partition part.
pub fn copart_inside_part(p: &Partition, c: &Copartition) -> bool {
    c.parts()
        .iter()
        .any(|q| p.parts().iter().any(|s| q.is_subset_of(*s)))
}

/// Lazily enumerates every partition of `[0, n)` with between 2 and
/// `max_parts` parts, each exactly once, in restricted-growth-string order.
pub fn partitions(
    n: usize,
    max_parts: usize,
    root: NodeId,
) -> Result<impl Iterator<Item = Partition>, Error> {
    if n > MAX_ENUM_NODES {
        return Err(Error::CapExceeded {
            what: "partition enumeration nodes",
            got: n,
            cap: MAX_ENUM_NODES,
        });
    }
    if n < 2 || root >= n {
        return Err(Error::Invalid(format!(
            "partition enumeration needs 2 <= n (got {n}) and root < n (got {root})"
        )));
    }
    Ok(RgsIter::new(n, max_parts.min(n)).map(move |rgs| {
        let blocks = rgs.iter().copied().max().unwrap() + 1;
        let mut parts = vec![NodeSet::empty(); blocks];
        for (v, &b) in rgs.iter().enumerate() {
            parts[b].insert(v);
        }
        Partition::new(parts, root, n).expect("growth string blocks partition the node set")
    }))
}

/// Enumerates co-partitions as complements of enumerated partitions.
pub fn copartitions(
    n: usize,
    max_parts: usize,
    root: NodeId,
) -> Result<impl Iterator<Item = Copartition>, Error> {
    Ok(partitions(n, max_parts, root)?.map(move |p| Copartition::complement_of(&p, n)))
}

/// Restricted growth strings over `n` symbols with at least 2 and at most
/// `max_blocks` blocks, in lexicographic order.
struct RgsIter {
    n: usize,
    max_blocks: usize,
    state: Option<Vec<usize>>,
}

impl RgsIter {
    fn new(n: usize, max_blocks: usize) -> Self {
        // Skip the all-zeros string (single block).
        let mut first = vec![0; n];
        first[n - 1] = 1;
        let state = if max_blocks >= 2 { Some(first) } else { None };
        RgsIter { n, max_blocks, state }
    }
}

impl Iterator for RgsIter {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.state.clone()?;
        // Successor: rightmost position that can grow; reset the suffix.
        let mut next = current.clone();
        let mut advanced = false;
        for i in (1..self.n).rev() {
            let prefix_max = *next[..i].iter().max().unwrap();
            if next[i] <= prefix_max && next[i] + 1 < self.max_blocks {
                next[i] += 1;
                for v in next[i + 1..].iter_mut() {
                    *v = 0;
                }
                advanced = true;
                break;
            }
        }
        self.state = if advanced { Some(next) } else { None };
        // A successor might collapse back to a single block only via the
        // initial skip; every generated string here has max >= 1.
        Some(current)
    }
}
