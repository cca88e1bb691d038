//! Uncrossing algebra for tight partition and co-partition families.
//!
//! This module turns the raw tight constraints at an LP vertex into a
//! *strongly cross-free* family with linearly independent cut vectors whose
//! span equals the span of every tight row — the structured certificate the
//! rounding analysis rests on. The tools:
//!
//! * [`SetFamily`]: a multiset of node sets with regularity and
//!   cross-freeness queries, plus Ψ-style slack sums ([`family_slack`]).
//! * [`uncross_family`]: replace crossing set pairs by meet and join until
//!   cross-free (terminates because the sum of squared sizes grows).
//! * [`decompose_regular_crossfree`]: split a cross-free regular multiset
//!   into partitions and co-partitions, exactly (multiset identity checked).
//! * [`uncross_pair`]: the two-case uncrossing of a weakly cross-free pair
//!   into members that are strongly cross-free with both inputs and sum to
//!   the same cut vector.
//! * [`extract_strongly_crossfree_basis`]: the greedy-plus-descent
//!   construction of the certificate family at a basic solution.
//! * [`domination_forest`]: the rooted forest induced by residue
//!   domination on a strongly cross-free family.

use crate::demand::Demand;
use crate::error::Error;
use crate::exactlp::matrix_rank;
use crate::graph::{NodeId, NodeSet, UGraph};
use crate::rat::{rat, Rat};
use crate::separation::Lp2System;
use crate::setfam::{
    domination, strongly_cross_free, weakly_cross_free, Copartition, Domination, Partition, Pocp,
};
use num_traits::{One, Zero};

/// A multiset of nonempty proper subsets of `[0, n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetFamily {
    n: usize,
    sets: Vec<NodeSet>,
}

impl SetFamily {
    pub fn new(n: usize, mut sets: Vec<NodeSet>) -> Result<Self, Error> {
        let full = NodeSet::full(n);
        for s in &sets {
            if s.is_empty() || *s == full {
                return Err(Error::Invalid(
                    "set family members must be nonempty proper subsets".into(),
                ));
            }
            if !s.is_subset_of(full) {
                return Err(Error::Invalid("set outside the ground set".into()));
            }
        }
        sets.sort();
        Ok(SetFamily { n, sets })
    }

    /// Multiset union of the parts of two families.
    pub fn from_pocp_pair(p: &Pocp, q: &Pocp, n: usize) -> Self {
        let mut sets = p.parts().to_vec();
        sets.extend_from_slice(q.parts());
        SetFamily::new(n, sets).expect("parts are nonempty proper subsets")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sets(&self) -> &[NodeSet] {
        &self.sets
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// `Some(t)` iff every node lies in exactly `t` members (the empty
    /// family is 0-regular).
    pub fn regularity(&self) -> Option<usize> {
        let counts: Vec<usize> = (0..self.n)
            .map(|v| self.sets.iter().filter(|s| s.contains(v)).count())
            .collect();
        let t = counts.first().copied().unwrap_or(0);
        counts.iter().all(|&c| c == t).then_some(t)
    }

    pub fn is_cross_free(&self) -> bool {
        for (i, a) in self.sets.iter().enumerate() {
            for b in &self.sets[i + 1..] {
                if a.crosses(*b, self.n) {
                    return false;
                }
            }
        }
        true
    }

    /// Per-edge count of members whose cut contains the edge:
    /// `sum over S of indicator(edge crosses S)`.
    pub fn cut_vector_sum(&self, edges: &[(NodeId, NodeId)]) -> Vec<usize> {
        edges
            .iter()
            .map(|&(u, v)| {
                self.sets
                    .iter()
                    .filter(|s| s.contains(u) != s.contains(v))
                    .count()
            })
            .collect()
    }
}

/// Ψ-style slack sum over a family: for each member `S`, half its purchased
/// cut weight, minus its demand, plus half its free degree.
///
/// For a single partition or co-partition this equals the LP row slack; it
/// is nonnegative on every cross-free regular family at a feasible point,
/// and zero exactly when every family of any decomposition is tight.
pub fn family_slack(
    x: &[Rat],
    var_edges: &[(NodeId, NodeId)],
    free: &UGraph,
    fam: &SetFamily,
    f: &Demand,
) -> Rat {
    let n = fam.n();
    let half = rat(1, 2);
    let mut total = Rat::zero();
    for s in fam.sets() {
        let mut xcut = Rat::zero();
        for (j, &(u, v)) in var_edges.iter().enumerate() {
            if s.contains(u) != s.contains(v) {
                xcut += &x[j];
            }
        }
        let dfree = free.cut_size(*s) as i64;
        total += &half * xcut - rat(f.eval(*s, n), 1) + &half * rat(dfree, 1);
    }
    total
}

/// Repeatedly replaces a crossing pair by its meet and join until the
/// family is cross-free. Deterministic: scans sorted order, always
/// uncrosses the first crossing pair.
pub fn uncross_family(fam: &SetFamily) -> SetFamily {
    let n = fam.n;
    let mut sets = fam.sets.clone();
    'outer: loop {
        for i in 0..sets.len() {
            for j in (i + 1)..sets.len() {
                if sets[i].crosses(sets[j], n) {
                    let (a, b) = (sets[i], sets[j]);
                    sets.remove(j);
                    sets.remove(i);
                    sets.push(a.intersection(b));
                    sets.push(a.union(b));
                    sets.sort();
                    continue 'outer;
                }
            }
        }
        return SetFamily { n, sets };
    }
}

/// An entry of the root-normalized view of a family: sets containing the
/// root are stored complemented. The view is laminar when the family is
/// cross-free.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
struct RootedEntry {
    set: NodeSet,
    complemented: bool,
}

/// Decomposes a cross-free regular multiset into partitions and
/// co-partitions whose parts reproduce the family exactly.
///
/// Root-normalize, then peel: a maximal set with a complemented copy is the
/// top of a partition (its plain maximal subsets are the other parts); a
/// maximal plain-only set is the first part of a co-partition (its
/// complemented maximal subsets are the complements of the other parts).
/// Each peel removes a valid family, keeping the rest regular and
/// cross-free. The multiset identity is re-checked at the end.
pub fn decompose_regular_crossfree(fam: &SetFamily, root: NodeId) -> Result<Vec<Pocp>, Error> {
    let n = fam.n;
    if root >= n {
        return Err(Error::Invalid("root outside the ground set".into()));
    }
    if !fam.is_cross_free() {
        return Err(Error::Contract("decomposition input is not cross-free".into()));
    }
    if fam.regularity().is_none() {
        return Err(Error::Contract("decomposition input is not regular".into()));
    }

    let mut entries: Vec<RootedEntry> = fam
        .sets
        .iter()
        .map(|&s| {
            if s.contains(root) {
                RootedEntry { set: s.complement(n), complemented: true }
            } else {
                RootedEntry { set: s, complemented: false }
            }
        })
        .collect();
    entries.sort();

    let remove_one = |entries: &mut Vec<RootedEntry>, e: RootedEntry| -> Result<(), Error> {
        match entries.iter().position(|&x| x == e) {
            Some(i) => {
                entries.remove(i);
                Ok(())
            }
            None => Err(Error::Contract(
                "decomposition expected an entry that is not present".into(),
            )),
        }
    };

    let mut out: Vec<Pocp> = Vec::new();
    while !entries.is_empty() {
        let distinct_maximal = |entries: &[RootedEntry], within: Option<NodeSet>, flag: bool| {
            let pool: Vec<NodeSet> = entries
                .iter()
                .filter(|e| e.complemented == flag)
                .map(|e| e.set)
                .filter(|s| within.map_or(true, |w| s.is_subset_of(w)))
                .collect();
            let mut maximal: Vec<NodeSet> = Vec::new();
            for s in &pool {
                if !pool.iter().any(|t| t != s && s.is_subset_of(*t)) && !maximal.contains(s) {
                    maximal.push(*s);
                }
            }
            maximal.sort();
            maximal
        };
        // Maximal sets over both flags.
        let all_sets: Vec<NodeSet> = entries.iter().map(|e| e.set).collect();
        let mut tops: Vec<NodeSet> = Vec::new();
        for s in &all_sets {
            if !all_sets.iter().any(|t| t != s && s.is_subset_of(*t)) && !tops.contains(s) {
                tops.push(*s);
            }
        }
        tops.sort();

        let marked_top = tops
            .iter()
            .copied()
            .find(|m| entries.iter().any(|e| e.set == *m && e.complemented));
        if let Some(m) = marked_top {
            // Partition: complemented top, plain children partition it.
            let children = distinct_maximal(&entries, Some(m), false);
            remove_one(&mut entries, RootedEntry { set: m, complemented: true })?;
            for c in &children {
                remove_one(&mut entries, RootedEntry { set: *c, complemented: false })?;
            }
            let mut parts = vec![m.complement(n)];
            parts.extend(children);
            let p = Partition::new(parts, root, n)
                .map_err(|e| Error::Contract(format!("peel produced an invalid partition: {e}")))?;
            out.push(Pocp::Part(p));
        } else {
            // Co-partition: plain top, complemented children partition it.
            let m = tops[0];
            let children = distinct_maximal(&entries, Some(m), true);
            remove_one(&mut entries, RootedEntry { set: m, complemented: false })?;
            for c in &children {
                remove_one(&mut entries, RootedEntry { set: *c, complemented: true })?;
            }
            let mut parts = vec![m];
            parts.extend(children.iter().map(|c| c.complement(n)));
            let c = Copartition::new(parts, root, n).map_err(|e| {
                Error::Contract(format!("peel produced an invalid co-partition: {e}"))
            })?;
            out.push(Pocp::Copart(c));
        }
    }

    // Postcondition: the parts, as a multiset, are exactly the input.
    let mut reassembled: Vec<NodeSet> = out
        .iter()
        .flat_map(|p| p.parts().iter().copied())
        .collect();
    reassembled.sort();
    if reassembled != fam.sets {
        return Err(Error::Contract(
            "decomposition violated the multiset identity".into(),
        ));
    }
    Ok(out)
}

/// Result of uncrossing a weakly cross-free pair: the replacement families,
/// with the root-containing member flagged in the mixed-kind case.
#[derive(Clone, Debug)]
pub struct UpsilonFamily {
    pub members: Vec<Pocp>,
    pub special: Option<usize>,
}

/// Uncrosses a weakly cross-free pair into families that are strongly
/// cross-free with both inputs and whose cut vectors sum to the inputs'.
///
/// Same kind: the residues' multiset union is laminar; its distinct maximal
/// sets form the coarse half, the rest the fine half, and each half plus
/// the matching first part reassembles into the meet and join. Mixed kind:
/// one member per maximal set of the partition's parts united with the
/// co-partition's part complements.
pub fn uncross_pair(p: &Pocp, q: &Pocp, n: usize) -> Result<UpsilonFamily, Error> {
    if p.root() != q.root() {
        return Err(Error::Invalid("uncrossing needs a shared root".into()));
    }
    if !weakly_cross_free(p, q, n) {
        return Err(Error::Contract(
            "uncross operator requires a weakly cross-free pair".into(),
        ));
    }
    let root = p.root();
    match (p, q) {
        (Pocp::Part(_), Pocp::Part(_)) | (Pocp::Copart(_), Pocp::Copart(_)) => {
            let (lo, hi) = if p
                .residue(n)
                .support()
                .is_subset_of(q.residue(n).support())
            {
                (p, q)
            } else {
                (q, p)
            };
            let rlo = lo.residue(n);
            let rhi = hi.residue(n);
            let mut multiset: Vec<NodeSet> = rlo.parts().to_vec();
            multiset.extend_from_slice(rhi.parts());
            multiset.sort();
            // Coarse half: distinct maximal sets, one copy each.
            let mut coarse: Vec<NodeSet> = Vec::new();
            for s in &multiset {
                if !multiset.iter().any(|t| t != s && s.is_subset_of(*t)) && !coarse.contains(s) {
                    coarse.push(*s);
                }
            }
            coarse.sort();
            let mut fine = multiset.clone();
            for c in &coarse {
                let i = fine.iter().position(|s| s == c).expect("coarse came from the multiset");
                fine.remove(i);
            }
            let build = |first: NodeSet, residue_parts: Vec<NodeSet>| -> Result<Pocp, Error> {
                let mk = |e: Error| Error::Contract(format!("uncrossing assembled an invalid family: {e}"));
                if lo.is_partition() {
                    let mut parts = vec![first];
                    parts.extend(residue_parts);
                    Ok(Pocp::Part(Partition::new(parts, root, n).map_err(mk)?))
                } else {
                    let mut parts = vec![first];
                    parts.extend(residue_parts.iter().map(|s| s.complement(n)));
                    Ok(Pocp::Copart(Copartition::new(parts, root, n).map_err(mk)?))
                }
            };
            let meet = build(lo.parts()[0], fine)?;
            let join = build(hi.parts()[0], coarse)?;
            Ok(UpsilonFamily { members: vec![meet, join], special: None })
        }
        (Pocp::Part(pp), Pocp::Copart(cc)) | (Pocp::Copart(cc), Pocp::Part(pp)) => {
            mixed_uncross(pp, cc, n, root)
        }
    }
}

fn mixed_uncross(
    pp: &Partition,
    cc: &Copartition,
    n: usize,
    root: NodeId,
) -> Result<UpsilonFamily, Error> {
    let comp_parts: Vec<NodeSet> = cc.parts().iter().map(|s| s.complement(n)).collect();
    let mut pool: Vec<NodeSet> = pp.parts().to_vec();
    for s in &comp_parts {
        if !pool.contains(s) {
            pool.push(*s);
        }
    }
    let mut maximal: Vec<NodeSet> = Vec::new();
    for s in &pool {
        if !pool.iter().any(|t| t != s && s.is_subset_of(*t)) && !maximal.contains(s) {
            maximal.push(*s);
        }
    }
    maximal.sort();
    let mk = |e: Error| Error::Contract(format!("uncrossing assembled an invalid family: {e}"));
    let mut members = Vec::new();
    let mut special = None;
    for m in maximal {
        let in_partition = pp.parts().contains(&m);
        let in_comp = comp_parts.contains(&m);
        let member = if in_partition && in_comp {
            Pocp::Part(Partition::new(vec![m, m.complement(n)], root, n).map_err(mk)?)
        } else if in_comp {
            // m is a complemented co-partition part: partition made of the
            // matching part plus the partition parts inside m.
            let mut parts = vec![m.complement(n)];
            parts.extend(pp.parts().iter().copied().filter(|pi| pi.is_subset_of(m)));
            Pocp::Part(Partition::new(parts, root, n).map_err(mk)?)
        } else {
            // m is a partition part: co-partition made of m plus the
            // co-partition parts whose complements sit inside m.
            let mut parts = vec![m];
            parts.extend(
                cc.parts()
                    .iter()
                    .copied()
                    .filter(|qj| qj.complement(n).is_subset_of(m)),
            );
            Pocp::Copart(Copartition::new(parts, root, n).map_err(mk)?)
        };
        if m.contains(root) {
            special = Some(members.len());
        }
        members.push(member);
    }
    if special.is_none() {
        return Err(Error::Contract(
            "mixed uncrossing found no root-containing maximal set".into(),
        ));
    }
    Ok(UpsilonFamily { members, special })
}

/// 0/1 cut vector of a family over the given edge list.
pub fn chi_vector(p: &Pocp, n: usize, edges: &[(NodeId, NodeId)]) -> Vec<Rat> {
    let idx = p.crossing_edges(n, edges);
    let mut v = vec![Rat::zero(); edges.len()];
    for j in idx {
        v[j] = Rat::one();
    }
    v
}

/// Number of crossing part pairs between `q` and the members of a family
/// (counted with multiplicity across members and parts).
pub fn crossing_pairs_with_family(q: &Pocp, members: &[Pocp], n: usize) -> usize {
    let mut count = 0;
    for p in members {
        for a in q.parts() {
            for b in p.parts() {
                if a.crosses(*b, n) {
                    count += 1;
                }
            }
        }
    }
    count
}

fn weak_count(q: &Pocp, members: &[Pocp], n: usize) -> usize {
    members
        .iter()
        .filter(|p| weakly_cross_free(p, q, n))
        .count()
}

/// Exact row-echelon span of rational vectors.
struct RatSpan {
    dim: usize,
    rows: Vec<Vec<Rat>>,
    pivots: Vec<usize>,
}

impl RatSpan {
    fn new(dim: usize) -> Self {
        RatSpan { dim, rows: Vec::new(), pivots: Vec::new() }
    }

    fn reduce(&self, v: &[Rat]) -> Vec<Rat> {
        let mut v = v.to_vec();
        for (row, &piv) in self.rows.iter().zip(&self.pivots) {
            if !v[piv].is_zero() {
                let f = v[piv].clone();
                for (t, r) in v.iter_mut().zip(row) {
                    if !r.is_zero() {
                        let delta = &f * r;
                        *t -= delta;
                    }
                }
            }
        }
        v
    }

    fn contains(&self, v: &[Rat]) -> bool {
        self.reduce(v).iter().all(|c| c.is_zero())
    }

    /// Inserts if independent; returns false when already in the span.
    fn insert(&mut self, v: &[Rat]) -> bool {
        let mut r = self.reduce(v);
        let Some(piv) = (0..self.dim).find(|&j| !r[j].is_zero()) else {
            return false;
        };
        let scale = r[piv].clone();
        for c in r.iter_mut() {
            if !c.is_zero() {
                *c /= &scale;
            }
        }
        // Keep fully reduced: clear the new pivot column in existing rows.
        for row in self.rows.iter_mut() {
            if !row[piv].is_zero() {
                let f = row[piv].clone();
                for (t, s) in row.iter_mut().zip(&r) {
                    if !s.is_zero() {
                        let delta = &f * s;
                        *t -= delta;
                    }
                }
            }
        }
        self.rows.push(r);
        self.pivots.push(piv);
        true
    }

    fn len(&self) -> usize {
        self.rows.len()
    }
}

/// The certificate family extracted at a basic solution: strongly
/// cross-free tight partitions/co-partitions with independent cut vectors
/// spanning every tight row. Vectors are cached over the support edges.
#[derive(Clone, Debug)]
pub struct PocpFamily {
    pub n: usize,
    /// Support edges of the solution the family was extracted at.
    pub var_edges: Vec<(NodeId, NodeId)>,
    pub members: Vec<Pocp>,
    pub vectors: Vec<Vec<Rat>>,
    /// Dimension of the span of all tight rows at the solution.
    pub tight_dimension: usize,
}

/// Extracts a strongly cross-free independent family of tight rows spanning
/// the whole tight space at `x`, a vertex of the system.
///
/// The solution is first restricted to its support (dropping zero edges,
/// under which the vertex property survives). Tight rows are found by
/// exhaustive enumeration; the family grows greedily, and any tight row
/// outside the current span is driven to a strongly cross-free position by
/// a descent that alternates crossing-pair uncrossing (strictly shrinking
/// the crossing count) and weak-pair uncrossing (strictly shrinking the
/// weakly-cross-free count at crossing count zero). Every step re-checks
/// tightness, the cut-vector identity, and the descent measures exactly.
pub fn extract_strongly_crossfree_basis(
    x: &[Rat],
    sys: &Lp2System,
) -> Result<PocpFamily, Error> {
    let n = sys.n();
    let root = sys.root();
    if x.len() != sys.var_edges().len() {
        return Err(Error::Invalid("solution length mismatch".into()));
    }
    // Restrict to the support.
    let mut sub_edges: Vec<(NodeId, NodeId)> = Vec::new();
    let mut sub_x: Vec<Rat> = Vec::new();
    for (j, &e) in sys.var_edges().iter().enumerate() {
        if x[j].is_zero() {
            continue;
        }
        if x[j] < Rat::zero() || x[j] > Rat::one() {
            return Err(Error::Invalid("solution outside the unit box".into()));
        }
        sub_edges.push(e);
        sub_x.push(x[j].clone());
    }
    let m = sub_edges.len();
    let sub_sys = Lp2System::new(
        n,
        root,
        sys.free_graph().clone(),
        sub_edges.clone(),
        sys.demand().clone(),
    )?;
    let tight = sub_sys.tight_families(&sub_x)?;

    // Vertex check: tight rows plus saturated upper bounds must have full
    // rank over the support coordinates.
    {
        let mut rows: Vec<Vec<Rat>> = tight
            .iter()
            .map(|p| chi_vector(p, n, &sub_edges))
            .collect();
        for (j, v) in sub_x.iter().enumerate() {
            if v.is_one() {
                let mut unit = vec![Rat::zero(); m];
                unit[j] = Rat::one();
                rows.push(unit);
            }
        }
        if matrix_rank(rows) != m {
            return Err(Error::Contract(
                "extraction input is not basic: active constraints are rank-deficient".into(),
            ));
        }
    }
    let tight_dimension =
        matrix_rank(tight.iter().map(|p| chi_vector(p, n, &sub_edges)).collect());

    let slack_is_zero = |p: &Pocp| sub_sys.slack(p, &sub_x).is_zero();
    let chi_of = |p: &Pocp| chi_vector(p, n, &sub_edges);

    let mut members: Vec<Pocp> = Vec::new();
    let mut span = RatSpan::new(m);

    loop {
        // Cheapest tight row outside the span, by (crossing count, weak
        // count, canonical order).
        let mut start: Option<(usize, usize, Pocp)> = None;
        for cand in &tight {
            if span.contains(&chi_of(cand)) {
                continue;
            }
            let nu = crossing_pairs_with_family(cand, &members, n);
            let mu = weak_count(cand, &members, n);
            let better = match &start {
                None => true,
                Some((bnu, bmu, bp)) => (nu, mu, cand) < (*bnu, *bmu, bp),
            };
            if better {
                start = Some((nu, mu, cand.clone()));
            }
        }
        let Some((_, _, mut q)) = start else { break };

        loop {
            let nu = crossing_pairs_with_family(&q, &members, n);
            if nu > 0 {
                // Some admitted member crosses q: merge their parts and
                // uncross set-by-set, then re-split into tight families.
                let partner = members
                    .iter()
                    .find(|p| crossing_pairs_with_family(&q, std::slice::from_ref(*p), n) > 0)
                    .expect("positive crossing count")
                    .clone();
                let merged = SetFamily::from_pocp_pair(&partner, &q, n);
                if !family_slack(&sub_x, &sub_edges, sub_sys.free_graph(), &merged, sub_sys.demand())
                    .is_zero()
                {
                    return Err(Error::Contract(
                        "tight pair has nonzero combined slack".into(),
                    ));
                }
                let crossed = uncross_family(&merged);
                if !family_slack(&sub_x, &sub_edges, sub_sys.free_graph(), &crossed, sub_sys.demand())
                    .is_zero()
                {
                    return Err(Error::Contract(
                        "uncrossing did not preserve zero slack".into(),
                    ));
                }
                if crossed.cut_vector_sum(&sub_edges) != merged.cut_vector_sum(&sub_edges) {
                    return Err(Error::Contract(
                        "uncrossing changed the support cut-vector sum".into(),
                    ));
                }
                let pieces = decompose_regular_crossfree(&crossed, root)?;
                let mut target = chi_of(&partner);
                for (t, qv) in target.iter_mut().zip(chi_of(&q)) {
                    *t += qv;
                }
                let mut produced = vec![Rat::zero(); m];
                for r in &pieces {
                    if !slack_is_zero(r) {
                        return Err(Error::Contract(
                            "decomposition emitted a non-tight family".into(),
                        ));
                    }
                    for (t, rv) in produced.iter_mut().zip(chi_of(r)) {
                        *t += rv;
                    }
                }
                if produced != target {
                    return Err(Error::Contract(
                        "uncrossing broke the cut-vector identity".into(),
                    ));
                }
                let next = pieces
                    .into_iter()
                    .filter(|r| !span.contains(&chi_of(r)))
                    .map(|r| {
                        let rnu = crossing_pairs_with_family(&r, &members, n);
                        let rmu = weak_count(&r, &members, n);
                        (rnu, rmu, r)
                    })
                    .min_by(|a, b| (a.0, a.1, &a.2).cmp(&(b.0, b.1, &b.2)));
                let Some((new_nu, _, next_q)) = next else {
                    return Err(Error::Contract(
                        "all uncrossed pieces fell inside the span".into(),
                    ));
                };
                if new_nu >= nu {
                    return Err(Error::Contract(
                        "crossing count failed to decrease during descent".into(),
                    ));
                }
                q = next_q;
            } else {
                let weak: Vec<Pocp> = members
                    .iter()
                    .filter(|p| weakly_cross_free(p, &q, n))
                    .cloned()
                    .collect();
                if weak.is_empty() {
                    let v = chi_of(&q);
                    if !span.insert(&v) {
                        return Err(Error::Contract(
                            "descent converged to a dependent row".into(),
                        ));
                    }
                    members.push(q);
                    break;
                }
                let mu = weak.len();
                let partner = weak[0].clone();
                let ups = uncross_pair(&partner, &q, n)?;
                let mut target = chi_of(&partner);
                for (t, qv) in target.iter_mut().zip(chi_of(&q)) {
                    *t += qv;
                }
                let mut produced = vec![Rat::zero(); m];
                for r in &ups.members {
                    if !slack_is_zero(r) {
                        return Err(Error::Contract(
                            "pair uncrossing emitted a non-tight family".into(),
                        ));
                    }
                    if !strongly_cross_free(r, &partner, n) || !strongly_cross_free(r, &q, n) {
                        return Err(Error::Contract(
                            "pair uncrossing emitted a member not strongly cross-free with its inputs".into(),
                        ));
                    }
                    for (t, rv) in produced.iter_mut().zip(chi_of(r)) {
                        *t += rv;
                    }
                }
                if produced != target {
                    return Err(Error::Contract(
                        "pair uncrossing broke the cut-vector identity".into(),
                    ));
                }
                let next = ups
                    .members
                    .into_iter()
                    .filter(|r| !span.contains(&chi_of(r)))
                    .map(|r| {
                        let rnu = crossing_pairs_with_family(&r, &members, n);
                        let rmu = weak_count(&r, &members, n);
                        (rnu, rmu, r)
                    })
                    .min_by(|a, b| (a.0, a.1, &a.2).cmp(&(b.0, b.1, &b.2)));
                let Some((new_nu, new_mu, next_q)) = next else {
                    return Err(Error::Contract(
                        "all pair-uncrossed members fell inside the span".into(),
                    ));
                };
                if new_nu != 0 || new_mu >= mu {
                    return Err(Error::Contract(
                        "weak count failed to decrease during descent".into(),
                    ));
                }
                q = next_q;
            }
        }
    }

    // Final structure checks.
    for i in 0..members.len() {
        for j in (i + 1)..members.len() {
            if !strongly_cross_free(&members[i], &members[j], n) {
                return Err(Error::Contract(
                    "extracted family is not pairwise strongly cross-free".into(),
                ));
            }
        }
    }
    if span.len() != tight_dimension || members.len() != tight_dimension {
        return Err(Error::Contract(
            "extracted family does not span the tight space".into(),
        ));
    }
    let vectors = members.iter().map(|p| chi_of(p)).collect();
    Ok(PocpFamily {
        n,
        var_edges: sub_edges,
        members,
        vectors,
        tight_dimension,
    })
}

/// Rooted forest over a strongly cross-free family: an ancestor is exactly
/// a member whose residue dominates yours.
#[derive(Clone, Debug)]
pub struct DominationForest {
    pub parent: Vec<Option<usize>>,
}

impl DominationForest {
    /// Strict ancestor test by parent walking.
    pub fn is_ancestor(&self, anc: usize, mut node: usize) -> bool {
        while let Some(p) = self.parent[node] {
            if p == anc {
                return true;
            }
            node = p;
        }
        false
    }

    pub fn roots(&self) -> Vec<usize> {
        (0..self.parent.len())
            .filter(|&i| self.parent[i].is_none())
            .collect()
    }
}

/// Builds the domination forest of a strongly cross-free family: parent is
/// the minimal strict dominator, which is unique because two dominators of
/// the same member are comparable.
pub fn domination_forest(members: &[Pocp], n: usize) -> Result<DominationForest, Error> {
    for i in 0..members.len() {
        for j in (i + 1)..members.len() {
            if !strongly_cross_free(&members[i], &members[j], n) {
                return Err(Error::Invalid(
                    "domination forest needs a strongly cross-free family".into(),
                ));
            }
        }
    }
    let residues: Vec<_> = members.iter().map(|p| p.residue(n)).collect();
    let below = |i: usize, j: usize| domination(&residues[j], &residues[i]) != Domination::None;
    for i in 0..members.len() {
        for j in 0..members.len() {
            if i != j && below(i, j) && below(j, i) {
                return Err(Error::Invalid(
                    "domination order is not antisymmetric on this family".into(),
                ));
            }
        }
    }
    let mut parent = vec![None; members.len()];
    for i in 0..members.len() {
        let dominators: Vec<usize> = (0..members.len())
            .filter(|&j| j != i && below(i, j))
            .collect();
        if dominators.is_empty() {
            continue;
        }
        let minimal: Vec<usize> = dominators
            .iter()
            .copied()
            .filter(|&j| !dominators.iter().any(|&k| k != j && below(k, j)))
            .collect();
        if minimal.len() != 1 {
            return Err(Error::Contract(
                "minimal strict dominator is not unique".into(),
            ));
        }
        parent[i] = Some(minimal[0]);
    }
    Ok(DominationForest { parent })
}
