//! Exhaustive ground truth.
//!
//! Two independent search paths back every approximation claim: an exact
//! optimum by scanning purchase subsets in nondecreasing cost order, and an
//! orientation search trying all `2^m` edge directions. Both are capped at
//! desk scale and exist to certify the clever code, so they stay as close
//! to the definitions as possible.

use crate::demand::Demand;
use crate::error::Error;
use crate::graph::{in_degree, NodeSet, UGraph};
use crate::orient::{is_f_orientable, orientability_witness, Orientation};
use crate::rat::Rat;
use crate::setfam::Pocp;
use crate::solver::Instance;
use num_traits::Zero;

/// Cap on purchasable edges for the subset scan.
pub const MAX_ORACLE_BUY: usize = 20;
/// Cap on nodes for the subset scan.
pub const MAX_ORACLE_NODES: usize = 8;
/// Cap on edges for the orientation search.
pub const MAX_SEARCH_EDGES: usize = 20;

/// Outcome of the exact optimum scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleOutcome {
    Feasible { cost: Rat, chosen: Vec<usize> },
    Infeasible,
}

/// Exact minimum purchase cost by enumerating subsets in nondecreasing cost
/// order; the first orientable one is optimal.
///
/// `lp_hint`, when given, must be a valid lower bound on every feasible
/// purchase cost; subsets cheaper than it are skipped unchecked. The
/// acceptance suites pass `None` so the oracle stays independent of the LP.
pub fn exact_opt(inst: &Instance, lp_hint: Option<&Rat>) -> Result<OracleOutcome, Error> {
    let m = inst.buy_edges().len();
    if m > MAX_ORACLE_BUY {
        return Err(Error::CapExceeded {
            what: "oracle purchasable edges",
            got: m,
            cap: MAX_ORACLE_BUY,
        });
    }
    if inst.n() > MAX_ORACLE_NODES {
        return Err(Error::CapExceeded {
            what: "oracle nodes",
            got: inst.n(),
            cap: MAX_ORACLE_NODES,
        });
    }

    let all: Vec<usize> = (0..m).collect();
    if !is_f_orientable(&inst.graph_with(&all), inst.demand(), inst.root())? {
        return Ok(OracleOutcome::Infeasible);
    }

    // Subset costs by prefix DP, then a cost-ordered scan.
    let mut cost = vec![Rat::zero(); 1usize << m];
    for mask in 1usize..(1 << m) {
        let low = mask.trailing_zeros() as usize;
        cost[mask] = &cost[mask & (mask - 1)] + &inst.costs()[low];
    }
    let mut order: Vec<usize> = (0..(1 << m)).collect();
    order.sort_by(|&a, &b| {
        cost[a]
            .cmp(&cost[b])
            .then(a.count_ones().cmp(&b.count_ones()))
            .then(a.cmp(&b))
    });

    // Recently violated rows reject most infeasible subsets cheaply.
    let mut witness_cache: Vec<Pocp> = Vec::new();
    let n = inst.n();
    'scan: for &mask in &order {
        if let Some(bound) = lp_hint {
            if cost[mask] < *bound {
                continue; // provably below any feasible cost
            }
        }
        let chosen: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
        let graph = inst.graph_with(&chosen);
        for w in &witness_cache {
            let have = w.crossing_count(n, graph.edges()) as i64;
            if have < inst.demand().sum_over_parts(w, n) {
                continue 'scan;
            }
        }
        match orientability_witness(&graph, inst.demand(), inst.root())? {
            None => {
                return Ok(OracleOutcome::Feasible { cost: cost[mask].clone(), chosen });
            }
            Some(w) => {
                if !witness_cache.contains(&w) {
                    witness_cache.insert(0, w);
                    witness_cache.truncate(24);
                }
            }
        }
    }
    // The full set was orientable, so the scan must have returned.
    Err(Error::Contract("cost-ordered scan missed the full subset".into()))
}

/// Tries every orientation of `g`; returns the first covering `f`, if any.
/// Independent of the partition characterization by construction.
pub fn exact_orientation_search(g: &UGraph, f: &Demand) -> Result<Option<Orientation>, Error> {
    let m = g.edge_count();
    if m > MAX_SEARCH_EDGES {
        return Err(Error::CapExceeded {
            what: "orientation search edges",
            got: m,
            cap: MAX_SEARCH_EDGES,
        });
    }
    let n = g.n();
    if n > MAX_ORACLE_NODES {
        return Err(Error::CapExceeded {
            what: "orientation search nodes",
            got: n,
            cap: MAX_ORACLE_NODES,
        });
    }
    // Demand-positive sets, precomputed once.
    let targets: Vec<(NodeSet, i64)> = NodeSet::proper_subsets(n)
        .filter_map(|s| {
            let v = f.eval(s, n);
            (v > 0).then_some((s, v))
        })
        .collect();
    let edges = g.edges();
    let mut arcs: Vec<(usize, usize)> = edges.to_vec();
    for mask in 0usize..(1 << m) {
        for (j, &(u, v)) in edges.iter().enumerate() {
            arcs[j] = if mask >> j & 1 == 1 { (v, u) } else { (u, v) };
        }
        if targets
            .iter()
            .all(|&(s, need)| in_degree(&arcs, s) as i64 >= need)
        {
            return Ok(Some(Orientation { arcs }));
        }
    }
    Ok(None)
}
