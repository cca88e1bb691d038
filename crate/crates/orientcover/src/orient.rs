//! Orientability testing and orientation extraction.
//!
//! An undirected graph is orientable for a demand `f` when some orientation
//! of its edges gives every node set at least `f(S)` incoming arcs. The
//! classical characterization says this holds iff every partition and
//! co-partition `P` satisfies `e(P) >= sum of f over parts`, which is
//! exactly feasibility of the augmentation LP with nothing left to buy —
//! so the check reuses [`Lp2System`].
//!
//! Extraction goes through an LP over one 0/1 variable per edge (its
//! orientation indicator) with in-degree rows generated on demand. Vertices
//! of that system are integral for crossing supermodular demands; the code
//! asserts integrality and treats a fractional vertex as a reportable
//! anomaly rather than rounding it.

use crate::demand::Demand;
use crate::error::Error;
use crate::exactlp::{solve_with_separation, LpOutcome, LpProblem, LpRow};
use crate::graph::{in_degree, max_flow, NodeId, NodeSet, UGraph};
use crate::rat::{rat_int, Rat};
use crate::separation::Lp2System;
use crate::setfam::Pocp;
use num_traits::{One, Zero};

/// Cap for demand-positive set enumeration with tabulated demands.
pub const MAX_TABLE_ORIENT_NODES: usize = 12;

/// A total orientation of some graph's edge list: `arcs[i]` is edge `i`
/// directed one way or the other.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orientation {
    pub arcs: Vec<(NodeId, NodeId)>,
}

impl Orientation {
    /// Checks that this orients exactly the edges of `g`, positionally.
    pub fn matches_graph(&self, g: &UGraph) -> bool {
        self.arcs.len() == g.edge_count()
            && self
                .arcs
                .iter()
                .zip(g.edges())
                .all(|(&(a, b), &(u, v))| (a, b) == (u, v) || (a, b) == (v, u))
    }
}

/// Tests orientability; on failure returns a violated partition or
/// co-partition as the witness.
pub fn orientability_witness(
    g: &UGraph,
    f: &Demand,
    root: NodeId,
) -> Result<Option<Pocp>, Error> {
    let sys = Lp2System::new(g.n(), root, g.clone(), vec![], f.clone())?;
    let cfg = crate::separation::SeparationConfig { max_rows: 1, ..Default::default() };
    Ok(sys.separate(&[], &cfg)?.into_iter().next().map(|(p, _)| p))
}

/// True iff some orientation of `g` covers `f`.
pub fn is_f_orientable(g: &UGraph, f: &Demand, root: NodeId) -> Result<bool, Error> {
    Ok(orientability_witness(g, f, root)?.is_none())
}

/// In-degree row for the cut set `s` over orientation variables: variable
/// `e = (u, v)` contributes `z_e` when the forward arc enters `s` and
/// `1 - z_e` when the reverse arc does.
fn cut_row(edges: &[(NodeId, NodeId)], s: NodeSet, f_value: i64) -> LpRow {
    let mut coeffs = Vec::new();
    let mut constant = 0i64;
    for (j, &(u, v)) in edges.iter().enumerate() {
        if s.contains(v) && !s.contains(u) {
            coeffs.push((j, rat_int(1)));
        } else if s.contains(u) && !s.contains(v) {
            coeffs.push((j, rat_int(-1)));
            constant += 1;
        }
    }
    LpRow::new(coeffs, rat_int(f_value - constant))
}

/// Fractional in-weight of `s` under orientation values `z`.
fn in_weight(edges: &[(NodeId, NodeId)], z: &[Rat], s: NodeSet) -> Rat {
    let mut total = Rat::zero();
    for (j, &(u, v)) in edges.iter().enumerate() {
        if s.contains(v) && !s.contains(u) {
            total += &z[j];
        } else if s.contains(u) && !s.contains(v) {
            total += Rat::one() - &z[j];
        }
    }
    total
}

/// Violated in-degree cuts at the fractional orientation `z`.
fn separate_orientation_cuts(
    g: &UGraph,
    f: &Demand,
    z: &[Rat],
) -> Result<Vec<LpRow>, Error> {
    let n = g.n();
    let edges = g.edges();
    match f {
        Demand::Kl { k, l, root } => {
            // Arc capacities z forward, 1 - z backward; rooted connectivity
            // is checked with 2(n - 1) max-flow runs, min cuts become rows.
            let mut arcs = Vec::with_capacity(2 * edges.len());
            let mut caps = Vec::with_capacity(2 * edges.len());
            for (j, &(u, v)) in edges.iter().enumerate() {
                arcs.push((u, v));
                caps.push(z[j].clone());
                arcs.push((v, u));
                caps.push(Rat::one() - &z[j]);
            }
            let mut rows = Vec::new();
            for v in 0..n {
                if v == *root {
                    continue;
                }
                if *k > 0 {
                    let flow = max_flow(n, &arcs, &caps, *root, v);
                    if flow.value < rat_int(*k as i64) {
                        let cut = flow.source_side.complement(n);
                        rows.push(cut_row(edges, cut, *k as i64));
                    }
                }
                if *l > 0 {
                    let flow = max_flow(n, &arcs, &caps, v, *root);
                    if flow.value < rat_int(*l as i64) {
                        let cut = flow.source_side.complement(n);
                        rows.push(cut_row(edges, cut, *l as i64));
                    }
                }
            }
            rows.sort_by(|a, b| a.coeffs.len().cmp(&b.coeffs.len()));
            rows.dedup();
            Ok(rows)
        }
        Demand::Table { .. } => {
            if n > MAX_TABLE_ORIENT_NODES {
                return Err(Error::CapExceeded {
                    what: "orientation cut enumeration nodes",
                    got: n,
                    cap: MAX_TABLE_ORIENT_NODES,
                });
            }
            let mut rows: Vec<(Rat, LpRow)> = Vec::new();
            for s in NodeSet::proper_subsets(n) {
                let need = f.eval(s, n);
                if need <= 0 {
                    continue;
                }
                let have = in_weight(edges, z, s);
                if have < rat_int(need) {
                    rows.push((have - rat_int(need), cut_row(edges, s, need)));
                }
            }
            rows.sort_by(|(a, _), (b, _)| a.cmp(b));
            rows.truncate(crate::separation::DEFAULT_MAX_VIOLATIONS);
            Ok(rows.into_iter().map(|(_, r)| r).collect())
        }
    }
}

/// Extracts an orientation of `g` covering `f`.
///
/// Precondition: `g` is orientable for `f` (else this reports the violated
/// cut as infeasibility). A fractional vertex would contradict the
/// integrality of the orientation system and surfaces as a contract error.
pub fn extract_orientation(g: &UGraph, f: &Demand, _root: NodeId) -> Result<Orientation, Error> {
    let m = g.edge_count();
    let problem = LpProblem::unit_box(vec![Rat::zero(); m]);
    let (outcome, _) = solve_with_separation(problem, |z| separate_orientation_cuts(g, f, z))?;
    let sol = match outcome {
        LpOutcome::Optimal(s) => s,
        LpOutcome::Infeasible(_) => {
            return Err(Error::Infeasible(
                "graph admits no orientation covering the demand".into(),
            ))
        }
    };
    let mut arcs = Vec::with_capacity(m);
    for (j, &(u, v)) in g.edges().iter().enumerate() {
        if sol.values[j].is_one() {
            arcs.push((u, v));
        } else if sol.values[j].is_zero() {
            arcs.push((v, u));
        } else {
            return Err(Error::Contract(format!(
                "orientation vertex came out fractional at edge {j}: {}",
                sol.values[j]
            )));
        }
    }
    let orientation = Orientation { arcs };
    if !verify_covers(&orientation, g, f)? {
        return Err(Error::Contract(
            "extracted orientation fails its own coverage check".into(),
        ));
    }
    Ok(orientation)
}

/// Does the orientation give every set `S` at least `f(S)` incoming arcs?
pub fn verify_covers(o: &Orientation, g: &UGraph, f: &Demand) -> Result<bool, Error> {
    if !o.matches_graph(g) {
        return Err(Error::Invalid(
            "orientation does not match the graph's edge list".into(),
        ));
    }
    let n = g.n();
    match f {
        Demand::Kl { k, l, root } => {
            let caps: Vec<Rat> = vec![rat_int(1); o.arcs.len()];
            for v in 0..n {
                if v == *root {
                    continue;
                }
                if *k > 0
                    && max_flow(n, &o.arcs, &caps, *root, v).value < rat_int(*k as i64)
                {
                    return Ok(false);
                }
                if *l > 0
                    && max_flow(n, &o.arcs, &caps, v, *root).value < rat_int(*l as i64)
                {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Demand::Table { .. } => {
            if n > MAX_TABLE_ORIENT_NODES {
                return Err(Error::CapExceeded {
                    what: "coverage check nodes",
                    got: n,
                    cap: MAX_TABLE_ORIENT_NODES,
                });
            }
            for s in NodeSet::proper_subsets(n) {
                if (in_degree(&o.arcs, s) as i64) < f.eval(s, n) {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}
