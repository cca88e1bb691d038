//! Integrality-gap laboratory for the mixed-graph variant.
//!
//! Augmenting a *mixed* graph (fixed arcs plus orientable edges) to
//! `k`-arc-connectivity behaves very differently from the purely undirected
//! problem: this module builds a ladder family on `2n` nodes whose natural
//! cut LP has optimum exactly `1/n` while every integral solution costs 1 —
//! a gap growing linearly with the node count. It also re-encodes the same
//! family as a vertex of the undirected cut LP with its single purchasable
//! variable at `1/n`, which is why the rounding loop works with partition
//! rows rather than plain cut rows.
//!
//! Layout: nodes `u_1..u_n` are `0..n`, `v_1..v_n` are `n..2n`. The tree
//! arcs run `u_i -> v_i` and `u_i -> v_{i+1}`; each has two reversed
//! parallel copies. The free edges are the two ladder rails; the single
//! purchasable edge closes `u_n` to `v_1` at cost 1. For `k > 2`, `k - 2`
//! parallel directed circuits `u_1..u_n, v_n..v_1` are added.

use crate::error::Error;
use crate::exactlp::{matrix_rank, solve_basic, solve_with_separation, LpOutcome, LpProblem, LpRow};
use crate::graph::{in_degree, MixedGraph, NodeId, NodeSet};
use crate::rat::{rat, rat_int, Rat};
use num_traits::{One, Zero};

/// Cap on `2n` for anything that enumerates all node subsets.
pub const MAX_GAP_NODES: usize = 14;

/// The ladder instance of the mixed augmentation problem.
#[derive(Clone, Debug)]
pub struct GapInstance {
    /// Ladder length; the graph has `2n` nodes.
    pub n: usize,
    /// Connectivity requirement, at least 2.
    pub k: u32,
    /// Fixed arcs and undirected edges; the last undirected edge is the
    /// purchasable one, everything else is free.
    pub graph: MixedGraph,
    /// Number of spanning-tree arcs (`2n - 1`).
    pub tree_arcs: usize,
    /// Number of reversed parallel arcs (`2 * (2n - 1)`).
    pub back_arcs: usize,
}

impl GapInstance {
    pub fn node_count(&self) -> usize {
        2 * self.n
    }

    /// Index of `u_i`, 1-based.
    pub fn u(&self, i: usize) -> NodeId {
        debug_assert!((1..=self.n).contains(&i));
        i - 1
    }

    /// Index of `v_i`, 1-based.
    pub fn v(&self, i: usize) -> NodeId {
        debug_assert!((1..=self.n).contains(&i));
        self.n + i - 1
    }

    /// The free (ladder) edges.
    pub fn free_edges(&self) -> &[(NodeId, NodeId)] {
        let m = self.graph.uedges.len();
        &self.graph.uedges[..m - 1]
    }

    /// The unit-cost purchasable edge `{u_n, v_1}`.
    pub fn purchase_edge(&self) -> (NodeId, NodeId) {
        *self.graph.uedges.last().expect("instance always has the closing edge")
    }

    /// Demand of a cut under the connectivity requirement: `k` minus the
    /// fixed-arc in-degree (may be negative; such rows are vacuous).
    pub fn cut_demand(&self, z: NodeSet) -> i64 {
        self.k as i64 - in_degree(&self.graph.arcs, z) as i64
    }
}

/// Builds the ladder instance. Needs `n >= 2` and `k >= 2`.
pub fn build_gap_instance(n: usize, k: u32) -> Result<GapInstance, Error> {
    if n < 2 || k < 2 {
        return Err(Error::Invalid("gap family needs n >= 2 and k >= 2".into()));
    }
    if 2 * n > MAX_GAP_NODES {
        return Err(Error::CapExceeded {
            what: "gap instance nodes",
            got: 2 * n,
            cap: MAX_GAP_NODES,
        });
    }
    let mut g = MixedGraph::new(2 * n);
    let u = |i: usize| i - 1;
    let v = |i: usize| n + i - 1;
    // Tree arcs, then two reversed copies of each.
    let mut tree = Vec::new();
    for i in 1..=n {
        tree.push((u(i), v(i)));
    }
    for i in 1..n {
        tree.push((u(i), v(i + 1)));
    }
    for &(a, b) in &tree {
        g.add_arc(a, b);
    }
    for &(a, b) in &tree {
        g.add_arc(b, a);
        g.add_arc(b, a);
    }
    // Extra parallel circuits for k > 2: u_1 .. u_n, v_n .. v_1, back.
    for _ in 2..k {
        for i in 1..n {
            g.add_arc(u(i), u(i + 1));
        }
        g.add_arc(u(n), v(n));
        for i in (2..=n).rev() {
            g.add_arc(v(i), v(i - 1));
        }
        g.add_arc(v(1), u(1));
    }
    // Ladder rails (free), then the closing edge (purchasable, cost 1).
    for i in 1..n {
        g.add_uedge(u(i), u(i + 1));
    }
    for i in 1..n {
        g.add_uedge(v(i), v(i + 1));
    }
    g.add_uedge(u(n), v(1));
    Ok(GapInstance {
        n,
        k,
        graph: g,
        tree_arcs: 2 * n - 1,
        back_arcs: 2 * (2 * n - 1),
    })
}

/// The `2n - 1` fundamental cuts of the tree arcs: the head sides
/// `S_i = {u_1..u_{i-1}, v_1..v_i}` and `T_i = {u_{i+1}..u_n, v_{i+1}..v_n}`.
pub fn fundamental_cuts(gi: &GapInstance) -> Vec<NodeSet> {
    let n = gi.n;
    let mut cuts = Vec::with_capacity(2 * n - 1);
    for i in 1..=n {
        let mut s = NodeSet::empty();
        for j in 1..i {
            s.insert(gi.u(j));
        }
        for j in 1..=i {
            s.insert(gi.v(j));
        }
        cuts.push(s);
    }
    for i in 1..n {
        let mut t = NodeSet::empty();
        for j in (i + 1)..=n {
            t.insert(gi.u(j));
            t.insert(gi.v(j));
        }
        cuts.push(t);
    }
    cuts
}

/// Bookkeeping of the counting argument on the fundamental cuts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutAccounting {
    /// Total demand of the family: `k (2n - 1)`.
    pub demand_total: i64,
    /// Arc entries from the fixed arcs: `(k - 1)(2n - 1)`.
    pub fixed_supply: i64,
    /// Entries any orientation of the free edges can add: `2n - 2`.
    pub orientable_supply: i64,
}

impl CutAccounting {
    /// The shortfall that forces a purchase: supply is one short.
    pub fn deficit(&self) -> i64 {
        self.demand_total - self.fixed_supply - self.orientable_supply
    }
}

/// Verifies, cut by cut, that reversed arcs never enter a fundamental cut,
/// every tree arc (and extra circuit arc) enters exactly one, and each free
/// edge enters exactly one whichever way it points. Returns the totals.
pub fn fundamental_cut_accounting(gi: &GapInstance) -> Result<CutAccounting, Error> {
    let cuts = fundamental_cuts(gi);
    let arcs = &gi.graph.arcs;
    let fail = |msg: String| Err(Error::Contract(msg));

    // Reversed copies occupy arcs tree_arcs .. tree_arcs + back_arcs;
    // anything beyond belongs to the extra circuits.
    let mut circuit_entries = 0i64;
    for (idx, &(a, b)) in arcs.iter().enumerate() {
        let entries = cuts
            .iter()
            .filter(|z| z.contains(b) && !z.contains(a))
            .count();
        if idx < gi.tree_arcs {
            if entries != 1 {
                return fail(format!("tree arc {idx} enters {entries} fundamental cuts"));
            }
        } else if idx < gi.tree_arcs + gi.back_arcs {
            if entries != 0 {
                return fail(format!("reversed arc {idx} enters {entries} fundamental cuts"));
            }
        } else {
            // Circuit arcs enter at most one cut; each circuit closes on an
            // arc entering none, so a circuit adds 2n - 1 entries in total.
            if entries > 1 {
                return fail(format!("circuit arc {idx} enters {entries} fundamental cuts"));
            }
            circuit_entries += entries as i64;
        }
    }
    if circuit_entries != (gi.k as i64 - 2) * (2 * gi.n as i64 - 1) {
        return fail(format!(
            "circuits supply {circuit_entries} entries instead of (k-2)(2n-1)"
        ));
    }
    for &(a, b) in gi.free_edges() {
        for (x, y) in [(a, b), (b, a)] {
            let entries = cuts
                .iter()
                .filter(|z| z.contains(y) && !z.contains(x))
                .count();
            if entries != 1 {
                return fail(format!(
                    "free edge ({a},{b}) oriented ({x},{y}) enters {entries} cuts"
                ));
            }
        }
    }
    // Each cut needs k entering arcs in the final digraph.
    let demand_total = gi.k as i64 * cuts.len() as i64;
    let supply_arcs = gi.tree_arcs as i64 + (gi.k as i64 - 2) * (2 * gi.n as i64 - 1);
    Ok(CutAccounting {
        demand_total,
        fixed_supply: supply_arcs,
        orientable_supply: 2 * gi.n as i64 - 2,
    })
}

/// Variable layout of the cut LP: for undirected edge `j` stored as
/// `(a, b)`, variable `2j` is the `a -> b` amount and `2j + 1` the reverse;
/// the final variable is the purchase indicator of the closing edge.
#[derive(Clone, Debug)]
pub struct GapLp {
    pub problem: LpProblem,
    pub num_uedges: usize,
}

fn coupling_rows(gi: &GapInstance) -> Vec<LpRow> {
    let m = gi.graph.uedges.len();
    let x_var = 2 * m;
    let mut rows = Vec::new();
    for j in 0..m {
        let (fwd, rev) = (2 * j, 2 * j + 1);
        if j + 1 == m {
            // Purchasable edge: the two directions sum to the purchase.
            let coeffs = vec![(fwd, rat_int(1)), (rev, rat_int(1)), (x_var, rat_int(-1))];
            rows.push(LpRow::new(coeffs.clone(), rat_int(0)));
            rows.push(LpRow::new(
                coeffs.into_iter().map(|(j, c)| (j, -c)).collect(),
                rat_int(0),
            ));
        } else {
            let coeffs = vec![(fwd, rat_int(1)), (rev, rat_int(1))];
            rows.push(LpRow::new(coeffs.clone(), rat_int(1)));
            rows.push(LpRow::new(
                coeffs.into_iter().map(|(j, c)| (j, -c)).collect(),
                rat_int(-1),
            ));
        }
    }
    rows
}

fn base_problem(gi: &GapInstance) -> GapLp {
    let m = gi.graph.uedges.len();
    let mut objective = vec![Rat::zero(); 2 * m + 1];
    objective[2 * m] = Rat::one(); // the closing edge costs 1
    let mut problem = LpProblem::unit_box(objective);
    for row in coupling_rows(gi) {
        problem.add_row(row);
    }
    GapLp { problem, num_uedges: m }
}

/// In-weight row for the cut `z` over the orientation variables.
fn gap_cut_row(gi: &GapInstance, z: NodeSet) -> LpRow {
    let mut coeffs = Vec::new();
    for (j, &(a, b)) in gi.graph.uedges.iter().enumerate() {
        if z.contains(b) && !z.contains(a) {
            coeffs.push((2 * j, rat_int(1)));
        } else if z.contains(a) && !z.contains(b) {
            coeffs.push((2 * j + 1, rat_int(1)));
        }
    }
    LpRow::new(coeffs, rat_int(gi.cut_demand(z)))
}

/// Fully materialized cut LP: one row per nonempty proper subset (vacuous
/// rows included for fidelity), plus the coupling rows.
pub fn lp_full(gi: &GapInstance) -> Result<GapLp, Error> {
    let nodes = gi.node_count();
    if nodes > MAX_GAP_NODES {
        return Err(Error::CapExceeded {
            what: "materialized cut LP nodes",
            got: nodes,
            cap: MAX_GAP_NODES,
        });
    }
    let mut lp = base_problem(gi);
    for z in NodeSet::proper_subsets(nodes) {
        lp.problem.add_row(gap_cut_row(gi, z));
    }
    Ok(lp)
}

/// Optimal value of the cut LP, with cut rows generated on demand.
pub fn lp_optimum(gi: &GapInstance) -> Result<Rat, Error> {
    let nodes = gi.node_count();
    let lp = base_problem(gi);
    let (outcome, _) = solve_with_separation(lp.problem, |vals| {
        let mut violated: Vec<(Rat, LpRow)> = Vec::new();
        for z in NodeSet::proper_subsets(nodes) {
            let row = gap_cut_row(gi, z);
            let slack = row.slack_at(vals);
            if slack < Rat::zero() {
                violated.push((slack, row));
            }
        }
        violated.sort_by(|(a, ra), (b, rb)| a.cmp(b).then_with(|| ra.rhs.cmp(&rb.rhs)));
        violated.truncate(5);
        Ok(violated.into_iter().map(|(_, r)| r).collect())
    })?;
    match outcome {
        LpOutcome::Optimal(sol) => Ok(sol.objective),
        LpOutcome::Infeasible(_) => Err(Error::Contract(
            "the gap family is feasible by construction".into(),
        )),
    }
}

/// The closed-form fractional point: rail amounts slide by `i/n` along the
/// ladder and the closing edge carries `1/n`. Only defined for `k = 2`.
/// Feasibility is re-verified against every cut before returning.
pub fn closed_form_fractional(gi: &GapInstance) -> Result<Vec<Rat>, Error> {
    if gi.k != 2 {
        return Err(Error::Invalid(
            "the closed-form point is stated for the base requirement k = 2".into(),
        ));
    }
    let n = gi.n;
    let m = gi.graph.uedges.len();
    let mut vals = vec![Rat::zero(); 2 * m + 1];
    // Rails were pushed u-side first (i = 1..n-1), then v-side.
    for i in 1..n {
        let j = i - 1; // edge (u_i, u_{i+1})
        vals[2 * j] = rat(1, 1) - rat(i as i64, n as i64);
        vals[2 * j + 1] = rat(i as i64, n as i64);
        let j = (n - 1) + (i - 1); // edge (v_i, v_{i+1})
        vals[2 * j] = rat(i as i64, n as i64);
        vals[2 * j + 1] = rat(1, 1) - rat(i as i64, n as i64);
    }
    let j = m - 1; // closing edge (u_n, v_1)
    vals[2 * j] = rat(1, n as i64);
    vals[2 * j + 1] = Rat::zero();
    vals[2 * m] = rat(1, n as i64);

    // Exhaustive feasibility check.
    for z in NodeSet::proper_subsets(gi.node_count()) {
        if gap_cut_row(gi, z).slack_at(&vals) < Rat::zero() {
            return Err(Error::Contract(format!(
                "closed-form point violates the cut at {z:?}"
            )));
        }
    }
    Ok(vals)
}

/// The unit-cost integral solution: rails forward (`u_i -> u_{i+1}`,
/// `v_i -> v_{i+1}`) plus the closing edge bought and oriented
/// `u_n -> v_1`. Returned as the full arc set including the fixed arcs.
pub fn reference_integral_arcs(gi: &GapInstance) -> Vec<(NodeId, NodeId)> {
    let mut arcs = gi.graph.arcs.clone();
    for &(a, b) in gi.free_edges() {
        arcs.push((a, b));
    }
    let (a, b) = gi.purchase_edge();
    arcs.push((a, b));
    arcs
}

/// Checks the reference integral solution covers every cut `k` times.
pub fn verify_reference_integral(gi: &GapInstance) -> Result<bool, Error> {
    let arcs = reference_integral_arcs(gi);
    for z in NodeSet::proper_subsets(gi.node_count()) {
        if (in_degree(&arcs, z) as i64) < gi.k as i64 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Exact integral optimum by brute force over every rail orientation and
/// purchase choice. Capped at `n <= 6`.
pub fn integral_optimum(gi: &GapInstance) -> Result<Rat, Error> {
    if gi.n > 6 {
        return Err(Error::CapExceeded { what: "integral brute force n", got: gi.n, cap: 6 });
    }
    let free = gi.free_edges().to_vec();
    let m = free.len();
    let (pu, pv) = gi.purchase_edge();
    let cuts = fundamental_cuts(gi);
    let nodes = gi.node_count();
    let k = gi.k as i64;
    let mut best: Option<Rat> = None;

    let feasible = |arcs: &[(NodeId, NodeId)]| -> bool {
        // Fundamental cuts fail first for cost-0 attempts; check them
        // before the full sweep.
        if cuts.iter().any(|&z| (in_degree(arcs, z) as i64) < k) {
            return false;
        }
        NodeSet::proper_subsets(nodes).all(|z| in_degree(arcs, z) as i64 >= k)
    };

    for purchase in 0..3usize {
        // 0: skip the closing edge; 1: buy it forward; 2: buy it reversed.
        let price = if purchase == 0 { Rat::zero() } else { Rat::one() };
        if let Some(b) = &best {
            if price >= *b && purchase != 0 {
                continue;
            }
        }
        for mask in 0usize..(1 << m) {
            let mut arcs = gi.graph.arcs.clone();
            for (j, &(a, b)) in free.iter().enumerate() {
                arcs.push(if mask >> j & 1 == 1 { (b, a) } else { (a, b) });
            }
            match purchase {
                1 => arcs.push((pu, pv)),
                2 => arcs.push((pv, pu)),
                _ => {}
            }
            if feasible(&arcs) {
                best = Some(match best {
                    None => price.clone(),
                    Some(b) => b.min(price.clone()),
                });
                break;
            }
        }
    }
    best.ok_or_else(|| {
        Error::Contract("the gap family admits a unit-cost solution by construction".into())
    })
}

/// One row of the gap experiment.
#[derive(Clone, Debug)]
pub struct GapRow {
    pub n: usize,
    pub k: u32,
    pub lp_value: Rat,
    pub integral_value: Rat,
    pub ratio: Rat,
}

/// Runs the experiment over a ladder-size range at a fixed requirement.
pub fn gap_report(n_min: usize, n_max: usize, k: u32) -> Result<Vec<GapRow>, Error> {
    let mut rows = Vec::new();
    for n in n_min..=n_max {
        let gi = build_gap_instance(n, k)?;
        let lp_value = lp_optimum(&gi)?;
        let integral_value = integral_optimum(&gi)?;
        let ratio = &integral_value / &lp_value;
        rows.push(GapRow { n, k, lp_value, integral_value, ratio });
    }
    Ok(rows)
}

/// The same family re-encoded as a point of the undirected cut LP (every
/// fixed arc becomes a free edge pinned to its direction): the point is a
/// vertex whose single purchase variable sits at `1/n`, showing plain cut
/// rows cannot power a constant-factor rounding loop.
#[derive(Clone, Debug)]
pub struct RoundingResistance {
    /// Value of the only purchase variable at the vertex: `1/n`.
    pub max_fractional_purchase: Rat,
    /// Exact vertex verification (active-constraint rank equals the
    /// variable count); only run for `n <= 4`, `None` beyond.
    pub vertex_verified: Option<bool>,
    pub num_vars: usize,
}

pub fn rounding_resistance_demo(gi: &GapInstance) -> Result<RoundingResistance, Error> {
    if gi.k != 2 {
        return Err(Error::Invalid("the re-encoding is stated for k = 2".into()));
    }
    let nodes = gi.node_count();
    // Edge list: one undirected edge per fixed arc, then the ladder rails,
    // then the closing edge. Point: arc edges pinned, rails per the closed
    // form, purchase at 1/n.
    let arc_edges: Vec<(NodeId, NodeId)> = gi.graph.arcs.clone();
    let rail_count = gi.free_edges().len();
    let frac = closed_form_fractional(gi)?;
    let num_arc = arc_edges.len();
    let m = num_arc + rail_count + 1;
    let num_vars = 2 * m + 1;
    let mut vals = vec![Rat::zero(); num_vars];
    for j in 0..num_arc {
        vals[2 * j] = Rat::one(); // oriented as the original arc
    }
    for j in 0..=rail_count {
        // Rails and the closing edge reuse the closed-form amounts.
        vals[2 * (num_arc + j)] = frac[2 * j].clone();
        vals[2 * (num_arc + j) + 1] = frac[2 * j + 1].clone();
    }
    vals[2 * m] = rat(1, gi.n as i64);

    let edges: Vec<(NodeId, NodeId)> = arc_edges
        .iter()
        .chain(gi.free_edges())
        .copied()
        .chain([gi.purchase_edge()])
        .collect();

    // In-weight of a cut under the re-encoded point.
    let in_weight = |z: NodeSet| -> Rat {
        let mut total = Rat::zero();
        for (j, &(a, b)) in edges.iter().enumerate() {
            if z.contains(b) && !z.contains(a) {
                total += &vals[2 * j];
            } else if z.contains(a) && !z.contains(b) {
                total += &vals[2 * j + 1];
            }
        }
        total
    };
    let k = rat_int(gi.k as i64);
    for z in NodeSet::proper_subsets(nodes) {
        if in_weight(z) < k {
            return Err(Error::Contract(format!(
                "re-encoded point violates the cut at {z:?}"
            )));
        }
    }

    let vertex_verified = if gi.n <= 4 {
        // Active constraints: all coupling equalities, tight cut rows, and
        // zero bounds; the point is a vertex iff they span every direction.
        let mut rows: Vec<Vec<Rat>> = Vec::new();
        for j in 0..m {
            let mut row = vec![Rat::zero(); num_vars];
            row[2 * j] = Rat::one();
            row[2 * j + 1] = Rat::one();
            if j == m - 1 {
                row[2 * m] = -Rat::one();
            }
            rows.push(row);
        }
        for z in NodeSet::proper_subsets(nodes) {
            if in_weight(z) == k {
                let mut row = vec![Rat::zero(); num_vars];
                for (j, &(a, b)) in edges.iter().enumerate() {
                    if z.contains(b) && !z.contains(a) {
                        row[2 * j] = Rat::one();
                    } else if z.contains(a) && !z.contains(b) {
                        row[2 * j + 1] = Rat::one();
                    }
                }
                rows.push(row);
            }
        }
        for (j, v) in vals.iter().enumerate() {
            if v.is_zero() {
                let mut row = vec![Rat::zero(); num_vars];
                row[j] = Rat::one();
                rows.push(row);
            }
        }
        Some(matrix_rank(rows) == num_vars)
    } else {
        None
    };

    Ok(RoundingResistance {
        max_fractional_purchase: vals[2 * m].clone(),
        vertex_verified,
        num_vars,
    })
}

/// Direct solve of the fully materialized LP; small `n` only.
pub fn lp_full_optimum(gi: &GapInstance) -> Result<Rat, Error> {
    let lp = lp_full(gi)?;
    match solve_basic(&lp.problem)? {
        LpOutcome::Optimal(sol) => Ok(sol.objective),
        LpOutcome::Infeasible(_) => Err(Error::Contract(
            "the gap family is feasible by construction".into(),
        )),
    }
}
