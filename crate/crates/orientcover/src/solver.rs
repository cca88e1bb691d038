//! Iterative rounding solver for minimum-cost orientable augmentation.
//!
//! Each round solves the partition/co-partition LP over the still-undecided
//! purchasable edges (rows generated by exhaustive separation), takes a
//! basic optimum, permanently discards edges at exactly zero, and buys
//! every edge at or above 1/6 — an edge in one of those two classes always
//! exists at a vertex, so the loop finishes within one round per edge. The
//! first round's LP value is a lower bound on any integral solution, and
//! the 1/6 bar makes the total purchase cost at most six times that bound.
//!
//! Everything is exact: the 1/6 comparison, tightness, the per-round
//! monotonicity check, and the final ratio check all use rational
//! arithmetic, and any breach surfaces as a contract error instead of a
//! silently degraded answer.

use crate::demand::{check_crossing_gsupermodular, Demand};
use crate::error::Error;
use crate::exactlp::{solve_with_separation, LpOutcome, LpProblem};
use crate::graph::{NodeId, UGraph};
use crate::orient::{extract_orientation, is_f_orientable, verify_covers, Orientation};
use crate::rat::{approximation_factor, fmt_rat, one_sixth, Rat};
use crate::separation::{Lp2System, SeparationConfig};
use num_traits::Zero;

/// A problem instance: free edges, purchasable edges with nonnegative
/// costs, a demand that is crossing supermodular relative to the free
/// graph, and the root node fixing the partition convention.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    n: usize,
    free_edges: Vec<(NodeId, NodeId)>,
    buy_edges: Vec<(NodeId, NodeId)>,
    costs: Vec<Rat>,
    demand: Demand,
    root: NodeId,
}

impl Instance {
    pub fn new(
        n: usize,
        free_edges: Vec<(NodeId, NodeId)>,
        purchasable: Vec<((NodeId, NodeId), Rat)>,
        demand: Demand,
        root: NodeId,
    ) -> Result<Self, Error> {
        if n < 2 {
            return Err(Error::Invalid("instances need at least two nodes".into()));
        }
        if root >= n {
            return Err(Error::Invalid("root outside the node set".into()));
        }
        let free = UGraph::from_edges(n, &free_edges)?;
        let mut buy_edges = Vec::with_capacity(purchasable.len());
        let mut costs = Vec::with_capacity(purchasable.len());
        for ((u, v), c) in purchasable {
            if u == v || u >= n || v >= n {
                return Err(Error::Invalid(format!("bad purchasable edge ({u},{v})")));
            }
            if c < Rat::zero() {
                return Err(Error::Invalid(format!(
                    "negative cost {} on edge ({u},{v})",
                    fmt_rat(&c)
                )));
            }
            buy_edges.push((u, v));
            costs.push(c);
        }
        demand.validate_for(n)?;
        // The supermodularity gate runs once, here; rooted-connectivity
        // demands satisfy it on every graph by construction.
        if matches!(demand, Demand::Table { .. }) {
            if let Some((s, t)) = check_crossing_gsupermodular(&demand, &free)? {
                return Err(Error::Invalid(format!(
                    "demand is not crossing supermodular relative to the free graph: \
                     violated at {s:?}, {t:?}"
                )));
            }
        }
        Ok(Instance { n, free_edges, buy_edges, costs, demand, root })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn demand(&self) -> &Demand {
        &self.demand
    }

    pub fn free_edges(&self) -> &[(NodeId, NodeId)] {
        &self.free_edges
    }

    pub fn buy_edges(&self) -> &[(NodeId, NodeId)] {
        &self.buy_edges
    }

    pub fn costs(&self) -> &[Rat] {
        &self.costs
    }

    pub fn free_graph(&self) -> UGraph {
        UGraph::from_edges(self.n, &self.free_edges).expect("validated at construction")
    }

    /// Free graph plus the chosen purchasable edges, free edges first.
    pub fn graph_with(&self, chosen: &[usize]) -> UGraph {
        let mut g = self.free_graph();
        for &i in chosen {
            let (u, v) = self.buy_edges[i];
            g.add_edge(u, v).expect("validated at construction");
        }
        g
    }

    pub fn cost_of(&self, chosen: &[usize]) -> Rat {
        let mut total = Rat::zero();
        for &i in chosen {
            total += &self.costs[i];
        }
        total
    }
}

/// One round of the rounding loop, as solved and classified.
#[derive(Clone, Debug)]
pub struct RoundRecord {
    /// Purchasable-edge indices that were LP variables this round, in
    /// variable order.
    pub active: Vec<usize>,
    /// Basic optimal solution, aligned with `active`.
    pub x: Vec<Rat>,
    pub objective: Rat,
    /// Indices dropped for sitting at exactly zero.
    pub dropped: Vec<usize>,
    /// Indices bought for reaching 1/6.
    pub fixed: Vec<usize>,
    /// Largest solution value, when the support is nonempty.
    pub max_value: Option<Rat>,
    /// Text dump of the accumulated round LP, when requested.
    pub lp_dump: Option<String>,
}

/// Solver output: the purchased edge set with its certificates.
#[derive(Clone, Debug)]
pub struct AugResult {
    /// Indices into the instance's purchasable edges, ascending.
    pub chosen: Vec<usize>,
    pub total_cost: Rat,
    /// First-round LP optimum — a lower bound on any integral solution.
    pub lp_lower_bound: Rat,
    pub rounds: Vec<RoundRecord>,
    /// Witnessing orientation of the free-plus-chosen graph (edge order:
    /// free edges, then chosen edges ascending).
    pub orientation: Orientation,
}

/// Solver knobs.
#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub max_violations_per_round: usize,
    /// Re-scan co-partitions for rooted-connectivity demands and verify
    /// the redundancy that normally lets the separator skip them.
    pub audit_copartitions: bool,
    /// Keep a text dump of each round's accumulated LP in the record.
    pub capture_lp: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            max_violations_per_round: crate::separation::DEFAULT_MAX_VIOLATIONS,
            audit_copartitions: false,
            capture_lp: false,
        }
    }
}

/// Solves with default options.
pub fn solve(inst: &Instance) -> Result<AugResult, Error> {
    solve_with_options(inst, &SolveOptions::default())
}

/// The rounding loop. Returns `Error::Infeasible` (with a witness row
/// description) when even buying everything cannot satisfy the demand.
pub fn solve_with_options(inst: &Instance, opts: &SolveOptions) -> Result<AugResult, Error> {
    let n = inst.n;
    let sep_cfg = SeparationConfig {
        max_rows: opts.max_violations_per_round.max(1),
        audit_copartitions: opts.audit_copartitions,
    };

    // Infeasibility gate: a row violated even at all-ones is a proof.
    let full_sys = Lp2System::new(
        n,
        inst.root,
        inst.free_graph(),
        inst.buy_edges.clone(),
        inst.demand.clone(),
    )?;
    let ones: Vec<Rat> = vec![Rat::from_integer(1.into()); inst.buy_edges.len()];
    let witness_cfg = SeparationConfig { max_rows: 1, ..sep_cfg.clone() };
    if let Some((p, row)) = full_sys.separate(&ones, &witness_cfg)?.into_iter().next() {
        return Err(Error::Infeasible(format!(
            "even buying every edge leaves {p:?} short: crossing weight {} below demand {}",
            fmt_rat(&row.lhs_at(&ones)),
            fmt_rat(&(row.lhs_at(&ones) - row.slack_at(&ones)))
        )));
    }

    let mut current_free = inst.free_graph();
    let mut active: Vec<usize> = (0..inst.buy_edges.len()).collect();
    let mut chosen: Vec<usize> = Vec::new();
    let mut rounds: Vec<RoundRecord> = Vec::new();
    let mut lp_lower_bound: Option<Rat> = None;
    // Previous round's optimum minus the value it spent on fixed edges;
    // the next optimum may not exceed it.
    let mut budget_left: Option<Rat> = None;

    while !active.is_empty() {
        let var_edges: Vec<(NodeId, NodeId)> = active.iter().map(|&i| inst.buy_edges[i]).collect();
        let objective: Vec<Rat> = active.iter().map(|&i| inst.costs[i].clone()).collect();
        let sys = Lp2System::new(n, inst.root, current_free.clone(), var_edges, inst.demand.clone())?;
        let lp = LpProblem::unit_box(objective);
        let (outcome, relaxation) = solve_with_separation(lp, |x| {
            Ok(sys
                .separate(x, &sep_cfg)?
                .into_iter()
                .map(|(_, row)| row)
                .collect())
        })?;
        let sol = match outcome {
            LpOutcome::Optimal(s) => s,
            LpOutcome::Infeasible(_) => {
                return Err(Error::Contract(
                    "round LP infeasible although the all-ones gate passed".into(),
                ))
            }
        };

        // Progress guarantee at a vertex: a nonempty support carries some
        // edge at 1/6 or better.
        let threshold = one_sixth();
        let max_value = sol.values.iter().max().cloned().filter(|v| !v.is_zero());
        if let Some(ref mv) = max_value {
            if *mv < threshold {
                return Err(Error::Contract(format!(
                    "basic optimum has nonempty support but peaks at {} < 1/6",
                    fmt_rat(mv)
                )));
            }
        }

        let mut dropped = Vec::new();
        let mut fixed = Vec::new();
        let mut spent_value = Rat::zero();
        for (slot, &idx) in active.iter().enumerate() {
            let v = &sol.values[slot];
            if v.is_zero() {
                dropped.push(idx);
            } else if *v >= threshold {
                fixed.push(idx);
                spent_value += &inst.costs[idx] * v;
            }
        }

        if let Some(budget) = &budget_left {
            if sol.objective > *budget {
                return Err(Error::Contract(format!(
                    "round optimum {} exceeds the conditioned budget {}",
                    fmt_rat(&sol.objective),
                    fmt_rat(budget)
                )));
            }
        }
        budget_left = Some(&sol.objective - &spent_value);
        if lp_lower_bound.is_none() {
            lp_lower_bound = Some(sol.objective.clone());
        }

        rounds.push(RoundRecord {
            active: active.clone(),
            x: sol.values.clone(),
            objective: sol.objective.clone(),
            dropped: dropped.clone(),
            fixed: fixed.clone(),
            max_value,
            lp_dump: opts.capture_lp.then(|| relaxation.dump()),
        });

        for &i in &fixed {
            let (u, v) = inst.buy_edges[i];
            current_free.add_edge(u, v)?;
            chosen.push(i);
        }
        active.retain(|i| !dropped.contains(i) && !fixed.contains(i));
    }

    chosen.sort_unstable();
    let lp_lower_bound = lp_lower_bound.unwrap_or_else(Rat::zero);
    let total_cost = inst.cost_of(&chosen);
    if total_cost > approximation_factor() * &lp_lower_bound {
        return Err(Error::Contract(format!(
            "purchase cost {} exceeds six times the LP bound {}",
            fmt_rat(&total_cost),
            fmt_rat(&lp_lower_bound)
        )));
    }

    let final_graph = inst.graph_with(&chosen);
    let orientation = extract_orientation(&final_graph, &inst.demand, inst.root)?;

    Ok(AugResult {
        chosen,
        total_cost,
        lp_lower_bound,
        rounds,
        orientation,
    })
}

/// One entry of a certification report.
#[derive(Clone, Debug)]
pub struct CertCheck {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

/// Independent re-verification of a result against its instance.
#[derive(Clone, Debug)]
pub struct CertReport {
    pub checks: Vec<CertCheck>,
}

impl CertReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Re-checks a result from scratch: set inclusion, cost arithmetic,
/// orientability of the augmented graph, the witnessing orientation, and
/// the six-times ratio bound. Failures are report entries, not errors.
pub fn certify(inst: &Instance, res: &AugResult) -> CertReport {
    let mut checks = Vec::new();
    let mut push = |name: &'static str, pass: bool, detail: String| {
        checks.push(CertCheck { name, pass, detail });
    };

    let m = inst.buy_edges.len();
    let mut sorted = res.chosen.clone();
    sorted.sort_unstable();
    sorted.dedup();
    let inclusion = res.chosen.iter().all(|&i| i < m) && sorted.len() == res.chosen.len();
    push(
        "chosen-edges-valid",
        inclusion,
        format!("{} chosen of {} purchasable", res.chosen.len(), m),
    );

    let cost = inst.cost_of(&res.chosen);
    push(
        "cost-arithmetic",
        cost == res.total_cost,
        format!("recomputed {} vs reported {}", fmt_rat(&cost), fmt_rat(&res.total_cost)),
    );

    let graph = inst.graph_with(&res.chosen);
    let orientable = is_f_orientable(&graph, &inst.demand, inst.root).unwrap_or(false);
    push(
        "augmented-graph-orientable",
        orientable,
        format!("free edges plus {} purchases", res.chosen.len()),
    );

    let matches = res.orientation.matches_graph(&graph);
    push(
        "orientation-matches-graph",
        matches,
        format!("{} arcs over {} edges", res.orientation.arcs.len(), graph.edge_count()),
    );

    let covers = matches
        && verify_covers(&res.orientation, &graph, &inst.demand).unwrap_or(false);
    push("orientation-covers-demand", covers, String::new());

    let ratio_ok = res.total_cost <= approximation_factor() * &res.lp_lower_bound;
    push(
        "cost-within-six-times-bound",
        ratio_ok,
        format!(
            "cost {} vs bound {}",
            fmt_rat(&res.total_cost),
            fmt_rat(&res.lp_lower_bound)
        ),
    );

    CertReport { checks }
}
