//! Separation for the partition/co-partition LP.
//!
//! The augmentation LP has one row per partition or co-partition `P` of the
//! node set: the purchased weight crossing `P` plus the free edges crossing
//! `P` must reach the summed demand of its parts. [`Lp2System`] owns the row
//! universe for a fixed (free graph, purchasable edges, demand) triple and
//! answers slack, violation, and tightness queries about it.
//!
//! The authoritative separator is exhaustive enumeration over the row
//! universe, which caps the node count but makes every answer unconditional.
//! For rooted-connectivity demands with `k >= l` the co-partition rows are
//! implied by the partition rows and are skipped; an audit mode re-scans
//! them and checks the pointwise slack comparison that justifies the skip.

use crate::demand::Demand;
use crate::error::Error;
use crate::exactlp::LpRow;
use crate::graph::{max_flow, NodeId, UGraph};
use crate::rat::{rat_int, Rat};
use crate::setfam::{copartitions, partitions, Pocp};
use num_traits::Zero;

/// Hard cap on exhaustive separation (the universe has Bell(n) partitions).
pub const MAX_SEPARATION_NODES: usize = 10;

/// Default number of most-violated rows returned per separation call.
pub const DEFAULT_MAX_VIOLATIONS: usize = 5;

/// Tuning for [`Lp2System::separate`].
#[derive(Clone, Debug)]
pub struct SeparationConfig {
    /// Upper bound on returned rows per call.
    pub max_rows: usize,
    /// Re-scan co-partitions even when the demand makes them redundant, and
    /// verify the redundancy claim on this instance.
    pub audit_copartitions: bool,
}

impl Default for SeparationConfig {
    fn default() -> Self {
        SeparationConfig {
            max_rows: DEFAULT_MAX_VIOLATIONS,
            audit_copartitions: false,
        }
    }
}

/// The constraint system of the augmentation LP for one solver round:
/// variables are the purchasable edges, the free graph contributes constant
/// crossing counts, and the demand fixes the right-hand sides.
#[derive(Clone, Debug)]
pub struct Lp2System {
    n: usize,
    root: NodeId,
    free: UGraph,
    var_edges: Vec<(NodeId, NodeId)>,
    demand: Demand,
}

impl Lp2System {
    pub fn new(
        n: usize,
        root: NodeId,
        free: UGraph,
        var_edges: Vec<(NodeId, NodeId)>,
        demand: Demand,
    ) -> Result<Self, Error> {
        if free.n() != n || root >= n || n < 2 {
            return Err(Error::Invalid("inconsistent system dimensions".into()));
        }
        if var_edges.iter().any(|&(u, v)| u == v || u >= n || v >= n) {
            return Err(Error::Invalid("bad purchasable edge".into()));
        }
        Ok(Lp2System { n, root, free, var_edges, demand })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn free_graph(&self) -> &UGraph {
        &self.free
    }

    pub fn var_edges(&self) -> &[(NodeId, NodeId)] {
        &self.var_edges
    }

    pub fn demand(&self) -> &Demand {
        &self.demand
    }

    /// Right-hand side of the row for `p`: summed demand minus the free
    /// crossing count. Rows with nonpositive right-hand side are vacuous for
    /// nonnegative variables but can still be tight.
    pub fn rhs(&self, p: &Pocp) -> i64 {
        self.demand.sum_over_parts(p, self.n) - p.crossing_count(self.n, self.free.edges()) as i64
    }

    /// The LP row for `p` over the purchasable-edge variables.
    pub fn row(&self, p: &Pocp) -> LpRow {
        let coeffs = p
            .crossing_edges(self.n, &self.var_edges)
            .into_iter()
            .map(|j| (j, rat_int(1)))
            .collect();
        LpRow::new(coeffs, rat_int(self.rhs(p)))
    }

    /// Exact slack of the row for `p` at the point `x`.
    pub fn slack(&self, p: &Pocp, x: &[Rat]) -> Rat {
        debug_assert_eq!(x.len(), self.var_edges.len());
        let mut lhs = Rat::zero();
        for j in p.crossing_edges(self.n, &self.var_edges) {
            lhs += &x[j];
        }
        lhs - rat_int(self.rhs(p))
    }

    fn enumeration_guard(&self) -> Result<(), Error> {
        if self.n > MAX_SEPARATION_NODES {
            return Err(Error::CapExceeded {
                what: "separation nodes",
                got: self.n,
                cap: MAX_SEPARATION_NODES,
            });
        }
        Ok(())
    }

    /// Redundancy rule: rooted-connectivity demands with `k >= l` make every
    /// co-partition row implied by its complement partition's row.
    fn copartitions_redundant(&self) -> bool {
        matches!(self.demand, Demand::Kl { .. })
    }

    /// Every row family in scan order: partitions with at least two parts,
    /// then co-partitions with at least three (two-part co-partitions are
    /// the same row as the two-part partition on the same sets).
    pub fn row_universe(&self) -> Result<impl Iterator<Item = Pocp> + '_, Error> {
        self.enumeration_guard()?;
        let parts = partitions(self.n, self.n, self.root)?.map(Pocp::Part);
        let coparts = copartitions(self.n, self.n, self.root)?
            .filter(|c| c.parts().len() >= 3)
            .map(Pocp::Copart);
        Ok(parts.chain(coparts))
    }

    /// Exhaustive separation: the most violated rows at `x`, empty iff `x`
    /// is feasible for the full system.
    pub fn separate(&self, x: &[Rat], cfg: &SeparationConfig) -> Result<Vec<(Pocp, LpRow)>, Error> {
        self.enumeration_guard()?;
        let mut violated: Vec<(Rat, Pocp)> = Vec::new();
        let mut best_partition_slack: Option<Rat> = None;
        for p in partitions(self.n, self.n, self.root)?.map(Pocp::Part) {
            let slack = self.slack(&p, x);
            best_partition_slack = Some(match best_partition_slack {
                None => slack.clone(),
                Some(b) => b.min(slack.clone()),
            });
            if slack.is_negative() {
                violated.push((slack, p));
            }
        }
        let scan_coparts = !self.copartitions_redundant() || cfg.audit_copartitions;
        if scan_coparts {
            let audit = self.copartitions_redundant();
            for c in copartitions(self.n, self.n, self.root)? {
                if c.parts().len() < 3 {
                    continue;
                }
                let comp_slack = audit.then(|| {
                    self.slack(&Pocp::Part(c.complement_partition(self.n)), x)
                });
                let p = Pocp::Copart(c);
                let slack = self.slack(&p, x);
                if let Some(ps) = comp_slack {
                    // The complement partition row is at least as demanding.
                    if ps > slack {
                        return Err(Error::Contract(format!(
                            "co-partition skip audit failed: {p:?} has slack {slack} below its complement partition's {ps}"
                        )));
                    }
                    continue;
                }
                if slack.is_negative() {
                    violated.push((slack, p));
                }
            }
        }
        violated.sort_by(|(sa, pa), (sb, pb)| sa.cmp(sb).then_with(|| pa.cmp(pb)));
        violated.truncate(cfg.max_rows);
        Ok(violated.into_iter().map(|(_, p)| {
            let row = self.row(&p);
            (p, row)
        }).collect())
    }

    /// Is `x` feasible for every row of the full system?
    pub fn is_feasible(&self, x: &[Rat]) -> Result<bool, Error> {
        let cfg = SeparationConfig { max_rows: 1, ..Default::default() };
        Ok(self.separate(x, &cfg)?.is_empty())
    }

    /// All tight families at `x`, over the full universe (co-partitions
    /// included regardless of demand kind — redundant rows can still be
    /// tight and belong to the tight span).
    pub fn tight_families(&self, x: &[Rat]) -> Result<Vec<Pocp>, Error> {
        self.enumeration_guard()?;
        let mut tight = Vec::new();
        for p in self.row_universe()? {
            if self.slack(&p, x).is_zero() {
                tight.push(p);
            }
        }
        Ok(tight)
    }

    /// Fast feasibility precheck for rooted-connectivity demands.
    ///
    /// For `k == l` the system is feasible iff every cut carries combined
    /// weight at least `2k` (free edges at weight 1), decided by `n - 1`
    /// max-flow runs. For `k > l` there is no comparably simple reduction
    /// here and the answer comes from enumeration instead.
    pub fn feasibility_precheck_kl(&self, x: &[Rat]) -> Result<bool, Error> {
        let Demand::Kl { k, l, .. } = self.demand else {
            return Err(Error::Invalid(
                "feasibility precheck applies to rooted-connectivity demands".into(),
            ));
        };
        if k != l {
            return self.is_feasible(x);
        }
        let mut arcs = Vec::new();
        let mut caps = Vec::new();
        for &(u, v) in self.free.edges() {
            arcs.push((u, v));
            caps.push(rat_int(1));
            arcs.push((v, u));
            caps.push(rat_int(1));
        }
        for (j, &(u, v)) in self.var_edges.iter().enumerate() {
            arcs.push((u, v));
            caps.push(x[j].clone());
            arcs.push((v, u));
            caps.push(x[j].clone());
        }
        let need = rat_int(2 * k as i64);
        for t in 1..self.n {
            if max_flow(self.n, &arcs, &caps, 0, t).value < need {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

use num_traits::Signed;
