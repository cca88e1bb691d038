//! Demand functions on node sets.
//!
//! A demand maps every node set to a nonnegative integer requirement on the
//! in-degree of that set in the sought orientation. The flagship demand is
//! the rooted connectivity form: `k` on sets avoiding the root, `l` on sets
//! containing it (`0` on the empty and full set), which encodes
//! `(k, l)`-edge-connectivity. Arbitrary tabulated demands are supported as
//! long as they pass the crossing supermodularity check against the free
//! graph — that check is the gatekeeper at instance load, not on the
//! evaluation hot path.

use crate::error::Error;
use crate::graph::{NodeId, NodeSet, UGraph};
use crate::setfam::Pocp;
use std::collections::BTreeMap;

/// Cap on exhaustive supermodularity checking (`4^n` crossing pairs).
pub const MAX_CHECK_NODES: usize = 12;

/// A demand function `f` on subsets of `[0, n)` with `f(empty) = f(V) = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Demand {
    /// `k` on sets avoiding `root`, `l` on proper sets containing it.
    /// Requires `k >= l`.
    Kl { k: u32, l: u32, root: NodeId },
    /// Sparse table with default 0. Entries for the empty and full set are
    /// rejected at construction.
    Table { values: BTreeMap<NodeSet, u32> },
}

impl Demand {
    /// Rooted-connectivity demand. Panics unless `k >= l`.
    pub fn kl(k: u32, l: u32, root: NodeId) -> Self {
        assert!(k >= l, "rooted connectivity demand needs k >= l");
        Demand::Kl { k, l, root }
    }

    /// Tabulated demand over `[0, n)`. Values above `n * (n - 1)` are
    /// rejected to keep the LPs bounded in a meaningful range.
    pub fn table(n: usize, entries: Vec<(NodeSet, u32)>) -> Result<Self, Error> {
        let cap = (n * n.saturating_sub(1)) as u32;
        let full = NodeSet::full(n);
        let mut values = BTreeMap::new();
        for (s, v) in entries {
            if s.is_empty() || s == full {
                return Err(Error::Invalid(
                    "demand on the empty or full node set must be zero".into(),
                ));
            }
            if !s.is_subset_of(full) {
                return Err(Error::Invalid("demand entry outside the node set".into()));
            }
            if v > cap {
                return Err(Error::Invalid(format!(
                    "demand value {v} exceeds the cap n*(n-1) = {cap}"
                )));
            }
            if v > 0 {
                values.insert(s, v);
            }
        }
        Ok(Demand::Table { values })
    }

    /// Demand value on `s`.
    pub fn eval(&self, s: NodeSet, n: usize) -> i64 {
        match self {
            Demand::Kl { k, l, root } => {
                if s.is_empty() || s == NodeSet::full(n) {
                    0
                } else if s.contains(*root) {
                    *l as i64
                } else {
                    *k as i64
                }
            }
            Demand::Table { values } => values.get(&s).copied().unwrap_or(0) as i64,
        }
    }

    /// Sum of the demand over the parts of a partition or co-partition
    /// (co-partition parts are evaluated as stored, not complemented).
    pub fn sum_over_parts(&self, p: &Pocp, n: usize) -> i64 {
        p.parts().iter().map(|s| self.eval(*s, n)).sum()
    }

    /// Structural fit against a ground set of `n` nodes: root in range,
    /// table keys inside the set, values under the cap.
    pub fn validate_for(&self, n: usize) -> Result<(), Error> {
        match self {
            Demand::Kl { k, l, root } => {
                if k < l {
                    return Err(Error::Invalid("demand needs k >= l".into()));
                }
                if *root >= n {
                    return Err(Error::Invalid("demand root outside the node set".into()));
                }
            }
            Demand::Table { values } => {
                let cap = (n * n.saturating_sub(1)) as u32;
                let full = NodeSet::full(n);
                for (s, v) in values {
                    if s.is_empty() || *s == full || !s.is_subset_of(full) {
                        return Err(Error::Invalid(
                            "table demand key outside the proper subsets".into(),
                        ));
                    }
                    if *v > cap {
                        return Err(Error::Invalid(format!(
                            "demand value {v} exceeds the cap n*(n-1) = {cap}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Largest value the demand takes on any proper set.
    pub fn max_value(&self, n: usize) -> i64 {
        match self {
            Demand::Kl { k, .. } => *k as i64,
            Demand::Table { values } => values.values().copied().max().unwrap_or(0) as i64,
        }
        .max(0)
        .min((n * n) as i64)
    }
}

/// Exhaustively checks crossing supermodularity of `f` relative to `g`:
/// for every crossing pair `S, T`,
/// `f(S) + f(T) <= f(S&T) + f(S|T) + d(S,T)`
/// where `d` counts the edges of `g` between the exclusive regions.
///
/// Returns the first violating pair, if any.
pub fn check_crossing_gsupermodular(
    f: &Demand,
    g: &UGraph,
) -> Result<Option<(NodeSet, NodeSet)>, Error> {
    let n = g.n();
    if n > MAX_CHECK_NODES {
        return Err(Error::CapExceeded {
            what: "supermodularity check nodes",
            got: n,
            cap: MAX_CHECK_NODES,
        });
    }
    for s in NodeSet::proper_subsets(n) {
        for t in NodeSet::proper_subsets(n) {
            if !s.crosses(t, n) {
                continue;
            }
            let lhs = f.eval(s, n) + f.eval(t, n);
            let rhs = f.eval(s.intersection(t), n)
                + f.eval(s.union(t), n)
                + g.cross_pair(s, t) as i64;
            if lhs > rhs {
                return Ok(Some((s, t)));
            }
        }
    }
    Ok(None)
}
