//! On-disk formats: versioned JSON records for instances and results.
//!
//! Costs are exact integer fractions in the instance file; decimals are
//! rejected outright rather than rounded. Result files carry every rational
//! as a `p/q` string so values of any size round-trip exactly.

use orientcover::demand::Demand;
use orientcover::error::Error;
use orientcover::graph::NodeSet;
use orientcover::orient::Orientation;
use orientcover::rat::{fmt_rat, parse_rat, rat, Rat};
use orientcover::solver::{AugResult, Instance, RoundRecord};
use serde::{Deserialize, Serialize};

pub const INSTANCE_FORMAT: &str = "orientcover-instance";
pub const RESULT_FORMAT: &str = "orientcover-result";
pub const FORMAT_VERSION: u32 = 1;

/// Instance file schema, version 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub format: String,
    pub version: u32,
    pub nodes: usize,
    pub root: usize,
    pub free_edges: Vec<(usize, usize)>,
    /// `[u, v, cost_numerator, cost_denominator]` per purchasable edge.
    pub purchasable_edges: Vec<(usize, usize, i64, i64)>,
    pub demand: DemandFile,
}

/// Demand schema: rooted-connectivity parameters or an explicit table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "lowercase")]
pub enum DemandFile {
    Kl { k: u32, l: u32, r0: usize },
    Table(Vec<(Vec<usize>, u32)>),
}

impl InstanceFile {
    pub fn from_instance(inst: &Instance) -> Self {
        let demand = match inst.demand() {
            Demand::Kl { k, l, root } => DemandFile::Kl { k: *k, l: *l, r0: *root },
            Demand::Table { values } => DemandFile::Table(
                values
                    .iter()
                    .map(|(s, v)| (s.iter().collect(), *v))
                    .collect(),
            ),
        };
        InstanceFile {
            format: INSTANCE_FORMAT.into(),
            version: FORMAT_VERSION,
            nodes: inst.n(),
            root: inst.root(),
            free_edges: inst.free_edges().to_vec(),
            purchasable_edges: inst
                .buy_edges()
                .iter()
                .zip(inst.costs())
                .map(|(&(u, v), c)| {
                    let num: i64 = c.numer().try_into().expect("instance costs fit an i64");
                    let den: i64 = c.denom().try_into().expect("instance costs fit an i64");
                    (u, v, num, den)
                })
                .collect(),
            demand,
        }
    }

    pub fn to_instance(&self) -> Result<Instance, Error> {
        if self.format != INSTANCE_FORMAT {
            return Err(Error::Invalid(format!(
                "not an instance file (format field is {:?})",
                self.format
            )));
        }
        if self.version != FORMAT_VERSION {
            return Err(Error::Invalid(format!(
                "unsupported instance version {}",
                self.version
            )));
        }
        let demand = match &self.demand {
            DemandFile::Kl { k, l, r0 } => {
                if k < l {
                    return Err(Error::Invalid("demand needs k >= l".into()));
                }
                Demand::kl(*k, *l, *r0)
            }
            DemandFile::Table(entries) => Demand::table(
                self.nodes,
                entries
                    .iter()
                    .map(|(nodes, v)| (NodeSet::from_nodes(nodes.iter().copied()), *v))
                    .collect(),
            )?,
        };
        let purchasable = self
            .purchasable_edges
            .iter()
            .map(|&(u, v, num, den)| {
                if den <= 0 {
                    return Err(Error::Invalid(format!(
                        "cost denominator must be positive on edge ({u},{v})"
                    )));
                }
                Ok(((u, v), rat(num, den)))
            })
            .collect::<Result<Vec<_>, Error>>()?;
        Instance::new(self.nodes, self.free_edges.clone(), purchasable, demand, self.root)
    }
}

/// Result file schema, version 1. Rationals are `p/q` strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResultFile {
    pub format: String,
    pub version: u32,
    pub chosen: Vec<usize>,
    pub total_cost: String,
    pub lp_lower_bound: String,
    pub orientation: Vec<(usize, usize)>,
    pub rounds: Vec<RoundFile>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoundFile {
    pub active: Vec<usize>,
    pub x: Vec<String>,
    pub objective: String,
    pub dropped: Vec<usize>,
    pub fixed: Vec<usize>,
    pub max_value: Option<String>,
}

fn parse_rat_field(s: &str, what: &str) -> Result<Rat, Error> {
    parse_rat(s).ok_or_else(|| Error::Invalid(format!("bad rational {s:?} in {what}")))
}

impl ResultFile {
    pub fn from_result(res: &AugResult) -> Self {
        ResultFile {
            format: RESULT_FORMAT.into(),
            version: FORMAT_VERSION,
            chosen: res.chosen.clone(),
            total_cost: fmt_rat(&res.total_cost),
            lp_lower_bound: fmt_rat(&res.lp_lower_bound),
            orientation: res.orientation.arcs.clone(),
            rounds: res
                .rounds
                .iter()
                .map(|r| RoundFile {
                    active: r.active.clone(),
                    x: r.x.iter().map(fmt_rat).collect(),
                    objective: fmt_rat(&r.objective),
                    dropped: r.dropped.clone(),
                    fixed: r.fixed.clone(),
                    max_value: r.max_value.as_ref().map(fmt_rat),
                })
                .collect(),
        }
    }

    pub fn to_result(&self) -> Result<AugResult, Error> {
        if self.format != RESULT_FORMAT {
            return Err(Error::Invalid(format!(
                "not a result file (format field is {:?})",
                self.format
            )));
        }
        if self.version != FORMAT_VERSION {
            return Err(Error::Invalid(format!(
                "unsupported result version {}",
                self.version
            )));
        }
        let rounds = self
            .rounds
            .iter()
            .map(|r| {
                Ok(RoundRecord {
                    active: r.active.clone(),
                    x: r
                        .x
                        .iter()
                        .map(|s| parse_rat_field(s, "round values"))
                        .collect::<Result<_, _>>()?,
                    objective: parse_rat_field(&r.objective, "round objective")?,
                    dropped: r.dropped.clone(),
                    fixed: r.fixed.clone(),
                    max_value: r
                        .max_value
                        .as_ref()
                        .map(|s| parse_rat_field(s, "round maximum"))
                        .transpose()?,
                    lp_dump: None,
                })
            })
            .collect::<Result<Vec<_>, Error>>()?;
        Ok(AugResult {
            chosen: self.chosen.clone(),
            total_cost: parse_rat_field(&self.total_cost, "total cost")?,
            lp_lower_bound: parse_rat_field(&self.lp_lower_bound, "LP bound")?,
            orientation: Orientation { arcs: self.orientation.clone() },
            rounds,
        })
    }
}

/// Canonical serialization: pretty JSON with stable field order and a
/// trailing newline.
pub fn emit_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("schemas always serialize");
    s.push('\n');
    s
}

pub fn parse_instance(text: &str) -> Result<Instance, Error> {
    let file: InstanceFile = serde_json::from_str(text)
        .map_err(|e| Error::Invalid(format!("instance parse error: {e}")))?;
    file.to_instance()
}

pub fn parse_result(text: &str) -> Result<AugResult, Error> {
    let file: ResultFile = serde_json::from_str(text)
        .map_err(|e| Error::Invalid(format!("result parse error: {e}")))?;
    file.to_result()
}

#[cfg(test)]
mod tests {
    use super::*;
    use orientcover::rat::rat_int;

    fn sample_instance() -> Instance {
        Instance::new(
            4,
            vec![(0, 1), (1, 2), (2, 3)],
            vec![((3, 0), rat(5, 2)), ((0, 2), rat_int(3))],
            Demand::kl(1, 1, 0),
            0,
        )
        .unwrap()
    }

    #[test]
    fn instance_round_trip_is_exact() {
        let inst = sample_instance();
        let text = emit_json(&InstanceFile::from_instance(&inst));
        let back = parse_instance(&text).unwrap();
        assert_eq!(inst, back);
        // And the serialized form itself is stable.
        assert_eq!(text, emit_json(&InstanceFile::from_instance(&back)));
    }

    #[test]
    fn table_demand_round_trips() {
        // Tabulated form of the rooted demand: 1 on every set avoiding
        // node 0 (crossing supermodular on any graph).
        let entries: Vec<(NodeSet, u32)> = NodeSet::proper_subsets(4)
            .filter(|s| !s.contains(0))
            .map(|s| (s, 1))
            .collect();
        let inst = Instance::new(
            4,
            vec![(0, 1), (1, 2), (2, 3), (3, 0)],
            vec![((0, 2), rat_int(1))],
            Demand::table(4, entries).unwrap(),
            0,
        )
        .unwrap();
        let text = emit_json(&InstanceFile::from_instance(&inst));
        assert_eq!(parse_instance(&text).unwrap(), inst);
    }

    #[test]
    fn decimal_costs_are_rejected() {
        let text = r#"{
            "format": "orientcover-instance",
            "version": 1,
            "nodes": 3,
            "root": 0,
            "free_edges": [[0,1]],
            "purchasable_edges": [[1,2,0.5,1]],
            "demand": {"kl": {"k":1,"l":0,"r0":0}}
        }"#;
        let err = parse_instance(text).unwrap_err();
        assert!(matches!(err, Error::Invalid(_)));
    }

    #[test]
    fn result_round_trip_is_exact() {
        let inst = sample_instance();
        let res = orientcover::solver::solve(&inst).unwrap();
        let text = emit_json(&ResultFile::from_result(&res));
        let back = parse_result(&text).unwrap();
        assert_eq!(back.chosen, res.chosen);
        assert_eq!(back.total_cost, res.total_cost);
        assert_eq!(back.lp_lower_bound, res.lp_lower_bound);
        assert_eq!(back.orientation, res.orientation);
        assert_eq!(back.rounds.len(), res.rounds.len());
    }
}
