//! Exact-arithmetic toolkit for minimum-cost graph augmentation with
//! orientation constraints.
//!
//! Given an undirected graph, a subgraph whose edges are free, per-edge
//! purchase costs, and a nonnegative crossing supermodular demand on node
//! sets (the flagship case being `(k, l)`-edge-connectivity from a root),
//! the solver buys a cheap edge set whose union with the free edges can be
//! oriented to cover the demand. It works by iterative rounding over an
//! exact rational LP with partition and co-partition constraints, fixes
//! every edge whose fractional value reaches 1/6, and certifies the result
//! against brute-force oracles. A companion module reproduces a linear
//! integrality-gap family for the mixed-graph variant of the problem.
//!
//! Everything is exact: values are arbitrary-precision rationals, tightness
//! is equality, and thresholds are compared without tolerance. The price is
//! scale — separation enumerates set partitions, so instances are capped at
//! desk size (see the individual caps on each entry point).
//!
//! # Quick tour
//!
//! ```
//! use orientcover::demand::Demand;
//! use orientcover::rat::rat;
//! use orientcover::solver::{solve, Instance};
//!
//! // A 4-cycle missing one edge; the missing edge can be bought for 5.
//! let inst = Instance::new(
//!     4,
//!     vec![(0, 1), (1, 2), (2, 3)],
//!     vec![((3, 0), rat(5, 1))],
//!     Demand::kl(1, 1, 0),
//!     0,
//! )
//! .unwrap();
//! let result = solve(&inst).unwrap();
//! assert_eq!(result.total_cost, rat(5, 1));
//! assert_eq!(result.lp_lower_bound, rat(5, 1));
//! ```
//!
//! The [`guide`] module mirrors the book in `book/`; its chapters double as
//! doc-tests so the narrative stays in sync with the code.

pub mod demand;
pub mod error;
pub mod exactlp;
pub mod gaplab;
pub mod gen;
pub mod graph;
pub mod oracle;
pub mod orient;
pub mod rat;
pub mod separation;
pub mod setfam;
pub mod solver;
pub mod uncross;

pub mod guide;

pub use error::Error;
pub use rat::Rat;
