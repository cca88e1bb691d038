//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by the toolkit.
///
/// `Infeasible` and `CapExceeded` are expected outcomes on bad inputs;
/// `Contract` flags a broken internal guarantee and is never expected on a
/// valid run (the CLI maps it to its own exit code so anomalies are loud).
#[derive(Debug, Error)]
pub enum Error {
    /// The instance admits no feasible augmentation. Carries a short
    /// human-readable witness description.
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// A documented desk-scale size cap was exceeded.
    #[error("size cap exceeded: {what} is {got}, cap is {cap}")]
    CapExceeded {
        what: &'static str,
        got: usize,
        cap: usize,
    },

    /// Malformed input (self-loops, negative costs, bad bounds, ...).
    #[error("invalid input: {0}")]
    Invalid(String),

    /// An internal guarantee failed. Always a bug or an anomaly worth a
    /// report, never a normal outcome.
    #[error("internal contract violation: {0}")]
    Contract(String),
}
