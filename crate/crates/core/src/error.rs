use thiserror::Error;

use crate::centrality::IndexKind;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty topology")]
    EmptyTopology,

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("malformed XML at byte {offset}: {message}")]
    Xml { offset: u64, message: String },

    #[error("edge {edge} references undeclared node {node:?}")]
    UndeclaredNode { edge: String, node: String },

    #[error("unknown capacity unit {0:?} (expected G, M, K or none)")]
    UnknownUnit(String),

    #[error("invalid capacity {value} on edge {edge}: capacities must be finite and > 0")]
    InvalidCapacity { edge: String, value: f64 },

    #[error("invalid input encoding: {0}")]
    Encoding(String),

    #[error("cannot read input: {0}")]
    Io(String),

    #[error("node {0} out of range")]
    NodeOutOfRange(usize),

    #[error("degenerate graph: {0}")]
    Degenerate(String),

    #[error("{0} undefined across components")]
    Disconnected(IndexKind),

    #[error("power iteration did not converge after {iterations} iterations (last residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("weighted PageRank out of scope")]
    WeightedPagerank,

    #[error("damping factor {0} outside [0, 1)")]
    InvalidDamping(f64),

    #[error("mismatched node sets: {0} vs {1} nodes")]
    MismatchedNodes(usize, usize),

    #[error("degenerate: constant scores")]
    ConstantScores,

    #[error("invalid attack plan: {0}")]
    InvalidPlan(String),

    #[error("empty residual graph")]
    EmptyResidual,

    #[error("envelope traces disagree: {0}")]
    MismatchedSteps(String),

    #[error("flat envelope")]
    FlatEnvelope,

    #[error("invalid flow query: {0}")]
    InvalidFlowQuery(String),

    #[error("capacity analysis requires a capacitated topology")]
    NotCapacitated,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// True for errors caused by malformed input files rather than by the
    /// analysis itself.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::EmptyTopology
                | Error::Parse { .. }
                | Error::Xml { .. }
                | Error::UndeclaredNode { .. }
                | Error::UnknownUnit(_)
                | Error::InvalidCapacity { .. }
                | Error::Io(_)
                | Error::Encoding(_)
        )
    }
}
