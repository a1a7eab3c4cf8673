//! Router-level topology analysis: centrality indices, rank correlation,
//! node-removal attacks and aggregate max-flow capacity.

pub mod attack;
pub mod centrality;
pub mod error;
pub mod flow;
pub mod graph;
pub mod ingest;
pub mod rankstats;
pub mod synth;

pub use attack::{AttackPlan, AttackTrace, EnvelopeReport, Metric, RemovalMode};
pub use centrality::{CentralityVector, IndexKind, DEFAULT_DAMPING};
pub use error::{Error, Result};
pub use flow::{aggregate_max_flow, max_flow, CapacityTrace};
pub use graph::{NodeId, Topology, TopologyBuilder};
pub use ingest::{Format, IngestConfig, IngestReport, RangePolicy};
pub use rankstats::{CorrelationMatrix, Ranking};
