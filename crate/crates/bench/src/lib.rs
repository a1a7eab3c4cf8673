//! Shared fixtures for the benchmarks.

use toposcope_core::graph::Topology;
use toposcope_core::synth::{preferential_attachment, scale_free_capacitated};

/// Binary preferential-attachment graph with two links per new node.
pub fn scale_free(n: usize) -> Topology {
    preferential_attachment(n, 2, 0x5eed).expect("valid generator parameters")
}

pub fn scale_free_weighted(n: usize) -> Topology {
    scale_free_capacitated(n, 2, 0x5eed).expect("valid generator parameters")
}
