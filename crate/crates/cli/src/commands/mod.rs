pub mod attack;
pub mod capacity;
pub mod centrality;
pub mod correlate;
pub mod generate;
