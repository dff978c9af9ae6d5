//! Influence spread under the Linear Threshold model.
//!
//! Exact evaluation for small graphs, Monte Carlo estimation for large ones,
//! closed forms for complete UISLT graphs and degree-normalized trees, node
//! rankings, and greedy / G1-sieving seed selection.

pub mod cli;
pub mod closed_form;
pub mod error;
pub mod evaluator;
pub mod exact;
pub mod generate;
pub mod graph;
pub mod ingest;
pub mod io;
pub mod montecarlo;
pub mod optimize;
pub mod rank;
pub mod rng;

pub use error::{Error, Result};
pub use evaluator::Evaluator;
pub use graph::{InfluenceGraph, SeedSet, TransitionMatrix, UisltParams};
