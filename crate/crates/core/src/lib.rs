//! Hiding a community from community detection by greedy edge rewiring.
//!
//! Two deceivers rewire edges touching a target community `H`: one greedily
//! minimizes modularity of a frozen partition, the other greedily maximizes
//! the safeness of `H`. The harness measures how well each hides `H` from
//! Louvain, label propagation and greedy agglomerative detection.

pub mod detection;
pub mod error;
pub mod graph;
pub mod harness;
pub mod io;
pub mod modularity;
pub mod partition;
pub mod safeness;
pub mod score;

#[cfg(test)]
mod testutil;

pub use detection::{Detector, DetectorId};
pub use error::{Error, Result};
pub use graph::{EdgeUpdate, Graph, NodeId, UpdateKind};
pub use harness::{evaluate, evaluate_detailed, Deceiver, DeceptionReport, EvalConfig, Status, TargetChoice};
pub use modularity::{modularity, run_modmin, DeceptionRun};
pub use partition::{Partition, TargetCommunity};
pub use safeness::{community_safeness, run_safgain};
pub use score::{deception_score, ScoreBreakdown};
