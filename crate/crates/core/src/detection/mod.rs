//! Community detectors playing the adversary.

mod greedy;
mod label_propagation;
mod louvain;

pub use greedy::detect_greedy_agglomerative;
pub use label_propagation::detect_label_propagation;
pub use louvain::detect_louvain;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Anything mapping a graph and a seed to a partition. Implement this to
/// plug another detector into the harness.
pub trait Detector: Sync {
    fn name(&self) -> &str;
    fn detect(&self, graph: &Graph, seed: u64) -> Result<Partition>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DetectorId {
    Louvain,
    LabelPropagation,
    GreedyAgglomerative,
}

impl DetectorId {
    pub const ALL: [DetectorId; 3] =
        [DetectorId::Louvain, DetectorId::LabelPropagation, DetectorId::GreedyAgglomerative];

    /// Short name used in reports and on the command line.
    pub fn as_str(self) -> &'static str {
        match self {
            DetectorId::Louvain => "louvain",
            DetectorId::LabelPropagation => "labelprop",
            DetectorId::GreedyAgglomerative => "greedy",
        }
    }
}

impl fmt::Display for DetectorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DetectorId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "louvain" | "louv" => Ok(DetectorId::Louvain),
            "labelprop" | "label_propagation" | "lab" => Ok(DetectorId::LabelPropagation),
            "greedy" | "greedy_agglomerative" | "gre" => Ok(DetectorId::GreedyAgglomerative),
            _ => Err(Error::UnknownId(s.to_string())),
        }
    }
}

impl Detector for DetectorId {
    fn name(&self) -> &str {
        self.as_str()
    }

    fn detect(&self, graph: &Graph, seed: u64) -> Result<Partition> {
        match self {
            DetectorId::Louvain => detect_louvain(graph, seed),
            DetectorId::LabelPropagation => detect_label_propagation(graph, seed),
            DetectorId::GreedyAgglomerative => detect_greedy_agglomerative(graph),
        }
    }
}

fn require_nodes(graph: &Graph) -> Result<()> {
    if graph.node_count() == 0 {
        Err(Error::EmptyGraph)
    } else {
        Ok(())
    }
}
