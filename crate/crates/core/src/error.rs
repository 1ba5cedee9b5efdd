use crate::graph::NodeId;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("edge ({0}, {1}) already present")]
    EdgeAlreadyPresent(NodeId, NodeId),
    #[error("edge ({0}, {1}) absent")]
    EdgeAbsent(NodeId, NodeId),
    #[error("self-loop on node {0}")]
    SelfLoop(NodeId),
    #[error("node {0} is not a member of the target community")]
    NotAMember(NodeId),

    #[error("not a partition: {0}")]
    NotAPartition(String),
    #[error("target community needs at least 2 members, got {0}")]
    TargetTooSmall(usize),
    #[error("unknown community index {0}")]
    UnknownCommunity(usize),

    #[error("graph has no nodes")]
    EmptyGraph,
    #[error("modularity is undefined on a graph without edges")]
    EmptyEdgeSet,
    #[error("edge deletion loss needs at least 2 edges, graph has {0}")]
    DegenerateEdgeCount(usize),
    #[error("inter-community loss needs two distinct communities, got {0} twice")]
    SameCommunity(usize),

    #[error("update {0} does not touch the target community")]
    IllegalUpdate(String),
    #[error("no candidate edge deletion available")]
    NoCandidateDeletion,
    #[error("no candidate edge addition available")]
    NoCandidateAddition,
    #[error("no legal update left to apply")]
    Exhausted,
    #[error("budget must be at least 1")]
    ZeroBudget,

    #[error("no community with at least 2 members")]
    NoEligibleCommunity,
    #[error("runs must be at least 1")]
    ZeroRuns,
    #[error("empty input")]
    EmptyInput,
    #[error("unknown identifier '{0}'")]
    UnknownId(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("self-loop on line {0}")]
    SelfLoopLine(usize),
    #[error("edge references undeclared node id {0}")]
    DanglingEdge(String),
    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),
    #[error("serialization failed: {0}")]
    Serialize(String),
}
