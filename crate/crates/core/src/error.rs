use thiserror::Error;

use crate::graph::VertexId;

/// Errors produced while building, transforming or analyzing DAG tasks.
#[derive(Debug, Error)]
pub enum Error {
    #[error("task graph has no vertices")]
    EmptyGraph,

    #[error("unknown vertex {0}")]
    UnknownVertex(u64),

    #[error("duplicate vertex id {0}")]
    DuplicateVertex(u64),

    #[error("self-loop on vertex {0}")]
    SelfLoop(u64),

    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(u64, u64),

    #[error("edge set contains a cycle through vertex {0}")]
    Cycle(VertexId),

    #[error("edge ({0}, {1}) is redundant: {0} is already an ancestor of {1}")]
    RedundantEdge(VertexId, VertexId),

    #[error("edge ({0}, {1}) would close a cycle: {0} is a descendant of {1}")]
    CyclicEdge(VertexId, VertexId),

    #[error("core count must be at least 1")]
    ZeroCores,

    #[error(
        "first generalized path has length {first}, but the longest path has length {longest}"
    )]
    NotLongestPath { first: u64, longest: u64 },

    #[error("generalized paths overlap on vertex {0}")]
    OverlappingPaths(VertexId),

    #[error(
        "vertex {later} does not descend from its predecessor {earlier} in the generalized path"
    )]
    NotGeneralizedPath { earlier: VertexId, later: VertexId },

    #[error("limit {limit} outside the meaningful range [{len}, {vol}]")]
    LimitOutOfRange { limit: f64, len: u64, vol: u64 },

    #[error("invalid priority order: {0}")]
    InvalidPriority(String),

    #[error("simulated makespan {observed} exceeds bound {bound}")]
    SoundnessViolation { observed: u64, bound: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
