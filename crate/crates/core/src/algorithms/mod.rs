//! Reference vertex programs and their drivers.

use thiserror::Error;

use crate::engine::{EngineError, IterationStats};
use crate::types::VertexId;

pub mod bfs;
pub mod cf;
pub mod pagerank;
pub mod sssp;
pub mod triangles;

pub use bfs::bfs;
pub use cf::{collaborative_filtering_gd, CfConfig, CfModel, LatentVector, Side};
pub use pagerank::{pagerank, PageRankConfig, PageRankState};
pub use sssp::sssp;
pub use triangles::{triangle_count, TriangleCounts, TriangleState};

/// Distance label used by BFS (hop count) and SSSP (path weight).
/// Unreached vertices hold [`UNREACHED`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DistanceState {
    pub distance: f64,
}

pub const UNREACHED: f64 = f64::INFINITY;

/// An algorithm's per-vertex result plus the engine's superstep stats.
#[derive(Clone, Debug)]
pub struct AlgorithmRun<T> {
    pub result: T,
    pub stats: Vec<IterationStats>,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgorithmError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("vertex {vertex} out of range for a graph with {num_vertices} vertices")]
    VertexOutOfRange { vertex: VertexId, num_vertices: usize },
    #[error("edge {src} -> {dst} has negative weight {weight}")]
    NegativeWeight { src: VertexId, dst: VertexId, weight: f64 },
    #[error("edge {src} -> {dst} is not oriented from lower to higher id")]
    NotAcyclicOrientation { src: VertexId, dst: VertexId },
    #[error("edge {src} -> {dst} does not run from a user to an item")]
    NotBipartite { src: VertexId, dst: VertexId },
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub(crate) fn check_vertex(v: VertexId, num_vertices: usize) -> Result<(), AlgorithmError> {
    if v.index() < num_vertices {
        Ok(())
    } else {
        Err(AlgorithmError::VertexOutOfRange { vertex: v, num_vertices })
    }
}
