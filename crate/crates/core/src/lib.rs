//! Graph analytics through generalized sparse matrix-vector products.
//!
//! Algorithms are written as vertex programs ([`GraphProgram`]): each
//! active vertex sends a message, messages are processed along edges and
//! reduced per destination, and the reduced value is applied to the
//! destination's state. The [`Engine`] runs one such superstep as a sparse
//! matrix-sparse vector product over a row-partitioned, doubly compressed
//! sparse column copy of the transposed adjacency matrix.
//!
//! ```
//! use spgraph::algorithms::sssp;
//! use spgraph::{EdgeTriple, Engine, EngineConfig, Graph, VertexId};
//!
//! # fn main() -> Result<(), Box<dyn std::error::Error>> {
//! let edges = vec![EdgeTriple::new(0, 1, 2.0), EdgeTriple::new(1, 2, 3.0)];
//! let config = EngineConfig::with_threads(4);
//! let graph = Graph::build(&edges, 3, config.total_partitions())?;
//! let engine = Engine::new(config)?;
//! let run = sssp(&engine, &graph, VertexId(0))?;
//! assert_eq!(run.result, vec![0.0, 2.0, 5.0]);
//! # Ok(())
//! # }
//! ```

pub mod algorithms;
pub mod dcsc;
pub mod engine;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod program;
pub mod sparse_vector;
pub mod types;

pub use dcsc::DcscPartition;
pub use engine::{degree_vector, run_graph_program, DegreeKind, Engine, EngineError, Frontier, IterationStats};
pub use graph::{build_graph, transpose_triples, Graph, GraphError};
pub use program::{Activity, CallbackError, GraphProgram, VertexPropertyStore};
pub use sparse_vector::SparseVector;
pub use types::{Direction, EdgeTriple, EngineConfig, VertexId};
