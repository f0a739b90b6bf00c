//! Graph loading, preprocessing, synthetic generation, and serialization.

use std::path::PathBuf;

use thiserror::Error;

use crate::types::VertexId;

pub mod binary;
pub mod bipartite;
pub mod edgelist;
pub mod mtx;
pub mod preprocess;
pub mod rmat;

pub use binary::{read_binary, write_binary};
pub use bipartite::bipartite_generate;
pub use edgelist::{load_edge_list, write_edge_list};
pub use mtx::load_matrix_market;
pub use preprocess::{preprocess, PreprocessMode};
pub use rmat::{rmat_generate, RmatParams};

#[derive(Debug, Error)]
pub enum GraphIoError {
    #[error("{}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unsupported Matrix Market header: {0}")]
    UnsupportedHeader(String),
    #[error("line {line}: entry ({row}, {col}) outside the declared {rows}x{cols} matrix")]
    OutOfBounds {
        line: usize,
        row: u64,
        col: u64,
        rows: u64,
        cols: u64,
    },
    #[error("bad magic bytes {0:?}, expected \"GMB1\"")]
    BadMagic([u8; 4]),
    #[error("truncated file: need {expected} bytes, found {actual}")]
    Truncated { expected: u64, actual: u64 },
    #[error("header declares {num_edges} edges ({expected} bytes) but the file has {actual} bytes")]
    LengthMismatch {
        num_edges: u64,
        expected: u64,
        actual: u64,
    },
    #[error("record {index}: edge {src} -> {dst} outside {num_vertices} vertices")]
    BadRecord {
        index: u64,
        src: u64,
        dst: u64,
        num_vertices: u64,
    },
    #[error("edge {src} -> {dst} does not run from a user (< {num_users}) to an item")]
    NotBipartite {
        src: VertexId,
        dst: VertexId,
        num_users: usize,
    },
    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),
}

impl GraphIoError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        GraphIoError::Io {
            path: path.into(),
            source,
        }
    }
}
