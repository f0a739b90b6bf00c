//! Row-partitioned adjacency storage.
//!
//! A [`Graph`] keeps the transpose `Gᵀ` of its adjacency matrix: column `j`
//! of `Gᵀ` lists the out-neighbors of `j`, which is exactly what a message
//! sent by `j` along its out-edges has to visit. The matrix is cut into
//! horizontal slabs; each slab owns a disjoint range of destination rows
//! and is stored as an independent [`DcscPartition`].

use std::ops::Range;
use std::sync::OnceLock;

use rayon::prelude::*;
use thiserror::Error;

use crate::dcsc::DcscPartition;
use crate::types::{EdgeTriple, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge {src} -> {dst} references a vertex outside 0..{num_vertices}")]
    EndpointOutOfRange {
        src: VertexId,
        dst: VertexId,
        num_vertices: usize,
    },
    #[error("duplicate edge {src} -> {dst}")]
    DuplicateEdge { src: VertexId, dst: VertexId },
    #[error("graph has no vertices but {num_edges} edges")]
    EdgesWithoutVertices { num_edges: usize },
    #[error("partition count must be at least 1")]
    NoPartitions,
    #[error("vertex count {0} exceeds the 32-bit id space")]
    TooManyVertices(usize),
}

#[derive(Debug)]
pub struct Graph<E> {
    num_vertices: usize,
    num_edges: usize,
    num_partitions: usize,
    transpose: Vec<DcscPartition<E>>,
    forward: OnceLock<Vec<DcscPartition<E>>>,
}

/// Contiguous row ranges with roughly equal weight each, covering
/// `0..weights.len()`. Falls back to equal row counts when every weight is
/// zero.
pub fn balanced_row_split(weights: &[usize], parts: usize) -> Vec<Range<usize>> {
    assert!(parts >= 1);
    let n = weights.len();
    let total: usize = weights.iter().sum();
    let mut bounds = Vec::with_capacity(parts + 1);
    bounds.push(0);
    if total == 0 {
        bounds.extend((1..parts).map(|i| i * n / parts));
    } else {
        let (mut row, mut prefix) = (0usize, 0usize);
        for i in 1..parts {
            let target = i as u128 * total as u128;
            while row < n && (prefix as u128) * (parts as u128) < target {
                prefix += weights[row];
                row += 1;
            }
            bounds.push(row);
        }
    }
    bounds.push(n);
    bounds.windows(2).map(|w| w[0]..w[1]).collect()
}

/// Swaps source and destination of every triple.
pub fn transpose_triples<E: Clone>(edges: &[EdgeTriple<E>]) -> Vec<EdgeTriple<E>> {
    edges.iter().cloned().map(EdgeTriple::reversed).collect()
}

/// Builds row-partitioned DCSC slabs from `(row, col, value)` entries.
fn build_partitions<E: Send>(
    num_rows: usize,
    num_partitions: usize,
    entries: Vec<(u32, u32, E)>,
) -> Result<Vec<DcscPartition<E>>, (u32, u32)> {
    let mut row_weights = vec![0usize; num_rows];
    for &(row, _, _) in &entries {
        row_weights[row as usize] += 1;
    }
    let ranges = balanced_row_split(&row_weights, num_partitions);
    drop(row_weights);

    let mut owner = vec![0u32; num_rows];
    for (p, r) in ranges.iter().enumerate() {
        owner[r.clone()].fill(p as u32);
    }
    let mut buckets: Vec<Vec<(u32, u32, E)>> = (0..num_partitions).map(|_| Vec::new()).collect();
    for (row, col, value) in entries {
        buckets[owner[row as usize] as usize].push((col, row, value));
    }

    ranges
        .into_par_iter()
        .zip(buckets.into_par_iter())
        .map(|(rows, mut bucket)| {
            bucket.sort_unstable_by_key(|&(c, r, _)| (c, r));
            DcscPartition::from_sorted(rows, bucket).map_err(|d| (d.row, d.col))
        })
        .collect()
}

impl<E: Clone + Send + Sync> Graph<E> {
    /// Builds the partitioned transpose of the adjacency matrix described by
    /// `edges`. Edges must already be free of duplicates.
    pub fn build(
        edges: &[EdgeTriple<E>],
        num_vertices: usize,
        num_partitions: usize,
    ) -> Result<Self, GraphError> {
        if num_partitions == 0 {
            return Err(GraphError::NoPartitions);
        }
        if num_vertices == 0 && !edges.is_empty() {
            return Err(GraphError::EdgesWithoutVertices {
                num_edges: edges.len(),
            });
        }
        if num_vertices > u32::MAX as usize {
            return Err(GraphError::TooManyVertices(num_vertices));
        }
        if let Some(e) = edges
            .iter()
            .find(|e| e.src.index() >= num_vertices || e.dst.index() >= num_vertices)
        {
            return Err(GraphError::EndpointOutOfRange {
                src: e.src,
                dst: e.dst,
                num_vertices,
            });
        }
        // Gᵀ(dst, src) = value
        let entries: Vec<_> = edges
            .iter()
            .map(|e| (e.dst.0, e.src.0, e.value.clone()))
            .collect();
        let transpose = build_partitions(num_vertices, num_partitions, entries).map_err(
            |(row, col)| GraphError::DuplicateEdge {
                src: VertexId(col),
                dst: VertexId(row),
            },
        )?;
        Ok(Graph {
            num_vertices,
            num_edges: edges.len(),
            num_partitions,
            transpose,
            forward: OnceLock::new(),
        })
    }

    /// Partitions of `G` itself, built on first use.
    pub fn forward_partitions(&self) -> &[DcscPartition<E>] {
        self.forward.get_or_init(|| {
            let entries: Vec<_> = self
                .transpose
                .iter()
                .flat_map(|p| p.entries().map(|(r, c, v)| (c.0, r.0, v.clone())))
                .collect();
            build_partitions(self.num_vertices, self.num_partitions, entries)
                .expect("transpose of a duplicate-free matrix has no duplicates")
        })
    }

    /// Reconstructs the edge list, ordered by source then destination.
    pub fn edges(&self) -> Vec<EdgeTriple<E>> {
        let mut out: Vec<_> = self
            .transpose
            .iter()
            .flat_map(|p| {
                p.entries().map(|(r, c, v)| EdgeTriple {
                    src: c,
                    dst: r,
                    value: v.clone(),
                })
            })
            .collect();
        out.sort_unstable_by_key(|e| (e.src, e.dst));
        out
    }
}

impl<E> Graph<E> {
    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    pub fn num_partitions(&self) -> usize {
        self.num_partitions
    }

    pub fn transpose_partitions(&self) -> &[DcscPartition<E>] {
        &self.transpose
    }

    pub fn has_forward_partitions(&self) -> bool {
        self.forward.get().is_some()
    }

    /// Out-degree of every vertex, read off the column lengths of `Gᵀ`.
    pub fn out_degrees(&self) -> Vec<u64> {
        let mut deg = vec![0u64; self.num_vertices];
        for p in &self.transpose {
            for (i, w) in p.col_starts.windows(2).enumerate() {
                deg[p.col_ids[i] as usize] += (w[1] - w[0]) as u64;
            }
        }
        deg
    }
}

/// Shorthand for [`Graph::build`].
pub fn build_graph<E: Clone + Send + Sync>(
    edges: &[EdgeTriple<E>],
    num_vertices: usize,
    num_partitions: usize,
) -> Result<Graph<E>, GraphError> {
    Graph::build(edges, num_vertices, num_partitions)
}
