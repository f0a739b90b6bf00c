//! Single-source shortest paths as frontier-driven Bellman-Ford: only
//! vertices whose distance dropped in the previous superstep relax their
//! out-edges.

use super::{check_vertex, AlgorithmError, AlgorithmRun, DistanceState, UNREACHED};
use crate::engine::Engine;
use crate::graph::Graph;
use crate::program::{CallbackError, GraphProgram, VertexPropertyStore};
use crate::types::VertexId;

#[derive(Clone, Copy, Debug, Default)]
pub struct SsspProgram;

impl GraphProgram for SsspProgram {
    type Property = DistanceState;
    type Message = f64;
    type Value = f64;
    type Edge = f64;

    fn send_message(&self, _: VertexId, p: &DistanceState) -> Option<f64> {
        Some(p.distance)
    }

    fn process_message(&self, m: &f64, w: &f64, _: &DistanceState) -> Result<f64, CallbackError> {
        // Saturates at UNREACHED; never wraps below it.
        Ok(m + w)
    }

    fn reduce_identity(&self) -> f64 {
        UNREACHED
    }

    fn reduce(&self, acc: &mut f64, v: f64) {
        *acc = acc.min(v);
    }

    fn apply(&self, d: &f64, p: &mut DistanceState) {
        p.distance = p.distance.min(*d);
    }
}

/// Checks that every weight is a non-negative number.
pub fn check_weights(graph: &Graph<f64>) -> Result<(), AlgorithmError> {
    for part in graph.transpose_partitions() {
        if let Some((dst, src, &weight)) = part.entries().find(|(_, _, w)| !(**w >= 0.0)) {
            return Err(AlgorithmError::NegativeWeight { src, dst, weight });
        }
    }
    Ok(())
}

pub fn sssp(
    engine: &Engine,
    graph: &Graph<f64>,
    source: VertexId,
) -> Result<AlgorithmRun<Vec<f64>>, AlgorithmError> {
    check_vertex(source, graph.num_vertices())?;
    check_weights(graph)?;
    let mut store = VertexPropertyStore::from_fn(graph.num_vertices(), |_| DistanceState {
        distance: UNREACHED,
    });
    store.property_mut(source).distance = 0.0;
    store.set_active(source, true);
    let stats = engine.run(graph, &SsspProgram, &mut store)?;
    Ok(AlgorithmRun {
        result: store.properties().iter().map(|p| p.distance).collect(),
        stats,
    })
}
