use std::marker::PhantomData;

use super::{check_vertex, AlgorithmError, AlgorithmRun, DistanceState, UNREACHED};
use crate::engine::Engine;
use crate::graph::Graph;
use crate::program::{CallbackError, GraphProgram, VertexPropertyStore};
use crate::types::VertexId;

/// Hop-count relaxation: every newly reached vertex offers `distance + 1`
/// to its neighbors.
pub struct BfsProgram<E>(PhantomData<fn(&E)>);

impl<E> Default for BfsProgram<E> {
    fn default() -> Self {
        BfsProgram(PhantomData)
    }
}

impl<E: Send + Sync> GraphProgram for BfsProgram<E> {
    type Property = DistanceState;
    type Message = f64;
    type Value = f64;
    type Edge = E;

    fn send_message(&self, _: VertexId, p: &DistanceState) -> Option<f64> {
        Some(p.distance)
    }

    fn process_message(&self, m: &f64, _: &E, _: &DistanceState) -> Result<f64, CallbackError> {
        Ok(m + 1.0)
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

/// Minimum hop count from `root` to every vertex; [`UNREACHED`] where no
/// path exists. Expects a symmetrized graph for undirected semantics.
pub fn bfs<E: Clone + Send + Sync>(
    engine: &Engine,
    graph: &Graph<E>,
    root: VertexId,
) -> Result<AlgorithmRun<Vec<f64>>, AlgorithmError> {
    check_vertex(root, graph.num_vertices())?;
    let mut store = VertexPropertyStore::from_fn(graph.num_vertices(), |_| DistanceState {
        distance: UNREACHED,
    });
    store.property_mut(root).distance = 0.0;
    store.set_active(root, true);
    let stats = engine.run(graph, &BfsProgram::<E>::default(), &mut store)?;
    Ok(AlgorithmRun {
        result: store.properties().iter().map(|p| p.distance).collect(),
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::{EdgeTriple, EngineConfig};

    fn engine() -> Engine {
        Engine::new(EngineConfig::default()).unwrap()
    }

    #[test]
    fn isolated_root() {
        let g: Graph<()> = Graph::build(&[], 4, 2).unwrap();
        let run = bfs(&engine(), &g, VertexId(0)).unwrap();
        assert_eq!(run.result, vec![0.0, UNREACHED, UNREACHED, UNREACHED]);
        assert_eq!(run.stats.len(), 1);
    }

    #[test]
    fn path_graph() {
        let edges: Vec<_> = [(0, 1), (1, 0), (1, 2), (2, 1)]
            .into_iter()
            .map(|(s, d)| EdgeTriple::new(s, d, ()))
            .collect();
        let g = Graph::build(&edges, 3, 2).unwrap();
        let run = bfs(&engine(), &g, VertexId(0)).unwrap();
        assert_eq!(run.result, vec![0.0, 1.0, 2.0]);
    }

    #[test]
    fn root_out_of_range() {
        let g: Graph<()> = Graph::build(&[], 2, 1).unwrap();
        assert!(matches!(
            bfs(&engine(), &g, VertexId(2)),
            Err(AlgorithmError::VertexOutOfRange { .. })
        ));
    }
}
