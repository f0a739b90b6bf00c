//! Triangle counting on an acyclic orientation (every edge `u -> v` with
//! `u < v`), as two single-superstep programs.
//!
//! The first collects each vertex's in-neighbor ids. The second ships
//! those lists along out-edges; the receiver intersects each incoming
//! list with its own. A triangle `a < b < c` is found exactly once, at
//! `c`, through the list sent by `b`.

use std::marker::PhantomData;

use super::{AlgorithmError, AlgorithmRun};
use crate::engine::{Engine, IterationStats};
use crate::graph::Graph;
use crate::program::{Activity, CallbackError, GraphProgram, VertexPropertyStore};
use crate::types::VertexId;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TriangleState {
    /// In-neighbor ids, strictly ascending.
    pub neighbor_ids: Vec<u32>,
    pub local_count: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TriangleCounts {
    pub total: u64,
    pub per_vertex: Vec<u64>,
}

pub struct CollectInNeighbors<E>(PhantomData<fn(&E)>);

impl<E: Send + Sync> GraphProgram for CollectInNeighbors<E> {
    type Property = TriangleState;
    type Message = u32;
    type Value = Vec<u32>;
    type Edge = E;

    fn activity(&self) -> Activity {
        Activity::All
    }

    fn send_message(&self, v: VertexId, _: &TriangleState) -> Option<u32> {
        Some(v.0)
    }

    fn process_message(&self, id: &u32, _: &E, _: &TriangleState) -> Result<Vec<u32>, CallbackError> {
        Ok(vec![*id])
    }

    fn reduce_identity(&self) -> Vec<u32> {
        Vec::new()
    }

    fn reduce(&self, acc: &mut Vec<u32>, mut ids: Vec<u32>) {
        if acc.is_empty() {
            *acc = ids;
        } else {
            acc.append(&mut ids);
        }
    }

    fn apply(&self, ids: &Vec<u32>, p: &mut TriangleState) {
        let mut ids = ids.clone();
        ids.sort_unstable();
        p.neighbor_ids = ids;
    }
}

pub struct IntersectNeighborLists<E>(PhantomData<fn(&E)>);

impl<E: Send + Sync> GraphProgram for IntersectNeighborLists<E> {
    type Property = TriangleState;
    type Message = Vec<u32>;
    type Value = u64;
    type Edge = E;

    fn activity(&self) -> Activity {
        Activity::All
    }

    fn send_message(&self, _: VertexId, p: &TriangleState) -> Option<Vec<u32>> {
        (!p.neighbor_ids.is_empty()).then(|| p.neighbor_ids.clone())
    }

    fn process_message(&self, list: &Vec<u32>, _: &E, dst: &TriangleState) -> Result<u64, CallbackError> {
        Ok(sorted_intersection_size(list, &dst.neighbor_ids))
    }

    fn reduce_identity(&self) -> u64 {
        0
    }

    fn reduce(&self, acc: &mut u64, v: u64) {
        *acc += v;
    }

    fn apply(&self, count: &u64, p: &mut TriangleState) {
        p.local_count = *count;
    }
}

/// Size of the intersection of two strictly ascending lists.
pub fn sorted_intersection_size(a: &[u32], b: &[u32]) -> u64 {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

pub fn triangle_count<E: Clone + Send + Sync>(
    engine: &Engine,
    graph: &Graph<E>,
) -> Result<AlgorithmRun<TriangleCounts>, AlgorithmError> {
    for part in graph.transpose_partitions() {
        if let Some((dst, src, _)) = part.entries().find(|(d, s, _)| s >= d) {
            return Err(AlgorithmError::NotAcyclicOrientation { src, dst });
        }
    }
    let mut store = VertexPropertyStore::from_fn(graph.num_vertices(), |_| TriangleState::default());
    let mut stats: Vec<IterationStats> =
        engine.run_with::<_, crate::SparseVector<u32>>(graph, &CollectInNeighbors::<E>(PhantomData), &mut store, 1, |_, _| {
            std::ops::ControlFlow::Continue(())
        })?;
    let second = engine.run_with::<_, crate::SparseVector<Vec<u32>>>(
        graph,
        &IntersectNeighborLists::<E>(PhantomData),
        &mut store,
        1,
        |_, _| std::ops::ControlFlow::Continue(()),
    )?;
    let offset = stats.len();
    stats.extend(second.into_iter().map(|mut s| {
        s.iteration += offset;
        s
    }));
    let per_vertex: Vec<u64> = store.properties().iter().map(|p| p.local_count).collect();
    Ok(AlgorithmRun {
        result: TriangleCounts {
            total: per_vertex.iter().sum(),
            per_vertex,
        },
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::{EdgeTriple, EngineConfig};

    fn run(edges: &[(u32, u32)], n: usize) -> Result<TriangleCounts, AlgorithmError> {
        let edges: Vec<_> = edges.iter().map(|&(s, d)| EdgeTriple::new(s, d, ())).collect();
        let g = Graph::build(&edges, n, 2).unwrap();
        let e = Engine::new(EngineConfig::default()).unwrap();
        triangle_count(&e, &g).map(|r| r.result)
    }

    #[test]
    fn single_triangle() {
        let c = run(&[(0, 1), (1, 2), (0, 2)], 3).unwrap();
        assert_eq!(c.total, 1);
        assert_eq!(c.per_vertex, vec![0, 0, 1]);
    }

    #[test]
    fn star_has_none() {
        assert_eq!(run(&[(0, 1), (0, 2), (0, 3), (0, 4)], 5).unwrap().total, 0);
    }

    #[test]
    fn k4_has_four() {
        let e = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        assert_eq!(run(&e, 4).unwrap().total, 4);
    }

    #[test]
    fn rejects_backward_edge() {
        assert!(matches!(
            run(&[(1, 0)], 2),
            Err(AlgorithmError::NotAcyclicOrientation { .. })
        ));
    }

    #[test]
    fn intersection() {
        assert_eq!(sorted_intersection_size(&[1, 3, 5, 7], &[2, 3, 4, 7, 9]), 2);
        assert_eq!(sorted_intersection_size(&[], &[1]), 0);
    }
}
