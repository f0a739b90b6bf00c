//! PageRank in its unnormalized form: every rank starts at 1.0 and
//! `rank(v) = r + (1 - r) * Σ rank(u) / out_degree(u)` over in-neighbors `u`.
//!
//! Vertices without out-edges send nothing, so their mass is dropped.
//! Vertices without in-edges never receive a message and keep their rank.

use std::marker::PhantomData;
use std::ops::ControlFlow;

use super::{AlgorithmError, AlgorithmRun};
use crate::engine::Engine;
use crate::sparse_vector::SparseVector;
use crate::graph::Graph;
use crate::program::{Activity, CallbackError, GraphProgram, VertexPropertyStore};
use crate::types::VertexId;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PageRankConfig {
    /// Random-surf probability.
    pub r: f64,
    pub max_iterations: usize,
    /// Stop once no rank moves by more than this between supersteps.
    pub tolerance: Option<f64>,
}

impl Default for PageRankConfig {
    fn default() -> Self {
        PageRankConfig {
            r: 0.15,
            max_iterations: 100,
            tolerance: None,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PageRankState {
    pub rank: f64,
    pub out_degree: u64,
}

pub struct PageRankProgram<E> {
    r: f64,
    _edge: PhantomData<fn(&E)>,
}

impl<E> PageRankProgram<E> {
    pub fn new(r: f64) -> Self {
        PageRankProgram {
            r,
            _edge: PhantomData,
        }
    }
}

impl<E: Send + Sync> GraphProgram for PageRankProgram<E> {
    type Property = PageRankState;
    type Message = f64;
    type Value = f64;
    type Edge = E;

    fn activity(&self) -> Activity {
        Activity::All
    }

    fn send_message(&self, _: VertexId, p: &PageRankState) -> Option<f64> {
        (p.out_degree > 0).then(|| p.rank / p.out_degree as f64)
    }

    fn process_message(&self, m: &f64, _: &E, _: &PageRankState) -> Result<f64, CallbackError> {
        Ok(*m)
    }

    fn reduce_identity(&self) -> f64 {
        0.0
    }

    fn reduce(&self, acc: &mut f64, v: f64) {
        *acc += v;
    }

    fn apply(&self, sum: &f64, p: &mut PageRankState) {
        p.rank = self.r + (1.0 - self.r) * sum;
    }
}

/// Initial store: rank 1.0 and precomputed out-degree for every vertex.
pub fn initial_state<E>(graph: &Graph<E>) -> VertexPropertyStore<PageRankState> {
    let mut store = VertexPropertyStore::new(
        graph
            .out_degrees()
            .into_iter()
            .map(|out_degree| PageRankState {
                rank: 1.0,
                out_degree,
            })
            .collect(),
    );
    store.activate_all();
    store
}

/// Continues PageRank from an existing store for up to `iterations`
/// supersteps.
pub fn pagerank_from<E: Clone + Send + Sync>(
    engine: &Engine,
    graph: &Graph<E>,
    store: &mut VertexPropertyStore<PageRankState>,
    cfg: &PageRankConfig,
) -> Result<Vec<crate::engine::IterationStats>, AlgorithmError> {
    if !(cfg.r > 0.0 && cfg.r < 1.0) {
        return Err(AlgorithmError::Config(format!(
            "random-surf probability must lie in (0, 1), got {}",
            cfg.r
        )));
    }
    let program = PageRankProgram::<E>::new(cfg.r);
    let mut previous: Option<Vec<f64>> = cfg
        .tolerance
        .map(|_| store.properties().iter().map(|p| p.rank).collect());
    let stats = engine.run_with::<_, SparseVector<f64>>(
        graph,
        &program,
        store,
        cfg.max_iterations,
        |_, store| {
            let (Some(tol), Some(prev)) = (cfg.tolerance, previous.as_mut()) else {
                return ControlFlow::Continue(());
            };
            let mut max_change = 0.0f64;
            for (old, p) in prev.iter_mut().zip(store.properties()) {
                max_change = max_change.max((p.rank - *old).abs());
                *old = p.rank;
            }
            if max_change < tol {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        },
    )?;
    Ok(stats)
}

pub fn pagerank<E: Clone + Send + Sync>(
    engine: &Engine,
    graph: &Graph<E>,
    cfg: &PageRankConfig,
) -> Result<AlgorithmRun<Vec<f64>>, AlgorithmError> {
    let mut store = initial_state(graph);
    let stats = pagerank_from(engine, graph, &mut store, cfg)?;
    Ok(AlgorithmRun {
        result: store.properties().iter().map(|p| p.rank).collect(),
        stats,
    })
}
