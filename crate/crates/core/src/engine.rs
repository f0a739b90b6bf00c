//! Superstep execution.
//!
//! Each superstep gathers messages from the active vertices into a sparse
//! vector `x`, multiplies the partitioned matrix by `x` with the program's
//! `process_message`/`reduce` standing in for multiply/add, and hands every
//! resulting row to `apply`. A vertex is active in the next superstep iff
//! `apply` changed its property.
//!
//! Partitions are the unit of parallel work. They own disjoint output rows,
//! so workers never contend on `y`, and a rayon pool with more partitions
//! than threads balances skewed slabs by work stealing.

use std::ops::ControlFlow;
use std::sync::Mutex;
use std::time::Instant;

use rayon::prelude::*;
use thiserror::Error;

use crate::dcsc::DcscPartition;
use crate::graph::Graph;
use crate::program::{Activity, CallbackError, GraphProgram, VertexPropertyStore};
use crate::sparse_vector::{Segment, SparseVector};
use crate::types::{Direction, EngineConfig, VertexId};

const VERTEX_CHUNK: usize = 4096;
const COLUMN_CHUNK: usize = 512;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("invalid engine configuration: {0}")]
    Config(String),
    #[error("callback failed processing message from vertex {col} to vertex {row}: {source}")]
    Callback {
        col: VertexId,
        row: VertexId,
        #[source]
        source: CallbackError,
    },
    #[error("{what} has length {got}, graph has {expected} vertices")]
    LengthMismatch {
        what: &'static str,
        got: usize,
        expected: usize,
    },
}

/// Timing and activity counters for one superstep.
#[derive(Clone, Debug, PartialEq)]
pub struct IterationStats {
    pub iteration: usize,
    pub active_before: usize,
    pub messages_generated: usize,
    pub vertices_updated: usize,
    pub spmv_seconds: f64,
    pub total_seconds: f64,
}

/// Message-vector representation consumed by the SPMV.
///
/// [`SparseVector`] is the production choice; the trait exists so other
/// layouts can be measured against it.
pub trait Frontier<M>: Sized + Send + Sync {
    /// Collects `emit(v)` for every `v` in `0..len` that returns a value.
    /// Called from inside the engine's thread pool.
    fn gather(len: usize, emit: &(dyn Fn(usize) -> Option<M> + Sync)) -> Self;
    fn lookup(&self, index: usize) -> Option<&M>;
    fn len(&self) -> usize;
    fn valid_count(&self) -> usize;
}

impl<M: Default + Send + Sync> Frontier<M> for SparseVector<M> {
    fn gather(len: usize, emit: &(dyn Fn(usize) -> Option<M> + Sync)) -> Self {
        let mut x = SparseVector::new(len);
        let ranges: Vec<_> = (0..len)
            .step_by(VERTEX_CHUNK)
            .map(|lo| lo..(lo + VERTEX_CHUNK).min(len))
            .collect();
        x.segments_mut(&ranges).into_par_iter().for_each(|mut seg| {
            for v in seg.range() {
                if let Some(m) = emit(v) {
                    seg.set(v, m);
                }
            }
        });
        x
    }

    #[inline]
    fn lookup(&self, index: usize) -> Option<&M> {
        self.get(index)
    }

    fn len(&self) -> usize {
        SparseVector::len(self)
    }

    fn valid_count(&self) -> usize {
        self.nnz()
    }
}

pub struct Engine {
    config: EngineConfig,
    pool: rayon::ThreadPool,
}

impl std::fmt::Debug for Engine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Engine").field("config", &self.config).finish()
    }
}

impl Engine {
    pub fn new(config: EngineConfig) -> Result<Self, EngineError> {
        if config.thread_count == 0 {
            return Err(EngineError::Config("thread_count must be at least 1".into()));
        }
        if config.partitions_per_thread == 0 {
            return Err(EngineError::Config(
                "partitions_per_thread must be at least 1".into(),
            ));
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.thread_count)
            .thread_name(|i| format!("spgraph-worker-{i}"))
            .build()
            .map_err(|e| EngineError::Config(e.to_string()))?;
        Ok(Engine { config, pool })
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    /// Sparse vector of `send_message` results over the emitting vertices.
    pub fn generate_messages<P: GraphProgram>(
        &self,
        program: &P,
        store: &VertexPropertyStore<P::Property>,
    ) -> SparseVector<P::Message> {
        self.gather(program, store)
    }

    fn gather<P: GraphProgram, X: Frontier<P::Message>>(
        &self,
        program: &P,
        store: &VertexPropertyStore<P::Property>,
    ) -> X {
        let all = program.activity() == Activity::All;
        let props = store.properties();
        let active = store.active_flags();
        let emit = |v: usize| {
            if all || active[v] {
                program.send_message(VertexId::new(v), &props[v])
            } else {
                None
            }
        };
        self.pool.install(|| X::gather(props.len(), &emit))
    }

    /// One generalized product in the program's scatter direction.
    /// `properties` are the destination states visible to `process_message`.
    pub fn spmv<P, X>(
        &self,
        graph: &Graph<P::Edge>,
        x: &X,
        program: &P,
        properties: &[P::Property],
    ) -> Result<SparseVector<P::Value>, EngineError>
    where
        P: GraphProgram,
        P::Edge: Clone,
        X: Frontier<P::Message>,
    {
        let n = graph.num_vertices();
        if x.len() != n {
            return Err(EngineError::LengthMismatch {
                what: "message vector",
                got: x.len(),
                expected: n,
            });
        }
        if properties.len() != n {
            return Err(EngineError::LengthMismatch {
                what: "property array",
                got: properties.len(),
                expected: n,
            });
        }
        match program.direction() {
            Direction::Out => self.spmv_over(graph.transpose_partitions(), n, x, program, properties),
            Direction::In => self.spmv_over(graph.forward_partitions(), n, x, program, properties),
            Direction::Both => {
                let mut y = self.spmv_over(graph.transpose_partitions(), n, x, program, properties)?;
                let mut y_in = self.spmv_over(graph.forward_partitions(), n, x, program, properties)?;
                let rows: Vec<usize> = y_in.indices().collect();
                for k in rows {
                    let v = y_in.take(k).expect("index came from the valid set");
                    match y.get_mut(k) {
                        Some(acc) => program.reduce(acc, v),
                        None => y.set(k, v),
                    }
                }
                Ok(y)
            }
        }
    }

    /// Generalized product over an explicit set of slabs: for each listed
    /// column `j` with a message, every stored `(k, edge)` contributes
    /// `process_message(x[j], edge, properties[k])` to row `k`.
    pub fn spmv_over<P, X>(
        &self,
        partitions: &[DcscPartition<P::Edge>],
        n: usize,
        x: &X,
        program: &P,
        properties: &[P::Property],
    ) -> Result<SparseVector<P::Value>, EngineError>
    where
        P: GraphProgram,
        X: Frontier<P::Message>,
    {
        let mut y = SparseVector::new(n);
        let ranges: Vec<_> = partitions.iter().map(|p| p.row_range()).collect();
        let segments = y.segments_mut(&ranges);
        if self.config.deterministic_reduction {
            self.pool.install(|| {
                segments
                    .into_par_iter()
                    .zip(partitions.par_iter())
                    .with_max_len(1)
                    .try_for_each(|(mut seg, part)| {
                        multiply_partition(part, 0..part.col_ids.len(), x, program, properties, &mut seg)
                    })
            })?;
        } else {
            let segments: Vec<Mutex<Segment<'_, P::Value>>> =
                segments.into_iter().map(Mutex::new).collect();
            let tasks: Vec<(usize, std::ops::Range<usize>)> = partitions
                .iter()
                .enumerate()
                .flat_map(|(pi, p)| {
                    let ncols = p.col_ids.len();
                    (0..ncols)
                        .step_by(COLUMN_CHUNK)
                        .map(move |lo| (pi, lo..(lo + COLUMN_CHUNK).min(ncols)))
                })
                .collect();
            self.pool.install(|| {
                tasks.into_par_iter().with_max_len(1).try_for_each(|(pi, cols)| {
                    let local = accumulate_chunk(&partitions[pi], cols, x, program, properties)?;
                    let mut seg = segments[pi].lock().unwrap_or_else(|e| e.into_inner());
                    for (k, v) in local {
                        fold_into(&mut seg, k, v, program);
                    }
                    Ok::<(), EngineError>(())
                })
            })?;
        }
        Ok(y)
    }

    /// Applies every row of `y` to its vertex, resets all active flags, and
    /// re-activates exactly the vertices whose property changed. Returns the
    /// number of changed vertices.
    pub fn apply_and_activate<P: GraphProgram>(
        &self,
        y: &SparseVector<P::Value>,
        program: &P,
        store: &mut VertexPropertyStore<P::Property>,
    ) -> usize {
        let every = program.apply_without_message();
        let (props, active) = store.parts_mut();
        self.pool.install(|| {
            props
                .par_chunks_mut(VERTEX_CHUNK)
                .zip(active.par_chunks_mut(VERTEX_CHUNK))
                .enumerate()
                .map(|(ci, (props, active))| {
                    active.fill(false);
                    let base = ci * VERTEX_CHUNK;
                    let mut changed = 0;
                    for (off, prop) in props.iter_mut().enumerate() {
                        let v = base + off;
                        let updated = match y.get(v) {
                            Some(reduced) => apply_one(program, reduced, prop),
                            None if every => apply_one(program, &program.reduce_identity(), prop),
                            None => false,
                        };
                        if updated {
                            active[off] = true;
                            changed += 1;
                        }
                    }
                    changed
                })
                .sum()
        })
    }

    /// Runs supersteps until `max_iterations` or until no vertex changes.
    pub fn run<P>(
        &self,
        graph: &Graph<P::Edge>,
        program: &P,
        store: &mut VertexPropertyStore<P::Property>,
    ) -> Result<Vec<IterationStats>, EngineError>
    where
        P: GraphProgram,
        P::Edge: Clone,
    {
        self.run_with::<P, SparseVector<P::Message>>(
            graph,
            program,
            store,
            self.config.max_iterations,
            |_, _| ControlFlow::Continue(()),
        )
    }

    /// [`Engine::run`] with a caller-chosen message layout, an explicit
    /// superstep cap, and an observer that sees each superstep's stats and
    /// the updated store and may stop the run early.
    pub fn run_with<P, X>(
        &self,
        graph: &Graph<P::Edge>,
        program: &P,
        store: &mut VertexPropertyStore<P::Property>,
        max_iterations: usize,
        mut observe: impl FnMut(&IterationStats, &VertexPropertyStore<P::Property>) -> ControlFlow<()>,
    ) -> Result<Vec<IterationStats>, EngineError>
    where
        P: GraphProgram,
        P::Edge: Clone,
        X: Frontier<P::Message>,
    {
        let n = graph.num_vertices();
        if store.len() != n {
            return Err(EngineError::LengthMismatch {
                what: "property store",
                got: store.len(),
                expected: n,
            });
        }
        let mut stats = Vec::new();
        for iteration in 1..=max_iterations {
            let start = Instant::now();
            let active_before = match program.activity() {
                Activity::All => n,
                Activity::Changed => store.active_count(),
            };
            let x: X = self.gather(program, store);
            let messages_generated = x.valid_count();
            let spmv_start = Instant::now();
            let y = self.spmv(graph, &x, program, store.properties())?;
            let spmv_seconds = spmv_start.elapsed().as_secs_f64();
            drop(x);
            let vertices_updated = self.apply_and_activate(&y, program, store);
            drop(y);
            let s = IterationStats {
                iteration,
                active_before,
                messages_generated,
                vertices_updated,
                spmv_seconds,
                total_seconds: start.elapsed().as_secs_f64(),
            };
            let flow = observe(&s, store);
            stats.push(s);
            if vertices_updated == 0 || flow.is_break() {
                break;
            }
        }
        Ok(stats)
    }
}

/// Runs `program` to completion on a fresh engine.
pub fn run_graph_program<P>(
    graph: &Graph<P::Edge>,
    program: &P,
    store: &mut VertexPropertyStore<P::Property>,
    config: &EngineConfig,
) -> Result<Vec<IterationStats>, EngineError>
where
    P: GraphProgram,
    P::Edge: Clone,
{
    Engine::new(config.clone())?.run(graph, program, store)
}

#[inline]
fn apply_one<P: GraphProgram>(program: &P, reduced: &P::Value, prop: &mut P::Property) -> bool {
    let old = prop.clone();
    program.apply(reduced, prop);
    *prop != old
}

#[inline]
fn fold_into<P: GraphProgram>(seg: &mut Segment<'_, P::Value>, k: usize, value: P::Value, program: &P) {
    if seg.contains(k) {
        program.reduce(seg.slot_mut(k), value);
    } else {
        let mut acc = program.reduce_identity();
        program.reduce(&mut acc, value);
        seg.set(k, acc);
    }
}

fn multiply_partition<P, X>(
    part: &DcscPartition<P::Edge>,
    cols: std::ops::Range<usize>,
    x: &X,
    program: &P,
    properties: &[P::Property],
    seg: &mut Segment<'_, P::Value>,
) -> Result<(), EngineError>
where
    P: GraphProgram,
    X: Frontier<P::Message>,
{
    for ci in cols {
        let j = part.col_ids[ci];
        let Some(msg) = x.lookup(j as usize) else {
            continue;
        };
        let (rows, edges) = part.column_at(ci);
        for (&k, edge) in rows.iter().zip(edges) {
            let k = k as usize;
            let value = program
                .process_message(msg, edge, &properties[k])
                .map_err(|source| EngineError::Callback {
                    col: VertexId(j),
                    row: VertexId::new(k),
                    source,
                })?;
            fold_into(seg, k, value, program);
        }
    }
    Ok(())
}

/// Unordered variant: folds one column chunk into a private row list that
/// is merged into the partition's output afterwards.
fn accumulate_chunk<P, X>(
    part: &DcscPartition<P::Edge>,
    cols: std::ops::Range<usize>,
    x: &X,
    program: &P,
    properties: &[P::Property],
) -> Result<Vec<(usize, P::Value)>, EngineError>
where
    P: GraphProgram,
    X: Frontier<P::Message>,
{
    let mut contributions = Vec::new();
    for ci in cols {
        let j = part.col_ids[ci];
        let Some(msg) = x.lookup(j as usize) else {
            continue;
        };
        let (rows, edges) = part.column_at(ci);
        for (&k, edge) in rows.iter().zip(edges) {
            let value = program
                .process_message(msg, edge, &properties[k as usize])
                .map_err(|source| EngineError::Callback {
                    col: VertexId(j),
                    row: VertexId(k),
                    source,
                })?;
            contributions.push((k as usize, value));
        }
    }
    contributions.sort_by_key(|&(k, _)| k);
    let mut folded: Vec<(usize, P::Value)> = Vec::new();
    for (k, v) in contributions {
        match folded.last_mut() {
            Some((last, acc)) if *last == k => program.reduce(acc, v),
            _ => {
                let mut acc = program.reduce_identity();
                program.reduce(&mut acc, v);
                folded.push((k, acc));
            }
        }
    }
    Ok(folded)
}

/// Counts edges per vertex: `IN` multiplies `Gᵀ` by the all-ones vector,
/// `OUT` multiplies `G`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DegreeKind {
    In,
    Out,
}

struct CountEdges<E>(Direction, std::marker::PhantomData<fn(&E)>);

impl<E: Send + Sync> GraphProgram for CountEdges<E> {
    type Property = ();
    type Message = ();
    type Value = u64;
    type Edge = E;

    fn direction(&self) -> Direction {
        self.0
    }

    fn send_message(&self, _: VertexId, _: &()) -> Option<()> {
        Some(())
    }

    fn process_message(&self, _: &(), _: &E, _: &()) -> Result<u64, CallbackError> {
        Ok(1)
    }

    fn reduce_identity(&self) -> u64 {
        0
    }

    fn reduce(&self, acc: &mut u64, value: u64) {
        *acc += value;
    }

    fn apply(&self, _: &u64, _: &mut ()) {}
}

impl Engine {
    pub fn degree_vector<E: Clone + Send + Sync>(
        &self,
        graph: &Graph<E>,
        kind: DegreeKind,
    ) -> Result<Vec<u64>, EngineError> {
        let dir = match kind {
            DegreeKind::In => Direction::Out,
            DegreeKind::Out => Direction::In,
        };
        let program = CountEdges::<E>(dir, std::marker::PhantomData);
        let n = graph.num_vertices();
        let units = vec![(); n];
        let ones = SparseVector::from_entries(n, (0..n).map(|v| (v, ())));
        let y = self.spmv(graph, &ones, &program, &units)?;
        Ok((0..n).map(|v| y.get(v).copied().unwrap_or(0)).collect())
    }
}

/// In- or out-degree of every vertex on a single-threaded engine.
pub fn degree_vector<E: Clone + Send + Sync>(graph: &Graph<E>, kind: DegreeKind) -> Vec<u64> {
    Engine::new(EngineConfig::default())
        .and_then(|e| e.degree_vector(graph, kind))
        .expect("counting program cannot fail")
}
