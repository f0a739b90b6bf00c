//! Collaborative filtering by full-batch gradient descent on a bipartite
//! user/item rating graph.
//!
//! Users occupy ids `0..num_users`, items the rest, and every rating edge
//! runs user -> item. Each superstep every vertex sends its latent vector
//! both ways; the receiver forms `e = rating - p_sender · p_self` and
//! accumulates `e * p_sender`. Apply then takes one step
//! `p += gamma * (sum - lambda * p)`, which is the negative half-gradient
//! of the regularized squared error. Isolated vertices still shrink.

use std::ops::ControlFlow;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{AlgorithmError, AlgorithmRun};
use crate::engine::{Engine, IterationStats};
use crate::graph::Graph;
use crate::program::{Activity, CallbackError, GraphProgram, VertexPropertyStore};
use crate::sparse_vector::SparseVector;
use crate::types::{Direction, VertexId};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CfConfig {
    /// Latent dimension.
    pub k: usize,
    pub gamma: f64,
    pub lambda: f64,
    pub iterations: usize,
    pub seed: u64,
}

impl Default for CfConfig {
    fn default() -> Self {
        CfConfig {
            k: 20,
            gamma: 1e-4,
            lambda: 0.05,
            iterations: 10,
            seed: 0,
        }
    }
}

impl CfConfig {
    fn validate(&self) -> Result<(), AlgorithmError> {
        if self.k == 0 {
            return Err(AlgorithmError::Config("latent dimension must be at least 1".into()));
        }
        if !(self.gamma > 0.0) {
            return Err(AlgorithmError::Config(format!("step size must be positive, got {}", self.gamma)));
        }
        if !(self.lambda >= 0.0) {
            return Err(AlgorithmError::Config(format!(
                "regularizer must be non-negative, got {}",
                self.lambda
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    User,
    Item,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LatentVector {
    pub p: Vec<f64>,
    pub side: Side,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CfModel {
    pub users: Vec<Vec<f64>>,
    pub items: Vec<Vec<f64>>,
    /// Objective before the first step, then after each completed step.
    pub objective: Vec<f64>,
}

pub struct GradientStep {
    pub gamma: f64,
    pub lambda: f64,
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl GraphProgram for GradientStep {
    type Property = LatentVector;
    type Message = Vec<f64>;
    type Value = Vec<f64>;
    type Edge = f64;

    fn direction(&self) -> Direction {
        Direction::Both
    }

    fn activity(&self) -> Activity {
        Activity::All
    }

    fn apply_without_message(&self) -> bool {
        true
    }

    fn send_message(&self, _: VertexId, v: &LatentVector) -> Option<Vec<f64>> {
        Some(v.p.clone())
    }

    fn process_message(&self, sender: &Vec<f64>, rating: &f64, dst: &LatentVector) -> Result<Vec<f64>, CallbackError> {
        if sender.len() != dst.p.len() {
            return Err(CallbackError::new(format!(
                "latent dimension mismatch: {} vs {}",
                sender.len(),
                dst.p.len()
            )));
        }
        let e = rating - dot(sender, &dst.p);
        Ok(sender.iter().map(|x| e * x).collect())
    }

    fn reduce_identity(&self) -> Vec<f64> {
        Vec::new()
    }

    fn reduce(&self, acc: &mut Vec<f64>, v: Vec<f64>) {
        if acc.is_empty() {
            *acc = v;
        } else {
            for (a, x) in acc.iter_mut().zip(v) {
                *a += x;
            }
        }
    }

    fn apply(&self, sum: &Vec<f64>, v: &mut LatentVector) {
        for (i, p) in v.p.iter_mut().enumerate() {
            let s = sum.get(i).copied().unwrap_or(0.0);
            *p += self.gamma * (s - self.lambda * *p);
        }
    }
}

/// Seeded latent vectors, uniform in `[0, 1/sqrt(k))`.
pub fn initial_latents(n: usize, k: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hi = 1.0 / (k as f64).sqrt();
    (0..n)
        .map(|_| (0..k).map(|_| rng.gen::<f64>() * hi).collect())
        .collect()
}

fn check_bipartite(graph: &Graph<f64>, num_users: usize) -> Result<(), AlgorithmError> {
    if num_users > graph.num_vertices() {
        return Err(AlgorithmError::Config(format!(
            "{num_users} users exceed {} vertices",
            graph.num_vertices()
        )));
    }
    for part in graph.transpose_partitions() {
        if let Some((dst, src, _)) = part
            .entries()
            .find(|(d, s, _)| s.index() >= num_users || d.index() < num_users)
        {
            return Err(AlgorithmError::NotBipartite { src, dst });
        }
    }
    Ok(())
}

/// Sum of squared rating residuals plus `lambda * |p|²` over every vertex.
pub fn objective(graph: &Graph<f64>, latents: &[LatentVector], lambda: f64) -> f64 {
    let residual: f64 = graph
        .transpose_partitions()
        .iter()
        .flat_map(|p| p.entries())
        .map(|(item, user, &g)| {
            let e = g - dot(&latents[user.index()].p, &latents[item.index()].p);
            e * e
        })
        .sum();
    let norms: f64 = latents.iter().map(|v| dot(&v.p, &v.p)).sum();
    residual + lambda * norms
}

/// Gradient descent from explicit starting vectors (one per vertex, users
/// first).
pub fn collaborative_filtering_from(
    engine: &Engine,
    graph: &Graph<f64>,
    num_users: usize,
    cfg: &CfConfig,
    initial: Vec<Vec<f64>>,
) -> Result<AlgorithmRun<CfModel>, AlgorithmError> {
    cfg.validate()?;
    check_bipartite(graph, num_users)?;
    if initial.len() != graph.num_vertices() {
        return Err(AlgorithmError::Config(format!(
            "{} starting vectors for {} vertices",
            initial.len(),
            graph.num_vertices()
        )));
    }
    if let Some(bad) = initial.iter().position(|p| p.len() != cfg.k) {
        return Err(AlgorithmError::Config(format!(
            "starting vector {bad} has length {}, expected {}",
            initial[bad].len(),
            cfg.k
        )));
    }
    let mut store = VertexPropertyStore::new(
        initial
            .into_iter()
            .enumerate()
            .map(|(v, p)| LatentVector {
                p,
                side: if v < num_users { Side::User } else { Side::Item },
            })
            .collect(),
    );
    let program = GradientStep {
        gamma: cfg.gamma,
        lambda: cfg.lambda,
    };
    let mut trace = vec![objective(graph, store.properties(), cfg.lambda)];
    let stats: Vec<IterationStats> =
        engine.run_with::<_, SparseVector<Vec<f64>>>(graph, &program, &mut store, cfg.iterations, |_, s| {
            trace.push(objective(graph, s.properties(), cfg.lambda));
            ControlFlow::Continue(())
        })?;
    let mut vectors: Vec<Vec<f64>> = store.into_properties().into_iter().map(|v| v.p).collect();
    let items = vectors.split_off(num_users);
    Ok(AlgorithmRun {
        result: CfModel {
            users: vectors,
            items,
            objective: trace,
        },
        stats,
    })
}

pub fn collaborative_filtering_gd(
    engine: &Engine,
    graph: &Graph<f64>,
    num_users: usize,
    cfg: &CfConfig,
) -> Result<AlgorithmRun<CfModel>, AlgorithmError> {
    cfg.validate()?;
    let init = initial_latents(graph.num_vertices(), cfg.k, cfg.seed);
    collaborative_filtering_from(engine, graph, num_users, cfg, init)
}

/// Halves the step size until the objective does not increase over the
/// first `checked` steps, trying at most `max_halvings` reductions.
/// Returns the accepted run and its step size, or the last attempt when
/// none satisfied the check.
pub fn fit_with_step_backoff(
    engine: &Engine,
    graph: &Graph<f64>,
    num_users: usize,
    cfg: &CfConfig,
    checked: usize,
    max_halvings: usize,
) -> Result<(AlgorithmRun<CfModel>, f64, bool), AlgorithmError> {
    let mut cfg = *cfg;
    let mut halvings = 0;
    loop {
        let run = collaborative_filtering_gd(engine, graph, num_users, &cfg)?;
        let head = &run.result.objective[..run.result.objective.len().min(checked + 1)];
        let monotone = head.windows(2).all(|w| w[1] <= w[0]);
        if monotone || halvings == max_halvings {
            return Ok((run, cfg.gamma, monotone));
        }
        cfg.gamma /= 2.0;
        halvings += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::{EdgeTriple, EngineConfig};

    fn engine() -> Engine {
        Engine::new(EngineConfig::default()).unwrap()
    }

    #[test]
    fn no_ratings_means_pure_shrinkage() {
        let g: Graph<f64> = Graph::build(&[], 2, 1).unwrap();
        let cfg = CfConfig {
            k: 2,
            gamma: 0.1,
            lambda: 0.5,
            iterations: 1,
            seed: 1,
        };
        let init = vec![vec![1.0, 2.0], vec![-4.0, 0.5]];
        let run = collaborative_filtering_from(&engine(), &g, 1, &cfg, init.clone()).unwrap();
        let shrink = 1.0 - 0.1 * 0.5;
        assert_eq!(run.result.users[0], vec![1.0 * shrink, 2.0 * shrink]);
        assert_eq!(run.result.items[0], vec![-4.0 * shrink, 0.5 * shrink]);
    }

    #[test]
    fn exact_rating_gives_zero_residual() {
        // p_u · p_v = 1*2 + 1*1 = 3
        let g = Graph::build(&[EdgeTriple::new(0, 1, 3.0)], 2, 1).unwrap();
        let cfg = CfConfig {
            k: 2,
            gamma: 0.1,
            lambda: 0.2,
            iterations: 1,
            seed: 0,
        };
        let run = collaborative_filtering_from(&engine(), &g, 1, &cfg, vec![vec![1.0, 1.0], vec![2.0, 1.0]]).unwrap();
        let s = 1.0 - 0.1 * 0.2;
        assert_eq!(run.result.users[0], vec![s, s]);
        assert_eq!(run.result.items[0], vec![2.0 * s, s]);
        assert_eq!(run.result.objective[0], 0.2 * (2.0 + 5.0));
    }

    #[test]
    fn rejects_item_to_item_edge() {
        let g = Graph::build(&[EdgeTriple::new(1, 2, 3.0)], 3, 1).unwrap();
        assert!(matches!(
            collaborative_filtering_gd(&engine(), &g, 1, &CfConfig::default()),
            Err(AlgorithmError::NotBipartite { .. })
        ));
    }

    #[test]
    fn latent_dimension_mismatch_is_a_callback_error() {
        let g = Graph::build(&[EdgeTriple::new(0, 1, 3.0)], 2, 1).unwrap();
        let mut store = VertexPropertyStore::new(vec![
            LatentVector { p: vec![1.0], side: Side::User },
            LatentVector { p: vec![1.0, 2.0], side: Side::Item },
        ]);
        let program = GradientStep { gamma: 0.1, lambda: 0.0 };
        let err = engine().run(&g, &program, &mut store).unwrap_err();
        assert!(matches!(err, crate::EngineError::Callback { .. }), "{err}");
    }

    #[test]
    fn initial_latents_are_seeded_and_bounded() {
        let a = initial_latents(5, 4, 9);
        assert_eq!(a, initial_latents(5, 4, 9));
        assert!(a.iter().flatten().all(|&x| (0.0..0.5).contains(&x)));
    }
}
