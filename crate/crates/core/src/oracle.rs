//! Brute-force reference implementations for checking the engine.
//!
//! Nothing here touches the partitioned matrix, the engine, or the vertex
//! programs: inputs are plain edge lists and dense arrays, and every
//! routine is the textbook loop. They are quadratic or cubic on purpose;
//! keep instances small.

use std::collections::VecDeque;

use crate::types::EdgeTriple;

/// Row-major dense matrix with explicit absent entries.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix<T> {
    pub n_rows: usize,
    pub n_cols: usize,
    pub data: Vec<Option<T>>,
}

impl<T: Clone> DenseMatrix<T> {
    pub fn new(n_rows: usize, n_cols: usize) -> Self {
        DenseMatrix {
            n_rows,
            n_cols,
            data: vec![None; n_rows * n_cols],
        }
    }

    /// `Gᵀ` for an `n`-vertex edge list: entry `(dst, src)` holds the value.
    pub fn transpose_of(n: usize, edges: &[EdgeTriple<T>]) -> Self {
        let mut m = Self::new(n, n);
        for e in edges {
            m.set(e.dst.index(), e.src.index(), e.value.clone());
        }
        m
    }

    pub fn set(&mut self, row: usize, col: usize, v: T) {
        self.data[row * self.n_cols + col] = Some(v);
    }
}

impl<T> DenseMatrix<T> {
    pub fn get(&self, row: usize, col: usize) -> Option<&T> {
        self.data[row * self.n_cols + col].as_ref()
    }
}

/// Dense generalized product `y = m ⊗ x`: for every column `j` with a
/// message and every present `m[k][j]`, folds `process(x[j], m[k][j],
/// properties[k])` into `y[k]`. Columns are visited in ascending order, rows
/// ascending within each column.
pub fn dense_spmv_oracle<M, E, P, V>(
    m: &DenseMatrix<E>,
    x: &[Option<M>],
    process: impl Fn(&M, &E, &P) -> V,
    reduce: impl Fn(V, V) -> V,
    identity: impl Fn() -> V,
    properties: &[P],
) -> Vec<Option<V>> {
    assert_eq!(x.len(), m.n_cols);
    assert_eq!(properties.len(), m.n_rows);
    let mut y: Vec<Option<V>> = (0..m.n_rows).map(|_| None).collect();
    for (j, xj) in x.iter().enumerate() {
        let Some(xj) = xj else { continue };
        for k in 0..m.n_rows {
            if let Some(e) = m.get(k, j) {
                let r = process(xj, e, &properties[k]);
                let acc = y[k].take().unwrap_or_else(&identity);
                y[k] = Some(reduce(acc, r));
            }
        }
    }
    y
}

/// Plain Bellman-Ford: up to `n - 1` sweeps over every edge, stopping
/// early once a sweep changes nothing.
pub fn bellman_ford_oracle(n: usize, edges: &[EdgeTriple<f64>], source: usize) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; n];
    dist[source] = 0.0;
    for _ in 1..n.max(2) {
        let mut changed = false;
        for e in edges {
            let (u, v) = (e.src.index(), e.dst.index());
            if dist[u] + e.value < dist[v] {
                dist[v] = dist[u] + e.value;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    dist
}

/// Queue-based BFS over directed edges; hop counts as floats with
/// infinity for unreachable vertices.
pub fn bfs_oracle<E>(n: usize, edges: &[EdgeTriple<E>], root: usize) -> Vec<f64> {
    let mut adj = vec![Vec::new(); n];
    for e in edges {
        adj[e.src.index()].push(e.dst.index());
    }
    let mut dist = vec![f64::INFINITY; n];
    dist[root] = 0.0;
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if dist[v].is_infinite() {
                dist[v] = dist[u] + 1.0;
                queue.push_back(v);
            }
        }
    }
    dist
}

/// `T` rounds of `PR(v) = r + (1 - r) * Σ PR(u) / outdeg(u)` from all-ones,
/// summing in-neighbors in ascending id order. A vertex with no in-edges
/// keeps its value, matching the engine's rule that an unmessaged vertex is
/// left alone.
pub fn pagerank_power_oracle<E>(n: usize, edges: &[EdgeTriple<E>], r: f64, iterations: usize) -> Vec<f64> {
    let mut outdeg = vec![0usize; n];
    let mut in_nbrs = vec![Vec::new(); n];
    for e in edges {
        outdeg[e.src.index()] += 1;
        in_nbrs[e.dst.index()].push(e.src.index());
    }
    for l in &mut in_nbrs {
        l.sort_unstable();
    }
    let mut rank = vec![1.0f64; n];
    for _ in 0..iterations {
        let mut next = rank.clone();
        for v in 0..n {
            if in_nbrs[v].is_empty() {
                continue;
            }
            let mut sum = 0.0;
            for &u in &in_nbrs[v] {
                sum += rank[u] / outdeg[u] as f64;
            }
            next[v] = r + (1.0 - r) * sum;
        }
        rank = next;
    }
    rank
}

/// Counts vertex triples `u < v < w` that are pairwise adjacent, ignoring
/// edge direction.
pub fn triangle_brute_oracle<E>(n: usize, edges: &[EdgeTriple<E>]) -> u64 {
    let mut adj = vec![false; n * n];
    for e in edges {
        let (a, b) = (e.src.index(), e.dst.index());
        adj[a * n + b] = true;
        adj[b * n + a] = true;
    }
    let mut count = 0;
    for u in 0..n {
        for v in u + 1..n {
            if !adj[u * n + v] {
                continue;
            }
            for w in v + 1..n {
                if adj[v * n + w] && adj[u * n + w] {
                    count += 1;
                }
            }
        }
    }
    count
}

/// A rating of `items[item]` by `users[user]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rating {
    pub user: usize,
    pub item: usize,
    pub value: f64,
}

/// `Σ (g - p_u·p_v)² + λ Σ_u |p_u|² + λ Σ_v |p_v|²`.
pub fn cf_objective(ratings: &[Rating], users: &[Vec<f64>], items: &[Vec<f64>], lambda: f64) -> f64 {
    let mut total = 0.0;
    for r in ratings {
        let pred: f64 = users[r.user].iter().zip(&items[r.item]).map(|(a, b)| a * b).sum();
        total += (r.value - pred) * (r.value - pred);
    }
    for p in users.iter().chain(items) {
        total += lambda * p.iter().map(|x| x * x).sum::<f64>();
    }
    total
}

/// Central finite-difference gradient of [`cf_objective`] with respect to
/// every coordinate of every user and item vector.
pub fn cf_fd_gradient(
    ratings: &[Rating],
    users: &[Vec<f64>],
    items: &[Vec<f64>],
    lambda: f64,
    step: f64,
) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let mut u = users.to_vec();
    let mut it = items.to_vec();
    let mut gu = vec![Vec::new(); users.len()];
    let mut gi = vec![Vec::new(); items.len()];
    for a in 0..users.len() {
        for k in 0..users[a].len() {
            let orig = u[a][k];
            u[a][k] = orig + step;
            let plus = cf_objective(ratings, &u, &it, lambda);
            u[a][k] = orig - step;
            let minus = cf_objective(ratings, &u, &it, lambda);
            u[a][k] = orig;
            gu[a].push((plus - minus) / (2.0 * step));
        }
    }
    for b in 0..items.len() {
        for k in 0..items[b].len() {
            let orig = it[b][k];
            it[b][k] = orig + step;
            let plus = cf_objective(ratings, &u, &it, lambda);
            it[b][k] = orig - step;
            let minus = cf_objective(ratings, &u, &it, lambda);
            it[b][k] = orig;
            gi[b].push((plus - minus) / (2.0 * step));
        }
    }
    (gu, gi)
}
