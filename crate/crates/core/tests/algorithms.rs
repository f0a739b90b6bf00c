use std::collections::VecDeque;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spgraph::algorithms::cf::{collaborative_filtering_from, initial_latents};
use spgraph::algorithms::pagerank::{initial_state, pagerank_from};
use spgraph::algorithms::{bfs, pagerank, sssp, triangle_count, CfConfig, PageRankConfig};
use spgraph::io::{preprocess, PreprocessMode};
use spgraph::oracle::{
    bellman_ford_oracle, bfs_oracle, cf_fd_gradient, pagerank_power_oracle, triangle_brute_oracle, Rating,
};
use spgraph::{EdgeTriple, Engine, EngineConfig, Graph, VertexId};

fn random_edges(n: usize, m: usize, seed: u64) -> Vec<EdgeTriple<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw: Vec<_> = (0..m)
        .map(|_| {
            let s = rng.gen_range(0..n as u32);
            let d = rng.gen_range(0..n as u32);
            EdgeTriple::new(s, d, rng.gen_range(0..100) as f64 / 4.0)
        })
        .collect();
    preprocess(raw, PreprocessMode::None).unwrap()
}

fn engine(threads: usize, ppt: usize) -> Engine {
    Engine::new(EngineConfig::with_threads(threads).partitions_per_thread(ppt)).unwrap()
}

fn graph(edges: &[EdgeTriple<f64>], n: usize, parts: usize) -> Graph<f64> {
    Graph::build(edges, n, parts).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn bfs_matches_queue_search(n in 1usize..400, m in 0usize..2000, seed: u64, root_pick: usize) {
        let edges = preprocess(random_edges(n, m, seed), PreprocessMode::Symmetrize).unwrap();
        let root = root_pick % n;
        let got = bfs(&engine(2, 3), &graph(&edges, n, 6), VertexId::new(root)).unwrap().result;
        prop_assert_eq!(got, bfs_oracle(n, &edges, root));
    }

    #[test]
    fn sssp_matches_bellman_ford(n in 1usize..400, m in 0usize..2000, seed: u64, src_pick: usize) {
        let edges = random_edges(n, m, seed);
        let src = src_pick % n;
        let got = sssp(&engine(3, 2), &graph(&edges, n, 6), VertexId::new(src)).unwrap().result;
        prop_assert_eq!(got, bellman_ford_oracle(n, &edges, src));
    }

    #[test]
    fn bfs_labels_are_consistent(n in 1usize..300, m in 0usize..1500, seed: u64) {
        let edges = preprocess(random_edges(n, m, seed), PreprocessMode::Symmetrize).unwrap();
        let d = bfs(&engine(1, 4), &graph(&edges, n, 4), VertexId(0)).unwrap().result;
        prop_assert_eq!(d[0], 0.0);
        for e in &edges {
            let (a, b) = (d[e.src.index()], d[e.dst.index()]);
            prop_assert!(b <= a + 1.0);
        }
        // Every reached non-root vertex has a neighbor exactly one hop closer.
        for v in 1..n {
            if d[v].is_finite() {
                prop_assert!(edges.iter().any(|e| e.dst.index() == v && d[e.src.index()] + 1.0 == d[v]));
            }
        }
    }

    #[test]
    fn sssp_respects_triangle_inequality(n in 1usize..300, m in 0usize..1500, seed: u64) {
        let edges = random_edges(n, m, seed);
        let d = sssp(&engine(2, 2), &graph(&edges, n, 4), VertexId(0)).unwrap().result;
        for e in &edges {
            prop_assert!(d[e.dst.index()] <= d[e.src.index()] + e.value);
        }
    }

    #[test]
    fn triangles_match_brute_force(n in 1usize..120, m in 0usize..1200, seed: u64) {
        let dag = preprocess(random_edges(n, m, seed), PreprocessMode::Dagify).unwrap();
        let got = triangle_count(&engine(2, 2), &graph(&dag, n, 4)).unwrap().result;
        prop_assert_eq!(got.total, triangle_brute_oracle(n, &dag));
        prop_assert_eq!(got.per_vertex.iter().sum::<u64>(), got.total);
    }

    #[test]
    fn triangles_ignore_labels(n in 2usize..100, m in 0usize..800, seed: u64) {
        let edges = random_edges(n, m, seed);
        let mut perm: Vec<u32> = (0..n as u32).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        for i in (1..n).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        let relabeled: Vec<_> = edges
            .iter()
            .map(|e| EdgeTriple::new(perm[e.src.index()], perm[e.dst.index()], e.value))
            .collect();
        let count = |es: Vec<EdgeTriple<f64>>| {
            let dag = preprocess(es, PreprocessMode::Dagify).unwrap();
            triangle_count(&engine(1, 3), &graph(&dag, n, 3)).unwrap().result.total
        };
        prop_assert_eq!(count(edges), count(relabeled));
    }

    #[test]
    fn pagerank_matches_power_iteration(n in 1usize..300, m in 0usize..2000, seed: u64, r in prop::sample::select(vec![0.15, 0.5])) {
        let edges = random_edges(n, m, seed);
        let cfg = PageRankConfig { r, max_iterations: 20, tolerance: None };
        let got = pagerank(&engine(2, 4), &graph(&edges, n, 8), &cfg).unwrap().result;
        let want = pagerank_power_oracle(n, &edges, r, 20);
        for (g, w) in got.iter().zip(&want) {
            prop_assert!((g - w).abs() <= 1e-12 * w.abs(), "{} vs {}", g, w);
        }
    }

    #[test]
    fn pagerank_one_more_step_continues(n in 1usize..200, m in 0usize..1000, seed: u64, t in 0usize..15) {
        let edges = random_edges(n, m, seed);
        let g = graph(&edges, n, 4);
        let e = engine(2, 2);
        let cfg = |iters| PageRankConfig { r: 0.15, max_iterations: iters, tolerance: None };
        let mut split = initial_state(&g);
        pagerank_from(&e, &g, &mut split, &cfg(t)).unwrap();
        pagerank_from(&e, &g, &mut split, &cfg(1)).unwrap();
        let whole = pagerank(&e, &g, &cfg(t + 1)).unwrap().result;
        let split: Vec<f64> = split.properties().iter().map(|p| p.rank).collect();
        prop_assert_eq!(split, whole);
    }
}

#[test]
fn results_do_not_depend_on_partitioning() {
    let n = 2000;
    let edges = random_edges(n, 16_000, 11);
    let sym = preprocess(edges.clone(), PreprocessMode::Symmetrize).unwrap();
    let dag = preprocess(edges.clone(), PreprocessMode::Dagify).unwrap();
    let bip: Vec<_> = edges
        .iter()
        .filter(|e| e.src.index() < 800 && e.dst.index() >= 800)
        .map(|e| e.map_value(|w| 1.0 + (w % 5.0).floor()))
        .collect();
    let pr_cfg = PageRankConfig { r: 0.15, max_iterations: 10, tolerance: None };
    let cf_cfg = CfConfig { k: 4, gamma: 1e-3, lambda: 0.05, iterations: 3, seed: 5 };
    let run_all = |threads: usize, ppt: usize| {
        let e = engine(threads, ppt);
        let parts = threads * ppt;
        let pr = pagerank(&e, &graph(&edges, n, parts), &pr_cfg).unwrap().result;
        let b = bfs(&e, &graph(&sym, n, parts), VertexId(0)).unwrap().result;
        let s = sssp(&e, &graph(&edges, n, parts), VertexId(0)).unwrap().result;
        let t = triangle_count(&e, &graph(&dag, n, parts)).unwrap().result.per_vertex;
        let init = initial_latents(n, cf_cfg.k, cf_cfg.seed);
        let cf = collaborative_filtering_from(&e, &graph(&bip, n, parts), 800, &cf_cfg, init).unwrap().result;
        let bits = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
        let cf_bits: Vec<Vec<u64>> = cf.users.iter().chain(&cf.items).map(|p| bits(p)).collect();
        (bits(&pr), bits(&b), bits(&s), t, cf_bits)
    };
    let base = run_all(1, 1);
    for (threads, ppt) in [(1, 8), (2, 1), (4, 8), (8, 3)] {
        assert!(run_all(threads, ppt) == base, "results changed at {threads} threads x {ppt}");
    }
}

/// `(Δp / γ)` from one engine step equals `-∇f / 2` by finite differences.
#[test]
fn cf_step_follows_negative_gradient() {
    for seed in 0..10u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (nu, ni) = (rng.gen_range(1..30), rng.gen_range(1..20));
        let k = if seed % 2 == 0 { 2 } else { 8 };
        let mut ratings = Vec::new();
        for u in 0..nu {
            for i in 0..ni {
                if rng.gen_bool(0.3) {
                    ratings.push(Rating { user: u, item: i, value: rng.gen_range(1..=5) as f64 });
                }
            }
        }
        let edges: Vec<_> = ratings
            .iter()
            .map(|r| EdgeTriple::new(r.user as u32, (nu + r.item) as u32, r.value))
            .collect();
        let n = nu + ni;
        let init = initial_latents(n, k, seed);
        let cfg = CfConfig { k, gamma: 1e-3, lambda: 0.05, iterations: 1, seed };
        let model = collaborative_filtering_from(&engine(2, 2), &graph(&edges, n, 4), nu, &cfg, init.clone())
            .unwrap()
            .result;
        let (gu, gi) = cf_fd_gradient(&ratings, &init[..nu], &init[nu..], cfg.lambda, 1e-5);
        let after = model.users.iter().chain(&model.items);
        let grad = gu.iter().chain(&gi);
        for ((p1, p0), g) in after.zip(&init).zip(grad) {
            let step: Vec<f64> = p1.iter().zip(p0).map(|(a, b)| (a - b) / cfg.gamma).collect();
            let want: Vec<f64> = g.iter().map(|x| -x / 2.0).collect();
            let diff = step.iter().zip(&want).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
            let scale = want.iter().map(|b| b * b).sum::<f64>().sqrt().max(1e-12);
            assert!(diff <= 1e-4 * scale, "seed {seed}: {step:?} vs {want:?}");
        }
    }
}

#[test]
fn bfs_from_isolated_root() {
    let edges = vec![EdgeTriple::new(1, 2, 1.0), EdgeTriple::new(2, 1, 1.0)];
    let run = bfs(&engine(1, 1), &graph(&edges, 3, 1), VertexId(0)).unwrap();
    assert_eq!(run.result, vec![0.0, f64::INFINITY, f64::INFINITY]);
    assert_eq!(run.stats.len(), 1);
}

#[test]
fn out_of_range_source_is_rejected() {
    let g = graph(&[], 3, 1);
    assert!(sssp(&engine(1, 1), &g, VertexId(3)).is_err());
    assert!(bfs(&engine(1, 1), &g, VertexId(7)).is_err());
}

/// A reachable vertex's BFS level equals its position in a breadth-first
/// queue order built by hand.
#[test]
fn bfs_levels_on_grid() {
    let side = 20u32;
    let mut edges = Vec::new();
    for r in 0..side {
        for c in 0..side {
            let v = r * side + c;
            if c + 1 < side {
                edges.push(EdgeTriple::new(v, v + 1, 1.0));
            }
            if r + 1 < side {
                edges.push(EdgeTriple::new(v, v + side, 1.0));
            }
        }
    }
    let edges = preprocess(edges, PreprocessMode::Symmetrize).unwrap();
    let n = (side * side) as usize;
    let d = bfs(&engine(4, 2), &graph(&edges, n, 8), VertexId(0)).unwrap().result;
    let mut q = VecDeque::from([0usize]);
    let mut seen = vec![false; n];
    seen[0] = true;
    while let Some(v) = q.pop_front() {
        let (r, c) = (v as u32 / side, v as u32 % side);
        assert_eq!(d[v], (r + c) as f64);
        for e in edges.iter().filter(|e| e.src.index() == v) {
            if !seen[e.dst.index()] {
                seen[e.dst.index()] = true;
                q.push_back(e.dst.index());
            }
        }
    }
}
