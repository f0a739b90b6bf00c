//! Input cleanup applied before building a graph.
//!
//! Self-loops are always dropped and duplicate `(src, dst)` pairs collapse
//! to the first occurrence. Output is sorted by `(src, dst)`, which makes
//! every mode idempotent.

use rayon::prelude::*;

use super::GraphIoError;
use crate::types::EdgeTriple;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PreprocessMode {
    None,
    /// Add the reverse of every edge.
    Symmetrize,
    /// Symmetrize, then keep only `src < dst`: one orientation per
    /// undirected edge, always acyclic.
    Dagify,
    /// Verify every edge runs from a user (`< num_users`) to an item.
    BipartiteCheck { num_users: usize },
}

fn dedup_keep_first<E: Send>(mut edges: Vec<EdgeTriple<E>>) -> Vec<EdgeTriple<E>> {
    // Stable: among equal keys the earliest edge stays in front.
    edges.par_sort_by_key(|e| (e.src, e.dst));
    edges.dedup_by(|later, first| later.src == first.src && later.dst == first.dst);
    edges
}

pub fn preprocess<E: Clone + Send>(
    mut edges: Vec<EdgeTriple<E>>,
    mode: PreprocessMode,
) -> Result<Vec<EdgeTriple<E>>, GraphIoError> {
    edges.retain(|e| e.src != e.dst);
    match mode {
        PreprocessMode::None => Ok(dedup_keep_first(edges)),
        PreprocessMode::Symmetrize | PreprocessMode::Dagify => {
            let reversed: Vec<_> = edges.iter().cloned().map(EdgeTriple::reversed).collect();
            edges.extend(reversed);
            if mode == PreprocessMode::Dagify {
                edges.retain(|e| e.src < e.dst);
            }
            Ok(dedup_keep_first(edges))
        }
        PreprocessMode::BipartiteCheck { num_users } => {
            if let Some(e) = edges
                .iter()
                .find(|e| e.src.index() >= num_users || e.dst.index() < num_users)
            {
                return Err(GraphIoError::NotBipartite {
                    src: e.src,
                    dst: e.dst,
                    num_users,
                });
            }
            Ok(dedup_keep_first(edges))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pairs(e: &[EdgeTriple<f64>]) -> Vec<(u32, u32)> {
        e.iter().map(|e| (e.src.0, e.dst.0)).collect()
    }

    fn unit(p: &[(u32, u32)]) -> Vec<EdgeTriple<f64>> {
        p.iter().map(|&(s, d)| EdgeTriple::new(s, d, 1.0)).collect()
    }

    #[test]
    fn self_loops_always_removed() {
        for mode in [
            PreprocessMode::None,
            PreprocessMode::Symmetrize,
            PreprocessMode::Dagify,
            PreprocessMode::BipartiteCheck { num_users: 1 },
        ] {
            assert!(preprocess(unit(&[(0, 0)]), mode).unwrap().is_empty());
        }
    }

    #[test]
    fn dagify_drops_lower_triangle() {
        assert_eq!(pairs(&preprocess(unit(&[(0, 1), (1, 0)]), PreprocessMode::Dagify).unwrap()), vec![(0, 1)]);
    }

    #[test]
    fn dagify_directed_triangle() {
        let out = preprocess(unit(&[(0, 1), (1, 2), (2, 0)]), PreprocessMode::Dagify).unwrap();
        assert_eq!(pairs(&out), vec![(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn duplicates_keep_first_value() {
        let edges = vec![EdgeTriple::new(0, 1, 5.0), EdgeTriple::new(0, 1, 9.0)];
        let out = preprocess(edges, PreprocessMode::None).unwrap();
        assert_eq!(out, vec![EdgeTriple::new(0, 1, 5.0)]);
    }

    #[test]
    fn symmetrize_prefers_original_direction_value() {
        let edges = vec![EdgeTriple::new(1, 0, 3.0), EdgeTriple::new(0, 1, 4.0)];
        let out = preprocess(edges, PreprocessMode::Symmetrize).unwrap();
        assert_eq!(out, vec![EdgeTriple::new(0, 1, 4.0), EdgeTriple::new(1, 0, 3.0)]);
    }

    #[test]
    fn bipartite_check_names_offender() {
        let err = preprocess(unit(&[(0, 2), (2, 3)]), PreprocessMode::BipartiteCheck { num_users: 2 }).unwrap_err();
        assert!(matches!(err, GraphIoError::NotBipartite { src, dst, .. } if src.0 == 2 && dst.0 == 3));
    }

    fn arb_edges() -> impl Strategy<Value = Vec<EdgeTriple<f64>>> {
        proptest::collection::vec((0u32..20, 0u32..20, 0u32..4), 0..80)
            .prop_map(|v| v.into_iter().map(|(s, d, w)| EdgeTriple::new(s, d, w as f64)).collect())
    }

    proptest! {
        #[test]
        fn idempotent(edges in arb_edges(), which in 0usize..3) {
            let mode = [PreprocessMode::None, PreprocessMode::Symmetrize, PreprocessMode::Dagify][which];
            let once = preprocess(edges, mode).unwrap();
            let twice = preprocess(once.clone(), mode).unwrap();
            prop_assert_eq!(once, twice);
        }

        #[test]
        fn dagify_keeps_each_undirected_edge_once(edges in arb_edges()) {
            let out = preprocess(edges.clone(), PreprocessMode::Dagify).unwrap();
            prop_assert!(out.iter().all(|e| e.src < e.dst));
            let mut want: Vec<(u32, u32)> = edges
                .iter()
                .filter(|e| e.src != e.dst)
                .map(|e| (e.src.0.min(e.dst.0), e.src.0.max(e.dst.0)))
                .collect();
            want.sort();
            want.dedup();
            prop_assert_eq!(pairs(&out), want);
        }
    }
}
