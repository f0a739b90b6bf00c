//! Synthetic user/item rating graphs.
//!
//! Users are drawn uniformly. Items are drawn by a one-dimensional RMAT
//! descent that takes the lower half with probability 0.76 at every level,
//! giving a power-law popularity curve. Each `(user, item)` pair is rated
//! at most once with an integer in `1..=5`. Requests denser than a quarter
//! of all pairs fall back to uniform sampling without replacement.

use std::collections::HashSet;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::GraphIoError;
use crate::types::EdgeTriple;

const LOWER_HALF: f64 = 0.76;

fn skewed_item(rng: &mut impl Rng, num_items: u64, levels: u32) -> u64 {
    loop {
        let mut id = 0u64;
        for _ in 0..levels {
            id = (id << 1) | u64::from(rng.gen::<f64>() >= LOWER_HALF);
        }
        if id < num_items {
            return id;
        }
    }
}

/// Rating edges `user -> item`; users are `0..num_users`, items follow.
pub fn bipartite_generate(
    num_users: usize,
    num_items: usize,
    num_ratings: usize,
    seed: u64,
) -> Result<Vec<EdgeTriple<f64>>, GraphIoError> {
    let pairs = (num_users as u128) * (num_items as u128);
    if num_ratings as u128 > pairs {
        return Err(GraphIoError::InvalidParams(format!(
            "{num_ratings} ratings exceed {num_users} users x {num_items} items"
        )));
    }
    if num_users + num_items > u32::MAX as usize {
        return Err(GraphIoError::InvalidParams("vertex count exceeds the 32-bit id space".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (nu, ni) = (num_users as u64, num_items as u64);
    let edge = |u: u64, i: u64, r: f64| EdgeTriple::new(u as u32, (nu + i) as u32, r);

    if num_ratings as u128 * 4 > pairs {
        let picks = index::sample(&mut rng, pairs as usize, num_ratings);
        return Ok(picks
            .into_iter()
            .map(|p| {
                let r = rng.gen_range(1..=5) as f64;
                edge(p as u64 / ni, p as u64 % ni, r)
            })
            .collect());
    }

    let levels = ni.next_power_of_two().trailing_zeros();
    let mut seen = HashSet::with_capacity(num_ratings);
    let mut out = Vec::with_capacity(num_ratings);
    while out.len() < num_ratings {
        let u = rng.gen_range(0..nu);
        let i = skewed_item(&mut rng, ni, levels);
        if seen.insert(u * ni + i) {
            let r = rng.gen_range(1..=5) as f64;
            out.push(edge(u, i, r));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::preprocess::{preprocess, PreprocessMode};

    #[test]
    fn one_by_one() {
        let e = bipartite_generate(1, 1, 1, 7).unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!((e[0].src.0, e[0].dst.0), (0, 1));
        assert!((1.0..=5.0).contains(&e[0].value) && e[0].value.fract() == 0.0);
    }

    #[test]
    fn zero_ratings() {
        assert!(bipartite_generate(4, 3, 0, 1).unwrap().is_empty());
    }

    #[test]
    fn infeasible_request() {
        assert!(bipartite_generate(2, 2, 5, 1).is_err());
    }

    #[test]
    fn shape_holds_for_sparse_and_dense_requests() {
        for (u, i, r) in [(200, 50, 900), (10, 8, 70)] {
            let e = bipartite_generate(u, i, r, 3).unwrap();
            assert_eq!(e.len(), r);
            let clean = preprocess(e.clone(), PreprocessMode::BipartiteCheck { num_users: u }).unwrap();
            assert_eq!(clean.len(), r, "pairs must be unique");
            assert!(e.iter().all(|e| e.dst.index() < u + i));
        }
    }

    #[test]
    fn popular_items_are_skewed() {
        let e = bipartite_generate(5000, 64, 20000, 5).unwrap();
        let first = e.iter().filter(|e| e.dst.index() - 5000 < 8).count();
        // Uniform would give 1/8 of the ratings to the first eight items.
        assert!(first as f64 > 0.3 * e.len() as f64, "{first}");
    }
}
