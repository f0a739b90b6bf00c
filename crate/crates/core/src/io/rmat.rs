//! Recursive-matrix (RMAT) edge generator.
//!
//! Each edge descends `scale` levels of a 2x2 quadrant tree, picking the
//! top-left, top-right, bottom-left, or bottom-right quadrant with
//! probabilities `a`, `b`, `c`, `d = 1 - a - b - c`. No noise or vertex
//! permutation is applied. Self-loops and duplicates are left in place.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::GraphIoError;
use crate::types::EdgeTriple;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RmatParams {
    pub scale: u32,
    pub edge_factor: u64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub seed: u64,
}

impl RmatParams {
    /// A = 0.57, B = C = 0.19: the skew used for PageRank, BFS, and SSSP
    /// inputs.
    pub fn graph500(scale: u32, seed: u64) -> Self {
        RmatParams {
            scale,
            edge_factor: 16,
            a: 0.57,
            b: 0.19,
            c: 0.19,
            seed,
        }
    }

    /// A = 0.45, B = C = 0.15: the milder skew used for triangle counting.
    pub fn triangle(scale: u32, seed: u64) -> Self {
        RmatParams {
            a: 0.45,
            b: 0.15,
            c: 0.15,
            ..Self::graph500(scale, seed)
        }
    }

    /// A = 0.50, B = C = 0.10.
    pub fn sssp_large(scale: u32, seed: u64) -> Self {
        RmatParams {
            a: 0.50,
            b: 0.10,
            c: 0.10,
            ..Self::graph500(scale, seed)
        }
    }

    pub fn d(&self) -> f64 {
        1.0 - self.a - self.b - self.c
    }

    pub fn num_vertices(&self) -> usize {
        1usize << self.scale
    }

    pub fn num_tuples(&self) -> u64 {
        self.edge_factor << self.scale
    }

    pub fn validate(&self) -> Result<(), GraphIoError> {
        let bad = |m: String| Err(GraphIoError::InvalidParams(m));
        if !(1..=31).contains(&self.scale) {
            return bad(format!("scale must lie in 1..=31, got {}", self.scale));
        }
        if [self.a, self.b, self.c].iter().any(|p| !(*p >= 0.0)) {
            return bad("quadrant probabilities must be non-negative".into());
        }
        if self.a + self.b + self.c > 1.0 + 1e-12 {
            return bad(format!("a + b + c = {} exceeds 1", self.a + self.b + self.c));
        }
        Ok(())
    }
}

/// Emits exactly `edge_factor * 2^scale` unit-valued tuples,
/// reproducibly from the seed.
pub fn rmat_generate(p: &RmatParams) -> Result<Vec<EdgeTriple<f64>>, GraphIoError> {
    p.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let (ab, abc) = (p.a + p.b, p.a + p.b + p.c);
    let m = p.num_tuples() as usize;
    let mut out = Vec::with_capacity(m);
    for _ in 0..m {
        let (mut src, mut dst) = (0u32, 0u32);
        for _ in 0..p.scale {
            let r: f64 = rng.gen();
            let (row_bit, col_bit) = if r < p.a {
                (0, 0)
            } else if r < ab {
                (0, 1)
            } else if r < abc {
                (1, 0)
            } else {
                (1, 1)
            };
            src = (src << 1) | row_bit;
            dst = (dst << 1) | col_bit;
        }
        out.push(EdgeTriple::new(src, dst, 1.0));
    }
    Ok(out)
}
