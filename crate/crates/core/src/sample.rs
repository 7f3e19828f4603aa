//! Deterministic sampling of integer points.
//!
//! "Generic" points are operationalized as random integer vectors drawn from
//! a seeded stream. Every sample is derived from (seed, index), so parallel
//! evaluation over the index range cannot change any result.

use crate::rat::Rat;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Budget for randomized genericity searches.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PointSamplerConfig {
    pub seed: u64,
    /// Number of points drawn per search stage. Must be >= 1.
    pub samples: usize,
    /// Coordinates are drawn uniformly from the integers in
    /// `[-coord_bound, coord_bound]`. Must be >= 1.
    pub coord_bound: u64,
}

impl Default for PointSamplerConfig {
    fn default() -> Self {
        PointSamplerConfig {
            seed: 42,
            samples: 64,
            coord_bound: 1000,
        }
    }
}

impl PointSamplerConfig {
    pub fn new(seed: u64, samples: usize, coord_bound: u64) -> Self {
        assert!(samples >= 1, "samples must be >= 1");
        assert!(coord_bound >= 1, "coord_bound must be >= 1");
        PointSamplerConfig {
            seed,
            samples,
            coord_bound,
        }
    }

    pub fn with_coord_bound(&self, coord_bound: u64) -> Self {
        PointSamplerConfig {
            coord_bound,
            ..self.clone()
        }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        PointSamplerConfig {
            seed,
            ..self.clone()
        }
    }

    /// Witness searches sweep coordinate bounds 10, 100, ... so that small,
    /// human-checkable witnesses are preferred; `coord_bound` is always the
    /// final stage.
    pub fn bound_schedule(&self) -> Vec<u64> {
        let mut stages = Vec::new();
        let mut b = 10u64;
        while b < self.coord_bound {
            stages.push(b);
            b = b.saturating_mul(10);
        }
        stages.push(self.coord_bound);
        stages
    }
}

fn rng_for(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn draw_coord(rng: &mut ChaCha8Rng, bound: u64) -> Rat {
    let span = 2 * bound + 1;
    let v = rng.next_u64() % span;
    Rat::from_int(v as i64 - bound as i64)
}

/// Integer vector sample `index` of the stream `(seed, bound)`.
pub fn sample_vector(seed: u64, index: u64, dim: usize, bound: u64) -> Vec<Rat> {
    let mut rng = rng_for(seed, index);
    (0..dim).map(|_| draw_coord(&mut rng, bound)).collect()
}

/// Integer scalar sample, avoiding the given excluded values. The draw range
/// widens after repeated misses so a small bound with a dense exclusion list
/// cannot stall the stream.
pub fn sample_scalar_avoiding(seed: u64, index: u64, bound: u64, excluded: &[Rat]) -> Rat {
    let mut rng = rng_for(seed, index ^ 0x5ca1_ab1e);
    let mut bound = bound.max(1);
    let mut misses = 0;
    loop {
        let v = draw_coord(&mut rng, bound);
        if !excluded.contains(&v) {
            return v;
        }
        misses += 1;
        if misses % 4 == 0 {
            bound = bound.saturating_mul(2);
        }
    }
}
