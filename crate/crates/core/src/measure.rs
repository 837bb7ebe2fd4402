//! Bernoulli sampling of boundary points and rigidity statistics.
//!
//! A sample has `depth` independent coordinates with `P(0) = q` followed by
//! the fixed tail `1^∞`. Along `1^∞` no section of `b`, `c` or `d` is ever
//! trivial, so the tail never makes a point look rigid: rigidity is decided
//! by the random prefix alone.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grig::{rigidity_depth, BoundaryPoint, Gen, GroupWord, Rigidity};

/// One point: `depth` coordinates with `P(0) = q`, then `1^∞`.
pub fn sample_point<R: Rng>(rng: &mut R, q: f64, depth: usize) -> BoundaryPoint {
    let prefix: Vec<u8> = (0..depth).map(|_| u8::from(!rng.gen_bool(q))).collect();
    BoundaryPoint::new(prefix, vec![1]).expect("nonempty period")
}

/// `samples` points drawn from a ChaCha stream seeded by `seed`.
pub fn sample_points(q: f64, samples: usize, depth: usize, seed: u64) -> Result<Vec<BoundaryPoint>> {
    check_q(q)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..samples).map(|_| sample_point(&mut rng, q, depth)).collect())
}

fn check_q(q: f64) -> Result<()> {
    if q > 0.0 && q < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("q must lie in (0, 1), got {q}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorRigidity {
    pub generator: Gen,
    pub rigid: usize,
    pub fraction: f64,
    /// Largest depth at which some rigid sample first became rigid.
    pub max_rigid_depth: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RigidityReport {
    pub q: f64,
    pub samples: usize,
    pub depth: usize,
    pub seed: u64,
    /// One entry per generator `a, b, c, d`; empty when no samples are drawn.
    pub generators: Vec<GeneratorRigidity>,
}

impl RigidityReport {
    pub fn min_fraction(&self) -> Option<f64> {
        self.generators.iter().map(|g| g.fraction).reduce(f64::min)
    }
}

/// Fraction of sampled points that are rigid within `depth` for each
/// generator. Deterministic for a given seed, independent of the thread
/// count.
pub fn rigidity_statistics(q: f64, samples: usize, depth: usize, seed: u64) -> Result<RigidityReport> {
    if depth == 0 {
        return Err(Error::InvalidArgument("depth must be at least 1".into()));
    }
    let points = sample_points(q, samples, depth, seed)?;
    let generators = if samples == 0 {
        Vec::new()
    } else {
        Gen::ALL
            .iter()
            .map(|&g| {
                let word = GroupWord::letter(g);
                let depths: Vec<Option<usize>> = points
                    .par_iter()
                    .map(|x| match rigidity_depth(x, &word, depth) {
                        Rigidity::RigidAt(n) => Some(n),
                        Rigidity::NotRigidUpTo(_) => None,
                    })
                    .collect();
                let rigid = depths.iter().flatten().count();
                GeneratorRigidity {
                    generator: g,
                    rigid,
                    fraction: rigid as f64 / samples as f64,
                    max_rigid_depth: depths.iter().flatten().copied().max().unwrap_or(0),
                }
            })
            .collect()
    };
    Ok(RigidityReport {
        q,
        samples,
        depth,
        seed,
        generators,
    })
}
