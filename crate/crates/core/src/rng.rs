//! Deterministic, splittable randomness.
//!
//! Every random draw in the crate comes from a ChaCha stream selected by
//! `(seed, stream)`, so independent sub-tasks never share state and results do
//! not depend on scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::pfaffian::SkewMatrix;
use crate::Q;

/// Magnitude bound for random integer matrix entries.
pub const ENTRY_BOUND: i64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeedTree {
    seed: u64,
}

impl SeedTree {
    pub fn new(seed: u64) -> Self {
        SeedTree { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }

    /// Child tree; streams of different children do not collide.
    pub fn child(&self, label: u64) -> SeedTree {
        let mut rng = self.stream(label.wrapping_add(0x9e37_79b9_7f4a_7c15));
        SeedTree { seed: rng.gen() }
    }
}

/// Random skew-symmetric matrix with integer entries in `[-10^6, 10^6]`.
pub fn random_skew<R: Rng>(size: usize, rng: &mut R) -> SkewMatrix {
    let mut upper = Vec::with_capacity(size * (size.saturating_sub(1)) / 2);
    for _ in 0..size * size.saturating_sub(1) / 2 {
        upper.push(Q::from_integer(rng.gen_range(-ENTRY_BOUND..=ENTRY_BOUND).into()));
    }
    SkewMatrix::from_upper(size, upper).expect("upper triangle has the right length")
}
