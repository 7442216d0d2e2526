//! Seeded randomness helpers. Everything downstream of a seed is
//! bit-deterministic across runs and platforms (ChaCha8 keystream).

use crate::geometry::RotatedBox;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

/// Deterministic RNG used for parameter init, data synthesis and tests.
pub struct DetRng(ChaCha8Rng);

pub fn det_rng(seed: u64) -> DetRng {
    DetRng(ChaCha8Rng::seed_from_u64(seed))
}

impl DetRng {
    /// Derives an independent stream for a sub-task.
    pub fn fork(&mut self, tag: u64) -> DetRng {
        let base: u64 = self.0.random();
        det_rng(base ^ tag.wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.0.random::<f64>()
    }

    /// Standard normal via Box-Muller; kept local so the stream layout is
    /// ours, not the distribution crate's.
    pub fn normal(&mut self) -> f64 {
        let u1: f64 = self.0.random::<f64>().max(1e-12);
        let u2: f64 = self.0.random();
        (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
    }

    pub fn index(&mut self, n: usize) -> usize {
        assert!(n > 0);
        self.0.random_range(0..n)
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.0.random::<f64>() < p
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        // Fisher-Yates; explicit so the permutation stream is stable.
        for i in (1..items.len()).rev() {
            let j = self.0.random_range(0..=i);
            items.swap(i, j);
        }
    }
}

/// Random valid box within `[-extent, extent]^2`, sizes in `[0.5, 8]`.
pub fn random_box(rng: &mut DetRng, extent: f64) -> RotatedBox {
    RotatedBox::new(
        rng.uniform(-extent, extent),
        rng.uniform(-extent, extent),
        rng.uniform(0.5, 8.0),
        rng.uniform(0.5, 8.0),
        rng.uniform(-PI, PI),
    )
    .normalize()
}
