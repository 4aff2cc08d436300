//! Reproducible random streams.
//!
//! Every consumer draws from ChaCha8, a counter-based stream cipher RNG. The
//! 256-bit key is expanded from the 64-bit master seed with
//! `SeedableRng::seed_from_u64` (a PCG32 expansion fixed by `rand_core`), and
//! each logical unit of work (a sampled row, a CPT table) gets its own 64-bit
//! stream id. Output is therefore identical whatever the thread schedule, and
//! identical across platforms.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Stream(ChaCha8Rng);

impl Stream {
    pub fn new(master_seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
        rng.set_stream(stream);
        Stream(rng)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform draw in `[0, 1)` from the top 53 bits of one output word.
    pub fn unit(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Index drawn from a probability row by inverse CDF.
    pub fn categorical(&mut self, row: &[f64]) -> usize {
        let u = self.unit();
        let mut acc = 0.0;
        for (k, &p) in row.iter().enumerate() {
            acc += p;
            if u < acc {
                return k;
            }
        }
        // rounding left the cumulative sum just below 1: take the last
        // index carrying positive mass
        row.iter().rposition(|&p| p > 0.0).unwrap_or(0)
    }
}
