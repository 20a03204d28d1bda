//! Counter-based uniform random source.
//!
//! Every draw is a pure function of `(seed, key)`. There is no generator
//! state to advance, so parallel consumers can evaluate arbitrary keys in
//! any order and always see the same values; a lattice update keyed by
//! `(generation, x, y)` cannot depend on the thread schedule.
//!
//! The mixing construction is fixed and must not change (golden frames
//! and seeded experiments depend on it). The seed and each key word pass
//! through the SplitMix64 finalizer `mix64`, absorbed left to right:
//!
//! ```text
//! h = mix64(seed ^ GOLDEN)
//! for (i, w) in key:  h = mix64(h + mix64(w + (i + 1) * GOLDEN))
//! ```
//!
//! with `GOLDEN = 0x9E3779B97F4A7C15` (2^64 / golden ratio) and all
//! arithmetic wrapping. Uniform values in `[0, 1)` take the top 53 bits
//! of the final word, exercising the full f64 mantissa.
//!
//! Frozen test vectors live in the unit tests below.

const GOLDEN: u64 = 0x9E3779B97F4A7C15;

/// SplitMix64 finalizer: a 64-bit bijection with good avalanche.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Raw 64-bit draw for `(seed, key)`.
pub fn value_u64(seed: u64, key: &[u64]) -> u64 {
    let mut h = mix64(seed ^ GOLDEN);
    for (i, &w) in key.iter().enumerate() {
        // Additive absorption: xor here would cancel whenever the running
        // state equals the mixed word (e.g. seed 0 with key [0]).
        h = mix64(h.wrapping_add(mix64(w.wrapping_add(GOLDEN.wrapping_mul(i as u64 + 1)))));
    }
    h
}

/// Uniform draw in `[0, 1)` with 53-bit resolution for `(seed, key)`.
pub fn value(seed: u64, key: &[u64]) -> f64 {
    // Top 53 bits over 2^53.
    (value_u64(seed, key) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Stream identifiers. Each consumer gets its own stream so that keys
/// never collide across subsystems sharing one run seed.
pub mod streams {
    pub const LATTICE_HOST_INIT: u64 = 1;
    pub const LATTICE_PARASITOID_INIT: u64 = 2;
    pub const GAME_INIT: u64 = 3;
    pub const GAME_WINNER: u64 = 4;
    pub const GAME_SWEEP_ORDER: u64 = 5;
    pub const AGGREGATE_X0: u64 = 6;
    pub const NOISE_SERIES: u64 = 7;
}

/// A named substream of the keyed source: `(seed, stream)` plus a counter
/// or cell coordinate per draw.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RngStream {
    seed: u64,
    stream: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        Self { seed, stream }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform `[0, 1)` at key `(stream, counter)`.
    pub fn at(&self, counter: u64) -> f64 {
        value(self.seed, &[self.stream, counter])
    }

    /// Uniform `[0, 1)` at key `(stream, generation, x, y)`.
    pub fn at_cell(&self, generation: u64, x: u64, y: u64) -> f64 {
        value(self.seed, &[self.stream, generation, x, y])
    }

    /// Raw 64-bit word at key `(stream, generation, counter)`.
    pub fn u64_at_step(&self, generation: u64, counter: u64) -> u64 {
        value_u64(self.seed, &[self.stream, generation, counter])
    }

    /// Uniform `[lo, hi)` at key `(stream, counter)`.
    pub fn range_at(&self, lo: f64, hi: f64, counter: u64) -> f64 {
        lo + (hi - lo) * self.at(counter)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_key_same_value() {
        let a = value(42, &[1, 2, 3]);
        let b = value(42, &[1, 2, 3]);
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn frozen_vectors() {
        // Golden values for the documented construction. If these move,
        // every seeded experiment and golden frame in the repo moves too.
        assert_eq!(value_u64(0, &[]), 0xe220a8397b1dcdaf);
        assert_eq!(value_u64(0, &[0]), 0xd49ffe2f0ef90131);
        assert_eq!(value_u64(42, &[7]), 0x6b97e72d6a87fa0b);
        assert_eq!(value_u64(42, &[1, 2, 3]), 0x78004b181ddf7c2c);
        assert_eq!(value_u64(0xDEADBEEF, &[5, 0, 11, 3]), 0x1ceb87ede7af3617);
        assert!((value(42, &[7]) - 0.420286606395649).abs() < 1e-15);
    }

    #[test]
    fn distinct_keys_distinct_values() {
        assert_ne!(value_u64(1, &[0]), value_u64(1, &[1]));
        assert_ne!(value_u64(1, &[0]), value_u64(2, &[0]));
        assert_ne!(value_u64(1, &[0, 1]), value_u64(1, &[1, 0]));
        // Length matters: [0] vs [0, 0].
        assert_ne!(value_u64(1, &[0]), value_u64(1, &[0, 0]));
    }

    #[test]
    fn uniform_mean_and_ks() {
        let n = 100_000;
        let stream = RngStream::new(2024, 99);
        let mut draws: Vec<f64> = (0..n).map(|i| stream.at(i)).collect();
        let mean = draws.iter().sum::<f64>() / n as f64;
        assert!((mean - 0.5).abs() < 0.01, "mean {mean}");

        draws.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut ks: f64 = 0.0;
        for (i, &u) in draws.iter().enumerate() {
            let lo = i as f64 / n as f64;
            let hi = (i + 1) as f64 / n as f64;
            ks = ks.max((u - lo).abs()).max((hi - u).abs());
        }
        assert!(ks < 0.01, "KS distance {ks}");
    }

    #[test]
    fn no_collisions_at_53_bits() {
        let n = 100_000u64;
        let mut seen = std::collections::HashSet::with_capacity(n as usize);
        for i in 0..n {
            let bits = value_u64(7, &[0, i]) >> 11;
            assert!(seen.insert(bits), "collision at counter {i}");
        }
    }

    #[test]
    fn values_in_unit_interval() {
        for i in 0..10_000 {
            let v = value(3, &[i]);
            assert!((0.0..1.0).contains(&v));
        }
    }
}
