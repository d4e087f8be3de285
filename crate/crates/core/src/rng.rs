//! Seedable, splittable random streams.
//!
//! Every logical task draws from its own stream, keyed by a [`StreamSeed`] and a
//! task index. The ChaCha8 block function is counter based, so the stream for
//! task `i` does not depend on how many other tasks were run before it or on
//! which worker ran them.
//!
//! Normal variates come from `rand_distr::StandardNormal` (ziggurat method).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Domain labels for deriving independent child seeds.
pub mod domain {
    pub const CANDIDATES: u64 = 0x6361_6e64;
    pub const RINGS: u64 = 0x7269_6e67;
    pub const MULTIPLICITY: u64 = 0x6d75_6c74;
    pub const DIRECTIONS: u64 = 0x6469_7263;
    pub const FALLBACK: u64 = 0x6661_6c6c;
    pub const SWEEP: u64 = 0x7377_6570;
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// A 64-bit key from which child keys and task streams are derived.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StreamSeed(pub u64);

impl StreamSeed {
    pub fn new(seed: u64) -> Self {
        StreamSeed(seed)
    }

    /// Derives an independent key for a sub-computation.
    pub fn child(self, label: u64) -> StreamSeed {
        StreamSeed(splitmix64(self.0 ^ splitmix64(label)))
    }

    /// The stream for task `index` under this key.
    pub fn stream(self, index: u64) -> RandomStream {
        let mut rng = ChaCha8Rng::seed_from_u64(self.0);
        rng.set_stream(index);
        RandomStream { rng }
    }
}

/// A deterministic random stream.
#[derive(Debug, Clone)]
pub struct RandomStream {
    rng: ChaCha8Rng,
}

impl RandomStream {
    pub fn new(seed: u64) -> Self {
        StreamSeed(seed).stream(0)
    }

    pub fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.random::<u64>()
    }

    pub fn fill_normal(&mut self, out: &mut [f64]) {
        for v in out.iter_mut() {
            *v = self.normal();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible() {
        let a: Vec<u64> = {
            let mut s = StreamSeed(7).stream(3);
            (0..5).map(|_| s.next_u64()).collect()
        };
        let b: Vec<u64> = {
            let mut s = StreamSeed(7).stream(3);
            (0..5).map(|_| s.next_u64()).collect()
        };
        assert_eq!(a, b);
    }

    #[test]
    fn distinct_tasks_differ() {
        let mut a = StreamSeed(7).stream(0);
        let mut b = StreamSeed(7).stream(1);
        assert_ne!(a.next_u64(), b.next_u64());
        assert_ne!(StreamSeed(7).child(1), StreamSeed(7).child(2));
    }
}
