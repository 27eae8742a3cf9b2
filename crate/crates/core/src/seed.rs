//! Deterministic, splittable streams of unit-interval uniforms.
//!
//! The generator is counter-based: draw `i` of a stream with key `k` is
//! `mix64(k + i * GOLDEN)`, where `mix64` is the SplitMix64 finaliser.
//! A stream is an arithmetic progression of counters, so splitting a
//! stream into interleaved halves (even/odd draws) is a bijective
//! re-indexing of the same randomness source, and the two halves are
//! statistically independent. Derived substreams (one per Monte-Carlo
//! sample) re-key through the same mixer, so parallel runs consume
//! disjoint streams regardless of schedule.

use crate::rat::Rat;
use num_bigint::BigInt;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finaliser: a fixed 64-bit mixing permutation.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A deterministic stream of uniform draws on `[0, 1)`.
///
/// `counter` and `stride` describe which arithmetic progression of the
/// key's counter space this stream walks; `split` halves the progression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedStream {
    key: u64,
    counter: u64,
    stride: u64,
}

impl SeedStream {
    /// Root stream for a user-supplied 64-bit seed.
    pub fn root(seed: u64) -> Self {
        SeedStream { key: mix64(seed ^ GOLDEN), counter: 0, stride: 1 }
    }

    /// Splits off two independent halves: the even-indexed and the
    /// odd-indexed draws of this stream.
    pub fn split(&self) -> (SeedStream, SeedStream) {
        let double = self.stride.wrapping_mul(2);
        (
            SeedStream { key: self.key, counter: self.counter, stride: double },
            SeedStream {
                key: self.key,
                counter: self.counter.wrapping_add(self.stride),
                stride: double,
            },
        )
    }

    /// Derives the `i`-th disjoint substream (fresh key) of this stream.
    /// Used to give every Monte-Carlo sample its own randomness source.
    pub fn substream(&self, i: u64) -> SeedStream {
        let key = mix64(self.key ^ mix64(i.wrapping_mul(GOLDEN).wrapping_add(1)));
        SeedStream { key, counter: 0, stride: 1 }
    }

    /// Next raw 64-bit draw.
    pub fn next_u64(&mut self) -> u64 {
        let v = mix64(self.key.wrapping_add(self.counter.wrapping_mul(GOLDEN)));
        self.counter = self.counter.wrapping_add(self.stride);
        v
    }

    /// Next uniform draw on `[0, 1)` with 53 bits of precision.
    pub fn next_unit_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Next uniform draw on `[0, 1)` as an exact dyadic rational `v / 2^64`.
    pub fn next_unit_rat(&mut self) -> Rat {
        let v = self.next_u64();
        Rat::new(BigInt::from(v), BigInt::from(1u128 << 64))
    }
}
