//! Counter-based pseudo-random numbers.
//!
//! Every random decision in this crate is a pure function of a 64-bit seed
//! and a counter, so generated graphs and multi-run experiments are
//! bit-identical across platforms and thread schedules. The generator is the
//! SplitMix64 output function evaluated at `seed + (counter+1) * GOLDEN`.

use crate::scalar::Scalar;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stateless counter-based generator keyed by a seed.
#[derive(Clone, Copy, Debug)]
pub struct CounterRng {
    seed: u64,
}

impl CounterRng {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    /// Derive an independent stream, e.g. one per run index or per purpose.
    pub fn substream(&self, stream: u64) -> Self {
        Self {
            seed: mix(self.seed ^ mix(stream.wrapping_add(GOLDEN))),
        }
    }

    /// The `counter`-th 64-bit output of this stream.
    #[inline]
    pub fn u64_at(&self, counter: u64) -> u64 {
        mix(self
            .seed
            .wrapping_add(counter.wrapping_add(1).wrapping_mul(GOLDEN)))
    }

    /// Uniform draw in `[0, 1)` with 53 random bits.
    #[inline]
    pub fn unit_at<S: Scalar>(&self, counter: u64) -> S {
        let bits = self.u64_at(counter) >> 11;
        S::from_f64_lit(bits as f64 * (1.0 / (1u64 << 53) as f64))
    }

    /// Fair coin yielding +1 or -1.
    #[inline]
    pub fn sign_at<S: Scalar>(&self, counter: u64) -> S {
        if self.u64_at(counter) & 1 == 1 {
            S::one()
        } else {
            -S::one()
        }
    }

    /// Uniform random vector with entries in `{-1, +1}`.
    pub fn sign_vector<S: Scalar>(&self, len: usize) -> Vec<S> {
        (0..len).map(|i| self.sign_at(i as u64)).collect()
    }

    /// Vector with entries uniform in `(-1, 1)`, never exactly zero.
    pub fn unit_vector<S: Scalar>(&self, len: usize) -> Vec<S> {
        (0..len)
            .map(|i| {
                let u: S = self.unit_at(i as u64);
                let two = S::from_f64_lit(2.0);
                let x = two * u - S::one();
                if x == S::zero() {
                    S::from_f64_lit(0.5)
                } else {
                    x
                }
            })
            .collect()
    }
}

/// Decide a Bernoulli(p) event from one 64-bit draw using integer compare
/// only; `p = 1` always fires and `p = 0` never does.
#[inline]
pub fn bernoulli(word: u64, p: f64) -> bool {
    debug_assert!((0.0..=1.0).contains(&p));
    let threshold = (p * (u64::MAX as f64 + 1.0)) as u128;
    (word as u128) < threshold
}
