//! Counter-based keyed random number generation.
//!
//! Every stochastic decision in the pipeline (initial fills, residual noise,
//! class sampling, bootstrap weights, amputation) draws from a stream that is
//! a pure function of an explicit key. Identical keys yield identical draws
//! across runs, thread counts, and chunk sizes; distinct keys yield
//! statistically independent streams.

/// splitmix64 finalizer: full-avalanche mix of a 64-bit word.
#[inline(always)]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

const GOLDEN: u64 = 0x9e37_7966_7f4a_7c15;

/// A fully mixed stream key. Build one by folding in the words that identify
/// the draw site, then open a [`Stream`] on it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Key(u64);

impl Key {
    pub fn new(seed: u64) -> Self {
        Key(mix64(seed ^ GOLDEN))
    }

    /// Fold another identifying word into the key.
    #[inline(always)]
    pub fn mix(self, word: u64) -> Self {
        Key(mix64(self.0.wrapping_add(GOLDEN) ^ word))
    }

    pub fn stream(self) -> Stream {
        Stream { state: self.0 }
    }
}

/// splitmix64 output sequence rooted at a [`Key`].
#[derive(Clone, Debug)]
pub struct Stream {
    state: u64,
}

impl Stream {
    #[inline(always)]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix64(self.state)
    }

    /// Uniform draw on the half-open interval (0, 1]. The lower bound is
    /// excluded so the value is safe under `ln` and under the inverse-CDF
    /// rule's strict lower comparison.
    #[inline(always)]
    pub fn next_unit_open(&mut self) -> f64 {
        (((self.next_u64() >> 11) + 1) as f64) * (1.0 / 9_007_199_254_740_992.0)
    }

    /// Unbiased uniform integer in [0, n). Rejection-sampled.
    pub fn next_below(&mut self, n: u64) -> u64 {
        debug_assert!(n > 0);
        let threshold = n.wrapping_neg() % n;
        loop {
            let r = self.next_u64();
            let (hi, lo) = {
                let wide = (r as u128) * (n as u128);
                ((wide >> 64) as u64, wide as u64)
            };
            if lo >= threshold {
                return hi;
            }
        }
    }

    /// Standard Gaussian draw via Box-Muller.
    pub fn next_gaussian(&mut self) -> f64 {
        let u1 = self.next_unit_open();
        let u2 = self.next_unit_open();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }

    /// Poisson(1) draw by Knuth's product-of-uniforms method.
    pub fn next_poisson_unit(&mut self) -> u32 {
        let limit = (-1.0f64).exp();
        let mut k = 0u32;
        let mut p = 1.0f64;
        loop {
            p *= self.next_unit_open();
            if p <= limit {
                return k;
            }
            k += 1;
        }
    }
}
