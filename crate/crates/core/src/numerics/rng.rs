//! Counter-based random streams keyed by `(seed, stream index)`.
//!
//! Each stream is a ChaCha keystream: the master seed selects the key and
//! the stream index selects the ChaCha nonce, so trajectory `k` draws the
//! same numbers regardless of which worker runs it or in what order.

use num_complex::Complex64;
use rand::{distr::Open01, Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    index: u64,
    inner: ChaCha12Rng,
}

impl RngStream {
    pub fn new(seed: u64, index: u64) -> Self {
        let mut inner = ChaCha12Rng::seed_from_u64(seed);
        inner.set_stream(index);
        Self { seed, index, inner }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    /// Number of 32-bit words consumed so far.
    pub fn counter(&self) -> u128 {
        self.inner.get_word_pos()
    }

    /// Uniform on the open interval `(0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.inner.sample(Open01)
    }

    pub fn real_gaussian(&mut self) -> f64 {
        self.inner.sample(StandardNormal)
    }

    /// Circular complex Gaussian with `E|c|² = 1`.
    pub fn complex_gaussian(&mut self) -> Complex64 {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Complex64::new(self.real_gaussian() * s, self.real_gaussian() * s)
    }
}
