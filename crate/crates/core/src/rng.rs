//! Deterministic random number generation.
//!
//! Every random quantity in the crate comes from one of two documented
//! primitives so that results are reproducible from a single `u64` seed:
//!
//! * [`GaussianSource`]: ChaCha8 (via `rand_chacha`, seeded with
//!   `seed_from_u64`) driving a Box-Muller transform. Each `next_u64` output
//!   is mapped to a double in (0,1] by taking the top 53 bits; pairs (u1,u2)
//!   produce the pair (sqrt(-2 ln u1) cos(2 pi u2), sqrt(-2 ln u1) sin(2 pi u2)).
//!   The second variate is cached, so draws come in a fixed order.
//! * [`mix_seed`]: splitmix64-based stream derivation, used to build
//!   independent sub-seeds from (base seed, index) tuples, e.g. one seed per
//!   (SNR point, trial) in a BER sweep.
//!
//! Per-channel noise in `simulate_reception` uses the simpler derivation
//! `base_seed ^ channel_index`; ChaCha8 decorrelates adjacent seeds fully.
//! Bit-exactness is guaranteed within this implementation, not across ports.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// One step of splitmix64 over `state`, returning the mixed output.
///
/// Reference algorithm from Steele, Lea and Flood's SplittableRandom,
/// the common seed expander. First outputs from state 0:
/// 0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4.
pub fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives an independent sub-seed from a base seed and a list of indices.
///
/// The base seed is advanced once through splitmix64, then each index is
/// absorbed (XOR) and the state advanced again. Distinct index tuples give
/// decorrelated seeds; the derivation is order-sensitive, so (point, trial)
/// and (trial, point) differ.
pub fn mix_seed(base: u64, indices: &[u64]) -> u64 {
    let mut state = base;
    let mut out = splitmix64(&mut state);
    for &ix in indices {
        state ^= ix;
        out = splitmix64(&mut state);
    }
    out
}

/// Standard-normal source: ChaCha8 + Box-Muller, fully determined by the seed.
pub struct GaussianSource {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl GaussianSource {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            spare: None,
        }
    }

    /// Uniform in (0, 1]: top 53 bits of a u64, plus one ulp to exclude zero.
    fn uniform_open(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) as f64 + 1.0) * (1.0 / 9007199254740992.0)
    }

    /// Next standard-normal variate.
    pub fn next_gaussian(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = self.uniform_open();
        let u2 = self.uniform_open();
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (std::f64::consts::TAU * u2).sin_cos();
        self.spare = Some(r * s);
        r * c
    }

    /// Fills a buffer with normals of standard deviation `sigma`.
    pub fn fill_scaled(&mut self, out: &mut [f64], sigma: f64) {
        for v in out.iter_mut() {
            *v = sigma * self.next_gaussian();
        }
    }
}
