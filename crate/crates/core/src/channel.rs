//! BPSK over AWGN with reproducible per-frame noise.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::scalar::{clamp_llr, Real};

/// Noise level of an AWGN channel carrying a rate-`rate` code.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelParams {
    pub sigma: f64,
    pub ebno_db: f64,
    pub rate: f64,
}

impl ChannelParams {
    pub fn from_ebno(ebno_db: f64, rate: f64) -> Result<Self> {
        if !(rate > 0.0 && rate <= 1.0) {
            return Err(Error::InvalidConfig(format!("code rate must be in (0,1], got {rate}")));
        }
        Ok(Self { sigma: ebno_to_sigma(ebno_db, rate), ebno_db, rate })
    }
}

/// Channel LLRs for one received frame.
#[derive(Clone, Debug, PartialEq)]
pub struct LlrFrame<T> {
    pub values: Vec<T>,
    pub realization_id: u64,
}

/// σ = sqrt(1 / (2 R 10^(Eb/N0 / 10))) for unit-energy BPSK symbols.
pub fn ebno_to_sigma(ebno_db: f64, rate: f64) -> f64 {
    (1.0 / (2.0 * rate * 10f64.powf(ebno_db / 10.0))).sqrt()
}

/// 0 → +1, 1 → −1.
pub fn modulate_bpsk<T: Real>(bits: &[u8]) -> Vec<T> {
    bits.iter().map(|&b| if b == 0 { T::one() } else { -T::one() }).collect()
}

/// Adds i.i.d. N(0, σ²) noise drawn from a stream seeded by `seed`.
pub fn transmit<T: Real>(symbols: &[T], sigma: f64, seed: u64) -> Vec<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    symbols
        .iter()
        .map(|&s| {
            let z: f64 = StandardNormal.sample(&mut rng);
            s + T::lit(sigma * z)
        })
        .collect()
}

/// `2y/σ²`, clamped to the LLR saturation bound.
pub fn llr_from_channel<T: Real>(received: &[T], sigma: f64, realization_id: u64) -> LlrFrame<T> {
    let scale = T::lit(2.0 / (sigma * sigma));
    LlrFrame { values: received.iter().map(|&y| clamp_llr(scale * y)).collect(), realization_id }
}

/// LLRs for the all-zero codeword sent through the channel, one call per frame.
pub fn all_zero_frame<T: Real>(n: usize, sigma: f64, seed: u64) -> LlrFrame<T> {
    let received = transmit(&vec![T::one(); n], sigma, seed);
    llr_from_channel(&received, sigma, seed)
}

/// Mixes `(base, stream, index)` into a frame seed (SplitMix64 finaliser).
///
/// Seeds depend only on their inputs, so results do not depend on how frames
/// are scheduled across workers.
pub fn frame_seed(base: u64, stream: u64, index: u64) -> u64 {
    let mut z = base
        .wrapping_add(stream.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(index.wrapping_mul(0xD1B5_4A32_D192_ED03));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
