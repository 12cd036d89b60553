//! Channel models with seeded, counter-derived sampling: binary-input AWGN
//! and the p-ary symmetric channel.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives an independent stream seed from (master seed, point, frame).
/// Identical inputs give identical streams, so frames can be simulated in
/// any order on any number of workers.
pub fn derive_stream_seed(seed: u64, point: u64, frame: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(seed) ^ point.wrapping_mul(0xA24B_AED4_963E_E407)) ^ frame)
}

/// Per-frame random stream.
pub fn frame_rng(seed: u64, point: u64, frame: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(derive_stream_seed(seed, point, frame))
}

/// Binary-input AWGN channel at a given Eb/N0, with BPSK mapping bit 0 to +1.
#[derive(Clone, Copy, Debug)]
pub struct BiAwgn {
    pub ebn0_db: f64,
    pub rate: f64,
    pub sigma: f64,
}

impl BiAwgn {
    /// sigma^2 = 1 / (2 R 10^(EbN0_dB/10)).
    pub fn new(ebn0_db: f64, rate: f64) -> Result<BiAwgn> {
        if !(rate > 0.0 && rate <= 1.0) {
            return Err(Error::InvalidSimConfig(format!(
                "rate {rate} outside (0, 1]"
            )));
        }
        let sigma2 = 1.0 / (2.0 * rate * 10f64.powf(ebn0_db / 10.0));
        Ok(BiAwgn {
            ebn0_db,
            rate,
            sigma: sigma2.sqrt(),
        })
    }

    /// Maps bit b to (-1)^b and adds N(0, sigma^2) noise per symbol.
    pub fn transmit(&self, bits: &[u8], rng: &mut ChaCha12Rng) -> Vec<f64> {
        bits.iter()
            .map(|&b| {
                let x = if b == 0 { 1.0 } else { -1.0 };
                let noise: f64 = rng.sample(StandardNormal);
                x + self.sigma * noise
            })
            .collect()
    }

    pub fn llrs(&self, received: &[f64]) -> Vec<f64> {
        llr(received, self.sigma)
    }
}

/// LLR_i = 2 y_i / sigma^2 under the 0 -> +1 mapping.
pub fn llr(received: &[f64], sigma: f64) -> Vec<f64> {
    let s2 = sigma * sigma;
    received.iter().map(|&y| 2.0 * y / s2).collect()
}

/// p-ary symmetric channel: a symbol survives with probability 1 - epsilon
/// and otherwise becomes one of the other p-1 symbols uniformly.
#[derive(Clone, Copy, Debug)]
pub struct Psc {
    pub p: u32,
    pub epsilon: f64,
}

impl Psc {
    pub fn new(p: u32, epsilon: f64) -> Result<Psc> {
        if p < 2 {
            return Err(Error::InvalidSimConfig(format!(
                "alphabet size {p} must be >= 2"
            )));
        }
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(Error::InvalidSimConfig(format!(
                "epsilon {epsilon} outside [0, 1]"
            )));
        }
        Ok(Psc { p, epsilon })
    }

    pub fn transmit(&self, symbols: &[u8], rng: &mut ChaCha12Rng) -> Vec<u8> {
        symbols
            .iter()
            .map(|&s| {
                if rng.gen::<f64>() < self.epsilon {
                    // Uniform over the other p-1 symbols.
                    let shift = rng.gen_range(1..self.p);
                    ((s as u32 + shift) % self.p) as u8
                } else {
                    s
                }
            })
            .collect()
    }

    /// Per-position likelihood vectors: 1 - epsilon at the received symbol,
    /// epsilon/(p-1) everywhere else.
    pub fn likelihoods(&self, received: &[u8]) -> Vec<Vec<f64>> {
        let other = self.epsilon / (self.p - 1) as f64;
        received
            .iter()
            .map(|&r| {
                let mut row = vec![other; self.p as usize];
                row[r as usize] = 1.0 - self.epsilon;
                row
            })
            .collect()
    }
}
