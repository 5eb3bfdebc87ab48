//! Seeded, counter-splittable random number generation.
//!
//! One generator is fixed for the whole crate: ChaCha8 keyed by the user seed,
//! with the ChaCha stream number used as a substream index. Batches are split
//! into fixed chunks of [`CHUNK_SIZE`] draws; chunk `c` always uses substream
//! `c`, so a batch is bit-identical regardless of how the chunks are executed.
//!
//! Standard normals come from the paired Box-Muller transform: every call
//! consumes a fixed number of uniforms, so substreams never desynchronize.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Name and version of the fixed generator, echoed in every sample batch.
pub const GENERATOR_ID: &str = "chacha8-boxmuller-v1";

/// Draws per substream chunk.
pub const CHUNK_SIZE: usize = 65536;

/// RNG for chunk `chunk` of a batch keyed by `seed`.
pub fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// Uniform in (0, 1], using the top 53 bits.
#[inline]
fn unit_uniform(rng: &mut ChaCha8Rng) -> f64 {
    ((rng.next_u64() >> 11) + 1) as f64 * (1.0 / 9007199254740992.0)
}

/// Deterministic standard-normal source over one substream.
pub struct NormalSource {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl NormalSource {
    pub fn new(seed: u64, chunk: u64) -> Self {
        Self {
            rng: chunk_rng(seed, chunk),
            spare: None,
        }
    }

    /// Next N(0, 1) variate (Box-Muller pair, one value cached).
    pub fn next_normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = unit_uniform(&mut self.rng);
        let u2 = unit_uniform(&mut self.rng);
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = std::f64::consts::TAU * u2;
        self.spare = Some(r * theta.sin());
        r * theta.cos()
    }
}

/// The generator id pinned by the `CHI2GEO_GENERATOR` env var, if set.
///
/// Returns an error message when the pinned id is not the one this build
/// implements; silently accepting a different generator would break the
/// reproducibility contract.
pub fn resolve_generator_id() -> Result<&'static str, String> {
    match std::env::var("CHI2GEO_GENERATOR") {
        Ok(pinned) if pinned != GENERATOR_ID => Err(format!(
            "CHI2GEO_GENERATOR pins '{pinned}' but this build only provides '{GENERATOR_ID}'"
        )),
        _ => Ok(GENERATOR_ID),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn substreams_differ_and_repeat() {
        let a: Vec<f64> = {
            let mut s = NormalSource::new(7, 0);
            (0..8).map(|_| s.next_normal()).collect()
        };
        let a2: Vec<f64> = {
            let mut s = NormalSource::new(7, 0);
            (0..8).map(|_| s.next_normal()).collect()
        };
        let b: Vec<f64> = {
            let mut s = NormalSource::new(7, 1);
            (0..8).map(|_| s.next_normal()).collect()
        };
        assert_eq!(a, a2);
        assert_ne!(a, b);
    }

    #[test]
    fn normals_have_sane_moments() {
        let mut s = NormalSource::new(42, 0);
        let n = 200_000;
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        for _ in 0..n {
            let z = s.next_normal();
            sum += z;
            sumsq += z * z;
        }
        let mean = sum / n as f64;
        let var = sumsq / n as f64 - mean * mean;
        assert!(mean.abs() < 0.01, "mean {mean}");
        assert!((var - 1.0).abs() < 0.02, "var {var}");
    }
}
