//! Gaussian specification, validation, seeded sampling, and the
//! quadratic-form-to-squared-norm bridge.
//!
//! Sampling goes through the spectral square root: each draw is
//! `mu + sum_i sqrt(lambda_i) z_i b_i` with independent standard normals
//! `z_i`. With a singular covariance the zero eigenvalues contribute exactly
//! nothing, so every draw lies in `mu + Image(C)` at machine precision. That
//! is the property the subspace containment tests lean on; a triangular
//! factorization would not give it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{NormalSource, CHUNK_SIZE, GENERATOR_ID};
use crate::spectral::{
    image_from_decomposition, kernel_from_decomposition, spectral_decompose, SpectralDecomposition,
    Subspace, SymmetricOperator,
};

/// Eigenvalue band around zero (relative to max(1, lambda_max)) clamped to
/// exactly 0 during validation; eigenvalues below the negative edge reject.
pub const PSD_CLAMP_TOL: f64 = 1e-10;

/// A validated Gaussian N(mu, C) with its covariance spectrum precomputed.
///
/// The decomposition is computed once at validation; eigenvalues inside the
/// clamp band are set to 0 and the largest clamp magnitude recorded.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianSpec {
    mu: Vec<f64>,
    cov: SymmetricOperator,
    decomposition: SpectralDecomposition,
    clamp_magnitude: f64,
}

impl GaussianSpec {
    /// Validates (mu, cov) into a spec: dimensions, symmetry, positive
    /// semidefiniteness (with the documented clamp band).
    pub fn validate(mu: Vec<f64>, cov: SymmetricOperator) -> Result<Self> {
        if mu.len() != cov.dim() {
            return Err(Error::DimensionMismatch {
                expected: cov.dim(),
                got: mu.len(),
            });
        }
        let mut decomposition = spectral_decompose(&cov)?;
        let lambda_max = decomposition
            .eigenvalues
            .iter()
            .fold(f64::NEG_INFINITY, |m, &v| m.max(v));
        let threshold = -PSD_CLAMP_TOL * lambda_max.max(1.0);
        let min_eigenvalue = decomposition
            .eigenvalues
            .iter()
            .fold(f64::INFINITY, |m, &v| m.min(v));
        if min_eigenvalue < threshold {
            return Err(Error::NotPositiveSemidefinite {
                min_eigenvalue,
                threshold,
            });
        }
        // Zero the whole clamp band, not just negatives: a stray 1e-16
        // eigenvalue would otherwise leak sqrt(1e-16) = 1e-8 noise into
        // kernel directions at sample time.
        let band = PSD_CLAMP_TOL * lambda_max.max(1.0);
        let mut clamp_magnitude = 0.0f64;
        for lambda in &mut decomposition.eigenvalues {
            if lambda.abs() <= band && *lambda != 0.0 {
                clamp_magnitude = clamp_magnitude.max(lambda.abs());
                *lambda = 0.0;
            }
        }
        Ok(Self {
            mu,
            cov,
            decomposition,
            clamp_magnitude,
        })
    }

    /// Convenience constructor from raw rows.
    pub fn from_raw(mu: Vec<f64>, cov_rows: &[Vec<f64>]) -> Result<Self> {
        Self::validate(mu, SymmetricOperator::from_rows(cov_rows)?)
    }

    pub fn dim(&self) -> usize {
        self.mu.len()
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    pub fn cov(&self) -> &SymmetricOperator {
        &self.cov
    }

    /// Clamped spectral decomposition of the covariance (all eigenvalues >= 0).
    pub fn decomposition(&self) -> &SpectralDecomposition {
        &self.decomposition
    }

    /// Largest negative eigenvalue magnitude clamped to zero at validation.
    pub fn clamp_magnitude(&self) -> f64 {
        self.clamp_magnitude
    }

    /// ||mu||.
    pub fn mean_norm(&self) -> f64 {
        crate::spectral::norm(&self.mu)
    }

    /// Mean coordinates in the covariance eigenbasis.
    pub fn mean_in_eigenbasis(&self) -> Vec<f64> {
        self.decomposition
            .eigenvectors
            .iter()
            .map(|b| crate::spectral::dot(b, &self.mu))
            .collect()
    }

    pub fn image(&self, tol: f64) -> Subspace {
        image_from_decomposition(&self.decomposition, tol)
    }

    pub fn kernel(&self, tol: f64) -> Subspace {
        kernel_from_decomposition(&self.decomposition, tol)
    }

    /// Draws `count` samples with the fixed chunked-substream generator.
    pub fn sample(&self, count: usize, seed: u64) -> SampleBatch {
        let n = self.dim();
        let sqrt_lambda: Vec<f64> = self
            .decomposition
            .eigenvalues
            .iter()
            .map(|l| l.max(0.0).sqrt())
            .collect();
        let mut draws = vec![0.0f64; count * n];
        let chunks = count.div_ceil(CHUNK_SIZE);
        for chunk in 0..chunks {
            let start = chunk * CHUNK_SIZE;
            let end = (start + CHUNK_SIZE).min(count);
            let mut source = NormalSource::new(seed, chunk as u64);
            for draw in start..end {
                let x = &mut draws[draw * n..(draw + 1) * n];
                x.copy_from_slice(&self.mu);
                for (sl, b) in sqrt_lambda.iter().zip(&self.decomposition.eigenvectors) {
                    let z = source.next_normal();
                    if *sl == 0.0 {
                        continue;
                    }
                    let scale = sl * z;
                    for (xi, bi) in x.iter_mut().zip(b) {
                        *xi += scale * bi;
                    }
                }
            }
        }
        SampleBatch {
            n,
            count,
            draws,
            seed,
            generator_id: GENERATOR_ID.to_string(),
        }
    }
}

/// A batch of draws, reproducible bit-exactly from (seed, generator, count, spec).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleBatch {
    pub n: usize,
    pub count: usize,
    /// Row-major: draw `i` occupies `draws[i*n .. (i+1)*n]`.
    pub draws: Vec<f64>,
    pub seed: u64,
    pub generator_id: String,
}

impl SampleBatch {
    pub fn draw(&self, i: usize) -> &[f64] {
        &self.draws[i * self.n..(i + 1) * self.n]
    }

    pub fn iter_draws(&self) -> impl Iterator<Item = &[f64]> {
        self.draws.chunks_exact(self.n)
    }
}

/// Converts the quadratic form `X . A(X)` (X ~ N(mu, I)) into the squared-norm
/// view: for idempotent self-adjoint A, `X . A(X) = ||A(X)||^2` and
/// `A(X) ~ N(A mu, A)`.
///
/// Fails with [`Error::NotIdempotent`] when `||A^2 - A||_F` exceeds
/// `tol * max(1, ||A||_F)`; in that case no equivalent squared-norm
/// formulation exists.
pub fn quadratic_form_to_norm(
    a: &SymmetricOperator,
    mu: &[f64],
    tol: f64,
) -> Result<GaussianSpec> {
    if mu.len() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: mu.len(),
        });
    }
    let residual = a.idempotency_residual();
    if residual > tol * a.frobenius_norm().max(1.0) {
        return Err(Error::NotIdempotent { residual });
    }
    let projected_mean = a.apply(mu)?;
    GaussianSpec::validate(projected_mean, a.clone())
}
