//! Seeded test-case factory: random rank-k orthogonal projections with a
//! mean of prescribed length inside the projected subspace, optionally
//! perturbed into a guaranteed non-chi-square case.

use crate::error::{Error, Result};
use crate::gaussian::GaussianSpec;
use crate::rng::NormalSource;
use crate::spectral::{projection_onto, Subspace, SymmetricOperator};

/// Parameters for [`generate_spec`].
#[derive(Debug, Clone, Copy)]
pub struct GenerateParams {
    pub dim: usize,
    pub rank: usize,
    /// Target noncentrality nu = ||mu||.
    pub ncp: f64,
    pub seed: u64,
    /// When > 0, one eigenvalue is shifted by this amount so the spec is
    /// guaranteed not chi-square.
    pub perturb: f64,
}

/// Random orthonormal vectors in R^n via Gram-Schmidt on seeded normal draws,
/// re-orthogonalized once for stability.
fn random_orthonormal(n: usize, count: usize, source: &mut NormalSource) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(count);
    while basis.len() < count {
        let mut v: Vec<f64> = (0..n).map(|_| source.next_normal()).collect();
        for _ in 0..2 {
            for b in &basis {
                let c = crate::spectral::dot(&v, b);
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= c * bi;
                }
            }
        }
        let norm = crate::spectral::norm(&v);
        if norm < 1e-6 {
            continue; // essentially dependent draw, retry
        }
        for vi in &mut v {
            *vi /= norm;
        }
        basis.push(v);
    }
    basis
}

/// Builds the spec. The covariance is an exact rank-k projection (sum of
/// outer products of an orthonormal basis); the mean is a random unit
/// combination of that basis scaled to length `ncp`.
pub fn generate_spec(params: &GenerateParams) -> Result<GaussianSpec> {
    let GenerateParams {
        dim,
        rank,
        ncp,
        seed,
        perturb,
    } = *params;
    if dim == 0 {
        return Err(Error::InvalidParameter {
            reason: "dim must be at least 1".into(),
        });
    }
    if rank > dim {
        return Err(Error::InvalidParameter {
            reason: format!("rank {rank} exceeds dim {dim}"),
        });
    }
    if !(ncp >= 0.0) {
        return Err(Error::InvalidParameter {
            reason: format!("ncp must be nonnegative, got {ncp}"),
        });
    }
    if !(perturb >= 0.0) {
        return Err(Error::InvalidParameter {
            reason: format!("perturb must be nonnegative, got {perturb}"),
        });
    }
    if rank == 0 && ncp > 0.0 {
        return Err(Error::InvalidParameter {
            reason: "ncp > 0 requires rank >= 1 (the mean must lie in the image)".into(),
        });
    }

    let mut source = NormalSource::new(seed, 0);
    // draw one extra vector when a kernel direction is needed for perturbation
    let extra = usize::from(perturb > 0.0 && rank < dim);
    let vectors = random_orthonormal(dim, rank + extra, &mut source);
    let image_basis = &vectors[..rank];

    let subspace = Subspace::new(dim, image_basis.to_vec())?;
    let mut cov = projection_onto(&subspace);

    let mut mu = vec![0.0; dim];
    if ncp > 0.0 {
        let coeffs: Vec<f64> = (0..rank).map(|_| source.next_normal()).collect();
        let scale = ncp / crate::spectral::norm(&coeffs);
        for (c, b) in coeffs.iter().zip(image_basis) {
            for (mi, bi) in mu.iter_mut().zip(b) {
                *mi += scale * c * bi;
            }
        }
    }

    if perturb > 0.0 {
        // shift one eigenvalue: a kernel direction 0 -> eps when available,
        // otherwise an image direction 1 -> 1 + eps
        let direction = if rank < dim {
            &vectors[rank]
        } else {
            &vectors[0]
        };
        let mut entries = cov.entries().to_vec();
        for i in 0..dim {
            for j in 0..dim {
                entries[i * dim + j] += perturb * direction[i] * direction[j];
            }
        }
        cov = SymmetricOperator::from_flat(dim, entries)?;
    }

    GaussianSpec::validate(mu, cov)
}
