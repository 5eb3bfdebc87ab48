//! Self-adjoint spectral decomposition, orthogonal projections, and
//! kernel/image subspace extraction.
//!
//! The eigensolver is a cyclic Jacobi iteration: deterministic, foolproof for
//! real symmetric matrices, and accurate enough at the dimensions this crate
//! targets (n up to a few hundred). Eigenvectors carry a fixed sign convention
//! (first nonzero component positive) so decompositions are reproducible.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative asymmetry allowed when constructing a [`SymmetricOperator`].
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Off-diagonal Frobenius mass target for Jacobi convergence, relative to ||M||_F.
const JACOBI_OFF_TOL: f64 = 1e-14;

/// Default relative eigenvalue threshold for rank decisions.
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

/// A real symmetric n x n operator, stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetricOperator {
    dim: usize,
    entries: Vec<f64>,
}

impl SymmetricOperator {
    /// Builds an operator from a flat row-major array, checking symmetry.
    ///
    /// Asymmetry within `1e-12 * max(1, max|entry|)` is averaged away;
    /// anything larger is a [`Error::NonSymmetric`].
    pub fn from_flat(dim: usize, entries: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter {
                reason: "operator dimension must be at least 1".into(),
            });
        }
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        let max_abs = entries.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
        let tolerance = SYMMETRY_TOL * max_abs.max(1.0);
        let mut max_asymmetry = 0.0f64;
        for i in 0..dim {
            for j in (i + 1)..dim {
                max_asymmetry = max_asymmetry.max((entries[i * dim + j] - entries[j * dim + i]).abs());
            }
        }
        if max_asymmetry > tolerance {
            return Err(Error::NonSymmetric {
                max_asymmetry,
                tolerance,
            });
        }
        // Symmetrize exactly so downstream code never sees the residual skew.
        let mut sym = entries;
        for i in 0..dim {
            for j in (i + 1)..dim {
                let avg = 0.5 * (sym[i * dim + j] + sym[j * dim + i]);
                sym[i * dim + j] = avg;
                sym[j * dim + i] = avg;
            }
        }
        Ok(Self { dim, entries: sym })
    }

    /// Builds an operator from nested rows.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: row.len(),
                });
            }
        }
        Self::from_flat(dim, rows.iter().flatten().copied().collect())
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![0.0; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = 1.0;
        }
        Self { dim, entries }
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![0.0; dim * dim],
        }
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let dim = values.len();
        let mut entries = vec![0.0; dim * dim];
        for (i, &v) in values.iter().enumerate() {
            entries[i * dim + i] = v;
        }
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// Nested-row copy of the entries, for serialization surfaces.
    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim)
            .map(|i| self.entries[i * self.dim..(i + 1) * self.dim].to_vec())
            .collect()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.dim + j]
    }

    /// Matrix-vector product M v.
    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: v.len(),
            });
        }
        Ok((0..self.dim)
            .map(|i| {
                self.entries[i * self.dim..(i + 1) * self.dim]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    /// Matrix product M N (both symmetric inputs, result may not be).
    fn matmul_flat(&self, other: &Self) -> Vec<f64> {
        let n = self.dim;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += a * other.entries[k * n + j];
                }
            }
        }
        out
    }

    /// Frobenius norm ||M||_F.
    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Frobenius norm of M^2 - M.
    pub fn idempotency_residual(&self) -> f64 {
        let sq = self.matmul_flat(self);
        sq.iter()
            .zip(&self.entries)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

/// Orthonormal eigenbasis with eigenvalues sorted descending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralDecomposition {
    /// Eigenvalues, descending.
    pub eigenvalues: Vec<f64>,
    /// `eigenvectors[i]` pairs with `eigenvalues[i]`.
    pub eigenvectors: Vec<Vec<f64>>,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn max_abs_eigenvalue(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0f64, |m, &v| m.max(v.abs()))
    }

    /// Reconstructs sum_i lambda_i b_i b_i^T.
    pub fn reconstruct(&self) -> SymmetricOperator {
        let n = self.dim();
        let mut entries = vec![0.0; n * n];
        for (lambda, b) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            for i in 0..n {
                let s = lambda * b[i];
                for j in 0..n {
                    entries[i * n + j] += s * b[j];
                }
            }
        }
        SymmetricOperator { dim: n, entries }
    }
}

/// A subspace of R^n given by an orthonormal basis (possibly empty).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<Vec<f64>>,
}

impl Subspace {
    /// Validates pairwise orthonormality within 1e-10.
    pub fn new(ambient_dim: usize, basis: Vec<Vec<f64>>) -> Result<Self> {
        if basis.len() > ambient_dim {
            return Err(Error::InvalidSubspace {
                reason: format!(
                    "basis of {} vectors exceeds ambient dimension {}",
                    basis.len(),
                    ambient_dim
                ),
            });
        }
        for v in &basis {
            if v.len() != ambient_dim {
                return Err(Error::InvalidSubspace {
                    reason: format!("basis vector of length {} in R^{}", v.len(), ambient_dim),
                });
            }
        }
        for i in 0..basis.len() {
            for j in i..basis.len() {
                let dot: f64 = basis[i].iter().zip(&basis[j]).map(|(a, b)| a * b).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                if (dot - target).abs() > 1e-10 {
                    return Err(Error::InvalidSubspace {
                        reason: format!(
                            "basis vectors {i}, {j} fail orthonormality: <v_i, v_j> = {dot}"
                        ),
                    });
                }
            }
        }
        Ok(Self { ambient_dim, basis })
    }

    pub fn trivial(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: Vec::new(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<f64>] {
        &self.basis
    }

    /// Component of `v` orthogonal to this subspace.
    pub fn residual(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                got: v.len(),
            });
        }
        let mut r = v.to_vec();
        for b in &self.basis {
            let c: f64 = b.iter().zip(v).map(|(a, x)| a * x).sum();
            for (ri, bi) in r.iter_mut().zip(b) {
                *ri -= c * bi;
            }
        }
        Ok(r)
    }
}

/// Jacobi eigendecomposition of a symmetric operator.
///
/// Converges when the off-diagonal Frobenius mass drops below
/// `1e-14 * ||M||_F`, with a hard limit of `100 * n^2` sweeps. Eigenvalues are
/// returned descending; each eigenvector's first nonzero component is made
/// positive so the output is deterministic.
pub fn spectral_decompose(m: &SymmetricOperator) -> Result<SpectralDecomposition> {
    let n = m.dim;
    let norm = m.frobenius_norm();
    let mut a = m.entries.clone();
    // v starts as identity; rows end up as eigenvectors.
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }

    let off = |a: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                s += 2.0 * a[i * n + j] * a[i * n + j];
            }
        }
        s.sqrt()
    };

    let max_sweeps = 100 * n * n;
    let target = JACOBI_OFF_TOL * norm;
    let mut converged = off(&a) <= target;
    let mut sweeps = 0;
    while !converged {
        if sweeps >= max_sweeps {
            return Err(Error::ConvergenceFailure { sweeps });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // Rotate rows/columns p and q of A.
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                // Accumulate the rotation into the eigenvector rows.
                for k in 0..n {
                    let vpk = v[p * n + k];
                    let vqk = v[q * n + k];
                    v[p * n + k] = c * vpk - s * vqk;
                    v[q * n + k] = s * vpk + c * vqk;
                }
            }
        }
        converged = off(&a) <= target;
    }

    let mut pairs: Vec<(f64, Vec<f64>)> = (0..n)
        .map(|i| (a[i * n + i], v[i * n..(i + 1) * n].to_vec()))
        .collect();
    pairs.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap());

    let mut eigenvalues = Vec::with_capacity(n);
    let mut eigenvectors = Vec::with_capacity(n);
    for (lambda, mut b) in pairs {
        if let Some(first) = b.iter().find(|x| x.abs() > 1e-12) {
            if *first < 0.0 {
                for x in &mut b {
                    *x = -*x;
                }
            }
        }
        eigenvalues.push(lambda);
        eigenvectors.push(b);
    }
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// Orthogonal projection P = sum_i b_i b_i^T onto `w`.
pub fn projection_onto(w: &Subspace) -> SymmetricOperator {
    let n = w.ambient_dim();
    let mut entries = vec![0.0; n * n];
    for b in w.basis() {
        for i in 0..n {
            for j in 0..n {
                entries[i * n + j] += b[i] * b[j];
            }
        }
    }
    SymmetricOperator { dim: n, entries }
}

/// Eigenvectors with `|lambda| > tol * max(1, max|lambda|)` span the image.
pub fn image_subspace(m: &SymmetricOperator, tol: f64) -> Result<Subspace> {
    let dec = spectral_decompose(m)?;
    Ok(image_from_decomposition(&dec, tol))
}

/// Orthogonal complement of the image: eigenvectors below the rank threshold.
pub fn kernel_subspace(m: &SymmetricOperator, tol: f64) -> Result<Subspace> {
    let dec = spectral_decompose(m)?;
    Ok(kernel_from_decomposition(&dec, tol))
}

pub fn image_from_decomposition(dec: &SpectralDecomposition, tol: f64) -> Subspace {
    let threshold = tol * dec.max_abs_eigenvalue().max(1.0);
    let basis = dec
        .eigenvalues
        .iter()
        .zip(&dec.eigenvectors)
        .filter(|(l, _)| l.abs() > threshold)
        .map(|(_, b)| b.clone())
        .collect();
    Subspace {
        ambient_dim: dec.dim(),
        basis,
    }
}

pub fn kernel_from_decomposition(dec: &SpectralDecomposition, tol: f64) -> Subspace {
    let threshold = tol * dec.max_abs_eigenvalue().max(1.0);
    let basis = dec
        .eigenvalues
        .iter()
        .zip(&dec.eigenvectors)
        .filter(|(l, _)| l.abs() <= threshold)
        .map(|(_, b)| b.clone())
        .collect();
    Subspace {
        ambient_dim: dec.dim(),
        basis,
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn identity_decomposition() {
        let dec = spectral_decompose(&SymmetricOperator::identity(2)).unwrap();
        assert_close(dec.eigenvalues[0], 1.0, 1e-14);
        assert_close(dec.eigenvalues[1], 1.0, 1e-14);
        for (i, bi) in dec.eigenvectors.iter().enumerate() {
            for (j, bj) in dec.eigenvectors.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                assert_close(dot(bi, bj), target, 1e-10);
            }
            // sign convention
            let first = bi.iter().find(|x| x.abs() > 1e-12).unwrap();
            assert!(*first > 0.0);
        }
    }

    #[test]
    fn rank_one_projection_decomposition() {
        let m = SymmetricOperator::from_rows(&[vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap();
        let dec = spectral_decompose(&m).unwrap();
        assert_close(dec.eigenvalues[0], 1.0, 1e-12);
        assert_close(dec.eigenvalues[1], 0.0, 1e-12);
        let b = &dec.eigenvectors[0];
        // M b = 1 * b, checked by direct multiplication
        let mb = m.apply(b).unwrap();
        for (x, y) in mb.iter().zip(b) {
            assert_close(*x, *y, 1e-12);
        }
        let inv_sqrt2 = 1.0 / 2.0f64.sqrt();
        assert_close(b[0], inv_sqrt2, 1e-12);
        assert_close(b[1], inv_sqrt2, 1e-12);
    }

    #[test]
    fn diagonal_decomposition() {
        let dec = spectral_decompose(&SymmetricOperator::diagonal(&[2.0, 0.0])).unwrap();
        assert_eq!(dec.eigenvalues, vec![2.0, 0.0]);
        assert_eq!(dec.eigenvectors[0], vec![1.0, 0.0]);
        assert_eq!(dec.eigenvectors[1], vec![0.0, 1.0]);
    }

    #[test]
    fn non_symmetric_rejected() {
        let err = SymmetricOperator::from_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap_err();
        assert!(matches!(err, Error::NonSymmetric { .. }));
    }

    #[test]
    fn projection_examples() {
        let w = Subspace::new(2, vec![vec![1.0, 0.0]]).unwrap();
        assert_eq!(projection_onto(&w).entries(), &[1.0, 0.0, 0.0, 0.0]);

        let s = 1.0 / 2.0f64.sqrt();
        let w = Subspace::new(2, vec![vec![s, s]]).unwrap();
        let p = projection_onto(&w);
        for (got, want) in p.entries().iter().zip(&[0.5, 0.5, 0.5, 0.5]) {
            assert_close(*got, *want, 1e-15);
        }

        let w = Subspace::trivial(3);
        assert_eq!(projection_onto(&w).entries(), &[0.0; 9]);
    }

    #[test]
    fn image_and_kernel_examples() {
        let m = SymmetricOperator::diagonal(&[1.0, 1.0, 0.0]);
        let img = image_subspace(&m, 1e-8).unwrap();
        assert_eq!(img.dim(), 2);
        let ker = kernel_subspace(&m, 1e-8).unwrap();
        assert_eq!(ker.dim(), 1);
        assert_close(ker.basis()[0][2].abs(), 1.0, 1e-12);

        let img = image_subspace(&SymmetricOperator::zero(2), 1e-8).unwrap();
        assert_eq!(img.dim(), 0);

        let ker = kernel_subspace(&SymmetricOperator::identity(3), 1e-8).unwrap();
        assert_eq!(ker.dim(), 0);

        let m = SymmetricOperator::from_rows(&[vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap();
        let img = image_subspace(&m, 1e-8).unwrap();
        assert_eq!(img.dim(), 1);
        let ker = kernel_subspace(&m, 1e-8).unwrap();
        assert_eq!(ker.dim(), 1);
        // kernel is span{(1,-1)/sqrt 2} up to sign
        let v = &ker.basis()[0];
        assert_close(v[0].abs(), 1.0 / 2.0f64.sqrt(), 1e-12);
        assert_close(v[0] + v[1], 0.0, 1e-12);
    }

    #[test]
    fn idempotency_residual_diag() {
        let m = SymmetricOperator::diagonal(&[0.5, 1.0]);
        assert_close(m.idempotency_residual(), 0.25, 1e-15);
    }
}
