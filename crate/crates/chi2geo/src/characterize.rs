//! The decision procedure: is ||X||^2 chi-square distributed, and with which
//! degrees of freedom and noncentrality?
//!
//! ||X||^2 for X ~ N(mu, C) is chi-square exactly when C is idempotent
//! (an orthogonal projection) and C mu = mu (mu lies in the projected
//! subspace). Then df = Rank(C) = Dim(Image(C)) and the noncentrality is
//! nu = ||mu||. One tolerance parameter drives the idempotency, mean-fixing
//! and eigenvalue-classification checks; near-misses are reported as "no"
//! with diagnostics, never rounded up.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::gaussian::GaussianSpec;
use crate::spectral::{SpectralDecomposition, SymmetricOperator};

/// Default tolerance for all characterization checks.
pub const DEFAULT_TOL: f64 = 1e-8;

/// Numeric evidence backing (or refuting) a verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictDiagnostics {
    /// ||C^2 - C||_F.
    pub idempotency_residual: f64,
    /// ||C mu - mu||.
    pub mean_residual: f64,
    /// Eigenvalues not within tolerance of 0 or 1.
    pub offending_eigenvalues: Vec<f64>,
    /// True when mu has a component outside Image(C) beyond tolerance.
    pub mean_outside_image: bool,
    /// max(max_i min(|lambda_i|, |lambda_i - 1|), mean residual): how far the
    /// spec is from the nearest (projection, mu in image) pair.
    pub nearest_projection_distance: f64,
}

/// Outcome of [`characterize`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChiSquareVerdict {
    pub is_chi_square: bool,
    /// Degrees of freedom r = Dim(Image(C)); present iff chi-square.
    pub df: Option<usize>,
    /// Noncentrality nu = ||mu||; present iff chi-square.
    pub ncp: Option<f64>,
    /// True iff chi-square with df = 0 (point mass at 0).
    pub degenerate: bool,
    pub diagnostics: VerdictDiagnostics,
}

impl ChiSquareVerdict {
    /// Conventional noncentrality lambda = nu^2 (present iff chi-square).
    pub fn ncp_lambda(&self) -> Option<f64> {
        self.ncp.map(|nu| nu * nu)
    }
}

/// Eigenvalues split by proximity to {0, 1}.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenvalueClasses {
    pub zeros: Vec<f64>,
    pub ones: Vec<f64>,
    pub others: Vec<f64>,
}

/// `(passes, ||C^2 - C||_F)`; passes iff residual <= tol * max(1, ||C||_F).
pub fn check_idempotent(c: &SymmetricOperator, tol: f64) -> (bool, f64) {
    let residual = c.idempotency_residual();
    (residual <= tol * c.frobenius_norm().max(1.0), residual)
}

/// `(passes, ||C mu - mu||)`; passes iff residual <= tol * max(1, ||mu||).
pub fn check_mean_fixed(c: &SymmetricOperator, mu: &[f64], tol: f64) -> Result<(bool, f64)> {
    let cmu = c.apply(mu)?;
    let residual = cmu
        .iter()
        .zip(mu)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    let mu_norm = crate::spectral::norm(mu);
    Ok((residual <= tol * mu_norm.max(1.0), residual))
}

/// Partitions eigenvalues into {|l| <= tol}, {|l - 1| <= tol}, and the rest.
pub fn classify_eigenvalues(dec: &SpectralDecomposition, tol: f64) -> EigenvalueClasses {
    let mut classes = EigenvalueClasses {
        zeros: Vec::new(),
        ones: Vec::new(),
        others: Vec::new(),
    };
    for &l in &dec.eigenvalues {
        if l.abs() <= tol {
            classes.zeros.push(l);
        } else if (l - 1.0).abs() <= tol {
            classes.ones.push(l);
        } else {
            classes.others.push(l);
        }
    }
    classes
}

/// Full decision: chi-square iff C idempotent and C mu = mu, both within
/// `tol`; then df = #(eigenvalues at 1) and ncp = ||mu||.
pub fn characterize(spec: &GaussianSpec, tol: f64) -> ChiSquareVerdict {
    let c = spec.cov();
    let mu = spec.mu();
    let dec = spec.decomposition();

    let (idem_ok, idempotency_residual) = check_idempotent(c, tol);
    // dims are validated by construction
    let (mean_ok, mean_residual) = check_mean_fixed(c, mu, tol).expect("spec dims are consistent");
    let classes = classify_eigenvalues(dec, tol);

    let image = spec.image(tol);
    let outside = image.residual(mu).expect("spec dims are consistent");
    let mu_norm = spec.mean_norm();
    let mean_outside_image =
        crate::spectral::norm(&outside) > tol * mu_norm.max(1.0);

    let eig_distance = dec
        .eigenvalues
        .iter()
        .map(|l| l.abs().min((l - 1.0).abs()))
        .fold(0.0f64, f64::max);
    let nearest_projection_distance = eig_distance.max(mean_residual);

    let is_chi_square = idem_ok && mean_ok;
    let df = classes.ones.len();
    ChiSquareVerdict {
        is_chi_square,
        df: is_chi_square.then_some(df),
        ncp: is_chi_square.then_some(mu_norm),
        degenerate: is_chi_square && df == 0,
        diagnostics: VerdictDiagnostics {
            idempotency_residual,
            mean_residual,
            offending_eigenvalues: classes.others,
            mean_outside_image,
            nearest_projection_distance,
        },
    }
}
