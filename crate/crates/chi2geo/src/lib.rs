//! Geometric chi-square characterization of squared norms of Gaussian
//! vectors.
//!
//! For X ~ N(mu, C), the squared length ||X||^2 has a (noncentral) chi-square
//! distribution exactly when C is an orthogonal projection onto some subspace
//! W and mu lies in W. The degrees of freedom are then Dim(W), the dimension
//! of the smallest subspace that contains X - mu almost surely, and the
//! noncentrality is nu = ||mu||.
//!
//! This crate decides that question numerically and then verifies its own
//! answer two independent ways:
//!
//! - exact cumulant and MGF formulas for ||X||^2 against the chi-square side
//!   ([`moments`]), cross-checked by a numerical-differentiation oracle;
//! - seeded Monte Carlo sampling with a Kolmogorov-Smirnov test against a
//!   reference noncentral chi-square ([`verify`], [`chisq`]).
//!
//! See the `examples/` directory for one runnable program per capability, or
//! the `chi2geo` binary for the JSON-in/JSON-out command-line surface.

pub mod characterize;
pub mod chisq;
pub mod cli;
pub mod error;
pub mod gaussian;
pub mod generate;
pub mod moments;
pub mod report;
pub mod rng;
pub mod special;
pub mod spectral;
pub mod verify;

pub use characterize::{characterize, ChiSquareVerdict, DEFAULT_TOL};
pub use chisq::NoncentralChiSquare;
pub use error::{Error, Result};
pub use gaussian::{quadratic_form_to_norm, GaussianSpec, SampleBatch};
pub use generate::{generate_spec, GenerateParams};
pub use moments::{
    chisq_cumulants, cumulants_from_mgf, mgf_chisq, mgf_norm, quadratic_norm_cumulants,
    CumulantSequence,
};
pub use report::SpecDocument;
pub use spectral::{
    image_subspace, kernel_subspace, projection_onto, spectral_decompose, SpectralDecomposition,
    Subspace, SymmetricOperator,
};
pub use verify::{ks_test, sample_cumulants, verify, Thresholds, VerificationReport};
