//! Sampling with a singular covariance: every draw stays in mu + Image(C) to
//! machine precision, and the kernel directions carry exactly zero variance.
//!
//! Run with: cargo run --example degenerate_geometry

use chi2geo::{GaussianSpec, DEFAULT_TOL};

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn main() {
    // rank-1 covariance in R^3: X - mu lives on a line
    let spec = GaussianSpec::from_raw(
        vec![1.0, 1.0, 0.0],
        &[
            vec![0.5, 0.5, 0.0],
            vec![0.5, 0.5, 0.0],
            vec![0.0, 0.0, 0.0],
        ],
    )
    .unwrap();
    let image = spec.image(DEFAULT_TOL);
    let kernel = spec.kernel(DEFAULT_TOL);
    println!(
        "dim = {}, rank = {}, kernel dim = {}",
        spec.dim(),
        image.dim(),
        kernel.dim()
    );

    let batch = spec.sample(10_000, 4);
    let mut max_residual = 0.0f64;
    let mut kernel_extent = vec![0.0f64; kernel.dim()];
    for x in batch.iter_draws() {
        let centered: Vec<f64> = x.iter().zip(spec.mu()).map(|(a, b)| a - b).collect();
        let resid = image.residual(&centered).unwrap();
        max_residual = max_residual.max(dot(&resid, &resid).sqrt());
        for (e, v) in kernel_extent.iter_mut().zip(kernel.basis()) {
            *e = e.max(dot(&centered, v).abs());
        }
    }
    println!("max distance of X - mu from Image(C) over 10^4 draws: {max_residual:.2e}");
    for (i, e) in kernel_extent.iter().enumerate() {
        println!("max |<X - mu, kernel basis {i}>|: {e:.2e}");
    }

    // the smallest subspace containing X - mu almost surely is Image(C),
    // so Dim(Image(C)) is the geometric degrees of freedom
    let verdict = chi2geo::characterize(&spec, DEFAULT_TOL);
    println!(
        "||X||^2 ~ chi-square: {}, df = {:?}, nu = {:?}",
        verdict.is_chi_square, verdict.df, verdict.ncp
    );
}
