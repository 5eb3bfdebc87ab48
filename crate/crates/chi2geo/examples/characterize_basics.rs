//! Decide chi-square-ness for a handful of hand-built Gaussians.
//!
//! Run with: cargo run --example characterize_basics

use chi2geo::{characterize, GaussianSpec, DEFAULT_TOL};

fn show(name: &str, spec: &GaussianSpec) {
    let v = characterize(spec, DEFAULT_TOL);
    if v.is_chi_square {
        println!(
            "{name}: chi-square, df = {}, nu = {:.6} (lambda = {:.6}){}",
            v.df.unwrap(),
            v.ncp.unwrap(),
            v.ncp_lambda().unwrap(),
            if v.degenerate { ", degenerate point mass at 0" } else { "" },
        );
    } else {
        println!(
            "{name}: not chi-square (idempotency residual {:.2e}, mean residual {:.2e}, offending eigenvalues {:?})",
            v.diagnostics.idempotency_residual,
            v.diagnostics.mean_residual,
            v.diagnostics.offending_eigenvalues,
        );
    }
}

fn main() {
    // standard normal in R^3: ||X||^2 ~ chi2(3)
    let standard = GaussianSpec::from_raw(
        vec![0.0, 0.0, 0.0],
        &[
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ],
    )
    .unwrap();
    show("identity covariance", &standard);

    // rank-1 projection onto span{(1,1)/sqrt(2)} with mu inside: df = 1
    let projected = GaussianSpec::from_raw(
        vec![1.0, 1.0],
        &[vec![0.5, 0.5], vec![0.5, 0.5]],
    )
    .unwrap();
    show("rank-1 projection, mean in image", &projected);

    // an eigenvalue of 1/2 breaks idempotency: not chi-square
    let scaled = GaussianSpec::from_raw(
        vec![0.0, 0.0],
        &[vec![1.0, 0.0], vec![0.0, 0.5]],
    )
    .unwrap();
    show("diag(1, 1/2)", &scaled);

    // mean sticking out of the image also breaks it
    let off_image = GaussianSpec::from_raw(
        vec![0.0, 1.0],
        &[vec![1.0, 0.0], vec![0.0, 0.0]],
    )
    .unwrap();
    show("mean outside image", &off_image);

    // zero covariance, zero mean: chi-square with df = 0
    let degenerate =
        GaussianSpec::from_raw(vec![0.0, 0.0], &[vec![0.0, 0.0], vec![0.0, 0.0]]).unwrap();
    show("zero operator", &degenerate);
}
