//! From quadratic forms to squared norms: for idempotent self-adjoint A and
//! X ~ N(mu, I), the form X . A(X) equals ||A(X)||^2 pointwise, and A(X) is
//! Gaussian with covariance A. So the chi-square question for the form
//! reduces to the squared-norm question this crate answers.
//!
//! Run with: cargo run --example cochran_projection

use chi2geo::{
    characterize, projection_onto, quadratic_form_to_norm, GaussianSpec, Subspace,
    SymmetricOperator, DEFAULT_TOL,
};

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn main() {
    // A projects R^3 onto span{(1,1,1)/sqrt(3), (1,-1,0)/sqrt(2)}
    let s3 = 3.0f64.sqrt();
    let s2 = 2.0f64.sqrt();
    let w = Subspace::new(
        3,
        vec![
            vec![1.0 / s3, 1.0 / s3, 1.0 / s3],
            vec![1.0 / s2, -1.0 / s2, 0.0],
        ],
    )
    .unwrap();
    let a = projection_onto(&w);
    let mu = vec![1.0, 1.0, 1.0];

    // pointwise identity on a few draws of X ~ N(mu, I)
    let x_spec = GaussianSpec::validate(mu.clone(), SymmetricOperator::identity(3)).unwrap();
    let batch = x_spec.sample(5, 0);
    println!("{:>16} {:>16} {:>12}", "x . A(x)", "||A(x)||^2", "gap");
    for x in batch.iter_draws() {
        let ax = a.apply(x).unwrap();
        let form = dot(x, &ax);
        let norm2 = dot(&ax, &ax);
        println!("{form:>16.10} {norm2:>16.10} {:>12.2e}", (form - norm2).abs());
    }

    // the bridged spec is N(A mu, A); its squared norm is the original form
    let bridged = quadratic_form_to_norm(&a, &mu, DEFAULT_TOL).unwrap();
    let verdict = characterize(&bridged, DEFAULT_TOL);
    println!(
        "X . A(X) ~ chi-square: {}, df = rank(A) = {:?}, nu = ||A mu|| = {:.6}",
        verdict.is_chi_square,
        verdict.df,
        verdict.ncp.unwrap()
    );

    // non-idempotent operators are refused rather than silently accepted
    let not_proj = SymmetricOperator::diagonal(&[1.0, 0.5, 0.0]);
    match quadratic_form_to_norm(&not_proj, &mu, DEFAULT_TOL) {
        Err(e) => println!("diag(1, 1/2, 0) rejected: {e}"),
        Ok(_) => unreachable!(),
    }
}
