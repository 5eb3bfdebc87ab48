//! Exact cumulants of ||X||^2 vs the matched chi-square, cross-checked by a
//! numerical-differentiation oracle on the MGF.
//!
//! Run with: cargo run --example cumulant_identity

use chi2geo::moments::{fd_step_for_bound, mgf_norm_bound};
use chi2geo::{
    characterize, chisq_cumulants, cumulants_from_mgf, generate_spec, mgf_norm,
    quadratic_norm_cumulants, GenerateParams, DEFAULT_TOL,
};

fn main() {
    let spec = generate_spec(&GenerateParams {
        dim: 5,
        rank: 3,
        ncp: 2.0,
        seed: 1,
        perturb: 0.0,
    })
    .unwrap();
    let verdict = characterize(&spec, DEFAULT_TOL);
    println!(
        "spec: dim 5, rank-3 projection, nu = 2  =>  df = {:?}, ncp = {:?}",
        verdict.df, verdict.ncp
    );

    let order = 6;
    let exact = quadratic_norm_cumulants(&spec, order).unwrap();
    let matched = chisq_cumulants(verdict.df.unwrap(), verdict.ncp.unwrap(), order).unwrap();

    let step = fd_step_for_bound(mgf_norm_bound(&spec));
    let oracle = cumulants_from_mgf(|t| mgf_norm(&spec, t), order, step).unwrap();

    println!("{:>3} {:>18} {:>18} {:>18}", "j", "norm formula", "chi2(r, nu)", "MGF oracle");
    for j in 1..=order {
        println!(
            "{j:>3} {:>18.10} {:>18.10} {:>18.10}",
            exact.kappa(j),
            matched.kappa(j),
            oracle.kappa(j)
        );
    }

    let worst = (1..=order)
        .map(|j| (exact.kappa(j) - oracle.kappa(j)).abs() / exact.kappa(j).abs().max(1.0))
        .fold(0.0f64, f64::max);
    println!("worst oracle relative gap: {worst:.2e}");
}
