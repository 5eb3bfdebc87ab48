//! The two moment-generating functions agree exactly when the covariance is a
//! projection fixing the mean, and split apart the moment it is not.
//!
//! Run with: cargo run --example mgf_equivalence

use chi2geo::{generate_spec, mgf_chisq, mgf_norm, GaussianSpec, GenerateParams};

fn main() {
    let spec = generate_spec(&GenerateParams {
        dim: 3,
        rank: 2,
        ncp: 1.5,
        seed: 9,
        perturb: 0.0,
    })
    .unwrap();
    println!("projection spec (df = 2, nu = 1.5): M1(t) vs M2(t)");
    println!("{:>8} {:>16} {:>16} {:>12}", "t", "M1 = E e^t|X|^2", "M2 chi2", "rel gap");
    for t in [-2.0, -1.0, -0.25, 0.1, 0.3, 0.45] {
        let m1 = mgf_norm(&spec, t).unwrap();
        let m2 = mgf_chisq(2, 1.5, t).unwrap();
        println!("{t:>8.2} {m1:>16.8} {m2:>16.8} {:>12.2e}", (m1 - m2).abs() / m2);
    }

    // diag(1, 1/2) is not a projection; no (r, nu) matches its MGF
    let off = GaussianSpec::from_raw(vec![0.0, 0.0], &[vec![1.0, 0.0], vec![0.0, 0.5]])
        .unwrap();
    println!("\ndiag(1, 1/2): M1 vs the nearest chi-square candidates");
    println!("{:>8} {:>16} {:>16} {:>16}", "t", "M1", "chi2(2)", "chi2(1)");
    for t in [-1.0, -0.25, 0.3] {
        let m1 = mgf_norm(&off, t).unwrap();
        println!(
            "{t:>8.2} {m1:>16.8} {:>16.8} {:>16.8}",
            mgf_chisq(2, 0.0, t).unwrap(),
            mgf_chisq(1, 0.0, t).unwrap()
        );
    }
}
