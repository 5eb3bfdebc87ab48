//! Seeded test-case generation: exact projection specs that satisfy the
//! characterization, and perturbed ones guaranteed to fail it.
//!
//! Run with: cargo run --example generate_cases

use chi2geo::{characterize, generate_spec, GenerateParams, SpecDocument, DEFAULT_TOL};

fn main() {
    // an exact rank-2 projection in R^4 with nu = 2.5
    let params = GenerateParams {
        dim: 4,
        rank: 2,
        ncp: 2.5,
        seed: 17,
        perturb: 0.0,
    };
    let spec = generate_spec(&params).unwrap();
    let v = characterize(&spec, DEFAULT_TOL);
    println!(
        "exact case: chi-square = {}, df = {:?}, nu = {:.12}",
        v.is_chi_square,
        v.df,
        v.ncp.unwrap()
    );

    // same geometry with one eigenvalue pushed to 0.3: a certified negative
    let perturbed = generate_spec(&GenerateParams {
        perturb: 0.3,
        ..params
    })
    .unwrap();
    let v = characterize(&perturbed, DEFAULT_TOL);
    println!(
        "perturbed case: chi-square = {}, offending eigenvalues = {:?}",
        v.is_chi_square, v.diagnostics.offending_eigenvalues
    );

    // the JSON document form is what the CLI reads and writes
    let doc = SpecDocument::from_spec(&spec, Some("rank-2 in R^4, nu = 2.5".into()));
    println!("\nspec document:\n{}", serde_json::to_string_pretty(&doc).unwrap());
}
