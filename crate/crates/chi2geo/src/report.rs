//! Machine-readable spec documents and report rendering.
//!
//! The on-disk spec format is a JSON object `{"mu": [...], "cov": [[...]],
//! "label": optional}`. Reports are serde-serialized structs; floats go
//! through shortest-round-trip formatting, so a report parsed back yields the
//! exact same bits.

use serde::{Deserialize, Serialize};

use crate::characterize::ChiSquareVerdict;
use crate::error::{Error, Result};
use crate::gaussian::GaussianSpec;
use crate::spectral::SymmetricOperator;
use crate::verify::VerificationReport;

/// The input document: mean, covariance rows, optional label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecDocument {
    pub mu: Vec<f64>,
    pub cov: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl SpecDocument {
    pub fn from_spec(spec: &GaussianSpec, label: Option<String>) -> Self {
        Self {
            mu: spec.mu().to_vec(),
            cov: spec.cov().to_rows(),
            label,
        }
    }

    /// Validates the document into a [`GaussianSpec`].
    pub fn to_spec(&self) -> Result<GaussianSpec> {
        if self.cov.len() != self.mu.len() {
            return Err(Error::DimensionMismatch {
                expected: self.mu.len(),
                got: self.cov.len(),
            });
        }
        GaussianSpec::validate(self.mu.clone(), SymmetricOperator::from_rows(&self.cov)?)
    }
}

/// Output of `characterize`: the verdict plus the inputs that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharacterizeReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub tol: f64,
    pub verdict: ChiSquareVerdict,
    /// Conventional noncentrality lambda = nu^2, when chi-square.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ncp_lambda: Option<f64>,
}

/// Output of `cumulants`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CumulantsReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub order: usize,
    /// Cumulants of ||X||^2, when requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub norm_cumulants: Option<Vec<f64>>,
    /// Cumulants of chi-square(df, nu), when requested and the verdict is yes.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chisq_cumulants: Option<Vec<f64>>,
    /// Max relative gap between the two sides, when both are present.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_relative_gap: Option<f64>,
    pub verdict: ChiSquareVerdict,
}

/// Output of `verify`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(flatten)]
    pub report: VerificationReport,
}

fn verdict_prose(v: &ChiSquareVerdict) -> String {
    let mut out = String::new();
    if v.is_chi_square {
        let df = v.df.unwrap_or(0);
        let nu = v.ncp.unwrap_or(0.0);
        out.push_str(&format!(
            "||X||^2 IS chi-square: df = {df}, ncp nu = {nu} (conventional lambda = {})\n",
            nu * nu
        ));
        if v.degenerate {
            out.push_str("degenerate case: df = 0, ||X||^2 is a point mass at 0\n");
        }
        out.push_str(&format!(
            "geometric reading: X - mu lives in a {df}-dimensional subspace W; C projects onto W and mu lies in W\n"
        ));
    } else {
        out.push_str("||X||^2 is NOT chi-square\n");
        if !v.diagnostics.offending_eigenvalues.is_empty() {
            out.push_str(&format!(
                "offending eigenvalues (not 0 or 1): {:?}\n",
                v.diagnostics.offending_eigenvalues
            ));
        }
        if v.diagnostics.mean_outside_image {
            out.push_str("the mean has a component outside Image(C)\n");
        }
    }
    out.push_str(&format!(
        "residuals: ||C^2 - C||_F = {:.3e}, ||C mu - mu|| = {:.3e}, distance to nearest projection = {:.3e}\n",
        v.diagnostics.idempotency_residual,
        v.diagnostics.mean_residual,
        v.diagnostics.nearest_projection_distance
    ));
    out
}

impl CharacterizeReport {
    pub fn render_human(&self) -> String {
        let mut out = String::new();
        if let Some(label) = &self.label {
            out.push_str(&format!("spec: {label}\n"));
        }
        out.push_str(&verdict_prose(&self.verdict));
        out.push_str(&format!("tolerance: {:.1e}\n", self.tol));
        out
    }
}

impl CumulantsReport {
    pub fn render_human(&self) -> String {
        let mut out = String::new();
        if let Some(label) = &self.label {
            out.push_str(&format!("spec: {label}\n"));
        }
        if let Some(c) = &self.norm_cumulants {
            out.push_str(&format!("cumulants of ||X||^2 (orders 1..{}): {:?}\n", self.order, c));
        }
        if let Some(c) = &self.chisq_cumulants {
            out.push_str(&format!("chi-square cumulants:               {c:?}\n"));
        }
        if let Some(gap) = self.max_relative_gap {
            out.push_str(&format!("max relative gap: {gap:.3e}\n"));
        }
        out.push_str(&verdict_prose(&self.verdict));
        out
    }
}

impl VerifyReport {
    pub fn render_human(&self) -> String {
        let r = &self.report;
        let mut out = String::new();
        if let Some(label) = &self.label {
            out.push_str(&format!("spec: {label}\n"));
        }
        out.push_str(&verdict_prose(&r.verdict));
        out.push_str(&format!(
            "samples: {} (seed {}, generator {})\n",
            r.sample_count, r.seed, r.generator_id
        ));
        out.push_str(&format!(
            "KS vs chi-square({}, nu={}): D = {:.4e}, p = {:.4e}\n",
            r.ks_reference.df(),
            r.ks_reference.ncp_nu(),
            r.ks_statistic,
            r.ks_p_value
        ));
        for (j, (s, a)) in r
            .sample_cumulants
            .iter()
            .zip(&r.analytic_cumulants)
            .enumerate()
        {
            out.push_str(&format!(
                "kappa_{}: sample {:.6} +- {:.3e}, analytic {:.6}\n",
                j + 1,
                s.value,
                s.std_error,
                a
            ));
        }
        out.push_str(&format!(
            "subspace containment residual: {:.3e}; mean z-score: {:.3}\n",
            r.subspace_max_residual, r.mean_z_score
        ));
        if let Some(order) = r.mismatch_order {
            out.push_str(&format!(
                "first cumulant order deviating from the best chi-square fit: {order}\n"
            ));
        }
        out.push_str(&format!("passed: {}\n", r.passed));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_document_roundtrip() {
        let doc = SpecDocument {
            mu: vec![0.1, 0.2],
            cov: vec![vec![1.0, 0.25], vec![0.25, 2.0]],
            label: Some("demo".into()),
        };
        let json = serde_json::to_string(&doc).unwrap();
        let back: SpecDocument = serde_json::from_str(&json).unwrap();
        assert_eq!(doc, back);
        assert!(doc.to_spec().is_ok());
    }

    #[test]
    fn mismatched_document_rejected() {
        let doc = SpecDocument {
            mu: vec![0.0],
            cov: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            label: None,
        };
        assert!(matches!(
            doc.to_spec(),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
