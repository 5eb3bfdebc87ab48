//! Reference noncentral chi-square distribution: Poisson-mixture CDF and
//! constructive sampling. This is the independent oracle verdicts are tested
//! against, so it deliberately shares no code path with the characterizer or
//! the cumulant formulas.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{NormalSource, CHUNK_SIZE};
use crate::special::{ln_gamma, regularized_lower_gamma};

/// Poisson tail mass below which the mixture sum is truncated.
const MIXTURE_TAIL: f64 = 1e-14;

/// Chi-square(r, nu) in the geometric parameterization nu = ||mu||; the
/// conventional noncentrality is lambda = nu^2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoncentralChiSquare {
    df: usize,
    ncp_nu: f64,
}

impl NoncentralChiSquare {
    /// df = 0 is the degenerate point mass at 0 and requires nu = 0.
    pub fn new(df: usize, ncp_nu: f64) -> Result<Self> {
        if !(ncp_nu >= 0.0) || !ncp_nu.is_finite() {
            return Err(Error::InvalidParameter {
                reason: format!("noncentrality nu must be finite and nonnegative, got {ncp_nu}"),
            });
        }
        if df == 0 && ncp_nu != 0.0 {
            return Err(Error::InvalidParameter {
                reason: "df = 0 is only valid with nu = 0 (degenerate point mass)".into(),
            });
        }
        Ok(Self { df, ncp_nu })
    }

    pub fn df(&self) -> usize {
        self.df
    }

    /// nu = ||mu||.
    pub fn ncp_nu(&self) -> f64 {
        self.ncp_nu
    }

    /// Conventional noncentrality lambda = nu^2.
    pub fn lambda(&self) -> f64 {
        self.ncp_nu * self.ncp_nu
    }

    /// CDF via the Poisson mixture of central chi-square CDFs,
    /// `sum_k e^(-l/2)(l/2)^k/k! P(r/2 + k, x/2)`, scanned outward from the
    /// Poisson mode so large-lambda weights never underflow, truncated when
    /// the remaining tail mass drops below 1e-14.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        if self.df == 0 {
            // point mass at 0
            return Ok(if x >= 0.0 { 1.0 } else { 0.0 });
        }
        if x <= 0.0 {
            return Ok(0.0);
        }
        let half_lambda = 0.5 * self.lambda();
        let a0 = 0.5 * self.df as f64;
        if half_lambda == 0.0 {
            return regularized_lower_gamma(a0, 0.5 * x);
        }

        let mode = half_lambda.floor();
        let log_w_mode = mode * half_lambda.ln() - half_lambda - ln_gamma(mode + 1.0);
        let w_mode = log_w_mode.exp();

        let mut total_weight = 0.0;
        let mut acc = 0.0;
        // downward from the mode
        let mut k = mode;
        let mut w = w_mode;
        loop {
            acc += w * regularized_lower_gamma(a0 + k, 0.5 * x)?;
            total_weight += w;
            if k == 0.0 || w < MIXTURE_TAIL {
                break;
            }
            w *= k / half_lambda;
            k -= 1.0;
        }
        // upward from the mode
        let mut k = mode;
        let mut w = w_mode;
        loop {
            w *= half_lambda / (k + 1.0);
            k += 1.0;
            if total_weight >= 1.0 - MIXTURE_TAIL || w < MIXTURE_TAIL * 1e-3 {
                break;
            }
            acc += w * regularized_lower_gamma(a0 + k, 0.5 * x)?;
            total_weight += w;
        }
        Ok(acc.clamp(0.0, 1.0))
    }

    /// Draws by the constructive definition: each sample is the sum of r
    /// squared normals, the first with mean nu (valid by rotation
    /// invariance). Chunked substreams as in Gaussian sampling.
    pub fn sample_direct(&self, count: usize, seed: u64) -> Vec<f64> {
        let mut out = vec![0.0f64; count];
        let chunks = count.div_ceil(CHUNK_SIZE);
        for chunk in 0..chunks {
            let start = chunk * CHUNK_SIZE;
            let end = (start + CHUNK_SIZE).min(count);
            let mut source = NormalSource::new(seed, chunk as u64);
            for slot in &mut out[start..end] {
                let mut acc = 0.0;
                for i in 0..self.df {
                    let mut g = source.next_normal();
                    if i == 0 {
                        g += self.ncp_nu;
                    }
                    acc += g * g;
                }
                *slot = acc;
            }
        }
        out
    }
}
