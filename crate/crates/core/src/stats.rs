//! Sufficient statistics of two independent normal samples.
//!
//! Empirical variances follow the maximum-likelihood convention: the sum of
//! squared deviations is divided by the sample size, not by size minus one.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sizes, means and divisor-n variances of the two samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub n: usize,
    pub m: usize,
    pub mean_x: f64,
    pub mean_y: f64,
    pub var_x: f64,
    pub var_y: f64,
}

/// Size ratio and the two scale-free ratios that determine the root count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedStats {
    /// `n / m`
    pub r: f64,
    /// `sqrt(var_x / var_y)`
    pub gamma_hat: f64,
    /// `(mean_x - mean_y) / sqrt(var_y)`
    pub delta_hat: f64,
}

impl SummaryStats {
    /// Builds summary statistics from already computed moments.
    ///
    /// Variances must use divisor `n` (resp. `m`).
    pub fn new(
        n: usize,
        m: usize,
        mean_x: f64,
        mean_y: f64,
        var_x: f64,
        var_y: f64,
    ) -> Result<Self> {
        if n < 2 {
            return Err(Error::Length {
                sample: "x",
                len: n,
            });
        }
        if m < 2 {
            return Err(Error::Length {
                sample: "y",
                len: m,
            });
        }
        if !mean_x.is_finite() || !mean_y.is_finite() {
            return Err(Error::Domain("sample means must be finite".into()));
        }
        if !var_x.is_finite() || !var_y.is_finite() || var_x < 0.0 || var_y < 0.0 {
            return Err(Error::Domain(
                "variances must be finite and non-negative".into(),
            ));
        }
        if var_x == 0.0 {
            return Err(Error::DegenerateVariance { sample: "x" });
        }
        if var_y == 0.0 {
            return Err(Error::DegenerateVariance { sample: "y" });
        }
        Ok(Self {
            n,
            m,
            mean_x,
            mean_y,
            var_x,
            var_y,
        })
    }

    /// Same as [`SummaryStats::new`] but converts unbiased (divisor `n - 1`)
    /// variances to the divisor-`n` convention first.
    pub fn from_unbiased(
        n: usize,
        m: usize,
        mean_x: f64,
        mean_y: f64,
        unbiased_var_x: f64,
        unbiased_var_y: f64,
    ) -> Result<Self> {
        let scale = |v: f64, k: usize| {
            if k >= 2 {
                v * (k - 1) as f64 / k as f64
            } else {
                v
            }
        };
        Self::new(
            n,
            m,
            mean_x,
            mean_y,
            scale(unbiased_var_x, n),
            scale(unbiased_var_y, m),
        )
    }

    pub fn ratio(&self) -> f64 {
        self.n as f64 / self.m as f64
    }

    pub fn reduce(&self) -> ReducedStats {
        reduce(self)
    }

    /// Swaps the roles of the two samples.
    pub fn swapped(&self) -> Self {
        Self {
            n: self.m,
            m: self.n,
            mean_x: self.mean_y,
            mean_y: self.mean_x,
            var_x: self.var_y,
            var_y: self.var_x,
        }
    }
}

/// Mean and divisor-n variance by the two-pass algorithm with the
/// compensating correction term.
fn moments(sample: &'static str, xs: &[f64]) -> Result<(f64, f64)> {
    if xs.len() < 2 {
        return Err(Error::Length {
            sample,
            len: xs.len(),
        });
    }
    if xs.iter().any(|x| !x.is_finite()) {
        return Err(Error::Domain(format!(
            "sample `{sample}` contains a non-finite value"
        )));
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let (ss, comp) = xs.iter().fold((0.0, 0.0), |(ss, c), &x| {
        let d = x - mean;
        (ss + d * d, c + d)
    });
    let var = (ss - comp * comp / n) / n;
    if var <= 0.0 {
        return Err(Error::DegenerateVariance { sample });
    }
    Ok((mean + comp / n, var))
}

/// Sufficient statistics of two raw samples.
pub fn summarize(xs: &[f64], ys: &[f64]) -> Result<SummaryStats> {
    let (mean_x, var_x) = moments("x", xs)?;
    let (mean_y, var_y) = moments("y", ys)?;
    SummaryStats::new(xs.len(), ys.len(), mean_x, mean_y, var_x, var_y)
}

pub fn reduce(s: &SummaryStats) -> ReducedStats {
    ReducedStats {
        r: s.ratio(),
        gamma_hat: (s.var_x / s.var_y).sqrt(),
        delta_hat: (s.mean_x - s.mean_y) / s.var_y.sqrt(),
    }
}
