//! Finite-sample upper bound on the probability, under equal population
//! means, that the likelihood equations have three real solutions.
//!
//! The three-root region lies strictly outside the band `|delta_hat| <= c`,
//! where `c` is the cusp ordinate. Under equal means a rescaled `delta_hat`
//! is Student-t with `m - 1` degrees of freedom, which turns the band into a
//! t tail probability.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specialfn::t_two_sided_tail;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundResult {
    /// Cusp ordinate used as the `|delta_hat|` threshold.
    pub c_n: f64,
    /// Argument of the t tail.
    pub t_threshold: f64,
    /// Degrees of freedom of the t tail (`m - 1`).
    pub dof: f64,
    pub bound: f64,
}

/// Bound from the two sample sizes and the population ratio
/// `gamma = sigma_x / sigma_y`.
pub fn multimodality_bound(n: usize, m: usize, gamma: f64) -> Result<BoundResult> {
    if n < 2 || m < 2 {
        return Err(Error::Domain(format!(
            "sample sizes must be at least 2 (got n = {n}, m = {m})"
        )));
    }
    multimodality_bound_with_ratio(n as f64 / m as f64, m, gamma)
}

/// Same bound parameterized by the size ratio `r = n / m` directly. Only
/// `m` enters the degrees of freedom.
pub fn multimodality_bound_with_ratio(r: f64, m: usize, gamma: f64) -> Result<BoundResult> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::Domain(format!(
            "size ratio must be positive (got {r})"
        )));
    }
    if m < 2 {
        return Err(Error::Domain(format!(
            "second sample size must be at least 2 (got {m})"
        )));
    }
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::Domain(format!(
            "gamma must be positive (got {gamma})"
        )));
    }
    let rp2 = r + 2.0;
    let c_n = 3.0 * (1.0 + r) * (3.0 * rp2 * r).sqrt() / (rp2 * rp2);
    let dof = (m - 1) as f64;
    let t_threshold = dof.sqrt() * 3.0 * (1.0 + r) * r * (3.0 * rp2).sqrt()
        / (rp2 * rp2 * (gamma * gamma + r).sqrt());
    let bound = t_two_sided_tail(t_threshold, dof)?.value();
    Ok(BoundResult {
        c_n,
        t_threshold,
        dof,
        bound,
    })
}
