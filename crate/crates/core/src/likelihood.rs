//! Likelihood layer for the common-mean (null) model and the unrestricted
//! two-mean model.
//!
//! Substituting the profiled variances into the score equation for the
//! common mean reduces the likelihood equations to a single cubic in `mu`.
//! With probability one that cubic has one or three real roots; three roots
//! mean two local maxima separated by a saddle.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::cubic::{solve_cubic, Cubic, DEFAULT_TOL_DEGENERATE};
use crate::stats::SummaryStats;

/// Relative gap under which two log-likelihood values are treated as tied.
const TIE_TOLERANCE: f64 = 1e-12;

/// Parameters of the common-mean model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NullParams {
    pub mu: f64,
    pub var_x: f64,
    pub var_y: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointKind {
    LocalMax,
    Saddle,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StationaryPoint {
    pub params: NullParams,
    pub loglik: f64,
    pub kind: PointKind,
}

/// Stationary points of the null likelihood, ascending in `mu`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StationaryPoints {
    pub points: Vec<StationaryPoint>,
    pub discriminant: f64,
    /// Set when the discriminant was within tolerance of zero and repeated
    /// roots were merged.
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NullFit {
    pub mle: StationaryPoint,
    pub all_points: Vec<StationaryPoint>,
    pub multimodal: bool,
    pub discriminant: f64,
    pub degenerate: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AltFit {
    pub mu_x: f64,
    pub mu_y: f64,
    pub var_x: f64,
    pub var_y: f64,
    pub loglik: f64,
}

/// Coefficients of the likelihood-equation cubic in the common mean.
pub fn cubic_coefficients(s: &SummaryStats) -> Cubic {
    let r = s.ratio();
    let (x, y) = (s.mean_x, s.mean_y);
    let (vx, vy) = (s.var_x, s.var_y);
    Cubic {
        a3: 1.0 + r,
        a2: -(2.0 * x + y) - r * (2.0 * y + x),
        a1: x * x + 2.0 * (1.0 + r) * x * y + r * y * y + vx + r * vy,
        a0: -x * x * y - r * y * y * x - vx * y - r * vy * x,
    }
}

/// Variance maximizers for a fixed common mean.
pub fn profile_variances(s: &SummaryStats, mu: f64) -> (f64, f64) {
    let dx = s.mean_x - mu;
    let dy = s.mean_y - mu;
    (dx * dx + s.var_x, dy * dy + s.var_y)
}

/// Null-model log-likelihood expressed through the sufficient statistics.
pub fn loglik(s: &SummaryStats, p: &NullParams) -> f64 {
    let n = s.n as f64;
    let m = s.m as f64;
    let dx = s.mean_x - p.mu;
    let dy = s.mean_y - p.mu;
    -0.5 * (n + m) * (2.0 * PI).ln()
        - 0.5 * n * p.var_x.ln()
        - 0.5 * m * p.var_y.ln()
        - 0.5 * n * (s.var_x + dx * dx) / p.var_x
        - 0.5 * m * (s.var_y + dy * dy) / p.var_y
}

/// Log-likelihood maximized over the variances at a fixed `mu`.
pub fn profile_loglik(s: &SummaryStats, mu: f64) -> f64 {
    let (var_x, var_y) = profile_variances(s, mu);
    loglik(s, &NullParams { mu, var_x, var_y })
}

fn point_at(s: &SummaryStats, mu: f64, kind: PointKind) -> StationaryPoint {
    let (var_x, var_y) = profile_variances(s, mu);
    let params = NullParams { mu, var_x, var_y };
    StationaryPoint {
        params,
        loglik: loglik(s, &params),
        kind,
    }
}

pub fn stationary_points(s: &SummaryStats) -> StationaryPoints {
    let cubic = cubic_coefficients(s);
    // a3 = 1 + n/m > 0, so the solver cannot reject the cubic.
    let roots =
        solve_cubic(&cubic, DEFAULT_TOL_DEGENERATE).expect("leading coefficient is positive");

    // The profile score is a negative multiple of the cubic, and the cubic
    // has a positive leading coefficient: outer roots are maxima.
    let kinds: Vec<PointKind> = match roots.roots.len() {
        3 => vec![PointKind::LocalMax, PointKind::Saddle, PointKind::LocalMax],
        2 => {
            // Merged pair: the simple root is the maximum, the double root a
            // flat inflection of the profile.
            let slope = |mu: f64| cubic.derivative(mu).abs() / cubic.scale_at(mu);
            if slope(roots.roots[0]) >= slope(roots.roots[1]) {
                vec![PointKind::LocalMax, PointKind::Saddle]
            } else {
                vec![PointKind::Saddle, PointKind::LocalMax]
            }
        }
        _ => vec![PointKind::LocalMax],
    };

    StationaryPoints {
        points: roots
            .roots
            .iter()
            .zip(kinds)
            .map(|(&mu, kind)| point_at(s, mu, kind))
            .collect(),
        discriminant: roots.discriminant,
        degenerate: roots.degenerate,
    }
}

/// Global maximum-likelihood fit of the common-mean model.
///
/// Ties between local maxima (log-likelihoods equal to a relative 1e-12) go
/// to the smallest `mu`.
pub fn fit_null(s: &SummaryStats) -> NullFit {
    let sp = stationary_points(s);
    let mut best = sp.points[0];
    for p in &sp.points[1..] {
        let gap = p.loglik - best.loglik;
        if gap > TIE_TOLERANCE * (1.0 + best.loglik.abs()) {
            best = *p;
        }
    }
    NullFit {
        mle: best,
        multimodal: sp.points.len() == 3,
        all_points: sp.points,
        discriminant: sp.discriminant,
        degenerate: sp.degenerate,
    }
}

/// Closed-form fit of the unrestricted model.
pub fn fit_alternative(s: &SummaryStats) -> AltFit {
    let n = s.n as f64;
    let m = s.m as f64;
    let loglik = -0.5 * (n + m) * (2.0 * PI).ln()
        - 0.5 * n * s.var_x.ln()
        - 0.5 * m * s.var_y.ln()
        - 0.5 * (n + m);
    AltFit {
        mu_x: s.mean_x,
        mu_y: s.mean_y,
        var_x: s.var_x,
        var_y: s.var_y,
        loglik,
    }
}

/// `2 (l_alt - l_null)`, clamped at zero against rounding.
pub fn lrt_statistic(s: &SummaryStats) -> f64 {
    lrt_from_fits(&fit_alternative(s), &fit_null(s))
}

pub fn lrt_from_fits(alt: &AltFit, null: &NullFit) -> f64 {
    (2.0 * (alt.loglik - null.mle.loglik)).max(0.0)
}

/// Scaled residual of the mean score equation
/// `r (xbar - mu) var_y + (ybar - mu) var_x`.
pub fn score_residual(s: &SummaryStats, p: &NullParams) -> f64 {
    let r = s.ratio();
    let raw = r * (s.mean_x - p.mu) * p.var_y + (s.mean_y - p.mu) * p.var_x;
    raw / ((1.0 + r) * p.var_x.max(p.var_y) * (1.0 + s.mean_x.abs() + s.mean_y.abs()))
}
