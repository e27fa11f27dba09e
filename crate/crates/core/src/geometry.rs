//! The region polynomial `D_r(gamma, delta)` and its zero curve.
//!
//! The cubic discriminant of the likelihood equations factors as
//! `var_y^3 * D_r(gamma_hat, delta_hat)`, so the sign of `D_r` alone decides
//! between one and three stationary points. `D_r` is even in both `gamma`
//! and `delta` and is a cubic in `u = delta^2`, which is how its zero set is
//! traced.

use serde::{Deserialize, Serialize};

use crate::cubic::{solve_cubic, Cubic, DEFAULT_TOL_DEGENERATE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    OneRoot,
    ThreeRoots,
    BoundaryNonsingular,
    BoundaryCusp,
}

/// A point of the `(gamma, delta)` plane with its classification under `D_r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionPoint {
    pub gamma: f64,
    pub delta: f64,
    pub r: f64,
    pub d_value: f64,
    pub region: Region,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CuspSet {
    /// Positive cusp abscissa.
    pub gamma_c: f64,
    /// Positive cusp ordinate.
    pub delta_c: f64,
}

impl CuspSet {
    /// All four singular points `(±gamma_c, ±delta_c)`.
    pub fn points(&self) -> [(f64, f64); 4] {
        let (g, d) = (self.gamma_c, self.delta_c);
        [(g, d), (g, -d), (-g, d), (-g, -d)]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AsymptoticCase {
    InteriorOne,
    InteriorThree,
    CurveNonsingular,
    CurveCusp,
}

/// Large-sample limit of the probability of three stationary points when
/// the population parameters sit at a given point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticPrediction {
    pub limit_prob_three_roots: f64,
    pub case: AsymptoticCase,
}

/// Tolerance factors for boundary and cusp detection. Both are multiplied by
/// `max(1, |gamma|, |delta|, r)^6`, matching the degree of `D_r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub boundary: f64,
    pub gradient: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            boundary: 1e-9,
            gradient: 1e-6,
        }
    }
}

impl Tolerance {
    fn scale(gamma: f64, delta: f64, r: f64) -> f64 {
        1f64.max(gamma.abs()).max(delta.abs()).max(r).powi(6)
    }
}

/// Coefficients of `D_r` as a cubic in `u = delta^2` at fixed `gamma`.
pub fn d_as_cubic_in_u(gamma: f64, r: f64) -> Cubic {
    let g = gamma * gamma;
    let r2 = r * r;
    let r3 = r2 * r;
    let r4 = r2 * r2;
    let rg = r + g;
    Cubic {
        a3: r2,
        a2: -2.0 * (g * (2.0 + 2.0 * r - r2) + (2.0 * r3 + 2.0 * r4 - r2)),
        a1: -(g * g * (8.0 + 8.0 * r - r2) + (8.0 * r4 + 8.0 * r3 - r2)
            - 2.0 * g * (10.0 * r + 19.0 * r2 + 10.0 * r3)),
        a0: -4.0 * (1.0 + r) * rg * rg * rg,
    }
}

/// Evaluates `D_r(gamma, delta)`.
pub fn big_d(gamma: f64, delta: f64, r: f64) -> f64 {
    d_as_cubic_in_u(gamma, r).eval(delta * delta)
}

/// Analytic `(dD/dgamma, dD/ddelta)`.
pub fn big_d_gradient(gamma: f64, delta: f64, r: f64) -> (f64, f64) {
    let g = gamma * gamma;
    let u = delta * delta;
    let r2 = r * r;
    let rg = r + g;
    let dd_dg = -2.0 * u * u * (2.0 + 2.0 * r - r2)
        - u * (2.0 * g * (8.0 + 8.0 * r - r2) - 2.0 * (10.0 * r + 19.0 * r2 + 10.0 * r2 * r))
        - 12.0 * (1.0 + r) * rg * rg;
    let dd_du = d_as_cubic_in_u(gamma, r).derivative(u);
    (2.0 * gamma * dd_dg, 2.0 * delta * dd_du)
}

/// Singular points of the curve `D_r = 0`.
pub fn cusps(r: f64) -> CuspSet {
    let rp2 = r + 2.0;
    let denom = rp2 * rp2;
    CuspSet {
        gamma_c: (2.0 * r + 1.0) * (rp2 * r * (2.0 * r + 1.0)).sqrt() / denom,
        delta_c: 3.0 * (1.0 + r) * (3.0 * rp2 * r).sqrt() / denom,
    }
}

/// `|delta / gamma|` along the asymptotes `r delta = ±2 sqrt(1 + r) gamma`.
pub fn asymptote_slope(r: f64) -> f64 {
    2.0 * (1.0 + r).sqrt() / r
}

/// Non-negative `delta` values on the curve above `gamma`, ascending.
///
/// `D_r(gamma, 0) < 0` and `D_r` grows like `r^2 delta^6`, so there is always
/// at least one.
pub fn curve_delta_at(gamma: f64, r: f64) -> Vec<f64> {
    let cubic = d_as_cubic_in_u(gamma, r);
    // a3 = r^2 > 0.
    let roots = solve_cubic(&cubic, DEFAULT_TOL_DEGENERATE).expect("r > 0");
    roots
        .roots
        .into_iter()
        .filter(|&u| u >= 0.0)
        .map(f64::sqrt)
        .collect()
}

/// Boundary points `(gamma, ±delta)` on an even `gamma` grid, suitable for
/// plotting. Points are grouped by grid abscissa; within each group the
/// positive ordinates come first in ascending order, then their mirror
/// images.
pub fn trace_curve(r: f64, gamma_min: f64, gamma_max: f64, steps: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let steps = steps.max(2);
    for i in 0..steps {
        let gamma = gamma_min + (gamma_max - gamma_min) * i as f64 / (steps - 1) as f64;
        let deltas = curve_delta_at(gamma, r);
        out.extend(deltas.iter().map(|&d| (gamma, d)));
        out.extend(deltas.iter().filter(|&&d| d > 0.0).map(|&d| (gamma, -d)));
    }
    out
}

fn on_cusp(gamma: f64, delta: f64, r: f64, tol: &Tolerance) -> bool {
    let scale = Tolerance::scale(gamma, delta, r);
    let (gx, gy) = big_d_gradient(gamma, delta, r);
    let c = cusps(r);
    let near = (gamma.abs() - c.gamma_c).hypot(delta.abs() - c.delta_c)
        <= tol.gradient * 1f64.max(gamma.abs()).max(delta.abs()).max(r);
    near && gx.hypot(gy) <= tol.gradient * scale
}

pub fn classify_point(gamma: f64, delta: f64, r: f64, tol: &Tolerance) -> RegionPoint {
    let d_value = big_d(gamma, delta, r);
    let tau = tol.boundary * Tolerance::scale(gamma, delta, r);
    let region = if d_value < -tau {
        Region::OneRoot
    } else if d_value > tau {
        Region::ThreeRoots
    } else if on_cusp(gamma, delta, r, tol) {
        Region::BoundaryCusp
    } else {
        Region::BoundaryNonsingular
    };
    RegionPoint {
        gamma,
        delta,
        r,
        d_value,
        region,
    }
}

pub fn asymptotic_prediction(
    gamma: f64,
    delta: f64,
    r: f64,
    tol: &Tolerance,
) -> AsymptoticPrediction {
    let (limit_prob_three_roots, case) = match classify_point(gamma, delta, r, tol).region {
        Region::OneRoot => (0.0, AsymptoticCase::InteriorOne),
        Region::ThreeRoots => (1.0, AsymptoticCase::InteriorThree),
        Region::BoundaryNonsingular => (0.5, AsymptoticCase::CurveNonsingular),
        Region::BoundaryCusp => (0.0, AsymptoticCase::CurveCusp),
    };
    AsymptoticPrediction {
        limit_prob_three_roots,
        case,
    }
}

/// Unit direction of the tangent half-ray at the cusp with positive
/// coordinates.
pub fn cusp_tangent_ray(r: f64) -> (f64, f64) {
    let (a, b) = (r - 1.0, (3.0 * (2.0 * r + 1.0)).sqrt());
    let norm = a.hypot(b);
    (a / norm, b / norm)
}
