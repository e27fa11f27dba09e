//! Exact maximum-likelihood estimation for two normal samples with a common
//! mean and unequal variances, and analysis of when that likelihood has two
//! local maxima.
//!
//! The score equations reduce to one cubic in the common mean
//! ([`likelihood::cubic_coefficients`]). Its discriminant factors into a
//! positive power of the second sample's variance times the region
//! polynomial [`geometry::big_d`], whose sign in terms of the size ratio and
//! two scale-free statistics decides between one and three stationary
//! points.

pub mod bound;
pub mod cubic;
pub mod error;
pub mod geometry;
pub mod likelihood;
pub mod montecarlo;
pub mod specialfn;
pub mod stats;

pub use bound::{multimodality_bound, multimodality_bound_with_ratio, BoundResult};
pub use cubic::{
    count_real_roots, discriminant, solve_cubic, Cubic, RootCount, RootSet, DEFAULT_TOL_DEGENERATE,
};
pub use error::{Error, Result};
pub use geometry::{
    asymptote_slope, asymptotic_prediction, big_d, big_d_gradient, classify_point, curve_delta_at,
    cusp_tangent_ray, cusps, trace_curve, AsymptoticCase, AsymptoticPrediction, CuspSet, Region,
    RegionPoint, Tolerance,
};
pub use likelihood::{
    cubic_coefficients, fit_alternative, fit_null, loglik, lrt_statistic, profile_variances,
    score_residual, stationary_points, AltFit, NullFit, NullParams, PointKind, StationaryPoint,
};
pub use montecarlo::{estimate_prob_three, sweep_delta, SimConfig, SimResult, SweepRow};
pub use specialfn::{reg_inc_beta, t_two_sided_tail, TailProb};
pub use stats::{reduce, summarize, ReducedStats, SummaryStats};
