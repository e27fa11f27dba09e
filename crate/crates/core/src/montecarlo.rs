//! Reproducible Monte Carlo estimates of the probability that the null
//! likelihood equations have three real solutions.
//!
//! # Reproducibility contract
//!
//! Replicate `i` of grid point `g` under seed `s` draws from a ChaCha8
//! stream whose 256-bit key is four SplitMix64 outputs seeded with
//! `s ^ mix(g)` and whose stream id is `i`. Uniforms take the top 53 bits of
//! each 64-bit output and map them to the open interval `(0, 1)`. Normals
//! come from the Box–Muller transform applied to consecutive uniform pairs
//! `(u1, u2)`, yielding `sqrt(-2 ln u1) cos(2 pi u2)` then
//! `sqrt(-2 ln u1) sin(2 pi u2)`. The first sample's `n` values are drawn
//! first, then the second sample's `m` values, continuing the same normal
//! sequence. Because every replicate owns its stream and the tally is an
//! integer sum, results do not depend on the number of workers.

use std::f64::consts::PI;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cubic::{count_real_roots, RootCount, DEFAULT_TOL_DEGENERATE};
use crate::error::{Error, Result};
use crate::likelihood::cubic_coefficients;
use crate::stats::summarize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub n: usize,
    pub m: usize,
    pub mu_x: f64,
    pub mu_y: f64,
    pub var_x: f64,
    pub var_y: f64,
    pub replications: u64,
    pub seed: u64,
    pub workers: usize,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 || self.m < 2 {
            return Err(Error::Domain(format!(
                "sample sizes must be at least 2 (got n = {}, m = {})",
                self.n, self.m
            )));
        }
        if !(self.var_x > 0.0 && self.var_y > 0.0)
            || !self.var_x.is_finite()
            || !self.var_y.is_finite()
        {
            return Err(Error::Domain(
                "population variances must be positive and finite".into(),
            ));
        }
        if !self.mu_x.is_finite() || !self.mu_y.is_finite() {
            return Err(Error::Domain("population means must be finite".into()));
        }
        if self.replications == 0 {
            return Err(Error::Domain("replications must be at least 1".into()));
        }
        if self.workers == 0 {
            return Err(Error::Domain("workers must be at least 1".into()));
        }
        Ok(())
    }

    /// Population `delta = (mu_x - mu_y) / sigma_y`.
    pub fn delta(&self) -> f64 {
        (self.mu_x - self.mu_y) / self.var_y.sqrt()
    }
}

/// Tally of one simulation.
///
/// Replicates whose discriminant falls within the degeneracy tolerance are
/// counted in `degenerate_count` only; `replications` is the number of
/// classified replicates and the denominator of `p_hat`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub count_three: u64,
    pub replications: u64,
    pub p_hat: f64,
    pub std_err: f64,
    pub degenerate_count: u64,
}

impl SimResult {
    fn from_counts(count_three: u64, classified: u64, degenerate_count: u64) -> Self {
        let (p_hat, std_err) = if classified == 0 {
            (f64::NAN, f64::NAN)
        } else {
            let p = count_three as f64 / classified as f64;
            (p, (p * (1.0 - p) / classified as f64).sqrt())
        };
        Self {
            count_three,
            replications: classified,
            p_hat,
            std_err,
            degenerate_count,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub delta: f64,
    pub p_hat: f64,
    pub std_err: f64,
    pub replications: u64,
    pub degenerate_count: u64,
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic normal variates for one replicate.
pub struct ReplicateRng {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl ReplicateRng {
    pub fn new(seed: u64, grid_index: u64, replicate: u64) -> Self {
        let mut g = grid_index;
        let mut state = seed ^ splitmix64(&mut g);
        let mut key = [0u8; 32];
        for chunk in key.chunks_exact_mut(8) {
            chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
        }
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(replicate);
        Self { rng, spare: None }
    }

    /// Uniform on the open interval `(0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    pub fn standard_normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = self.uniform();
        let u2 = self.uniform();
        let radius = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (2.0 * PI * u2).sin_cos();
        self.spare = Some(radius * s);
        radius * c
    }
}

enum Outcome {
    One,
    Three,
    Degenerate,
}

fn run_replicate(
    cfg: &SimConfig,
    grid_index: u64,
    replicate: u64,
    xs: &mut Vec<f64>,
    ys: &mut Vec<f64>,
) -> Outcome {
    let mut rng = ReplicateRng::new(cfg.seed, grid_index, replicate);
    let (sx, sy) = (cfg.var_x.sqrt(), cfg.var_y.sqrt());
    xs.clear();
    xs.extend((0..cfg.n).map(|_| cfg.mu_x + sx * rng.standard_normal()));
    ys.clear();
    ys.extend((0..cfg.m).map(|_| cfg.mu_y + sy * rng.standard_normal()));
    let Ok(stats) = summarize(xs, ys) else {
        return Outcome::Degenerate;
    };
    match count_real_roots(&cubic_coefficients(&stats), DEFAULT_TOL_DEGENERATE) {
        Ok(RootCount::Three) => Outcome::Three,
        Ok(RootCount::One) => Outcome::One,
        _ => Outcome::Degenerate,
    }
}

fn estimate_on_grid(cfg: &SimConfig, grid_index: u64) -> Result<SimResult> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::Domain(format!("cannot start worker pool: {e}")))?;
    let (three, one, degenerate) = pool.install(|| {
        (0..cfg.replications)
            .into_par_iter()
            .map_init(
                || (Vec::with_capacity(cfg.n), Vec::with_capacity(cfg.m)),
                |(xs, ys), i| match run_replicate(cfg, grid_index, i, xs, ys) {
                    Outcome::Three => (1u64, 0u64, 0u64),
                    Outcome::One => (0, 1, 0),
                    Outcome::Degenerate => (0, 0, 1),
                },
            )
            .reduce(|| (0, 0, 0), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2))
    });
    Ok(SimResult::from_counts(three, three + one, degenerate))
}

/// Probability of three real stationary points under `cfg`.
pub fn estimate_prob_three(cfg: &SimConfig) -> Result<SimResult> {
    estimate_on_grid(cfg, 0)
}

/// One estimate per `delta`, with `mu_x = delta` and `mu_y = 0`. Grid point
/// `k` uses stream family `k`, so a one-point sweep matches
/// [`estimate_prob_three`] with the same seed.
pub fn sweep_delta(base: &SimConfig, deltas: &[f64]) -> Result<Vec<SweepRow>> {
    deltas
        .iter()
        .enumerate()
        .map(|(k, &delta)| {
            let cfg = SimConfig {
                mu_x: delta,
                mu_y: 0.0,
                ..*base
            };
            let res = estimate_on_grid(&cfg, k as u64)?;
            Ok(SweepRow {
                delta,
                p_hat: res.p_hat,
                std_err: res.std_err,
                replications: res.replications,
                degenerate_count: res.degenerate_count,
            })
        })
        .collect()
}
