//! Command-line front end.
//!
//! Structured results are written as JSON, tables (curve traces and
//! simulation output) as CSV. Exit codes: 0 on success, 2 for usage or
//! input errors, 3 for domain errors such as a constant sample.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use bfmle_core::{
    asymptote_slope, asymptotic_prediction, big_d_gradient, classify_point, cusp_tangent_ray,
    cusps, estimate_prob_three, fit_alternative, fit_null, likelihood, multimodality_bound,
    multimodality_bound_with_ratio, solve_cubic, summarize, sweep_delta, trace_curve, Cubic,
    SimConfig, SummaryStats, Tolerance,
};
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "bfmle",
    version,
    about = "Common-mean likelihood for two normal samples: exact MLE, multimodality analysis and simulation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit the common-mean model and the unrestricted model, report the LRT.
    Fit(FitArgs),
    /// Real roots of a3 x^3 + a2 x^2 + a1 x + a0.
    Roots(RootsArgs),
    /// Classify a (gamma, delta) point against the curve D_r = 0.
    Classify(ClassifyArgs),
    /// Trace the curve D_r = 0 as CSV.
    Curve(CurveArgs),
    /// Singular points of D_r = 0 and the tangent direction at the upper one.
    Cusps(CuspsArgs),
    /// Upper bound on the probability of three solutions when the means are equal.
    Bound(BoundArgs),
    /// Monte Carlo estimate of the probability of three solutions.
    Simulate(SimulateArgs),
    /// Monte Carlo estimates over a grid of delta = mu_x (mu_y = 0).
    Sweep(SweepArgs),
}

/// Data come from one CSV (`group,value` with group `x` or `y`), from two
/// single-column files, or from summary statistics. Summary variances use
/// divisor n (sum of squared deviations over the sample size) unless
/// `--unbiased` is given.
#[derive(Debug, Args)]
pub struct FitArgs {
    /// CSV with header `group,value`; group is `x` or `y`.
    #[arg(long, conflicts_with_all = ["x_file", "nx"])]
    pub data: Option<PathBuf>,
    /// File with one observation of the first sample per line.
    #[arg(long, requires = "y_file", conflicts_with = "nx")]
    pub x_file: Option<PathBuf>,
    /// File with one observation of the second sample per line.
    #[arg(long, requires = "x_file")]
    pub y_file: Option<PathBuf>,
    /// First sample size.
    #[arg(long, requires_all = ["mx", "vx", "ny", "my", "vy"])]
    pub nx: Option<usize>,
    /// First sample mean.
    #[arg(long, allow_hyphen_values = true)]
    pub mx: Option<f64>,
    /// First sample variance (divisor n).
    #[arg(long)]
    pub vx: Option<f64>,
    /// Second sample size.
    #[arg(long)]
    pub ny: Option<usize>,
    /// Second sample mean.
    #[arg(long, allow_hyphen_values = true)]
    pub my: Option<f64>,
    /// Second sample variance (divisor m).
    #[arg(long)]
    pub vy: Option<f64>,
    /// Treat --vx/--vy as unbiased (divisor n - 1) variances and convert.
    #[arg(long, requires = "nx")]
    pub unbiased: bool,
}

#[derive(Debug, Args)]
pub struct RootsArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub a3: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub a2: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub a1: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub a0: f64,
    /// Relative tolerance under which the discriminant counts as zero.
    #[arg(long, default_value_t = bfmle_core::DEFAULT_TOL_DEGENERATE)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub gamma: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub delta: f64,
    #[arg(long)]
    pub r: f64,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    #[arg(long)]
    pub r: f64,
    #[arg(long)]
    pub gamma_min: f64,
    #[arg(long)]
    pub gamma_max: f64,
    #[arg(long, default_value_t = 200)]
    pub steps: usize,
}

#[derive(Debug, Args)]
pub struct CuspsArgs {
    #[arg(long)]
    pub r: f64,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    /// First sample size; alternatively give --r.
    #[arg(long, conflicts_with = "r", required_unless_present = "r")]
    pub n: Option<usize>,
    /// Size ratio n/m.
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long)]
    pub m: usize,
    /// Population ratio sigma_x / sigma_y.
    #[arg(long)]
    pub gamma: f64,
}

#[derive(Debug, Args)]
pub struct SimArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub m: usize,
    #[arg(long, default_value_t = 1.0)]
    pub vx: f64,
    #[arg(long, default_value_t = 1.0)]
    pub vy: f64,
    #[arg(long, default_value_t = 10_000)]
    pub reps: u64,
    /// Random seed; falls back to BF_SEED, then to 1.
    #[arg(long, env = "BF_SEED", default_value_t = 1)]
    pub seed: u64,
    /// Worker threads. Results do not depend on this value.
    #[arg(long, default_value_t = default_workers())]
    pub workers: usize,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub sim: SimArgs,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub mux: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub muy: f64,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub sim: SimArgs,
    /// Comma-separated values of delta (mu_x; mu_y is 0).
    #[arg(
        long,
        value_delimiter = ',',
        required = true,
        allow_hyphen_values = true
    )]
    pub deltas: Vec<f64>,
}

fn default_workers() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Domain(#[from] bfmle_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) => EXIT_DOMAIN,
            CliError::Usage(_) | CliError::Io(_) => EXIT_USAGE,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(rendered.as_bytes())
            } else {
                out.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(command: &Command, out: &mut dyn Write) -> CliResult<()> {
    match command {
        Command::Fit(a) => fit(a, out),
        Command::Roots(a) => roots(a, out),
        Command::Classify(a) => classify(a, out),
        Command::Curve(a) => curve(a, out),
        Command::Cusps(a) => cusps_cmd(a, out),
        Command::Bound(a) => bound(a, out),
        Command::Simulate(a) => simulate(a, out),
        Command::Sweep(a) => sweep(a, out),
    }
}

fn write_json(out: &mut dyn Write, value: &impl Serialize) -> CliResult<()> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(io::Error::from)?;
    writeln!(out)?;
    Ok(())
}

fn positive(name: &str, v: f64) -> CliResult<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Usage(format!(
            "--{name} must be positive and finite (got {v})"
        )))
    }
}

fn finite(name: &str, v: f64) -> CliResult<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Usage(format!(
            "--{name} must be finite (got {v})"
        )))
    }
}

#[derive(Debug, Deserialize)]
struct Observation {
    group: String,
    value: f64,
}

fn read_grouped_csv(path: &Path) -> CliResult<(Vec<f64>, Vec<f64>)> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for (i, rec) in reader.deserialize::<Observation>().enumerate() {
        let obs = rec.map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        match obs.group.as_str() {
            "x" | "X" => xs.push(obs.value),
            "y" | "Y" => ys.push(obs.value),
            other => {
                return Err(CliError::Usage(format!(
                    "{}: record {}: group must be `x` or `y` (got `{other}`)",
                    path.display(),
                    i + 1
                )))
            }
        }
    }
    Ok((xs, ys))
}

/// One value per line; blank lines and `#` comments are skipped and a
/// non-numeric first line is taken as a header.
fn read_column(path: &Path) -> CliResult<Vec<f64>> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match line.parse::<f64>() {
            Ok(v) => values.push(v),
            Err(_) if values.is_empty() && i == 0 => continue,
            Err(_) => {
                return Err(CliError::Usage(format!(
                    "{}:{}: not a number: `{line}`",
                    path.display(),
                    i + 1
                )))
            }
        }
    }
    Ok(values)
}

fn fit_input(a: &FitArgs) -> CliResult<SummaryStats> {
    if let Some(path) = &a.data {
        let (xs, ys) = read_grouped_csv(path)?;
        return Ok(summarize(&xs, &ys)?);
    }
    if let (Some(xf), Some(yf)) = (&a.x_file, &a.y_file) {
        return Ok(summarize(&read_column(xf)?, &read_column(yf)?)?);
    }
    match (a.nx, a.mx, a.vx, a.ny, a.my, a.vy) {
        (Some(n), Some(mx), Some(vx), Some(m), Some(my), Some(vy)) => {
            let s = if a.unbiased {
                SummaryStats::from_unbiased(n, m, mx, my, vx, vy)?
            } else {
                SummaryStats::new(n, m, mx, my, vx, vy)?
            };
            Ok(s)
        }
        _ => Err(CliError::Usage(
            "fit needs --data FILE, --x-file/--y-file, or all of --nx --mx --vx --ny --my --vy"
                .into(),
        )),
    }
}

fn fit(a: &FitArgs, out: &mut dyn Write) -> CliResult<()> {
    let s = fit_input(a)?;
    let null_fit = fit_null(&s);
    let alt = fit_alternative(&s);
    let reduced = s.reduce();
    let points: Vec<_> = null_fit
        .all_points
        .iter()
        .map(|p| {
            json!({
                "mu": p.params.mu,
                "var_x": p.params.var_x,
                "var_y": p.params.var_y,
                "loglik": p.loglik,
                "kind": p.kind,
            })
        })
        .collect();
    write_json(
        out,
        &json!({
            "n": s.n,
            "m": s.m,
            "mean_x": s.mean_x,
            "mean_y": s.mean_y,
            "var_x": s.var_x,
            "var_y": s.var_y,
            "r": reduced.r,
            "gamma_hat": reduced.gamma_hat,
            "delta_hat": reduced.delta_hat,
            "mu_hat": null_fit.mle.params.mu,
            "var_x_hat": null_fit.mle.params.var_x,
            "var_y_hat": null_fit.mle.params.var_y,
            "loglik_null": null_fit.mle.loglik,
            "loglik_alt": alt.loglik,
            "lrt": likelihood::lrt_from_fits(&alt, &null_fit),
            "discriminant": null_fit.discriminant,
            "multimodal": null_fit.multimodal,
            "degenerate": null_fit.degenerate,
            "stationary_points": points,
        }),
    )
}

fn roots(a: &RootsArgs, out: &mut dyn Write) -> CliResult<()> {
    let c = Cubic::new(
        finite("a3", a.a3)?,
        finite("a2", a.a2)?,
        finite("a1", a.a1)?,
        finite("a0", a.a0)?,
    );
    let rs = solve_cubic(&c, positive("tol", a.tol)?)?;
    write_json(out, &rs)
}

fn classify(a: &ClassifyArgs, out: &mut dyn Write) -> CliResult<()> {
    let (gamma, delta, r) = (
        positive("gamma", a.gamma)?,
        finite("delta", a.delta)?,
        positive("r", a.r)?,
    );
    let tol = Tolerance::default();
    let point = classify_point(gamma, delta, r, &tol);
    let prediction = asymptotic_prediction(gamma, delta, r, &tol);
    let (gx, gy) = big_d_gradient(gamma, delta, r);
    write_json(
        out,
        &json!({
            "gamma": point.gamma,
            "delta": point.delta,
            "r": point.r,
            "d_value": point.d_value,
            "gradient": [gx, gy],
            "region": point.region,
            "prediction": prediction,
        }),
    )
}

fn curve(a: &CurveArgs, out: &mut dyn Write) -> CliResult<()> {
    let r = positive("r", a.r)?;
    let lo = positive("gamma-min", a.gamma_min)?;
    let hi = positive("gamma-max", a.gamma_max)?;
    if lo >= hi {
        return Err(CliError::Usage(
            "--gamma-min must be below --gamma-max".into(),
        ));
    }
    if a.steps < 2 {
        return Err(CliError::Usage("--steps must be at least 2".into()));
    }
    writeln!(out, "gamma,delta")?;
    for (g, d) in trace_curve(r, lo, hi, a.steps) {
        writeln!(out, "{g},{d}")?;
    }
    Ok(())
}

fn cusps_cmd(a: &CuspsArgs, out: &mut dyn Write) -> CliResult<()> {
    let r = positive("r", a.r)?;
    let c = cusps(r);
    let (tx, ty) = cusp_tangent_ray(r);
    write_json(
        out,
        &json!({
            "r": r,
            "gamma_c": c.gamma_c,
            "delta_c": c.delta_c,
            "points": c.points(),
            "tangent_ray": [tx, ty],
            "asymptote_slope": asymptote_slope(r),
        }),
    )
}

fn bound(a: &BoundArgs, out: &mut dyn Write) -> CliResult<()> {
    let gamma = positive("gamma", a.gamma)?;
    let (r, res) = match (a.n, a.r) {
        (Some(n), _) => (n as f64 / a.m as f64, multimodality_bound(n, a.m, gamma)?),
        (None, Some(r)) => (
            r,
            multimodality_bound_with_ratio(positive("r", r)?, a.m, gamma)?,
        ),
        (None, None) => return Err(CliError::Usage("bound needs --n or --r".into())),
    };
    write_json(
        out,
        &json!({
            "n": a.n,
            "m": a.m,
            "r": r,
            "gamma": gamma,
            "c_n": res.c_n,
            "t_threshold": res.t_threshold,
            "dof": res.dof,
            "bound": res.bound,
        }),
    )
}

fn sim_config(a: &SimArgs, mu_x: f64, mu_y: f64) -> CliResult<SimConfig> {
    let cfg = SimConfig {
        n: a.n,
        m: a.m,
        mu_x: finite("mux", mu_x)?,
        mu_y: finite("muy", mu_y)?,
        var_x: positive("vx", a.vx)?,
        var_y: positive("vy", a.vy)?,
        replications: a.reps,
        seed: a.seed,
        workers: a.workers,
    };
    cfg.validate()?;
    Ok(cfg)
}

/// Configuration echo for the CSV header; omits the worker count, which
/// does not affect results.
fn config_echo(cfg: &SimConfig, deltas: Option<&[f64]>) -> serde_json::Value {
    let mut v = json!({
        "n": cfg.n,
        "m": cfg.m,
        "mu_x": cfg.mu_x,
        "mu_y": cfg.mu_y,
        "var_x": cfg.var_x,
        "var_y": cfg.var_y,
        "replications": cfg.replications,
        "seed": cfg.seed,
    });
    if let Some(d) = deltas {
        v["deltas"] = json!(d);
        v.as_object_mut().map(|o| {
            o.remove("mu_x");
            o.remove("mu_y")
        });
    }
    v
}

const SIM_HEADER: &str = "delta,p_hat,std_err,replications,degenerate_count";

fn simulate(a: &SimulateArgs, out: &mut dyn Write) -> CliResult<()> {
    let cfg = sim_config(&a.sim, a.mux, a.muy)?;
    let res = estimate_prob_three(&cfg)?;
    writeln!(out, "# {}", config_echo(&cfg, None))?;
    writeln!(out, "{SIM_HEADER}")?;
    writeln!(
        out,
        "{},{},{},{},{}",
        cfg.delta(),
        res.p_hat,
        res.std_err,
        res.replications,
        res.degenerate_count
    )?;
    Ok(())
}

fn sweep(a: &SweepArgs, out: &mut dyn Write) -> CliResult<()> {
    let cfg = sim_config(&a.sim, 0.0, 0.0)?;
    for &d in &a.deltas {
        finite("deltas", d)?;
    }
    let rows = sweep_delta(&cfg, &a.deltas)?;
    writeln!(out, "# {}", config_echo(&cfg, Some(&a.deltas)))?;
    writeln!(out, "{SIM_HEADER}")?;
    for row in rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            row.delta, row.p_hat, row.std_err, row.replications, row.degenerate_count
        )?;
    }
    Ok(())
}
