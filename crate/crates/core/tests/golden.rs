//! Recorded Monte Carlo estimates. Any change to the sampler, the stream
//! derivation or the root classification shows up here as a count change.
//! Regenerate with `BFMLE_BLESS=1 cargo test -p bfmle-core --test golden`.

use std::path::PathBuf;

use bfmle_core::{estimate_prob_three, multimodality_bound, SimConfig};
use serde::{Deserialize, Serialize};

#[derive(Debug, Serialize, Deserialize)]
struct Record {
    n: usize,
    m: usize,
    gamma: f64,
    seed: u64,
    replications: u64,
    count_three: u64,
    degenerate_count: u64,
    p_hat: f64,
    bound: f64,
}

fn golden_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/null_prob_three.json")
}

/// P(three roots) under equal means with `sigma_x / sigma_y = 1/2`, at the
/// sample sizes where the finite-sample bound is usually quoted.
fn compute() -> Vec<Record> {
    let workers = std::thread::available_parallelism().map_or(4, |n| n.get());
    [5, 10, 15]
        .into_iter()
        .map(|n| {
            let cfg = SimConfig {
                n,
                m: n,
                mu_x: 0.0,
                mu_y: 0.0,
                var_x: 0.25,
                var_y: 1.0,
                replications: 1_000_000,
                seed: 10,
                workers,
            };
            let res = estimate_prob_three(&cfg).unwrap();
            Record {
                n,
                m: n,
                gamma: 0.5,
                seed: cfg.seed,
                replications: cfg.replications,
                count_three: res.count_three,
                degenerate_count: res.degenerate_count,
                p_hat: res.p_hat,
                bound: multimodality_bound(n, n, 0.5).unwrap().bound,
            }
        })
        .collect()
}

#[test]
fn null_probability_matches_recorded_estimates() {
    let got = compute();
    if std::env::var_os("BFMLE_BLESS").is_some() {
        std::fs::write(
            golden_path(),
            serde_json::to_string_pretty(&got).unwrap() + "\n",
        )
        .unwrap();
    }
    let text = std::fs::read_to_string(golden_path()).expect("golden file present");
    let want: Vec<Record> = serde_json::from_str(&text).unwrap();
    assert_eq!(got.len(), want.len());
    for (g, w) in got.iter().zip(&want) {
        let key = |r: &Record| {
            (
                r.n,
                r.m,
                r.seed,
                r.replications,
                r.count_three,
                r.degenerate_count,
            )
        };
        assert_eq!(key(g), key(w), "{g:?} vs recorded {w:?}");
        assert!(
            (g.bound - w.bound).abs() <= 1e-12 * w.bound,
            "{g:?} vs recorded {w:?}"
        );
        assert!(g.p_hat <= g.bound, "{g:?}");
    }
}
