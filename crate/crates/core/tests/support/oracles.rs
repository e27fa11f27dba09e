//! Independent reference computations used by the integration and
//! acceptance tests. Nothing here calls into the code paths it is used to
//! check.
#![allow(dead_code)]

/// Real roots of `a3 x^3 + a2 x^2 + a1 x + a0` by sign scanning and
/// bisection.
///
/// The scan covers the Cauchy interval `|x| <= 1 + max|a_i / a3|` on a dense
/// uniform grid, with the critical points of the cubic added as extra
/// nodes so that two roots inside one grid cell cannot hide each other.
pub fn roots_by_scan(a3: f64, a2: f64, a1: f64, a0: f64) -> Vec<f64> {
    let f = |x: f64| a3 * x * x * x + a2 * x * x + a1 * x + a0;
    let bound = 1.0 + (a2 / a3).abs().max((a1 / a3).abs()).max((a0 / a3).abs());
    let mut nodes: Vec<f64> = (0..=4000)
        .map(|i| -bound + 2.0 * bound * i as f64 / 4000.0)
        .collect();
    // f'(x) = 3 a3 x^2 + 2 a2 x + a1
    let disc = 4.0 * a2 * a2 - 12.0 * a3 * a1;
    if disc >= 0.0 {
        let s = disc.sqrt();
        for c in [(-2.0 * a2 - s) / (6.0 * a3), (-2.0 * a2 + s) / (6.0 * a3)] {
            if c.abs() < bound {
                nodes.push(c);
            }
        }
    }
    nodes.sort_by(f64::total_cmp);

    let mut roots = Vec::new();
    for w in nodes.windows(2) {
        let (mut lo, mut hi) = (w[0], w[1]);
        let (flo, fhi) = (f(lo), f(hi));
        if flo == 0.0 {
            roots.push(lo);
            continue;
        }
        if flo.signum() == fhi.signum() || fhi == 0.0 {
            continue;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if f(mid).signum() == flo.signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        roots.push(0.5 * (lo + hi));
    }
    if f(*nodes.last().unwrap()) == 0.0 {
        roots.push(*nodes.last().unwrap());
    }
    roots.dedup();
    roots
}

/// Adaptive Simpson quadrature.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        whole: f64,
        m: f64,
        fm: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let (lm, flm, left) = simpson(f, a, fa, m, fm);
        let (rm, frm, right) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, fa, m, fm, left, lm, flm, 0.5 * tol, depth - 1)
            + recurse(f, m, fm, b, fb, right, rm, frm, 0.5 * tol, depth - 1)
    }
    let (fa, fb) = (f(a), f(b));
    let (m, fm, whole) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, whole, m, fm, tol, 50)
}

/// `P(|T_nu| > |t|)` by quadrature, without any gamma-function constant.
///
/// With `x = sqrt(nu) tan(theta)` the t density becomes proportional to
/// `cos(theta)^(nu - 1)` on `(-pi/2, pi/2)`, so the tail is a ratio of two
/// integrals over finite intervals.
pub fn t_tail_by_quadrature(t: f64, nu: f64) -> f64 {
    let half_pi = std::f64::consts::FRAC_PI_2;
    let kernel = |theta: f64| theta.cos().max(0.0).powf(nu - 1.0);
    let theta0 = (t.abs() / nu.sqrt()).atan();
    let total = integrate(&kernel, 0.0, half_pi, 1e-14);
    let tail = integrate(&kernel, theta0, half_pi, 1e-14);
    tail / total
}

/// Standard normal CDF via an erfc continued fraction / series pair,
/// accurate to about 1e-14.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

fn erfc(x: f64) -> f64 {
    if x < 0.0 {
        return 2.0 - erfc(-x);
    }
    if x < 2.5 {
        // erf series: 2/sqrt(pi) * sum (-1)^k x^(2k+1) / (k! (2k+1))
        let mut term = x;
        let mut sum = x;
        for k in 1..200 {
            term *= -x * x / k as f64;
            let add = term / (2 * k + 1) as f64;
            sum += add;
            if add.abs() < 1e-17 * sum.abs() {
                break;
            }
        }
        1.0 - 2.0 / std::f64::consts::PI.sqrt() * sum
    } else {
        // Continued fraction evaluated backwards.
        let mut frac = 0.0;
        for k in (1..120).rev() {
            frac = (k as f64 / 2.0) / (x + frac);
        }
        (-x * x).exp() / std::f64::consts::PI.sqrt() / (x + frac)
    }
}

/// Five-point (fourth-order) central-difference gradient with step
/// `1e-3 * scales[i]` along coordinate `i`; `scales` should be the natural
/// size of each coordinate.
pub fn fd_gradient<F: Fn(&[f64]) -> f64>(f: F, at: &[f64], scales: &[f64]) -> Vec<f64> {
    (0..at.len())
        .map(|i| {
            let h = 1e-3 * scales[i];
            let at_offset = |k: f64| {
                let mut x = at.to_vec();
                x[i] += k * h;
                f(&x)
            };
            (at_offset(-2.0) - 8.0 * at_offset(-1.0) + 8.0 * at_offset(1.0) - at_offset(2.0))
                / (12.0 * h)
        })
        .collect()
}
