//! Real cubic polynomials: discriminant, real roots, and root-count
//! classification consistent with the sign of the discriminant.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default relative tolerance below which the discriminant counts as zero.
pub const DEFAULT_TOL_DEGENERATE: f64 = 1e-12;

/// Residual bound factor every polished root must meet.
pub const RESIDUAL_FACTOR: f64 = 1e-10;

/// `a3 x^3 + a2 x^2 + a1 x + a0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cubic {
    pub a3: f64,
    pub a2: f64,
    pub a1: f64,
    pub a0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RootCount {
    One,
    Three,
    Degenerate,
}

/// Distinct real roots in ascending order together with the discriminant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootSet {
    pub roots: Vec<f64>,
    pub discriminant: f64,
    pub degenerate: bool,
}

impl Cubic {
    pub const fn new(a3: f64, a2: f64, a1: f64, a0: f64) -> Self {
        Self { a3, a2, a1, a0 }
    }

    pub fn eval(&self, x: f64) -> f64 {
        ((self.a3 * x + self.a2) * x + self.a1) * x + self.a0
    }

    pub fn derivative(&self, x: f64) -> f64 {
        (3.0 * self.a3 * x + 2.0 * self.a2) * x + self.a1
    }

    /// Largest coefficient magnitude.
    pub fn coefficient_scale(&self) -> f64 {
        self.a3
            .abs()
            .max(self.a2.abs())
            .max(self.a1.abs())
            .max(self.a0.abs())
    }

    /// Residual scale at `x`: `max|a_i| * (1 + |x|)^3`.
    pub fn scale_at(&self, x: f64) -> f64 {
        self.coefficient_scale() * (1.0 + x.abs()).powi(3)
    }

    pub fn discriminant(&self) -> f64 {
        discriminant(self)
    }

    /// Coefficients of `x -> self(x - c)`.
    pub fn shifted(&self, c: f64) -> Self {
        let Self { a3, a2, a1, a0 } = *self;
        Self {
            a3,
            a2: a2 - 3.0 * a3 * c,
            a1: a1 - 2.0 * a2 * c + 3.0 * a3 * c * c,
            a0: a0 - a1 * c + a2 * c * c - a3 * c * c * c,
        }
    }

    fn degeneracy_threshold(&self, tol: f64) -> f64 {
        let s = self.coefficient_scale();
        tol * s * s
    }
}

/// `a1²a2² − 4a0a2³ − 4a1³a3 + 18a0a1a2a3 − 27a0²a3²`
///
/// The five terms can be many orders of magnitude larger than their sum
/// (the discriminant is translation invariant, the terms are not), so they
/// are formed and accumulated in double-double arithmetic.
pub fn discriminant(c: &Cubic) -> f64 {
    let (a3, a2, a1, a0) = (
        Dd::from(c.a3),
        Dd::from(c.a2),
        Dd::from(c.a1),
        Dd::from(c.a0),
    );
    let terms = [
        a1 * a1 * a2 * a2,
        a0 * a2 * a2 * a2 * -4.0,
        a1 * a1 * a1 * a3 * -4.0,
        a0 * a1 * a2 * a3 * 18.0,
        a0 * a0 * a3 * a3 * -27.0,
    ];
    terms
        .into_iter()
        .fold(Dd::from(0.0), |acc, t| acc + t)
        .value()
}

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi) / 2`.
#[derive(Debug, Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    fn value(self) -> f64 {
        self.hi + self.lo
    }

    fn two_sum(a: f64, b: f64) -> Self {
        let s = a + b;
        let bb = s - a;
        Self {
            hi: s,
            lo: (a - (s - bb)) + (b - bb),
        }
    }

    fn quick_two_sum(a: f64, b: f64) -> Self {
        let s = a + b;
        Self {
            hi: s,
            lo: b - (s - a),
        }
    }

    fn two_prod(a: f64, b: f64) -> Self {
        let p = a * b;
        Self {
            hi: p,
            lo: a.mul_add(b, -p),
        }
    }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }
}

impl std::ops::Add for Dd {
    type Output = Dd;
    fn add(self, rhs: Dd) -> Dd {
        let s = Dd::two_sum(self.hi, rhs.hi);
        let t = Dd::two_sum(self.lo, rhs.lo);
        let u = Dd::quick_two_sum(s.hi, s.lo + t.hi);
        Dd::quick_two_sum(u.hi, u.lo + t.lo)
    }
}

impl std::ops::Mul for Dd {
    type Output = Dd;
    fn mul(self, rhs: Dd) -> Dd {
        let p = Dd::two_prod(self.hi, rhs.hi);
        Dd::quick_two_sum(p.hi, p.lo + (self.hi * rhs.lo + self.lo * rhs.hi))
    }
}

impl std::ops::Mul<f64> for Dd {
    type Output = Dd;
    fn mul(self, rhs: f64) -> Dd {
        self * Dd::from(rhs)
    }
}

pub fn count_real_roots(c: &Cubic, tol_degenerate: f64) -> Result<RootCount> {
    if c.a3 == 0.0 {
        return Err(Error::NotCubic);
    }
    Ok(classify_discriminant(
        c.discriminant(),
        c.degeneracy_threshold(tol_degenerate),
    ))
}

fn classify_discriminant(disc: f64, tau: f64) -> RootCount {
    if disc > tau {
        RootCount::Three
    } else if disc < -tau {
        RootCount::One
    } else {
        RootCount::Degenerate
    }
}

/// All distinct real roots of `c`.
///
/// The branch is chosen by the sign of the discriminant so that the number of
/// roots returned always agrees with [`count_real_roots`]. Near-zero
/// discriminants are flagged and repeated roots merged.
pub fn solve_cubic(c: &Cubic, tol_degenerate: f64) -> Result<RootSet> {
    if c.a3 == 0.0 {
        return Err(Error::NotCubic);
    }
    let discriminant = c.discriminant();
    let count = classify_discriminant(discriminant, c.degeneracy_threshold(tol_degenerate));

    // Depressed form t^3 + p t + q with x = t - shift.
    let b = c.a2 / c.a3;
    let cc = c.a1 / c.a3;
    let d = c.a0 / c.a3;
    let shift = b / 3.0;
    let p = cc - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * cc / 3.0 + d;

    let roots = match count {
        RootCount::Three if p < 0.0 => {
            let mut r = trigonometric_roots(p, q).map(|t| t - shift);
            r.sort_by(f64::total_cmp);
            polish_distinct(c, r.to_vec())
        }
        RootCount::One => {
            let x = cardano_real_root(p, q) - shift;
            vec![polish(c, x)]
        }
        // p >= 0 cannot give three real roots; fall through to the merged form.
        _ => repeated_roots(c, p, q, shift, b * b + cc.abs()),
    };

    Ok(RootSet {
        degenerate: !matches!(
            (count, roots.len()),
            (RootCount::Three, 3) | (RootCount::One, 1)
        ),
        roots,
        discriminant,
    })
}

fn trigonometric_roots(p: f64, q: f64) -> [f64; 3] {
    let m = 2.0 * (-p / 3.0).sqrt();
    let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
    let theta = arg.acos() / 3.0;
    [0.0, 1.0, 2.0].map(|k| m * (theta - 2.0 * PI * k / 3.0).cos())
}

/// Real root of `t^3 + p t + q` when it is unique. The cube-root term is
/// taken with the sign of `-q` so the two Cardano terms never cancel.
fn cardano_real_root(p: f64, q: f64) -> f64 {
    let half_q = q / 2.0;
    let third_p = p / 3.0;
    let inner = half_q * half_q + third_p * third_p * third_p;
    let a = -(half_q.abs() + inner.max(0.0).sqrt()).cbrt().copysign(q);
    if a == 0.0 {
        0.0
    } else {
        a - third_p / a
    }
}

/// Roots when the discriminant is (numerically) zero: a double root and a
/// simple root, or a triple root. When `p` is lost in the rounding of the
/// depressed transform, `q / p` carries no information and the roots are
/// merged into one.
fn repeated_roots(c: &Cubic, p: f64, q: f64, shift: f64, p_scale: f64) -> Vec<f64> {
    let triple = vec![polish(c, -shift)];
    if p.abs() <= 1e-6 * p_scale {
        return triple;
    }
    let simple = 3.0 * q / p - shift;
    let double = -1.5 * q / p - shift;
    if !simple.is_finite() || !double.is_finite() {
        return triple;
    }
    if (simple - double).abs() <= 1e-7 * (1.0 + simple.abs().max(double.abs())) {
        return triple;
    }
    let mut r = vec![polish(c, simple), polish(c, double)];
    r.sort_by(f64::total_cmp);
    r
}

fn polish(c: &Cubic, x0: f64) -> f64 {
    let mut x = x0;
    let mut fx = c.eval(x).abs();
    for _ in 0..4 {
        let dfx = c.derivative(x);
        if dfx == 0.0 || fx == 0.0 {
            break;
        }
        let next = x - c.eval(x) / dfx;
        let fnext = c.eval(next).abs();
        if fnext.is_nan() || fnext >= fx {
            break;
        }
        x = next;
        fx = fnext;
    }
    x
}

/// Polishes sorted candidate roots, keeping the unpolished value whenever
/// polishing would break strict ordering.
fn polish_distinct(c: &Cubic, roots: Vec<f64>) -> Vec<f64> {
    let polished: Vec<f64> = roots.iter().map(|&x| polish(c, x)).collect();
    if polished.windows(2).all(|w| w[0] < w[1]) {
        polished
    } else {
        roots
    }
}
