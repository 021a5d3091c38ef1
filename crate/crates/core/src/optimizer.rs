//! Working point of the parity detector: the first minimum of the parity
//! `P(δ)` for `δ > 0`, where the miss probability `(1 + P)/2` is smallest.
//!
//! The minimum is the root of the exact stationarity condition
//!
//! ```text
//! g(δ) = δ(cos 4αδ + e^{-2α²}) + α sin 4αδ = 0      (dP/dδ ∝ −g)
//! ```
//!
//! bracketed on `[π/(8α), 1.05·π/(4α)]` and refined with Brent's method.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{self, CatParams};
use crate::error::{Error, Result};

pub const DEFAULT_TOLERANCE: f64 = 1e-10;
/// Points in the fallback scan over `(0, π/(2α)]`.
pub const SCAN_POINTS: usize = 10_000;

const MAX_ITERATIONS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Bracketed,
    DenseScan,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Optimum {
    pub alpha: f64,
    pub delta_star: f64,
    pub parity_at_min: f64,
    pub p_even_at_min: f64,
    pub iterations: usize,
    pub bracket: (f64, f64),
    pub method: Method,
}

/// Stationarity residual; positive left of the minimum, negative right of it.
pub fn stationarity(alpha: f64, delta: f64) -> f64 {
    let c = (-2.0 * alpha * alpha).exp();
    let x = 4.0 * alpha * delta;
    delta * (x.cos() + c) + alpha * x.sin()
}

/// `(π/4α)(1 − 1/(4α²) + 1/(16α⁴))`, the large-amplitude expansion of the
/// minimiser. Meaningful for `α ≳ 1`.
pub fn parity_min_series(alpha: f64) -> f64 {
    let inv2 = 1.0 / (alpha * alpha);
    PI / (4.0 * alpha) * (1.0 - inv2 / 4.0 + inv2 * inv2 / 16.0)
}

/// First local minimum of the parity in `δ > 0`.
///
/// For `α ≥ 1` the analytic bracket is tried first; when it does not change
/// sign, or for smaller amplitudes, the minimum is located on a
/// [`SCAN_POINTS`]-point grid and then refined. The final bracket is
/// narrower than `tolerance` unless that is below the float spacing at
/// `δ*`.
pub fn minimize_parity(alpha: f64, tolerance: f64) -> Result<Optimum> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::Domain(format!(
            "parity has no minimum in delta > 0 for alpha = {alpha}"
        )));
    }
    if !(tolerance > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tolerance}"
        )));
    }
    let g = |d: f64| stationarity(alpha, d);

    let analytic_bracket = (PI / (8.0 * alpha), 1.05 * PI / (4.0 * alpha));
    let (bracket, method) = if alpha >= 1.0 && has_sign_change(&g, analytic_bracket) {
        (analytic_bracket, Method::Bracketed)
    } else {
        (scan_bracket(alpha)?, Method::DenseScan)
    };

    let root = brent(&g, bracket.0, bracket.1, tolerance).ok_or(Error::Bracketing { alpha })?;
    let delta_star = root.x;

    let h = 1e-3 / alpha;
    let p = |d: f64| analytic::parity(&CatParams::unchecked(alpha, d));
    let p_min = p(delta_star);
    if !(p(delta_star + h) > p_min && p(delta_star - h) > p_min) {
        return Err(Error::Bracketing { alpha });
    }
    Ok(Optimum {
        alpha,
        delta_star,
        parity_at_min: p_min,
        p_even_at_min: 0.5 * (1.0 + p_min),
        iterations: root.iterations,
        bracket: root.bracket,
        method,
    })
}

fn has_sign_change(g: &impl Fn(f64) -> f64, (a, b): (f64, f64)) -> bool {
    g(a) > 0.0 && g(b) < 0.0
}

/// Grid cell around the first sign change of `g` from positive to negative.
fn scan_bracket(alpha: f64) -> Result<(f64, f64)> {
    let step = PI / (2.0 * alpha) / SCAN_POINTS as f64;
    let mut prev = step;
    let mut g_prev = stationarity(alpha, prev);
    for i in 2..=SCAN_POINTS {
        let d = i as f64 * step;
        let g_d = stationarity(alpha, d);
        if g_prev > 0.0 && g_d <= 0.0 {
            return Ok((prev, d));
        }
        prev = d;
        g_prev = g_d;
    }
    Err(Error::Bracketing { alpha })
}

struct Root {
    x: f64,
    bracket: (f64, f64),
    iterations: usize,
}

/// Brent's method on a sign-changing bracket `[a, b]`, stopping once the
/// bracket is narrower than `tol`.
fn brent(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Option<Root> {
    let (mut a, mut b) = (a, b);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Some(Root { x: a, bracket: (a, a), iterations: 0 });
    }
    if fb == 0.0 {
        return Some(Root { x: b, bracket: (b, b), iterations: 0 });
    }
    if fa.signum() == fb.signum() {
        return None;
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for iterations in 1..=MAX_ITERATIONS {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 0.5 * tol.max(4.0 * f64::EPSILON * b.abs());
        let m = 0.5 * (c - b);
        if fb == 0.0 {
            return Some(Root { x: b, bracket: (b, b), iterations });
        }
        if m.abs() <= tol1 {
            let bracket = if b < c { (b, c) } else { (c, b) };
            return Some(Root { x: b, bracket, iterations });
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            // Inverse quadratic interpolation, or secant when a == c.
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol1 * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(m) };
        fb = f(b);
    }
    None
}

/// Optimised working point and resulting detection probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorPoint {
    pub alpha: f64,
    pub delta_star: f64,
    pub p_even: f64,
    pub p_odd: f64,
    /// Series approximation of the minimiser and the miss probability there.
    pub delta_series: f64,
    pub p_even_series: f64,
}

/// Miss and detection probabilities at the per-amplitude optimum.
pub fn false_negative_curve(alphas: &[f64], tolerance: f64) -> Result<Vec<ErrorPoint>> {
    alphas
        .par_iter()
        .map(|&alpha| {
            if !(alpha >= 1.0) {
                return Err(Error::Domain(format!(
                    "error curve needs alpha >= 1, got {alpha}"
                )));
            }
            let opt = minimize_parity(alpha, tolerance)?;
            let (p_even, p_odd) =
                analytic::even_odd_probabilities(&CatParams::new(alpha, opt.delta_star)?);
            let delta_series = parity_min_series(alpha);
            let (p_even_series, _) =
                analytic::even_odd_probabilities(&CatParams::new(alpha, delta_series)?);
            Ok(ErrorPoint {
                alpha,
                delta_star: opt.delta_star,
                p_even,
                p_odd,
                delta_series,
                p_even_series,
            })
        })
        .collect()
}
