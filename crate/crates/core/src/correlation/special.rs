//! `₂F₁(1, s; s+1; x)` on the real line.
//!
//! The function equals `s ∫₀¹ t^{s−1} / (1 − x t) dt` and has a branch cut on
//! `x ≥ 1`. Inside `|x| ≤ 0.7` the defining series is summed directly; outside,
//! the argument is mapped back into a convergent region.

use std::f64::consts::PI;

use statrs::function::gamma::digamma;

use crate::{Error, Result};

const SERIES_RADIUS: f64 = 0.7;
const MAX_TERMS: usize = 200_000_000;

pub fn hyp2f1_1_s(s: f64, x: f64) -> Result<f64> {
    const OP: &str = "hyp2f1_1_s";
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::domain(OP, format!("s = {s} must be positive and finite")));
    }
    if x.is_nan() || x == f64::NEG_INFINITY {
        return Err(Error::domain(OP, format!("x = {x} is not a finite real")));
    }
    if x >= 1.0 {
        return Err(Error::BranchCut { x });
    }

    if x.abs() <= SERIES_RADIUS {
        return Ok(direct_series(s, x));
    }
    if x > 0.0 {
        // log connection around x = 1; only cheap while s(1 − x) is small
        return Ok(if s * (1.0 - x) <= 2.0 { log_connection(s, x) } else { direct_series(s, x) });
    }
    let w = x / (x - 1.0);
    if w > 0.95 && s.fract() != 0.0 {
        Ok(inversion(s, x))
    } else {
        Ok(pfaff_series(s, w) / (1.0 - x))
    }
}

/// Analytic part of `₂F₁(1, s; s+1; x)` for `x > 1` and non-integer `s`:
/// the continuation from `x < −1` of the `1/x` expansion with the
/// `(−x)^{−s}` piece removed.
pub(crate) fn hyp2f1_1_s_regular(s: f64, x: f64) -> f64 {
    debug_assert!(x.abs() > 1.0 && s.fract() != 0.0);
    s / x * lerch(1.0 - s, 1.0 / x)
}

/// `s Σ_{j≥0} x^j / (s + j)`.
fn direct_series(s: f64, x: f64) -> f64 {
    let mut sum = 0.0;
    let mut xp = 1.0;
    for j in 0..MAX_TERMS {
        let term = xp / (s + j as f64);
        sum += term;
        if term.abs() <= f64::EPSILON * 0.1 * sum.abs() {
            break;
        }
        xp *= x;
        if xp == 0.0 {
            break;
        }
    }
    s * sum
}

/// `Σ_{j≥0} j! / (s+1)_j · w^j`, i.e. `₂F₁(1, 1; s+1; w)`.
fn pfaff_series(s: f64, w: f64) -> f64 {
    let mut sum = 1.0;
    let mut term = 1.0;
    for j in 0..MAX_TERMS {
        let jf = j as f64;
        term *= (jf + 1.0) / (s + 1.0 + jf) * w;
        sum += term;
        if term.abs() <= f64::EPSILON * 0.1 * sum.abs() {
            break;
        }
    }
    sum
}

/// Expansion in powers of `1 − x` for the logarithmic case `c = a + b`.
fn log_connection(s: f64, x: f64) -> f64 {
    let u = 1.0 - x;
    let log_u = u.ln();
    let mut coeff = 1.0; // (s)_k / k! · u^k
    let mut dpsi = digamma(1.0) - digamma(s); // ψ(k+1) − ψ(s+k)
    let mut sum = 0.0;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        let term = coeff * (dpsi - log_u);
        sum += term;
        if k > 2 && term.abs() <= f64::EPSILON * 0.1 * sum.abs() {
            break;
        }
        coeff *= (s + kf) / (kf + 1.0) * u;
        dpsi += 1.0 / (kf + 1.0) - 1.0 / (s + kf);
    }
    s * sum
}

/// `x < −1`, non-integer `s`: expansion in `1/x` plus the algebraic branch term.
fn inversion(s: f64, x: f64) -> f64 {
    hyp2f1_1_s_regular(s, x) + s * PI / (PI * s).sin() * (-x).powf(-s)
}

/// `Σ_{j≥0} w^j / (b + j)` for `|w| < 1` and `b` off the non-positive integers.
pub(crate) fn lerch(b: f64, w: f64) -> f64 {
    let mut sum = 0.0;
    let mut wp = 1.0;
    for j in 0..MAX_TERMS {
        let denom = b + j as f64;
        let term = wp / denom;
        sum += term;
        if denom > 0.0 && term.abs() <= f64::EPSILON * 0.1 * sum.abs() {
            break;
        }
        wp *= w;
        if wp == 0.0 {
            break;
        }
    }
    sum
}
