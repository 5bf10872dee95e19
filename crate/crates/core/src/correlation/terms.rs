//! Entry-wise pieces of the half-filled correlation function.
//!
//! Sites are 1-based with the impurity bond between `N` and `1`, so the
//! impurity term depends on `l + m` only. Internally everything is expressed
//! through the index sum `S = l + m` and the product `τ = t_R t_L / t²`.

use std::f64::consts::PI;

use super::quadrature::{integrate, QuadratureConfig};
use super::special::{hyp2f1_1_s, hyp2f1_1_s_regular};
use crate::spectral::ModelParams;
use crate::{Error, Result, C64};

/// Distance from `τ = −1` inside which the impurity term is reported divergent.
pub const DIVERGENCE_GUARD: f64 = 1e-6;

/// `sin(πd/2) / (πd)`, and `1/2` on the diagonal.
pub fn sine_kernel(d: i64) -> f64 {
    if d == 0 {
        0.5
    } else {
        half_sine(d) / (PI * d as f64)
    }
}

/// `sin(πn/2)` evaluated exactly from the parity of `n`.
fn half_sine(n: i64) -> f64 {
    match n.rem_euclid(4) {
        1 => 1.0,
        3 => -1.0,
        _ => 0.0,
    }
}

fn site_sum(l: usize, m: usize) -> Result<u64> {
    if l == 0 || m == 0 {
        return Err(Error::invalid(format!("sites are 1-based, got ({l}, {m})")));
    }
    Ok((l + m) as u64)
}

fn checked_product(params: &ModelParams, op: &'static str) -> Result<f64> {
    params.validate()?;
    params.require_half_filling(op)?;
    Ok(params.impurity_product())
}

/// `(1 − τ) sin(πS/2) / (πS)`.
fn odd_amplitude(sum: u64, tau: f64) -> f64 {
    (1.0 - tau) * half_sine(sum as i64) / (PI * sum as f64)
}

/// `(1 − τ)/2 · τ^{−S/2}` for real `τ^{−S/2}`; callers avoid negative `τ` with odd `S`.
fn decay_amplitude(sum: u64, tau: f64) -> f64 {
    let power = if sum.is_multiple_of(2) {
        tau.powi(-((sum / 2) as i32))
    } else {
        tau.powf(-(sum as f64) / 2.0)
    };
    0.5 * (1.0 - tau) * power
}

/// Impurity term from the closed-form evaluation of its contour integral.
pub fn impurity_term_closed(l: usize, m: usize, params: &ModelParams) -> Result<C64> {
    let sum = site_sum(l, m)?;
    let tau = checked_product(params, "impurity_term_closed")?;
    impurity_closed_by_sum(sum, tau).map(|v| C64::new(v, 0.0))
}

pub(crate) fn impurity_closed_by_sum(sum: u64, tau: f64) -> Result<f64> {
    const OP: &str = "impurity_term_closed";
    if !tau.is_finite() {
        return Err(Error::invalid(format!("t_R t_L = {tau} is not finite")));
    }
    if (tau + 1.0).abs() <= DIVERGENCE_GUARD {
        return Err(Error::Divergent { op: OP, product: tau });
    }
    if tau == 1.0 {
        return Ok(0.0);
    }
    let even = sum.is_multiple_of(2);
    let s = sum as f64 / 2.0;

    if tau.abs() < 1.0 {
        if even {
            return Ok(0.0);
        }
        return Ok(-odd_amplitude(sum, tau) * hyp2f1_1_s(s, -tau)?);
    }
    if even {
        return Ok(decay_amplitude(sum, tau));
    }
    if tau > 1.0 {
        Ok(decay_amplitude(sum, tau) - odd_amplitude(sum, tau) * hyp2f1_1_s(s, -tau)?)
    } else {
        // the branch term of ₂F₁ beyond x = 1 cancels the decaying piece exactly
        Ok(-odd_amplitude(sum, tau) * hyp2f1_1_s_regular(s, -tau))
    }
}

/// Impurity term by adaptive quadrature of its momentum integral over the
/// Fermi sea `k ∈ [−π/2, π/2]`.
pub fn impurity_term_quadrature(l: usize, m: usize, params: &ModelParams, cfg: &QuadratureConfig) -> Result<C64> {
    let sum = site_sum(l, m)?;
    let tau = checked_product(params, "impurity_term_quadrature")?;
    impurity_quadrature_by_sum(sum, tau, cfg)
}

pub(crate) fn impurity_quadrature_by_sum(sum: u64, tau: f64, cfg: &QuadratureConfig) -> Result<C64> {
    const OP: &str = "impurity_term_quadrature";
    if !tau.is_finite() {
        return Err(Error::invalid(format!("t_R t_L = {tau} is not finite")));
    }
    if (tau + 1.0).abs() <= DIVERGENCE_GUARD {
        return Err(Error::Divergent { op: OP, product: tau });
    }
    if tau == 1.0 {
        return Ok(C64::new(0.0, 0.0));
    }
    if (tau - 1.0).abs() <= DIVERGENCE_GUARD {
        return Err(Error::domain(OP, format!("t_R t_L = {tau} puts a pole on the integration contour")));
    }
    let s = sum as f64;
    let integrand = |k: f64| {
        let forward = C64::from_polar(1.0, s * k) / (tau * C64::from_polar(1.0, 2.0 * k) - 1.0);
        let backward = C64::from_polar(1.0, -s * k) / (tau * C64::from_polar(1.0, -2.0 * k) - 1.0);
        forward + backward
    };
    let r = integrate(integrand, -PI / 2.0, PI / 2.0, cfg)?;
    Ok(r.value * ((1.0 - tau) / (4.0 * PI)))
}

/// Contribution of the occupied impurity bound state, present for `t_R t_L > 1`.
pub fn bound_contribution(l: usize, m: usize, params: &ModelParams) -> Result<f64> {
    let sum = site_sum(l, m)?;
    params.validate()?;
    Ok(bound_by_sum(sum, params.impurity_product()))
}

pub(crate) fn bound_by_sum(sum: u64, tau: f64) -> f64 {
    if tau > 1.0 {
        -decay_amplitude(sum, tau)
    } else {
        0.0
    }
}

/// Large-`l+m` approximation of the full correlation function.
///
/// The decaying term is kept for `|t_R t_L| > 1`; for negative products and odd
/// `l + m` its real part vanishes and it is dropped.
pub fn asymptotic_corr(l: usize, m: usize, params: &ModelParams) -> Result<f64> {
    let sum = site_sum(l, m)?;
    let tau = checked_product(params, "asymptotic_corr")?;
    asymptotic_by_sum(l as i64 - m as i64, sum, tau)
}

pub(crate) fn asymptotic_by_sum(diff: i64, sum: u64, tau: f64) -> Result<f64> {
    if (tau + 1.0).abs() <= DIVERGENCE_GUARD {
        return Err(Error::Divergent { op: "asymptotic_corr", product: tau });
    }
    let ratio = (1.0 - tau) / (1.0 + tau);
    let mut value = sine_kernel(diff) - ratio * half_sine(sum as i64) / (PI * sum as f64);
    if tau.abs() > 1.0 && (tau > 0.0 || sum.is_multiple_of(2)) {
        value += decay_amplitude(sum, tau);
    }
    Ok(value)
}
