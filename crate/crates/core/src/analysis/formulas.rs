use std::f64::consts::PI;
use std::fmt;

use crate::{Error, Result, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FormulaSource {
    /// Unitary defect law for `t_R t_L > 0`.
    Unitary,
    /// Complex law for `t_R t_L < 0`.
    Complex,
    /// Formal continuation of the unitary law to `t_R t_L < 0`.
    Continuation,
}

impl fmt::Display for FormulaSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FormulaSource::Unitary => "unitary",
            FormulaSource::Complex => "complex",
            FormulaSource::Continuation => "continuation",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FormulaPrediction {
    /// `arctan(√τ) · arctan(1/√τ)`, first quadrant only.
    pub theta: Option<f64>,
    /// `ln|(1 − √|τ|)/(1 + √|τ|)|`, second quadrant only.
    pub theta_tilde: Option<f64>,
    pub c_eff: C64,
    pub source: FormulaSource,
}

fn product(t_r: f64, t_l: f64) -> Result<f64> {
    let tau = t_r * t_l;
    if !tau.is_finite() {
        return Err(Error::invalid(format!("t_R t_L = {tau} is not finite")));
    }
    Ok(tau)
}

/// `c_eff = 1/2 + (128/π⁴) Θ²`.
pub fn c_eff_unitary(t_r: f64, t_l: f64) -> Result<FormulaPrediction> {
    let tau = product(t_r, t_l)?;
    if tau <= 0.0 {
        return Err(Error::domain("c_eff_unitary", format!("requires t_R t_L > 0, got {tau}")));
    }
    let root = tau.sqrt();
    let theta = root.atan() * (1.0 / root).atan();
    let c = 0.5 + 128.0 / PI.powi(4) * theta * theta;
    Ok(FormulaPrediction { theta: Some(theta), theta_tilde: None, c_eff: C64::new(c, 0.0), source: FormulaSource::Unitary })
}

fn theta_tilde(tau: f64, op: &'static str) -> Result<f64> {
    if tau >= 0.0 {
        return Err(Error::domain(op, format!("requires t_R t_L < 0, got {tau}")));
    }
    if tau == -1.0 {
        return Err(Error::Divergent { op, product: tau });
    }
    let root = (-tau).sqrt();
    Ok(((1.0 - root) / (1.0 + root)).abs().ln())
}

fn complex_imag(theta_tilde: f64) -> f64 {
    -16.0 / PI.powi(3) * theta_tilde.powi(3)
}

/// `Re = 1/2 − (4/π²) Θ̃²`, `Im = −(16/π³) Θ̃³`.
pub fn c_eff_complex(t_r: f64, t_l: f64) -> Result<FormulaPrediction> {
    let tt = theta_tilde(product(t_r, t_l)?, "c_eff_complex")?;
    let re = 0.5 - 4.0 / (PI * PI) * tt * tt;
    Ok(FormulaPrediction {
        theta: None,
        theta_tilde: Some(tt),
        c_eff: C64::new(re, complex_imag(tt)),
        source: FormulaSource::Complex,
    })
}

/// The unitary law continued through `t_R → −t_R`:
/// `Re = 1/2 − 8Θ̃²/π² + 32Θ̃⁴/π⁴ · h²` with `h = arctanh √|τ|` below `|τ| = 1`
/// and `arccoth √|τ|` above; the imaginary part matches the complex law.
pub fn c_eff_continuation(t_r: f64, t_l: f64) -> Result<FormulaPrediction> {
    let tau = product(t_r, t_l)?;
    let tt = theta_tilde(tau, "c_eff_continuation")?;
    let root = (-tau).sqrt();
    let h = if root < 1.0 { root.atanh() } else { (1.0 / root).atanh() };
    let re = 0.5 - 8.0 * tt * tt / (PI * PI) + 32.0 * tt.powi(4) / PI.powi(4) * h * h;
    Ok(FormulaPrediction {
        theta: None,
        theta_tilde: Some(tt),
        c_eff: C64::new(re, complex_imag(tt)),
        source: FormulaSource::Continuation,
    })
}

/// The law matching the quadrant of `(t_R, t_L)`; `None` on the axes.
pub fn c_eff_prediction(t_r: f64, t_l: f64) -> Option<FormulaPrediction> {
    let tau = t_r * t_l;
    if tau > 0.0 {
        c_eff_unitary(t_r, t_l).ok()
    } else if tau < 0.0 {
        c_eff_complex(t_r, t_l).ok()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn unitary_anchor_points() {
        let p = c_eff_unitary(1.0, 1.0).unwrap();
        assert_abs_diff_eq!(p.theta.unwrap(), (PI / 4.0).powi(2), epsilon = 1e-15);
        assert_abs_diff_eq!(p.c_eff.re, 1.0, epsilon = 1e-14);
        assert_eq!(p.c_eff.im, 0.0);

        let p = c_eff_unitary(0.5, 0.5).unwrap();
        assert_abs_diff_eq!(p.theta.unwrap(), 0.513_326_855_813_538, epsilon = 1e-14);
        assert_abs_diff_eq!(p.c_eff.re, 0.846_256_911_311_813, epsilon = 1e-14);
        assert_abs_diff_eq!(p.theta.unwrap(), 0.513_342, epsilon = 2e-5);
        assert_abs_diff_eq!(p.c_eff.re, 0.846_27, epsilon = 2e-5);

        assert_abs_diff_eq!(c_eff_unitary(1e-12, 1.0).unwrap().c_eff.re, 0.5, epsilon = 1e-10);
        assert!(c_eff_unitary(-0.5, 0.5).is_err());
        assert!(c_eff_unitary(0.0, 0.5).is_err());
    }

    #[test]
    fn complex_anchor_points() {
        let p = c_eff_complex(-0.5, 0.5).unwrap();
        assert_abs_diff_eq!(p.theta_tilde.unwrap(), (1.0f64 / 3.0).ln(), epsilon = 1e-14);
        assert_abs_diff_eq!(p.theta_tilde.unwrap(), -1.098_61, epsilon = 1e-5);
        assert_abs_diff_eq!(p.c_eff.re, 0.010_842_010_778_318, epsilon = 1e-14);
        assert_abs_diff_eq!(p.c_eff.im, 0.684_232_537_206_960, epsilon = 1e-14);
        assert_abs_diff_eq!(p.c_eff.re, 0.010_79, epsilon = 1e-4);
        assert_abs_diff_eq!(p.c_eff.im, 0.684_18, epsilon = 1e-4);

        let small = c_eff_complex(-1e-14, 1.0).unwrap();
        assert_abs_diff_eq!(small.c_eff.re, 0.5, epsilon = 1e-10);
        assert_abs_diff_eq!(small.c_eff.im, 0.0, epsilon = 1e-10);

        let far = c_eff_complex(-0.9, 1.0).unwrap().c_eff.re;
        let near = c_eff_complex(-0.5, 1.0).unwrap().c_eff.re;
        assert!((far - 0.5).abs() > (near - 0.5).abs());

        assert!(c_eff_complex(0.5, 0.5).is_err());
        assert!(c_eff_complex(-1.0, 1.0).is_err());
    }

    #[test]
    fn continuation_departs_in_real_part() {
        let cont = c_eff_continuation(-0.5, 0.5).unwrap();
        let cplx = c_eff_complex(-0.5, 0.5).unwrap();
        assert_eq!(cont.c_eff.im, cplx.c_eff.im);
        assert!((cont.c_eff.re - cplx.c_eff.re).abs() > 0.05);
        let tiny = c_eff_continuation(-1e-14, 1.0).unwrap();
        assert_abs_diff_eq!(tiny.c_eff.re, 0.5, epsilon = 1e-10);
        assert!(c_eff_continuation(0.5, 0.5).is_err());
    }

    proptest! {
        #[test]
        fn theta_range(t_r in 1e-3f64..50.0, t_l in 1e-3f64..50.0) {
            let p = c_eff_unitary(t_r, t_l).unwrap();
            let theta = p.theta.unwrap();
            prop_assert!(theta > 0.0 && theta <= PI * PI / 16.0 + 1e-15);
            prop_assert!(p.c_eff.re >= 0.5 && p.c_eff.re <= 1.0 + 1e-14);
        }

        #[test]
        fn theta_tilde_nonpositive(t_r in -50.0f64..-1e-3, t_l in 1e-3f64..50.0) {
            prop_assume!((t_r * t_l + 1.0).abs() > 1e-9);
            let p = c_eff_complex(t_r, t_l).unwrap();
            prop_assert!(p.theta_tilde.unwrap() <= 0.0);
            let c = c_eff_continuation(t_r, t_l).unwrap();
            prop_assert_eq!(c.c_eff.im, p.c_eff.im);
        }

        #[test]
        fn unitary_law_is_self_dual(t_r in 1e-2f64..20.0, t_l in 1e-2f64..20.0) {
            let a = c_eff_unitary(t_r, t_l).unwrap().c_eff.re;
            let b = c_eff_unitary(1.0 / t_r, 1.0 / t_l).unwrap().c_eff.re;
            prop_assert!((a - b).abs() < 1e-12);
        }
    }
}
