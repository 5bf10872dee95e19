use crate::entanglement::Partition;
use crate::{Error, Result, C64};

/// Result of fitting `S = (c_eff/3) ln L_A + g`.
#[derive(Clone, Debug, PartialEq)]
pub struct FitResult {
    pub c_eff: C64,
    pub g: C64,
    /// Root-mean-square of the complex residuals.
    pub rms_residual: f64,
    pub window: Vec<usize>,
    pub partition: Partition,
}

/// Ordinary least squares of `Re S` and `Im S` against `{1, ln L_A}`.
///
/// `points` must hold at least four strictly increasing, even subsystem sizes.
pub fn fit_log_scaling(points: &[(usize, C64)], partition: &Partition) -> Result<FitResult> {
    let window: Vec<usize> = points.iter().map(|p| p.0).collect();
    if window.len() >= 2 && window.iter().all(|&l| l == window[0]) {
        return Err(Error::RankDeficient(format!("all subsystem sizes equal {}", window[0])));
    }
    validate_window(&window)?;

    let xs: Vec<f64> = window.iter().map(|&l| (l as f64).ln()).collect();
    let n = xs.len() as f64;
    let x_mean = xs.iter().sum::<f64>() / n;
    let y_mean = points.iter().map(|p| p.1).sum::<C64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - x_mean).powi(2)).sum();
    if sxx <= 0.0 {
        return Err(Error::RankDeficient("design matrix is singular".into()));
    }
    let sxy: C64 = xs.iter().zip(points).map(|(x, p)| (p.1 - y_mean) * (x - x_mean)).sum();
    let slope = sxy / sxx;
    let intercept = y_mean - slope * x_mean;
    let rss: f64 = xs.iter().zip(points).map(|(x, p)| (p.1 - (intercept + slope * x)).norm_sqr()).sum();

    Ok(FitResult {
        c_eff: 3.0 * slope,
        g: intercept,
        rms_residual: (rss / n).sqrt(),
        window,
        partition: *partition,
    })
}

pub fn validate_window(window: &[usize]) -> Result<()> {
    if window.len() < 4 {
        return Err(Error::InvalidWindow(format!("need at least 4 subsystem sizes, got {}", window.len())));
    }
    if let Some(&odd) = window.iter().find(|&&l| l % 2 != 0) {
        return Err(Error::InvalidWindow(format!("subsystem sizes must be even, got {odd}")));
    }
    if window.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidWindow(format!("subsystem sizes must be strictly increasing: {window:?}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn synthetic(c: C64, g: C64, window: &[usize]) -> Vec<(usize, C64)> {
        window.iter().map(|&l| (l, c / 3.0 * (l as f64).ln() + g)).collect()
    }

    #[test]
    fn exact_linear_data() {
        let pts = synthetic(C64::new(1.0, 0.0), C64::new(0.7, 0.0), &[64, 128, 256, 512]);
        let fit = fit_log_scaling(&pts, &Partition::first(512)).unwrap();
        assert_abs_diff_eq!(fit.c_eff.re, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(fit.g.re, 0.7, epsilon = 1e-12);
        assert!(fit.rms_residual < 1e-12);
        assert_eq!(fit.window, vec![64, 128, 256, 512]);
    }

    #[test]
    fn window_checks() {
        let p = Partition::first(8);
        let c = C64::new(0.0, 0.0);
        assert!(matches!(fit_log_scaling(&[(8, c); 4], &p), Err(Error::RankDeficient(_))));
        assert!(matches!(fit_log_scaling(&[(2, c), (4, c), (8, c)], &p), Err(Error::InvalidWindow(_))));
        assert!(matches!(fit_log_scaling(&[(2, c), (4, c), (7, c), (8, c)], &p), Err(Error::InvalidWindow(_))));
        assert!(matches!(fit_log_scaling(&[(2, c), (8, c), (4, c), (16, c)], &p), Err(Error::InvalidWindow(_))));
    }

    proptest! {
        #[test]
        fn recovers_complex_parameters(
            cr in -3.0f64..3.0, ci in -3.0f64..3.0, gr in -2.0f64..2.0, gi in -2.0f64..2.0,
            start in 1usize..20, len in 4usize..9,
        ) {
            let window: Vec<usize> = (0..len).map(|i| 2 * (start + 3 * i)).collect();
            let (c, g) = (C64::new(cr, ci), C64::new(gr, gi));
            let fit = fit_log_scaling(&synthetic(c, g, &window), &Partition::first(2)).unwrap();
            prop_assert!((fit.c_eff - c).norm() < 1e-9);
            prop_assert!((fit.g - g).norm() < 1e-9);
            prop_assert!(fit.rms_residual >= 0.0 && fit.rms_residual < 1e-9);
        }
    }
}
