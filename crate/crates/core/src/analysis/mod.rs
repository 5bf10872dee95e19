//! Effective central charges: logarithmic scaling fits of the entanglement
//! entropy, closed-form laws for comparison, the `(t_R, t_L) ↔ (1/t_R, 1/t_L)`
//! duality and phase classification of parameter points.

mod fit;
mod formulas;

use std::fmt;

pub use fit::{fit_log_scaling, validate_window, FitResult};
pub use formulas::{c_eff_complex, c_eff_continuation, c_eff_prediction, c_eff_unitary, FormulaPrediction, FormulaSource};

use crate::correlation::{assemble_correlation, Route};
use crate::entanglement::{correlation_submatrix, entanglement, EntanglementResult, Partition, PartitionKind};
use crate::spectral::ModelParams;
use crate::{Error, Result, C64};

/// Even subsystem sizes used for fits unless overridden.
pub const DEFAULT_WINDOW: [usize; 6] = [64, 128, 256, 512, 1024, 2048];

/// Half-width of the excluded band around `t_R t_L = −1`.
pub const PHASE_GUARD: f64 = 1e-3;

/// How entropies are produced for a fit.
#[derive(Clone, Debug, PartialEq)]
pub struct FitSettings {
    pub window: Vec<usize>,
    pub route: Route,
    pub kind: PartitionKind,
    pub l0: usize,
    /// Chain length; only the numeric route diagonalizes it.
    pub n: usize,
}

impl Default for FitSettings {
    fn default() -> Self {
        Self { window: DEFAULT_WINDOW.to_vec(), route: Route::Analytic, kind: PartitionKind::I, l0: 0, n: 8194 }
    }
}

impl FitSettings {
    /// Subsystem at distance `l0` from the impurity, fitted on powers of two from
    /// 16 while shorter than `l0`, so every block stays farther from the
    /// impurity than its own length.
    pub fn bulk(l0: usize) -> Self {
        let window = std::iter::successors(Some(16usize), |l| Some(l * 2)).take_while(|&l| l < l0).collect();
        Self { window, kind: PartitionKind::II, l0, ..Self::default() }
    }

    pub fn with_window(mut self, window: Vec<usize>) -> Self {
        self.window = window;
        self
    }

    pub fn with_route(mut self, route: Route) -> Self {
        self.route = route;
        self
    }

    pub fn partition(&self, la: usize) -> Partition {
        Partition::new(self.kind, la, self.l0)
    }

    pub fn largest(&self) -> usize {
        self.window.iter().copied().max().unwrap_or(0)
    }
}

/// Entanglement for every size in the window, from one correlation block of
/// the largest size.
pub fn entropy_curve(params: &ModelParams, settings: &FitSettings) -> Result<Vec<EntanglementResult>> {
    validate_window(&settings.window)?;
    let params = params.with_size(settings.n);
    let full = assemble_correlation(&params, &settings.partition(settings.largest()), settings.route)?;
    settings
        .window
        .iter()
        .map(|&la| {
            let part = settings.partition(la);
            let block = correlation_submatrix(&full, &part)?;
            entanglement(&block, &part)
        })
        .collect()
}

/// Fits a curve produced by [`entropy_curve`].
pub fn fit_curve(curve: &[EntanglementResult]) -> Result<FitResult> {
    let points: Vec<(usize, C64)> = curve.iter().map(|e| (e.partition.la, e.entropy)).collect();
    let partition = curve.last().map(|e| e.partition).ok_or_else(|| Error::InvalidWindow("empty curve".into()))?;
    fit_log_scaling(&points, &partition)
}

pub fn fit_point(params: &ModelParams, settings: &FitSettings) -> Result<FitResult> {
    fit_curve(&entropy_curve(params, settings)?)
}

#[derive(Clone, Debug)]
pub struct DualityReport {
    pub original: (f64, f64),
    pub dual: (f64, f64),
    pub fit: FitResult,
    pub dual_fit: FitResult,
    /// `|c_eff − c_eff'|`.
    pub delta_c_eff: f64,
    /// `|g − g'|`.
    pub delta_g: f64,
}

/// Fits `(t_R, t_L)` and `(1/t_R, 1/t_L)` with the same settings.
pub fn duality_check(t_r: f64, t_l: f64, settings: &FitSettings) -> Result<DualityReport> {
    if t_r == 0.0 || t_l == 0.0 {
        return Err(Error::domain("duality_check", "impurity hoppings must be nonzero"));
    }
    let fit = fit_point(&ModelParams::new(settings.n, t_r, t_l), settings)?;
    let dual_fit = fit_point(&ModelParams::new(settings.n, 1.0 / t_r, 1.0 / t_l), settings)?;
    Ok(DualityReport {
        original: (t_r, t_l),
        dual: (1.0 / t_r, 1.0 / t_l),
        delta_c_eff: (fit.c_eff - dual_fit.c_eff).norm(),
        delta_g: (fit.g - dual_fit.g).norm(),
        fit,
        dual_fit,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Phase {
    Q1Real,
    Q2Complex,
    Boundary,
    Excluded,
    /// Sign of `t_R t_L` and the entanglement diagnostics disagree.
    Indeterminate,
}

impl Phase {
    pub fn as_str(self) -> &'static str {
        match self {
            Phase::Q1Real => "Q1-real",
            Phase::Q2Complex => "Q2-complex",
            Phase::Boundary => "boundary",
            Phase::Excluded => "excluded",
            Phase::Indeterminate => "indeterminate",
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug)]
pub struct PhasePoint {
    pub t_r: f64,
    pub t_l: f64,
    pub c_eff_fit: Option<C64>,
    pub c_eff_formula: Option<C64>,
    pub norm: f64,
    pub phase: Phase,
}

pub fn is_excluded(t_r: f64, t_l: f64) -> bool {
    (t_r * t_l + 1.0).abs() < PHASE_GUARD
}

/// Phase from the sign of `t_R t_L` confirmed by the entanglement diagnostics.
pub fn classify_phase(t_r: f64, t_l: f64, ee: &EntanglementResult) -> PhasePoint {
    let tau = t_r * t_l;
    let phase = if is_excluded(t_r, t_l) {
        Phase::Excluded
    } else if tau == 0.0 {
        Phase::Boundary
    } else if tau > 0.0 && ee.entropy.im.abs() <= 1e-6 {
        Phase::Q1Real
    } else if tau < 0.0 && ee.norm > 1.0 + 1e-6 {
        Phase::Q2Complex
    } else {
        Phase::Indeterminate
    };
    PhasePoint {
        t_r,
        t_l,
        c_eff_fit: None,
        c_eff_formula: c_eff_prediction(t_r, t_l).map(|p| p.c_eff),
        norm: ee.norm,
        phase,
    }
}

/// Full pipeline for one grid point: entropies, fit, classification.
///
/// Points inside the guard band are returned as `Excluded` without evaluation.
pub fn phase_point(t_r: f64, t_l: f64, base: &ModelParams, settings: &FitSettings) -> Result<PhasePoint> {
    if is_excluded(t_r, t_l) {
        return Ok(PhasePoint {
            t_r,
            t_l,
            c_eff_fit: None,
            c_eff_formula: None,
            norm: f64::NAN,
            phase: Phase::Excluded,
        });
    }
    let params = ModelParams { t_r, t_l, ..*base };
    let curve = entropy_curve(&params, settings)?;
    let fit = fit_curve(&curve)?;
    let largest = curve.last().expect("validated window is nonempty");
    let mut point = classify_phase(t_r, t_l, largest);
    point.c_eff_fit = Some(fit.c_eff);
    Ok(point)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> FitSettings {
        FitSettings::default().with_window(vec![16, 32, 64, 128])
    }

    #[test]
    fn bulk_window() {
        assert_eq!(FitSettings::bulk(500).window, vec![16, 32, 64, 128, 256]);
        assert_eq!(FitSettings::bulk(500).partition(16), Partition::second(500, 16));
    }

    #[test]
    fn iso_product_lines_share_fits() {
        let s = quick();
        let base = fit_point(&ModelParams::new(s.n, 0.6, 0.5), &s).unwrap();
        for scale in [0.25, 2.0, 7.0] {
            let other = fit_point(&ModelParams::new(s.n, 0.6 * scale, 0.5 / scale), &s).unwrap();
            assert!((other.c_eff - base.c_eff).norm() <= 0.02);
        }
    }

    #[test]
    fn self_dual_point() {
        let r = duality_check(1.0, 1.0, &quick()).unwrap();
        assert_eq!(r.delta_c_eff, 0.0);
        assert_eq!(r.delta_g, 0.0);
        assert!(duality_check(0.0, 1.0, &quick()).is_err());
    }

    #[test]
    fn classification() {
        let s = FitSettings::default().with_window(vec![16, 32, 64, 100]);
        let n = ModelParams::new(s.n, 0.0, 0.0);
        assert_eq!(phase_point(0.5, 0.5, &n, &s).unwrap().phase, Phase::Q1Real);
        let q2 = phase_point(-0.5, 0.5, &n, &s).unwrap();
        assert_eq!(q2.phase, Phase::Q2Complex);
        assert!(q2.c_eff_fit.unwrap().im.abs() > 0.1);
        assert_eq!(phase_point(0.0, 0.7, &n, &s).unwrap().phase, Phase::Boundary);
        assert_eq!(phase_point(-2.0, 0.5, &n, &s).unwrap().phase, Phase::Excluded);
        assert!(phase_point(-2.0, 0.5 + 1e-2, &n, &s).unwrap().phase != Phase::Excluded);
        // the periodic point is regular
        assert_eq!(phase_point(1.0, 1.0, &n, &s).unwrap().phase, Phase::Q1Real);
    }
}
