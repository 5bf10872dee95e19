use crate::{Error, Result, C64};

/// Tolerances for the adaptive Gauss–Kronrod integrator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { abs_tol: 1e-10, rel_tol: 1e-10, max_subdivisions: 2000 }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::invalid("quadrature tolerances must be positive"));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::invalid("max_subdivisions must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Integral {
    pub value: C64,
    pub error: f64,
    pub subdivisions: usize,
}

// 15-point Kronrod abscissae (positive half, descending, centre last) and weights,
// with the embedded 7-point Gauss weights on the odd-indexed nodes.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

fn gauss_kronrod<F: Fn(f64) -> C64>(f: &F, a: f64, b: f64) -> (C64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, (&x, &wk)) in XGK.iter().zip(&WGK).take(7).enumerate() {
        let pair = f(center - half * x) + f(center + half * x);
        kronrod += pair * wk;
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).norm())
}

struct Segment {
    a: f64,
    b: f64,
    value: C64,
    error: f64,
}

/// Globally adaptive integration: the segment with the largest error estimate
/// is bisected until the summed estimate meets `max(abs_tol, rel_tol·|I|)`.
pub fn integrate<F: Fn(f64) -> C64>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<Integral> {
    cfg.validate()?;
    let (value, error) = gauss_kronrod(&f, a, b);
    let mut segments = vec![Segment { a, b, value, error }];
    let mut subdivisions = 0;
    loop {
        let total: C64 = segments.iter().map(|s| s.value).sum();
        let err: f64 = segments.iter().map(|s| s.error).sum();
        if err <= cfg.abs_tol.max(cfg.rel_tol * total.norm()) {
            return Ok(Integral { value: total, error: err, subdivisions });
        }
        if subdivisions >= cfg.max_subdivisions {
            return Err(Error::QuadratureNonConvergence { estimate: err, subdivisions });
        }
        let worst = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .expect("at least one segment");
        let seg = segments.swap_remove(worst);
        let mid = 0.5 * (seg.a + seg.b);
        if mid <= seg.a || mid >= seg.b {
            return Err(Error::QuadratureNonConvergence { estimate: err, subdivisions });
        }
        for (lo, hi) in [(seg.a, mid), (mid, seg.b)] {
            let (value, error) = gauss_kronrod(&f, lo, hi);
            segments.push(Segment { a: lo, b: hi, value, error });
        }
        subdivisions += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn weights_integrate_constants() {
        let kronrod: f64 = 2.0 * WGK[..7].iter().sum::<f64>() + WGK[7];
        let gauss: f64 = 2.0 * WG[..3].iter().sum::<f64>() + WG[3];
        assert!((kronrod - 2.0).abs() < 1e-15);
        assert!((gauss - 2.0).abs() < 1e-15);
    }

    #[test]
    fn polynomial_exact_on_one_panel() {
        // Kronrod-15 is exact through degree 22
        let (v, _) = gauss_kronrod(&|x: f64| C64::new(x.powi(10), x.powi(3)), -1.0, 2.0);
        assert!((v.re - (2f64.powi(11) + 1.0) / 11.0).abs() < 1e-12);
        assert!((v.im - (16.0 - 1.0) / 4.0).abs() < 1e-12);
    }

    #[test]
    fn oscillatory_integrand() {
        let cfg = QuadratureConfig::default();
        let n = 301.0;
        let r = integrate(|k| C64::from_polar(1.0, n * k), -PI / 2.0, PI / 2.0, &cfg).unwrap();
        let want = 2.0 * (n * PI / 2.0).sin() / n;
        assert!((r.value - want).norm() < 1e-10, "{} vs {want}", r.value);
    }

    #[test]
    fn peaked_integrand() {
        // ∫ dx / (x² + ε²) over [−1, 1]
        let eps = 1e-3;
        let r = integrate(|x| C64::new(1.0 / (x * x + eps * eps), 0.0), -1.0, 1.0, &QuadratureConfig::default()).unwrap();
        let want = 2.0 * (1.0 / eps).atan() / eps;
        assert!((r.value.re - want).abs() <= 1e-10 * want);
    }

    #[test]
    fn reports_non_convergence() {
        let cfg = QuadratureConfig { max_subdivisions: 3, ..Default::default() };
        let res = integrate(|x: f64| C64::new((1.0 / x.abs().max(1e-300)).sqrt(), 0.0), -1.0, 1.0, &cfg);
        assert!(matches!(res, Err(Error::QuadratureNonConvergence { subdivisions: 3, .. })));
    }
}
