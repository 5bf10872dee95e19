//! Subsystem blocks of the correlation matrix and the biorthogonal
//! entanglement entropy `S_A = −Σ [ξ ln ξ + (1−ξ) ln(1−ξ)]`.
//!
//! The eigenvalues `ξ` of a non-Hermitian (or Hermitian but non-positive)
//! block may leave `[0, 1]`; they are never clamped, and the logarithm is the
//! principal branch, so `S_A` picks up an imaginary part exactly in that case.

use std::fmt;
use std::str::FromStr;

use faer::{Mat, MatRef, Side};

use crate::correlation::CorrelationMatrix;
use crate::{Error, Result, C64};

/// Tag recorded with every entropy.
pub const BRANCH_CONVENTION: &str = "principal-log, Im in (-pi, pi]";

/// `ξ` closer than this to 0 or 1 contributes nothing to the entropy.
pub const XI_DEGENERACY_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PartitionKind {
    /// Subsystem starts at the impurity bond: sites `1..=L_A`.
    I,
    /// Subsystem starts `L_0` sites away: sites `L_0+1..=L_0+L_A`.
    II,
}

impl fmt::Display for PartitionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PartitionKind::I => "I",
            PartitionKind::II => "II",
        })
    }
}

impl FromStr for PartitionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "I" | "i" | "1" => Ok(PartitionKind::I),
            "II" | "ii" | "2" => Ok(PartitionKind::II),
            other => Err(Error::invalid(format!("unknown partition '{other}' (expected I or II)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    pub kind: PartitionKind,
    pub la: usize,
    pub l0: usize,
}

impl Partition {
    pub fn first(la: usize) -> Self {
        Self { kind: PartitionKind::I, la, l0: 0 }
    }

    pub fn second(l0: usize, la: usize) -> Self {
        Self { kind: PartitionKind::II, la, l0 }
    }

    pub fn new(kind: PartitionKind, la: usize, l0: usize) -> Self {
        match kind {
            PartitionKind::I => Self::first(la),
            PartitionKind::II => Self::second(l0, la),
        }
    }

    /// Same cut, different subsystem size.
    pub fn with_size(self, la: usize) -> Self {
        Self { la, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.la == 0 {
            return Err(Error::invalid("subsystem size L_A must be positive"));
        }
        if self.kind == PartitionKind::I && self.l0 != 0 {
            return Err(Error::invalid("Partition-I has no impurity distance"));
        }
        Ok(())
    }

    pub fn first_site(&self) -> usize {
        self.l0 + 1
    }

    pub fn last_site(&self) -> usize {
        self.l0 + self.la
    }
}

/// Principal block of `c` on the partition's sites.
pub fn correlation_submatrix(c: &CorrelationMatrix, partition: &Partition) -> Result<CorrelationMatrix> {
    partition.validate()?;
    let (first, last) = (partition.first_site(), partition.last_site());
    if first < c.offset || last > c.last_site() {
        return Err(Error::PartitionOutOfRange { first, last, lo: c.offset, hi: c.last_site() });
    }
    let start = first - c.offset;
    let entries = c.entries.as_ref().submatrix(start, start, partition.la, partition.la).to_owned();
    Ok(CorrelationMatrix { entries, offset: first, provenance: c.provenance, hermitian: c.hermitian })
}

fn real_part_if_real(m: MatRef<'_, C64>) -> Option<Mat<f64>> {
    let n = m.nrows();
    for j in 0..m.ncols() {
        for i in 0..n {
            if m[(i, j)].im != 0.0 {
                return None;
            }
        }
    }
    Some(Mat::from_fn(n, m.ncols(), |i, j| m[(i, j)].re))
}

fn largest_singular_ratio(m: MatRef<'_, C64>) -> String {
    match m.singular_values() {
        Ok(s) if !s.is_empty() => format!("condition estimate {:.3e}", s[0] / s[s.len() - 1]),
        _ => "condition estimate unavailable".to_string(),
    }
}

/// Eigenvalues `ξ` of a square block, sorted by real part then imaginary part.
pub fn xi_spectrum(block: &CorrelationMatrix) -> Result<Vec<C64>> {
    const OP: &str = "xi_spectrum";
    let m = block.entries.as_ref();
    if m.nrows() != m.ncols() {
        return Err(Error::domain(OP, "block must be square"));
    }
    let fail = |e: &dyn fmt::Debug| Error::Eigensolver { op: OP, reason: format!("{e:?}; {}", largest_singular_ratio(m)) };

    let mut xi: Vec<C64> = if block.hermitian {
        let values = match real_part_if_real(m) {
            Some(real) => real.self_adjoint_eigenvalues(Side::Lower).map_err(|e| fail(&e))?,
            None => m.self_adjoint_eigenvalues(Side::Lower).map_err(|e| fail(&e))?,
        };
        values.into_iter().map(|x| C64::new(x, 0.0)).collect()
    } else {
        match real_part_if_real(m) {
            Some(real) => real.eigenvalues().map_err(|e| fail(&e))?,
            None => m.eigenvalues().map_err(|e| fail(&e))?,
        }
    };
    xi.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(xi)
}

/// Principal logarithm with `Im ∈ (−π, π]`; a signed zero imaginary part never
/// selects the lower side of the cut.
fn principal_ln(z: C64) -> C64 {
    if z.im == 0.0 {
        C64::new(z.re, 0.0).ln()
    } else {
        z.ln()
    }
}

pub fn entropy_from_xi(xi: &[C64]) -> C64 {
    let one = C64::new(1.0, 0.0);
    xi.iter()
        .filter(|x| x.norm() > XI_DEGENERACY_TOL && (one - *x).norm() > XI_DEGENERACY_TOL)
        .map(|&x| -(x * principal_ln(x) + (one - x) * principal_ln(one - x)))
        .sum()
}

/// Largest singular value of the block.
pub fn spectral_norm(block: &CorrelationMatrix) -> Result<f64> {
    let m = block.entries.as_ref();
    if block.hermitian {
        let xi = xi_spectrum(block)?;
        return Ok(xi.iter().fold(0.0f64, |acc, x| acc.max(x.norm())));
    }
    let s = match real_part_if_real(m) {
        Some(real) => real.singular_values(),
        None => m.singular_values(),
    }
    .map_err(|e| Error::Eigensolver { op: "spectral_norm", reason: format!("{e:?}") })?;
    Ok(s.first().copied().unwrap_or(0.0))
}

#[derive(Clone, Debug)]
pub struct EntanglementResult {
    pub xi: Vec<C64>,
    pub entropy: C64,
    pub norm: f64,
    pub partition: Partition,
    pub branch: &'static str,
}

impl EntanglementResult {
    /// Count of `ξ` outside `[0, 1]` by more than `tol`, or off the real axis.
    pub fn out_of_range(&self, tol: f64) -> usize {
        self.xi.iter().filter(|x| x.re < -tol || x.re > 1.0 + tol || x.im.abs() > tol).count()
    }

    pub fn xi_min_re(&self) -> f64 {
        self.xi.iter().map(|x| x.re).fold(f64::INFINITY, f64::min)
    }

    pub fn xi_max_re(&self) -> f64 {
        self.xi.iter().map(|x| x.re).fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Restricts `c` to the partition and evaluates `ξ`, `S_A` and `‖C^A‖`.
pub fn entanglement(c: &CorrelationMatrix, partition: &Partition) -> Result<EntanglementResult> {
    let block = correlation_submatrix(c, partition)?;
    let xi = xi_spectrum(&block)?;
    let norm = if block.hermitian { xi.iter().fold(0.0f64, |acc, x| acc.max(x.norm())) } else { spectral_norm(&block)? };
    Ok(EntanglementResult { entropy: entropy_from_xi(&xi), xi, norm, partition: *partition, branch: BRANCH_CONVENTION })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlation::{assemble_correlation, sine_kernel, Route};
    use crate::spectral::ModelParams;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::{LN_2, PI};

    fn block(rows: &[&[f64]], hermitian: bool) -> CorrelationMatrix {
        let n = rows.len();
        CorrelationMatrix {
            entries: Mat::from_fn(n, n, |i, j| C64::new(rows[i][j], 0.0)),
            offset: 1,
            provenance: Route::Analytic,
            hermitian,
        }
    }

    fn real(xs: &[f64]) -> Vec<C64> {
        xs.iter().map(|&x| C64::new(x, 0.0)).collect()
    }

    #[test]
    fn partition_sites() {
        let p = Partition::second(500, 8);
        assert_eq!((p.first_site(), p.last_site()), (501, 508));
        assert_eq!((Partition::first(4).first_site(), Partition::first(4).last_site()), (1, 4));
        assert!(Partition::first(0).validate().is_err());
        assert_eq!("II".parse::<PartitionKind>().unwrap(), PartitionKind::II);
    }

    #[test]
    fn submatrix_indices() {
        let c = assemble_correlation(&ModelParams::new(3000, 0.3, 0.5), &Partition::second(498, 10), Route::Analytic).unwrap();
        let sub = correlation_submatrix(&c, &Partition::second(500, 3)).unwrap();
        assert_eq!(sub.offset, 501);
        assert_eq!(sub.at(502, 503), c.at(502, 503));
        assert!(sub.hermitian);
        assert!(correlation_submatrix(&c, &Partition::second(497, 3)).is_err());
        assert!(correlation_submatrix(&c, &Partition::second(500, 9)).is_err());

        let single = correlation_submatrix(&c, &Partition::second(498, 1)).unwrap();
        assert_eq!(single.size(), 1);
        assert_eq!(single.at(499, 499), c.at(499, 499));
    }

    #[test]
    fn sine_kernel_pair() {
        let s = sine_kernel(1);
        let xi = xi_spectrum(&block(&[&[0.5, s], &[s, 0.5]], true)).unwrap();
        assert_abs_diff_eq!(xi[0].re, 0.5 - 1.0 / PI, epsilon = 1e-14);
        assert_abs_diff_eq!(xi[1].re, 0.5 + 1.0 / PI, epsilon = 1e-14);
        let general = xi_spectrum(&block(&[&[0.5, s], &[s, 0.5]], false)).unwrap();
        for (a, b) in xi.iter().zip(&general) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn entropy_examples() {
        assert_abs_diff_eq!(entropy_from_xi(&real(&[0.5])).re, LN_2, epsilon = 1e-15);
        assert_eq!(entropy_from_xi(&real(&[0.0, 1.0, 1.0, 0.0])), C64::new(0.0, 0.0));
        let s = entropy_from_xi(&real(&[1.25]));
        assert_abs_diff_eq!(s.re, -1.25 * 1.25f64.ln() + 0.25 * 0.25f64.ln(), epsilon = 1e-14);
        assert_abs_diff_eq!(s.im, 0.25 * PI, epsilon = 1e-14);
        assert_abs_diff_eq!(s.re, -0.6255, epsilon = 1e-4);
    }

    #[test]
    fn signed_zero_stays_on_principal_branch() {
        let s = entropy_from_xi(&[C64::new(-0.25, -0.0)]);
        assert!(s.im > 0.0);
    }

    #[test]
    fn norm_of_projector_block() {
        let b = block(&[&[1.0, 0.0], &[0.0, 0.0]], true);
        assert_eq!(spectral_norm(&b).unwrap(), 1.0);
        let nh = block(&[&[0.0, 2.0], &[0.0, 0.0]], false);
        assert_abs_diff_eq!(spectral_norm(&nh).unwrap(), 2.0, epsilon = 1e-14);
    }

    #[test]
    fn first_quadrant_spectrum_is_bounded() {
        let p = ModelParams::new(1000, 0.5, 0.5);
        let c = assemble_correlation(&p, &Partition::first(100), Route::Analytic).unwrap();
        let ee = entanglement(&c, &Partition::first(100)).unwrap();
        assert_eq!(ee.out_of_range(1e-9), 0);
        assert!((ee.norm - 1.0).abs() <= 1e-6);
        assert!(ee.entropy.im.abs() <= 1e-8);
    }

    #[test]
    fn second_quadrant_spectrum_leaves_unit_interval() {
        let p = ModelParams::new(1000, -0.5, 0.5);
        let c = assemble_correlation(&p, &Partition::first(100), Route::Analytic).unwrap();
        let ee = entanglement(&c, &Partition::first(100)).unwrap();
        assert!(ee.xi_min_re() < 0.0 || ee.xi_max_re() > 1.0);
        assert!(ee.norm > 1.0);
        assert!(ee.entropy.im.abs() > 1e-3);
    }

    #[test]
    fn norm_grows_toward_divergence() {
        let norm = |t_r: f64| {
            let c = assemble_correlation(&ModelParams::new(1000, t_r, 0.5), &Partition::first(100), Route::Analytic).unwrap();
            entanglement(&c, &Partition::first(100)).unwrap().norm
        };
        assert!(norm(-1.6) > norm(-0.4));
    }

    proptest! {
        #[test]
        fn unit_interval_gives_real_entropy(xs in proptest::collection::vec(0.0f64..=1.0, 1..20)) {
            let s = entropy_from_xi(&real(&xs));
            prop_assert_eq!(s.im, 0.0);
            prop_assert!(s.re >= -1e-15);
        }

        #[test]
        fn out_of_range_gives_complex_entropy(x in prop_oneof![-3.0f64..-1e-3, 1.001f64..4.0]) {
            let s = entropy_from_xi(&real(&[0.3, x]));
            prop_assert!(s.im > 0.0);
        }
    }
}
