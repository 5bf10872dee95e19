use faer::linalg::solvers::DenseSolveCore;
use faer::{Mat, MatRef, Side};

use crate::{Error, Result, C64};

/// States with `Re E < -OCCUPATION_EPS` are filled.
pub const OCCUPATION_EPS: f64 = 1e-9;

/// Above this `κ₁(R)` the right eigenvectors are treated as coalescing.
pub const MAX_EIGENVECTOR_CONDITION: f64 = 1e12;

/// Finite-N biorthogonal spectrum.
///
/// Columns of `right` are right eigenvectors, columns of `left` the matching
/// left eigenvectors, normalized so that `left† · right = 1`. Eigenvalues are
/// sorted by real part, then imaginary part.
#[derive(Clone, Debug)]
pub struct EigenSystem {
    pub energies: Vec<C64>,
    pub right: Mat<C64>,
    pub left: Mat<C64>,
    pub occupied: Vec<bool>,
}

impl EigenSystem {
    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn occupied_count(&self) -> usize {
        self.occupied.iter().filter(|&&o| o).count()
    }

    /// `max |(left† · right - 1)_{ij}|`.
    pub fn biorthonormality_error(&self) -> f64 {
        let gram = self.left.adjoint() * &self.right;
        let mut err = 0.0f64;
        for j in 0..gram.ncols() {
            for i in 0..gram.nrows() {
                let target = if i == j { 1.0 } else { 0.0 };
                err = err.max((gram[(i, j)] - target).norm());
            }
        }
        err
    }

    /// `max |H·R - R·diag(E)|` relative to `max |H|`.
    pub fn relative_residual(&self, h: MatRef<'_, C64>) -> f64 {
        let hr = h * &self.right;
        let mut res = 0.0f64;
        for j in 0..self.dim() {
            for i in 0..self.dim() {
                res = res.max((hr[(i, j)] - self.right[(i, j)] * self.energies[j]).norm());
            }
        }
        res / max_abs(h).max(f64::MIN_POSITIVE)
    }

    pub fn max_imag_energy(&self) -> f64 {
        self.energies.iter().fold(0.0, |m, e| m.max(e.im.abs()))
    }
}

/// Diagonalizes `h` and builds the biorthonormal left basis as `left† = right⁻¹`.
///
/// Exactly Hermitian input goes through the self-adjoint solver, in which case
/// `left == right`. Zero modes (`|E| ≤ OCCUPATION_EPS`) make the half-filled
/// ground state ambiguous and are reported as an error.
pub fn solve_biorthogonal(h: MatRef<'_, C64>) -> Result<EigenSystem> {
    const OP: &str = "solve_biorthogonal";
    let n = h.nrows();
    if n == 0 || h.ncols() != n {
        return Err(Error::domain(OP, format!("matrix must be square and nonempty, got {}x{}", n, h.ncols())));
    }
    for j in 0..n {
        for i in 0..n {
            let v = h[(i, j)];
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::domain(OP, format!("non-finite entry at ({i},{j})")));
            }
        }
    }

    let (energies, right, left) = if is_hermitian(h) {
        let evd = h
            .self_adjoint_eigen(Side::Lower)
            .map_err(|e| Error::Eigensolver { op: OP, reason: format!("{e:?}") })?;
        let s = evd.S().column_vector();
        let energies: Vec<C64> = (0..n).map(|i| C64::new(s[i].re, 0.0)).collect();
        let right = evd.U().to_owned();
        let left = right.clone();
        (energies, right, left)
    } else {
        let evd = if is_real(h) {
            Mat::<f64>::from_fn(n, n, |i, j| h[(i, j)].re).eigen()
        } else {
            h.eigen()
        }
        .map_err(|e| Error::Eigensolver { op: OP, reason: format!("{e:?}") })?;
        let s = evd.S().column_vector();
        let u = evd.U();

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| {
            s[a].re.total_cmp(&s[b].re).then(s[a].im.total_cmp(&s[b].im))
        });
        let energies: Vec<C64> = order.iter().map(|&k| s[k]).collect();
        let right = Mat::<C64>::from_fn(n, n, |i, j| u[(i, order[j])]);

        let inv = right.partial_piv_lu().inverse();
        let condition = norm_one(right.as_ref()) * norm_one(inv.as_ref());
        if !condition.is_finite() || condition > MAX_EIGENVECTOR_CONDITION {
            return Err(Error::SingularEigenvectors { op: OP, condition });
        }
        let left = inv.adjoint().to_owned();
        (energies, right, left)
    };

    if let Some(e) = energies.iter().find(|e| e.norm() <= OCCUPATION_EPS) {
        return Err(Error::HalfFillingAmbiguity { re: e.re, im: e.im });
    }
    let occupied = energies.iter().map(|e| e.re < -OCCUPATION_EPS).collect();

    Ok(EigenSystem { energies, right, left, occupied })
}

fn is_hermitian(h: MatRef<'_, C64>) -> bool {
    let n = h.nrows();
    (0..n).all(|j| (0..=j).all(|i| h[(i, j)] == h[(j, i)].conj()))
}

fn is_real(h: MatRef<'_, C64>) -> bool {
    let n = h.nrows();
    (0..n).all(|j| (0..n).all(|i| h[(i, j)].im == 0.0))
}

fn norm_one(m: MatRef<'_, C64>) -> f64 {
    (0..m.ncols())
        .map(|j| (0..m.nrows()).map(|i| m[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub(crate) fn max_abs(m: MatRef<'_, C64>) -> f64 {
    let mut mx = 0.0f64;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            mx = mx.max(m[(i, j)].norm());
        }
    }
    mx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{build_hamiltonian, ModelParams};

    fn solve(n: usize, t_r: f64, t_l: f64) -> (Mat<C64>, EigenSystem) {
        let h = build_hamiltonian(&ModelParams::new(n, t_r, t_l)).unwrap();
        let eig = solve_biorthogonal(h.as_ref()).unwrap();
        (h, eig)
    }

    #[test]
    fn hermitian_input_uses_identical_bases() {
        let (h, eig) = solve(30, 0.4, 0.4);
        assert_eq!(eig.left, eig.right);
        assert!(eig.max_imag_energy() == 0.0);
        assert!(eig.biorthonormality_error() < 1e-10);
        assert!(eig.relative_residual(h.as_ref()) < 1e-9);
        assert_eq!(eig.occupied_count(), 15);
    }

    #[test]
    fn non_hermitian_scattering_spectrum_is_real() {
        let (h, eig) = solve(40, 0.3, 0.5);
        assert!(eig.max_imag_energy() < 1e-9, "max |Im E| = {}", eig.max_imag_energy());
        assert!(eig.biorthonormality_error() < 1e-10);
        assert!(eig.relative_residual(h.as_ref()) < 1e-9);
        assert_eq!(eig.occupied_count(), 20);
    }

    #[test]
    fn energies_sorted_by_real_part() {
        let (_, eig) = solve(26, -0.5, 0.5);
        assert!(eig.energies.windows(2).all(|w| w[0].re <= w[1].re));
    }

    #[test]
    fn bound_states_leave_the_band() {
        // t_R t_L = 5: z = 1/sqrt(5), E = ∓(z + 1/z)
        let (_, eig) = solve(40, 2.0, 2.5);
        let outside: Vec<f64> = eig.energies.iter().filter(|e| e.re.abs() > 2.0 + 1e-9).map(|e| e.re).collect();
        assert_eq!(outside.len(), 2, "{outside:?}");
        let z = 1.0 / 5f64.sqrt();
        let e_b = z + 1.0 / z;
        assert!((outside[0] + e_b).abs() < 1e-6);
        assert!((outside[1] - e_b).abs() < 1e-6);
    }

    #[test]
    fn zero_mode_is_ambiguous() {
        // periodic ring with N ≡ 0 (mod 4) has E = -2 cos(π/2) = 0
        let h = build_hamiltonian(&ModelParams::new(8, 1.0, 1.0)).unwrap();
        assert!(matches!(solve_biorthogonal(h.as_ref()), Err(Error::HalfFillingAmbiguity { .. })));
    }

    #[test]
    fn coalescing_eigenvectors_are_rejected() {
        // Jordan block: a single eigenvector
        let mut h = Mat::<C64>::zeros(2, 2);
        h[(0, 0)] = C64::new(-1.0, 0.0);
        h[(1, 1)] = C64::new(-1.0, 0.0);
        h[(0, 1)] = C64::new(1.0, 0.0);
        assert!(matches!(solve_biorthogonal(h.as_ref()), Err(Error::SingularEigenvectors { .. })));
    }

    #[test]
    fn rejects_non_square() {
        let h = Mat::<C64>::zeros(2, 3);
        assert!(solve_biorthogonal(h.as_ref()).is_err());
    }
}
