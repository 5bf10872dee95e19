use std::f64::consts::PI;

use super::{quadratic_branches, ModelParams};
use crate::{Error, Result, C64};

/// Modes with `|N_LR|` below this are flagged unusable.
pub const MODE_NORM_THRESHOLD: f64 = 1e-10;

/// One thermodynamic-limit scattering mode on branch `y` of the boundary
/// quadratic, with `z = e^{ik}` and `z^N` replaced by `y`.
///
/// `psi_r` and `psi_l` are normalized so that `Σ_n conj(psi_l[n]) psi_r[n] = 1`.
/// Every momentum carries two branches; sums over modes take weight 1/2 each.
#[derive(Clone, Debug)]
pub struct Mode {
    pub k: f64,
    pub z: C64,
    /// Root of the boundary quadratic standing in for `z^N`.
    pub y: C64,
    /// 0 for the larger-modulus root, 1 for the other.
    pub branch: usize,
    pub energy: f64,
    pub psi_r: Vec<C64>,
    pub psi_l: Vec<C64>,
    pub norm_lr: C64,
    pub usable: bool,
}

/// Enumerates `k = 2πn/N` on `[−π, π)` and both quadratic branches per momentum.
pub fn thermo_modes(params: &ModelParams) -> Result<Vec<Mode>> {
    const OP: &str = "thermo_modes";
    params.validate()?;
    params.require_half_filling(OP)?;
    if !params.n.is_multiple_of(2) {
        return Err(Error::domain(OP, format!("N = {} must be even", params.n)));
    }
    let p = params.normalized();
    let n = p.n;
    let half = (n / 2) as i64;
    let tau = p.t_r * p.t_l;

    let mut modes = Vec::with_capacity(2 * n);
    for j in -half..half {
        let k = 2.0 * PI * j as f64 / n as f64;
        let z = C64::from_polar(1.0, k);
        let energy = -2.0 * k.cos();
        let roots: Vec<(C64, bool)> = match quadratic_branches(z, &p) {
            Ok(q) if q.degenerate => vec![(q.y1.unwrap_or(C64::new(1.0, 0.0)), false)],
            Ok(q) => q.roots().map(|y| (y, true)).collect(),
            // a = b = 0 only at k ∈ {0, −π} with t_R t_L = 1, where the modes vanish
            Err(Error::DegenerateQuadratic) => vec![(C64::new(1.0, 0.0), false); 2],
            Err(e) => return Err(e),
        };
        for (branch, (y, regular)) in roots.into_iter().enumerate() {
            let norm_lr = 1.0 + tau - 0.5 * (p.t_r + p.t_l) * (y + 1.0 / y);
            let (psi_r, psi_l_conj) = raw_vectors(z, y, p.t_r, p.t_l, n);
            let overlap: C64 = psi_l_conj.iter().zip(&psi_r).map(|(a, b)| a * b).sum();
            let usable = regular
                && norm_lr.norm() >= MODE_NORM_THRESHOLD
                && (overlap - norm_lr).norm() <= 1e-8 * norm_lr.norm().max(1.0);
            let root = norm_lr.sqrt();
            let (psi_r, psi_l) = if norm_lr.norm() > 0.0 {
                (
                    psi_r.iter().map(|v| v / root).collect(),
                    psi_l_conj.iter().map(|v| (v / root).conj()).collect(),
                )
            } else {
                (psi_r, psi_l_conj.iter().map(|v| v.conj()).collect())
            };
            modes.push(Mode { k, z, y, branch, energy: energy - p.mu, psi_r, psi_l, norm_lr, usable });
        }
    }
    Ok(modes)
}

/// Right vector and the complex conjugate of the left vector, unnormalized.
///
/// Both carry the prefactor `1/(i√(2N))`, which makes
/// `Σ_n conj(ψ^L(n)) ψ^R(n) = N_LR` exactly when `y` solves the boundary quadratic.
fn raw_vectors(z: C64, y: C64, t_r: f64, t_l: f64, n: usize) -> (Vec<C64>, Vec<C64>) {
    let pref = 1.0 / (C64::new(0.0, 1.0) * (2.0 * n as f64).sqrt());
    let inv_y = 1.0 / y;
    let (r1, r2) = (1.0 - inv_y * t_r, -(1.0 - y * t_r));
    let (l1, l2) = (1.0 - inv_y * t_l, -(1.0 - y * t_l));
    let inv_z = 1.0 / z;
    let mut zp = C64::new(1.0, 0.0);
    let mut zm = C64::new(1.0, 0.0);
    let mut right = Vec::with_capacity(n);
    let mut left = Vec::with_capacity(n);
    for _ in 0..n {
        zp *= z;
        zm *= inv_z;
        right.push(pref * (r1 * zp + r2 * zm));
        left.push(pref * (l1 * zp + l2 * zm));
    }
    (right, left)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_branches_per_momentum() {
        let modes = thermo_modes(&ModelParams::new(20, 0.3, 0.5)).unwrap();
        assert_eq!(modes.len(), 40);
        assert!(modes.iter().all(|m| (-PI..PI).contains(&m.k) && (m.z.norm() - 1.0).abs() < 1e-15));
    }

    #[test]
    fn dispersion() {
        let modes = thermo_modes(&ModelParams::new(8, 0.3, 0.5)).unwrap();
        for m in &modes {
            assert!((m.energy + 2.0 * m.k.cos()).abs() < 1e-15);
        }
        let at = |k: f64| modes.iter().find(|m| (m.k - k).abs() < 1e-12).unwrap().energy;
        assert!(at(PI / 2.0).abs() < 1e-15);
        assert!(at(-PI / 2.0).abs() < 1e-15);
        assert_eq!(at(0.0), -2.0);
    }

    #[test]
    fn usable_modes_are_biorthonormal() {
        let modes = thermo_modes(&ModelParams::new(60, -0.4, 0.7)).unwrap();
        let usable: Vec<_> = modes.iter().filter(|m| m.usable).collect();
        assert!(usable.len() > 100);
        for m in usable {
            let s: C64 = m.psi_l.iter().zip(&m.psi_r).map(|(l, r)| l.conj() * r).sum();
            assert!((s - 1.0).norm() < 1e-10, "k = {} overlap {s}", m.k);
        }
    }

    #[test]
    fn zero_momentum_vectors_vanish() {
        let modes = thermo_modes(&ModelParams::new(16, 0.3, 0.5)).unwrap();
        for m in modes.iter().filter(|m| m.k == 0.0 || m.k == -PI) {
            assert!(!m.usable);
        }
    }

    #[test]
    fn periodic_normalization_vanishes_at_unit_branch() {
        // y = 1 solves the quadratic for every z when t_R = t_L = 1, so N_LR = 2 − 2 cos(0) = 0
        let modes = thermo_modes(&ModelParams::new(12, 1.0, 1.0)).unwrap();
        for m in &modes {
            assert!((m.y - 1.0).norm() < 1e-7);
            assert!(m.norm_lr.norm() < 1e-12);
            assert!(!m.usable);
        }
    }

    #[test]
    fn rejects_odd_size_and_finite_mu() {
        assert!(thermo_modes(&ModelParams::new(11, 0.3, 0.5)).is_err());
        assert!(thermo_modes(&ModelParams::new(12, 0.3, 0.5).with_mu(0.1)).is_err());
    }
}
