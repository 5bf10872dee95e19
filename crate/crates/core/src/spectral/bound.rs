use super::{ModelParams, OCCUPATION_EPS};
use crate::{Result, C64};

/// Impurity-localized eigenstate, present when `|t_R t_L| > 1`.
///
/// `psi_r(n) = z t_L z^n + z^{N−n+1}` and `psi_l(n) = z̄ t_R z̄^n + z̄^{N−n+1}`
/// for `n = 1..=N`, unnormalized; their overlap tends to `norm_b = 2z²/(1−z²)`.
#[derive(Clone, Debug)]
pub struct BoundState {
    pub z: C64,
    pub energy: C64,
    pub psi_r: Vec<C64>,
    pub psi_l: Vec<C64>,
    pub norm_b: C64,
    pub occupied: bool,
    /// Purely imaginary `z` from `t_R t_L < −1`; never counted as occupied.
    pub nonstandard: bool,
}

pub fn bound_states(params: &ModelParams) -> Result<Vec<BoundState>> {
    params.validate()?;
    let p = params.normalized();
    let tau = p.t_r * p.t_l;
    if tau.abs() <= 1.0 {
        return Ok(Vec::new());
    }
    let nonstandard = tau < 0.0;
    let r = 1.0 / tau.abs().sqrt();
    let roots = if nonstandard {
        [C64::new(0.0, r), C64::new(0.0, -r)]
    } else {
        [C64::new(r, 0.0), C64::new(-r, 0.0)]
    };

    let states = roots
        .into_iter()
        .map(|z| {
            // back in units of the bulk hopping
            let energy = params.t * (-(z + 1.0 / z) - p.mu);
            let psi_r = profile(z, p.t_l, p.n);
            let psi_l = profile(z.conj(), p.t_r, p.n);
            let z2 = z * z;
            BoundState {
                z,
                energy,
                psi_r,
                psi_l,
                norm_b: 2.0 * z2 / (1.0 - z2),
                occupied: !nonstandard && energy.re < -OCCUPATION_EPS,
                nonstandard,
            }
        })
        .collect();
    Ok(states)
}

fn profile(z: C64, lead: f64, n: usize) -> Vec<C64> {
    (1..=n)
        .map(|site| z * lead * z.powu(site as u32) + z.powu((n - site + 1) as u32))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{build_hamiltonian, solve_biorthogonal};

    #[test]
    fn absent_inside_unit_product() {
        assert!(bound_states(&ModelParams::new(50, 1.0, 0.5)).unwrap().is_empty());
        assert!(bound_states(&ModelParams::new(50, -1.0, 1.0)).unwrap().is_empty());
    }

    #[test]
    fn symmetric_pair_energies() {
        let states = bound_states(&ModelParams::new(50, 2.0, 2.0)).unwrap();
        assert_eq!(states.len(), 2);
        let occupied: Vec<_> = states.iter().filter(|s| s.occupied).collect();
        assert_eq!(occupied.len(), 1);
        assert!((occupied[0].z - 0.5).norm() < 1e-15);
        assert!((occupied[0].energy + 2.5).norm() < 1e-14);
        let empty = states.iter().find(|s| !s.occupied).unwrap();
        assert!((empty.energy - 2.5).norm() < 1e-14);
    }

    #[test]
    fn overlap_tends_to_norm_b() {
        let states = bound_states(&ModelParams::new(400, 3.0, 0.5)).unwrap();
        for s in states {
            let ov: C64 = s.psi_l.iter().zip(&s.psi_r).map(|(l, r)| l.conj() * r).sum();
            assert!((ov - s.norm_b).norm() < 1e-10, "{ov} vs {}", s.norm_b);
        }
    }

    #[test]
    fn negative_product_gives_imaginary_pair() {
        let states = bound_states(&ModelParams::new(30, -2.0, 1.0)).unwrap();
        assert_eq!(states.len(), 2);
        for s in &states {
            assert!(s.nonstandard && !s.occupied);
            assert_eq!(s.z.re, 0.0);
            assert!(s.z.norm() < 1.0);
        }
    }

    #[test]
    fn matches_finite_chain_eigenvector() {
        let params = ModelParams::new(200, 2.0, 2.0);
        let state = bound_states(&params).unwrap().into_iter().find(|s| s.occupied).unwrap();
        let h = build_hamiltonian(&params).unwrap();
        let eig = solve_biorthogonal(h.as_ref()).unwrap();
        // the lowest level is the occupied bound state
        assert!((eig.energies[0].re + 2.5).abs() < 1e-6);
        let col = eig.right.col(0);
        let mut dot = C64::new(0.0, 0.0);
        let (mut na, mut nb) = (0.0, 0.0);
        for i in 0..params.n {
            dot += col[i].conj() * state.psi_r[i];
            na += col[i].norm_sqr();
            nb += state.psi_r[i].norm_sqr();
        }
        let overlap = dot.norm() / (na * nb).sqrt();
        assert!(overlap >= 0.999, "overlap {overlap}");
    }
}
