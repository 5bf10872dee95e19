//! Spectral data of the impurity ring.
//!
//! Sites are labelled `1..=N`; the impurity bond joins site `N` to site `1`
//! with amplitudes `-t_R c†_1 c_N` and `-t_L c†_N c_1`. Everything else is a
//! uniform Hermitian chain with hopping `-t` and on-site energy `-μ`.

mod bound;
mod eigen;
mod hamiltonian;
mod modes;
mod quadratic;

pub use bound::{bound_states, BoundState};
pub use eigen::{solve_biorthogonal, EigenSystem, MAX_EIGENVECTOR_CONDITION, OCCUPATION_EPS};
pub use hamiltonian::build_hamiltonian;
pub use modes::{thermo_modes, Mode, MODE_NORM_THRESHOLD};
pub use quadratic::{quadratic_branches, QuadraticBranch};

use crate::{Error, Result};

/// Physical parameters of the chain. All hoppings are real.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    /// Bulk hopping.
    pub t: f64,
    /// Amplitude of `c†_1 c_N` (enters the Hamiltonian as `-t_R`).
    pub t_r: f64,
    /// Amplitude of `c†_N c_1` (enters the Hamiltonian as `-t_L`).
    pub t_l: f64,
    /// Chemical potential.
    pub mu: f64,
    /// Number of sites.
    pub n: usize,
}

impl ModelParams {
    /// Half-filled chain (`μ = 0`) with unit bulk hopping.
    pub fn new(n: usize, t_r: f64, t_l: f64) -> Self {
        Self { t: 1.0, t_r, t_l, mu: 0.0, n }
    }

    pub fn with_hopping(mut self, t: f64) -> Self {
        self.t = t;
        self
    }

    pub fn with_mu(mut self, mu: f64) -> Self {
        self.mu = mu;
        self
    }

    pub fn with_size(mut self, n: usize) -> Self {
        self.n = n;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 4 {
            return Err(Error::invalid(format!("lattice size N = {} is below 4", self.n)));
        }
        if self.t == 0.0 {
            return Err(Error::invalid("bulk hopping t must be nonzero"));
        }
        for (name, v) in [("t", self.t), ("t_R", self.t_r), ("t_L", self.t_l), ("mu", self.mu)] {
            if !v.is_finite() {
                return Err(Error::invalid(format!("{name} = {v} is not finite")));
            }
        }
        Ok(())
    }

    /// The same physics in units of the bulk hopping (`t = 1`).
    pub fn normalized(&self) -> Self {
        Self {
            t: 1.0,
            t_r: self.t_r / self.t,
            t_l: self.t_l / self.t,
            mu: self.mu / self.t,
            n: self.n,
        }
    }

    /// `t_R t_L` in units of `t²`; the only impurity combination entering the
    /// thermodynamic-limit correlations.
    pub fn impurity_product(&self) -> f64 {
        self.t_r * self.t_l / (self.t * self.t)
    }

    pub fn is_hermitian(&self) -> bool {
        self.t_r == self.t_l
    }

    /// Closed-form correlations assume `k_F = π/2`.
    pub(crate) fn require_half_filling(&self, op: &'static str) -> Result<()> {
        if self.mu != 0.0 {
            return Err(Error::domain(op, format!("requires mu = 0 (k_F = pi/2), got mu = {}", self.mu)));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_divides_by_bulk_hopping() {
        let p = ModelParams::new(10, 1.0, 3.0).with_hopping(2.0).with_mu(0.5).normalized();
        assert_eq!((p.t, p.t_r, p.t_l, p.mu), (1.0, 0.5, 1.5, 0.25));
    }

    #[test]
    fn validation() {
        assert!(ModelParams::new(3, 0.1, 0.1).validate().is_err());
        assert!(ModelParams::new(4, 0.1, 0.1).with_hopping(0.0).validate().is_err());
        assert!(ModelParams::new(4, f64::NAN, 0.1).validate().is_err());
        assert!(ModelParams::new(4, 0.1, 0.1).validate().is_ok());
    }
}
