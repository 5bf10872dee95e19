//! Numerical laboratory for a gapless tight-binding ring whose closing bond is
//! a single non-Hermitian impurity (`-t_R c†_1 c_N - t_L c†_N c_1`).
//!
//! The crate is organized bottom-up:
//!
//! * [`spectral`]: Hamiltonian, finite-N biorthogonal eigensystems,
//!   thermodynamic-limit modes and impurity bound states.
//! * [`correlation`]: the correlation matrix `C(l,m) = <G^L| c†_l c_m |G^R>`
//!   by finite-N mode sums, closed forms (sine kernel + impurity term + bound
//!   state) and the large-`l+m` asymptotic form, together with the special
//!   functions and quadrature they rely on.
//! * [`entanglement`]: subsystem blocks, their eigenvalues `ξ`, the (possibly
//!   complex) entanglement entropy and the spectral norm `‖C^A‖`.
//! * [`analysis`]: logarithmic scaling fits for the effective central charge,
//!   closed-form `c_eff` laws, duality checks and phase classification.
//! * [`acceptance`]: the end-to-end acceptance criteria, shared by the test
//!   suite and the `verify` command line entry point.

pub mod acceptance;
pub mod analysis;
pub mod correlation;
pub mod entanglement;
mod error;
pub mod spectral;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
