use faer::Mat;

use super::ModelParams;
use crate::{Result, C64};

/// Dense single-particle Hamiltonian `H` with `Ĥ = Σ c†_n H_{nm} c_m`.
///
/// Rows and columns are zero-based (`H[(0, N-1)]` is the `c†_1 c_N` entry).
pub fn build_hamiltonian(params: &ModelParams) -> Result<Mat<C64>> {
    params.validate()?;
    let n = params.n;
    let mut h = Mat::<C64>::zeros(n, n);
    for i in 0..n {
        h[(i, i)] = C64::new(-params.mu, 0.0);
        if i + 1 < n {
            h[(i, i + 1)] = C64::new(-params.t, 0.0);
            h[(i + 1, i)] = C64::new(-params.t, 0.0);
        }
    }
    h[(0, n - 1)] = C64::new(-params.t_r, 0.0);
    h[(n - 1, 0)] = C64::new(-params.t_l, 0.0);
    Ok(h)
}
