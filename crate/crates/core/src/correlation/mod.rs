//! Correlation matrix `C(l,m) = <G^L| c†_l c_m |G^R>` of the half-filled chain.
//!
//! Three interchangeable routes produce the same object: a finite-N sum over
//! the occupied biorthogonal eigenvectors, the thermodynamic-limit closed form
//! (sine kernel plus impurity and bound-state terms) and the large-`l+m`
//! asymptotic form.

mod quadrature;
mod special;
mod terms;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use faer::Mat;

pub use quadrature::{integrate, Integral, QuadratureConfig};
pub use special::hyp2f1_1_s;
pub use terms::{
    asymptotic_corr, bound_contribution, impurity_term_closed, impurity_term_quadrature, sine_kernel,
    DIVERGENCE_GUARD,
};

use crate::entanglement::Partition;
use crate::spectral::{build_hamiltonian, solve_biorthogonal, EigenSystem, Mode, ModelParams, OCCUPATION_EPS};
use crate::{Error, Result, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Route {
    Numeric,
    Analytic,
    Asymptotic,
}

impl Route {
    pub fn as_str(self) -> &'static str {
        match self {
            Route::Numeric => "numeric",
            Route::Analytic => "analytic",
            Route::Asymptotic => "asymptotic",
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Route {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "numeric" => Ok(Route::Numeric),
            "analytic" => Ok(Route::Analytic),
            "asymptotic" => Ok(Route::Asymptotic),
            other => Err(Error::invalid(format!("unknown route '{other}' (expected numeric, analytic or asymptotic)"))),
        }
    }
}

/// Square block of the correlation function on consecutive sites
/// `offset..offset + size` (1-based).
#[derive(Clone, Debug)]
pub struct CorrelationMatrix {
    pub entries: Mat<C64>,
    pub offset: usize,
    pub provenance: Route,
    /// Set when the block is Hermitian by construction.
    pub hermitian: bool,
}

impl CorrelationMatrix {
    pub fn size(&self) -> usize {
        self.entries.nrows()
    }

    pub fn last_site(&self) -> usize {
        self.offset + self.size() - 1
    }

    /// Entry at absolute 1-based sites.
    pub fn at(&self, l: usize, m: usize) -> C64 {
        self.entries[(l - self.offset, m - self.offset)]
    }

    /// `max |C − C†|`.
    pub fn hermiticity_error(&self) -> f64 {
        let n = self.size();
        let mut err = 0.0f64;
        for j in 0..n {
            for i in 0..=j {
                err = err.max((self.entries[(i, j)] - self.entries[(j, i)].conj()).norm());
            }
        }
        err
    }
}

/// Knobs of the closed-form route.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnalyticOptions {
    /// Add the occupied bound state for `t_R t_L > 1`.
    pub include_bound_state: bool,
    /// Evaluate the impurity term by quadrature when the closed form is unavailable.
    pub quadrature_fallback: Option<QuadratureConfig>,
}

impl Default for AnalyticOptions {
    fn default() -> Self {
        Self { include_bound_state: true, quadrature_fallback: None }
    }
}

pub fn assemble_correlation(params: &ModelParams, partition: &Partition, route: Route) -> Result<CorrelationMatrix> {
    assemble_correlation_with(params, partition, route, &AnalyticOptions::default())
}

pub fn assemble_correlation_with(
    params: &ModelParams,
    partition: &Partition,
    route: Route,
    options: &AnalyticOptions,
) -> Result<CorrelationMatrix> {
    params.validate()?;
    partition.validate()?;
    match route {
        Route::Numeric => {
            let needed = partition.last_site();
            if 2 * needed >= params.n {
                return Err(Error::PartitionOutOfRange {
                    first: partition.first_site(),
                    last: needed,
                    lo: 1,
                    hi: params.n.div_ceil(2).saturating_sub(1),
                });
            }
            let h = build_hamiltonian(params)?;
            let eig = solve_biorthogonal(h.as_ref())?;
            Ok(numeric_block(&eig, partition.first_site(), partition.la, params.is_hermitian()))
        }
        Route::Analytic => analytic_block(params, partition, options),
        Route::Asymptotic => asymptotic_block(params, partition),
    }
}

/// `C(l,m) = Σ_{occupied} conj(L(l)) R(m)` on sites `first..first+size`.
pub fn numeric_block(eig: &EigenSystem, first: usize, size: usize, hermitian: bool) -> CorrelationMatrix {
    let occ: Vec<usize> = (0..eig.dim()).filter(|&k| eig.occupied[k]).collect();
    let rows = first - 1..first - 1 + size;
    let left = Mat::<C64>::from_fn(size, occ.len(), |i, k| eig.left[(rows.start + i, occ[k])].conj());
    let right = Mat::<C64>::from_fn(size, occ.len(), |i, k| eig.right[(rows.start + i, occ[k])]);
    let entries = &left * right.transpose();
    CorrelationMatrix { entries, offset: first, provenance: Route::Numeric, hermitian }
}

fn analytic_block(params: &ModelParams, partition: &Partition, options: &AnalyticOptions) -> Result<CorrelationMatrix> {
    params.require_half_filling("assemble_correlation")?;
    let tau = params.impurity_product();
    let first = partition.first_site();
    let size = partition.la;

    let mut impurity: HashMap<u64, f64> = HashMap::new();
    for sum in (2 * first)..=(2 * (first + size - 1)) {
        let sum = sum as u64;
        let value = match terms::impurity_closed_by_sum(sum, tau) {
            Ok(v) => v,
            Err(e) => match &options.quadrature_fallback {
                Some(cfg) => terms::impurity_quadrature_by_sum(sum, tau, cfg)?.re,
                None => return Err(e),
            },
        };
        let bound = if options.include_bound_state { terms::bound_by_sum(sum, tau) } else { 0.0 };
        impurity.insert(sum, value + bound);
    }

    let entries = Mat::<C64>::from_fn(size, size, |i, j| {
        let (l, m) = (first + i, first + j);
        C64::new(sine_kernel(l as i64 - m as i64) + impurity[&((l + m) as u64)], 0.0)
    });
    Ok(CorrelationMatrix { entries, offset: first, provenance: Route::Analytic, hermitian: true })
}

fn asymptotic_block(params: &ModelParams, partition: &Partition) -> Result<CorrelationMatrix> {
    params.require_half_filling("assemble_correlation")?;
    let tau = params.impurity_product();
    let first = partition.first_site();
    let size = partition.la;
    let mut entries = Mat::<C64>::zeros(size, size);
    for j in 0..size {
        for i in 0..size {
            let (l, m) = (first + i, first + j);
            entries[(i, j)] = C64::new(terms::asymptotic_by_sum(l as i64 - m as i64, (l + m) as u64, tau)?, 0.0);
        }
    }
    Ok(CorrelationMatrix { entries, offset: first, provenance: Route::Asymptotic, hermitian: true })
}

/// Thermodynamic mode sum `½ Σ_{E<0, usable} conj(ψ̃^L(l)) ψ̃^R(m)` over both
/// quadratic branches, on sites `first..first+size`.
pub fn mode_sum_block(modes: &[Mode], first: usize, size: usize) -> Mat<C64> {
    let mut c = Mat::<C64>::zeros(size, size);
    for mode in modes.iter().filter(|m| m.usable && m.energy < -OCCUPATION_EPS) {
        for j in 0..size {
            let r = mode.psi_r[first - 1 + j] * 0.5;
            for i in 0..size {
                c[(i, j)] += mode.psi_l[first - 1 + i].conj() * r;
            }
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::thermo_modes;

    fn max_diff(a: &Mat<C64>, b: &Mat<C64>) -> f64 {
        let mut d = 0.0f64;
        for j in 0..a.ncols() {
            for i in 0..a.nrows() {
                d = d.max((a[(i, j)] - b[(i, j)]).norm());
            }
        }
        d
    }

    #[test]
    fn periodic_chain_is_pure_sine_kernel() {
        let c = assemble_correlation(&ModelParams::new(1000, 1.0, 1.0), &Partition::first(12), Route::Analytic).unwrap();
        for l in 1..=12 {
            for m in 1..=12 {
                assert_eq!(c.at(l, m), C64::new(sine_kernel(l as i64 - m as i64), 0.0));
            }
        }
    }

    #[test]
    fn route_parsing() {
        assert_eq!("Analytic".parse::<Route>().unwrap(), Route::Analytic);
        assert!("exact".parse::<Route>().is_err());
        for r in [Route::Numeric, Route::Analytic, Route::Asymptotic] {
            assert_eq!(r.to_string().parse::<Route>().unwrap(), r);
        }
    }

    #[test]
    fn numeric_and_analytic_agree_near_impurity() {
        for (t_r, t_l) in [(0.3, 0.6), (-0.5, 0.5)] {
            let p = ModelParams::new(402, t_r, t_l);
            let part = Partition::first(30);
            let num = assemble_correlation(&p, &part, Route::Numeric).unwrap();
            let ana = assemble_correlation(&p, &part, Route::Analytic).unwrap();
            let d = max_diff(&num.entries, &ana.entries);
            assert!(d <= 1e-2, "({t_r},{t_l}): {d}");
        }
    }

    #[test]
    fn bound_state_term_is_needed() {
        let p = ModelParams::new(402, 2.0, 2.0);
        let part = Partition::first(20);
        let num = assemble_correlation(&p, &part, Route::Numeric).unwrap();
        let with = assemble_correlation(&p, &part, Route::Analytic).unwrap();
        let opts = AnalyticOptions { include_bound_state: false, ..Default::default() };
        let without = assemble_correlation_with(&p, &part, Route::Analytic, &opts).unwrap();
        assert!(max_diff(&num.entries, &with.entries) <= 2e-3);
        assert!((num.at(1, 1) - without.at(1, 1)).norm() > 0.1);
    }

    #[test]
    fn mode_sum_matches_finite_chain() {
        let p = ModelParams::new(400, 0.3, 0.5);
        let modes = thermo_modes(&p).unwrap();
        let size = 100;
        let ms = mode_sum_block(&modes, 1, size);
        let h = build_hamiltonian(&p).unwrap();
        let eig = solve_biorthogonal(h.as_ref()).unwrap();
        let num = numeric_block(&eig, 1, size, false);
        let d = max_diff(&ms, &num.entries);
        assert!(d <= 5e-3, "{d}");
    }

    #[test]
    fn quadrature_fallback_covers_divergence_guard() {
        let p = ModelParams::new(100, -1.0, 1.0 + 2e-7);
        let part = Partition::first(4);
        assert!(assemble_correlation(&p, &part, Route::Analytic).is_err());
        let opts = AnalyticOptions { quadrature_fallback: Some(QuadratureConfig::default()), ..Default::default() };
        // the quadrature guard is the same, so the error persists but names the quadrature
        let err = assemble_correlation_with(&p, &part, Route::Analytic, &opts).unwrap_err();
        assert!(matches!(err, Error::Divergent { op: "impurity_term_quadrature", .. }));
    }

    #[test]
    fn numeric_route_respects_half_chain() {
        let p = ModelParams::new(100, 0.3, 0.5);
        assert!(assemble_correlation(&p, &Partition::first(50), Route::Numeric).is_err());
        assert!(assemble_correlation(&p, &Partition::second(30, 30), Route::Numeric).is_err());
    }

    #[test]
    fn partition_two_offsets() {
        let p = ModelParams::new(2000, 0.3, 0.5);
        let c = assemble_correlation(&p, &Partition::second(500, 8), Route::Analytic).unwrap();
        assert_eq!(c.offset, 501);
        assert_eq!(c.last_site(), 508);
        let bulk_bound = 1.0 / (2.0 * std::f64::consts::PI * 500.0);
        for l in 501..=508 {
            for m in 501..=508 {
                assert!((c.at(l, m).re - sine_kernel(l as i64 - m as i64)).abs() <= bulk_bound);
            }
        }
    }
}
