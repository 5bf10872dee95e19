use super::ModelParams;
use crate::{Error, Result, C64};

/// Roots of `a y² + b y + c = 0` arising from the impurity boundary conditions
/// with `y = z^N`:
///
/// `a = z² − t_L t_R`, `b = (1 − z²)(t_L + t_R)`, `c = z² t_L t_R − 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadraticBranch {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    /// Root of larger modulus (larger real part on ties).
    pub y1: Option<C64>,
    pub y2: Option<C64>,
    /// Set when `a = 0` and the equation collapses to `b y + c = 0`; only `y1` is present.
    pub degenerate: bool,
}

impl QuadraticBranch {
    /// `|a y² + b y + c| / (|a||y|² + |b||y| + |c|)`.
    pub fn relative_residual(&self, y: C64) -> f64 {
        let value = (self.a * y + self.b) * y + self.c;
        let scale = self.a.norm() * y.norm_sqr() + self.b.norm() * y.norm() + self.c.norm();
        if scale == 0.0 {
            0.0
        } else {
            value.norm() / scale
        }
    }

    pub fn roots(&self) -> impl Iterator<Item = C64> + '_ {
        self.y1.into_iter().chain(self.y2)
    }
}

pub fn quadratic_branches(z: C64, params: &ModelParams) -> Result<QuadraticBranch> {
    params.validate()?;
    if z == C64::new(0.0, 0.0) || !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::domain("quadratic_branches", format!("z = {z} must be finite and nonzero")));
    }
    let p = params.normalized();
    let tau = p.t_r * p.t_l;
    let z2 = z * z;
    let a = z2 - tau;
    let b = (1.0 - z2) * (p.t_l + p.t_r);
    let c = z2 * tau - 1.0;

    let scale = z2.norm() + tau.abs();
    if a.norm() <= 4.0 * f64::EPSILON * scale {
        if b.norm() <= 4.0 * f64::EPSILON * scale.max(1.0) {
            return Err(Error::DegenerateQuadratic);
        }
        return Ok(QuadraticBranch { a, b, c, y1: Some(-c / b), y2: None, degenerate: true });
    }

    let sqrt_disc = (b * b - 4.0 * a * c).sqrt();
    // pick the sign that avoids cancellation in b ± √disc
    let plus = b + sqrt_disc;
    let minus = b - sqrt_disc;
    let q = -0.5 * if plus.norm() >= minus.norm() { plus } else { minus };
    let (r1, r2) = if q.norm() == 0.0 {
        (C64::new(0.0, 0.0), C64::new(0.0, 0.0))
    } else {
        (q / a, c / q)
    };

    let swap = {
        let (m1, m2) = (r1.norm(), r2.norm());
        let tie = (m1 - m2).abs() <= 1e-12 * m1.max(m2);
        if tie {
            r2.re > r1.re
        } else {
            m2 > m1
        }
    };
    let (y1, y2) = if swap { (r2, r1) } else { (r1, r2) };
    Ok(QuadraticBranch { a, b, c, y1: Some(y1), y2: Some(y2), degenerate: false })
}
