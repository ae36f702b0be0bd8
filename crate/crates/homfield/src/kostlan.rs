//! Expected number of invariant lines under standard normal coefficients.
//!
//! The slopes of invariant lines are the real roots of the direction
//! polynomial t(κ) = Σ tⱼκʲ of degree n + 1, whose coefficients are
//! independent centered Gaussians with variance 1 for the two extreme
//! coefficients and 2 for the middle ones (each middle tⱼ is a difference of
//! two unit normals). The expected root count is the Kac–Rice integral of
//! ρ(κ) = (1/π)·√((G·K − H²)/G²), where G, H, K are ⟨v,v⟩, ⟨v,v′⟩, ⟨v′,v′⟩
//! for the weighted moment vector v(κ) = M^{1/2}·(1, κ, …, κ^{n+1}),
//! M = diag(1, 2, …, 2, 1).
//!
//! Integrating ρ over the whole line converges slowly (the density decays
//! quadratically), so production integration substitutes κ = tan u, under
//! which the basis functions become bounded trigonometric monomials
//! s^i c^{n+1-i} and the domain becomes (-π/2, π/2).

use crate::quadrature::{self, QuadError};
use std::f64::consts::{FRAC_PI_2, PI};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KostlanError {
    #[error("expected line count needs degree >= 1")]
    BadDegree,
    #[error("tolerance must be positive and finite, got {0}")]
    BadTolerance(f64),
    #[error("quadrature stalled above the requested tolerance {tol:e} (reached {reached:e})")]
    NoConvergence { tol: f64, reached: f64 },
}

// variance of the j-th direction-polynomial coefficient
fn weight(degree: usize, j: usize) -> f64 {
    if j == 0 || j == degree + 1 {
        1.0
    } else {
        2.0
    }
}

/// Root density of the direction polynomial at slope κ. Integrating this
/// over the real line gives the expected invariant-line count.
pub fn ek_integrand(degree: usize, kappa: f64) -> f64 {
    let top = degree + 1;
    let mut g = 0.0;
    let mut h = 0.0;
    let mut k = 0.0;
    let mut prev = 0.0; // κ^(j-1), only read for j >= 1
    let mut pow = 1.0; // κ^j
    for j in 0..=top {
        let m = weight(degree, j);
        let jf = j as f64;
        g += m * pow * pow;
        h += m * jf * pow * prev;
        k += m * jf * jf * prev * prev;
        prev = pow;
        pow *= kappa;
    }
    ((g * k - h * h).max(0.0)).sqrt() / (g * PI)
}

/// Same density after the substitution κ = tan u, including the Jacobian:
/// the expected count is the integral of this over (-π/2, π/2). Every term
/// is a bounded trigonometric monomial, so endpoint behavior is tame.
pub fn ek_integrand_angular(degree: usize, u: f64) -> f64 {
    let top = degree + 1;
    let (s, c) = u.sin_cos();
    let mut g = 0.0;
    let mut h = 0.0;
    let mut k = 0.0;
    for i in 0..=top {
        let m = weight(degree, i);
        // φᵢ = sⁱ c^(top-i), differentiated in u
        let phi = s.powi(i as i32) * c.powi((top - i) as i32);
        let rising = if i == 0 {
            0.0
        } else {
            i as f64 * s.powi(i as i32 - 1) * c.powi((top - i + 1) as i32)
        };
        let falling = if i == top {
            0.0
        } else {
            (top - i) as f64 * s.powi(i as i32 + 1) * c.powi((top - i - 1) as i32)
        };
        let dphi = rising - falling;
        g += m * phi * phi;
        h += m * phi * dphi;
        k += m * dphi * dphi;
    }
    ((g * k - h * h).max(0.0)).sqrt() / (g * PI)
}

/// Expected number of invariant straight lines of a degree-n field with
/// i.i.d. standard normal coefficients, to the requested absolute tolerance.
pub fn expected_lines(degree: usize, abs_tol: f64) -> Result<f64, KostlanError> {
    if degree == 0 {
        return Err(KostlanError::BadDegree);
    }
    if !(abs_tol > 0.0) || !abs_tol.is_finite() {
        return Err(KostlanError::BadTolerance(abs_tol));
    }
    match quadrature::integrate(
        |u| ek_integrand_angular(degree, u),
        -FRAC_PI_2,
        FRAC_PI_2,
        abs_tol,
        256,
    ) {
        Ok(r) => Ok(r.value),
        Err(QuadError::NoConvergence { abs_error, .. }) => Err(KostlanError::NoConvergence {
            tol: abs_tol,
            reached: abs_error,
        }),
        Err(QuadError::BadTolerance) => Err(KostlanError::BadTolerance(abs_tol)),
        Err(QuadError::BadInterval) => unreachable!("fixed finite interval"),
    }
}
