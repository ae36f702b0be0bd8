//! Relative degeneracy bands for sign decisions.
//!
//! Every classification decision in this crate reduces to the sign of some
//! polynomial or rational expression in the field coefficients. With
//! continuous random coefficients those expressions vanish with probability
//! zero, so a genuine zero is never expected; the band exists only to keep
//! floating-point noise from being read as a meaningful sign. A quantity of
//! total degree `deg` in inputs of magnitude `scale` is treated as zero when
//! its absolute value falls below `REL_BAND * max(1, scale)^deg`.

/// Relative width of the degeneracy band.
pub const REL_BAND: f64 = 1e-10;

/// Band width for discriminant-type quantities, which vanish to second
/// order on their stratum (a root collision at gap eps drives them like
/// eps²). The set of fields within band width w of such a stratum has
/// measure proportional to sqrt(w), so the standard width would flag about
/// 1e-5 of all random fields; this narrower width brings that in line with
/// the first-order gates while staying two orders of magnitude above the
/// accumulated floating-point noise of the expressions it guards.
pub const DISC_REL_BAND: f64 = 1e-12;

/// Band threshold for an expression of total degree `deg` in inputs of
/// magnitude `scale`.
#[inline]
pub fn threshold(scale: f64, deg: i32) -> f64 {
    REL_BAND * scale.max(1.0).powi(deg)
}

/// Sign of `q` as an expression of degree `deg` in inputs of magnitude
/// `scale`; `None` when `q` is inside the band (or not finite).
#[inline]
pub fn sign(q: f64, scale: f64, deg: i32) -> Option<i8> {
    sign_rel(q, threshold(scale, deg))
}

/// Sign of `q` against an explicit threshold. Used where the natural scale
/// of `q` is an accumulated sensitivity rather than a power of one input
/// scale. The comparison is inclusive so that an exact zero with a zero
/// yardstick still counts as banded.
#[inline]
pub fn sign_rel(q: f64, band: f64) -> Option<i8> {
    if !q.is_finite() || q.abs() <= band {
        None
    } else if q > 0.0 {
        Some(1)
    } else {
        Some(-1)
    }
}

/// Sign of `q` where `magnitude` is a yardstick for how far `q` can move
/// under a unit relative perturbation of its inputs: the sum of the absolute
/// values of the summed terms, or a composed first-order sensitivity.
#[inline]
pub fn sign_mag(q: f64, magnitude: f64) -> Option<i8> {
    sign_rel(q, REL_BAND * magnitude.max(1.0))
}
