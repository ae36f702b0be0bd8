//! Invariant straight lines through the origin.
//!
//! The line y = κx is invariant exactly when κ is a real root of the
//! direction polynomial tₙ(κ) = qₙ(1,κ) − κ·pₙ(1,κ), and the vertical line
//! x = 0 is invariant exactly when the κ^{n+1} coefficient of tₙ (which is
//! minus the yⁿ coefficient of pₙ) vanishes. Counting goes through
//! discriminant signs per degree, with the Sturm machine as fallback when
//! an auxiliary sign gate lands in the degeneracy band.

use crate::band;
use crate::field::VectorField;
use crate::realroots::{self, Poly, RootError};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LineError {
    #[error("degenerate direction polynomial: {reason}")]
    Degenerate { reason: String },
    #[error("infinity signs require 4 invariant lines, found {got}")]
    WrongLineCount { got: usize },
    #[error("saddle/node sign at slope {kappa} is inside the degeneracy band")]
    DegenerateSign { kappa: f64 },
    #[error("operation expects degree {expected}, field has degree {got}")]
    WrongDegree { expected: usize, got: usize },
}

/// Warning attached by [`count_lines_lenient`] when the vertical line is
/// invariant and had to be counted explicitly.
pub const AXIS_WARNING: &str = "x = 0 is an invariant line; counted it alongside the slope roots";

/// The direction polynomial tₙ with its two degeneracy flags.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionPoly {
    /// Ascending κ-power coefficients; length degree + 2.
    pub coeffs: Vec<f64>,
    /// The leading (κ^{n+1}) coefficient is in band: x = 0 is invariant.
    pub x_axis_invariant: bool,
    /// Every coefficient is in band: every direction is invariant.
    pub identically_zero: bool,
}

/// Ordered slopes of the four invariant lines of a cubic field and the
/// saddle/node sign at each: sⱼ = sign(−t₃′(κⱼ)·p₃(1,κⱼ)), negative for a
/// saddle pair at infinity, positive for a node pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InfinitySigns {
    pub roots: [f64; 4],
    pub signs: [i8; 4],
}

impl InfinitySigns {
    /// True when saddles and nodes alternate around the circle of
    /// directions. With two of each type (forced by index 1), checking
    /// three consecutive pairs settles the cyclic pattern.
    pub fn alternating(&self) -> bool {
        self.signs[0] * self.signs[1] < 0 && self.signs[1] * self.signs[2] < 0
    }
}

/// Coefficients of tₙ(κ) = qₙ(1,κ) − κ·pₙ(1,κ), plus degeneracy flags.
pub fn direction_poly(f: &VectorField) -> DirectionPoly {
    let p = f.p_coeffs();
    let q = f.q_coeffs();
    let n = f.degree();
    let mut coeffs = Vec::with_capacity(n + 2);
    coeffs.push(q[0]);
    for j in 1..=n {
        coeffs.push(q[j] - p[j - 1]);
    }
    coeffs.push(-p[n]);
    // each coefficient is linear in the inputs
    let tol = band::threshold(f.coeff_scale(), 1);
    DirectionPoly {
        x_axis_invariant: coeffs[n + 1].abs() < tol,
        identically_zero: coeffs.iter().all(|c| c.abs() < tol),
        coeffs,
    }
}

/// Number of invariant straight lines in the generic case (tₙ of full
/// degree, x = 0 not invariant, all slope roots simple).
pub fn count_lines(f: &VectorField) -> Result<usize, LineError> {
    let dp = direction_poly(f);
    reject_flags(&dp)?;
    count_slope_roots(f, &dp)
}

/// Line count that tolerates an invariant vertical line: the remaining
/// slopes come from the reduced polynomial and the axis adds one. Returns
/// the count together with [`AXIS_WARNING`] when that path was taken.
/// Hand-entered round-number coefficients hit this constantly; random
/// coefficients never do.
pub fn count_lines_lenient(f: &VectorField) -> Result<(usize, Option<&'static str>), LineError> {
    let dp = direction_poly(f);
    if dp.identically_zero {
        return Err(identically_zero_error());
    }
    if !dp.x_axis_invariant {
        return count_slope_roots(f, &dp).map(|l| (l, None));
    }
    let tol = band::threshold(f.coeff_scale(), 1);
    let mut reduced = dp.coeffs;
    reduced.pop();
    while reduced.last().is_some_and(|c| c.abs() < tol) {
        reduced.pop();
    }
    // identically_zero was false, so some coefficient survives
    let t = Poly::new(reduced);
    match realroots::sturm_count(&t, f64::NEG_INFINITY, f64::INFINITY) {
        Ok(k) => Ok((k + 1, Some(AXIS_WARNING))),
        Err(RootError::NonSquarefree) => Err(LineError::Degenerate {
            reason: "repeated slope root".into(),
        }),
        Err(e) => Err(LineError::Degenerate {
            reason: e.to_string(),
        }),
    }
}

/// Slopes and saddle/node signs of the infinity singularities of a cubic
/// field with four invariant lines, ordered by slope.
pub fn infinity_signs(f: &VectorField) -> Result<InfinitySigns, LineError> {
    if f.degree() != 3 {
        return Err(LineError::WrongDegree {
            expected: 3,
            got: f.degree(),
        });
    }
    let dp = direction_poly(f);
    reject_flags(&dp)?;
    let t = Poly::new(dp.coeffs);
    let roots_vec = realroots::real_roots(&t).map_err(|e| LineError::Degenerate {
        reason: e.to_string(),
    })?;
    if roots_vec.len() != 4 {
        return Err(LineError::WrongLineCount {
            got: roots_vec.len(),
        });
    }
    if !realroots::well_separated(&roots_vec) {
        return Err(LineError::Degenerate {
            reason: "near-coincident slope roots".into(),
        });
    }
    let roots: [f64; 4] = roots_vec.try_into().unwrap();
    let dt = t.derivative();
    let p_slope = Poly::new(f.p_coeffs().to_vec());
    let mut signs = [0i8; 4];
    for (sign, &kappa) in signs.iter_mut().zip(&roots) {
        let (dv, dm) = dt.eval_with_magnitude(kappa);
        let (pv, pm) = p_slope.eval_with_magnitude(kappa);
        *sign = band::sign_mag(-dv * pv, dm * pm)
            .ok_or(LineError::DegenerateSign { kappa })?;
    }
    Ok(InfinitySigns { roots, signs })
}

fn reject_flags(dp: &DirectionPoly) -> Result<(), LineError> {
    if dp.identically_zero {
        return Err(identically_zero_error());
    }
    if dp.x_axis_invariant {
        return Err(LineError::Degenerate {
            reason: "leading coefficient vanishes: x = 0 is an invariant line".into(),
        });
    }
    Ok(())
}

fn identically_zero_error() -> LineError {
    LineError::Degenerate {
        reason: "direction polynomial is identically zero: every line is invariant".into(),
    }
}

// Root count of t_n through the degree-specific discriminant criterion.
fn count_slope_roots(f: &VectorField, dp: &DirectionPoly) -> Result<usize, LineError> {
    let t = &dp.coeffs;
    match f.degree() {
        1 => {
            // t = t2·κ² + t1·κ + t0
            let disc = t[1] * t[1] - 4.0 * t[2] * t[0];
            let mag = t[1] * t[1] + (4.0 * t[2] * t[0]).abs();
            let s = band::sign_mag(disc, mag).ok_or_else(repeated_slope)?;
            Ok(if s > 0 { 2 } else { 0 })
        }
        2 => {
            // cubic in κ, descending: a=t3, b=t2, c=t1, d=t0
            let (a, b, c, d) = (t[3], t[2], t[1], t[0]);
            let disc = 18.0 * a * b * c * d - 4.0 * b * b * b * d + b * b * c * c
                - 4.0 * a * c * c * c
                - 27.0 * a * a * d * d;
            let mag = (18.0 * a * b * c * d).abs()
                + (4.0 * b * b * b * d).abs()
                + b * b * c * c
                + (4.0 * a * c * c * c).abs()
                + 27.0 * a * a * d * d;
            let s = band::sign_mag(disc, mag).ok_or_else(repeated_slope)?;
            Ok(if s > 0 { 3 } else { 1 })
        }
        _ => {
            let lead = t[4];
            let (a, b, c, d) = (t[3] / lead, t[2] / lead, t[1] / lead, t[0] / lead);
            match realroots::quartic_real_count(a, b, c, d) {
                Ok(k) => Ok(k),
                Err(RootError::DegenerateSigns { quantity: "d4" }) => Err(repeated_slope()),
                Err(RootError::DegenerateSigns { .. }) => {
                    // an auxiliary gate tripped; the count itself is still
                    // well defined, so fall back to the Sturm machine
                    let monic = Poly::new(vec![d, c, b, a, 1.0]);
                    match realroots::sturm_count(&monic, f64::NEG_INFINITY, f64::INFINITY) {
                        Ok(k) => Ok(k),
                        Err(RootError::NonSquarefree) => Err(repeated_slope()),
                        Err(e) => Err(LineError::Degenerate {
                            reason: e.to_string(),
                        }),
                    }
                }
                Err(e) => Err(LineError::Degenerate {
                    reason: e.to_string(),
                }),
            }
        }
    }
}

fn repeated_slope() -> LineError {
    LineError::Degenerate {
        reason: "repeated slope root (discriminant in band)".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(degree: usize, coeffs: &[f64]) -> VectorField {
        let (p, q) = coeffs.split_at(coeffs.len() / 2);
        VectorField::new(degree, p, q).unwrap()
    }

    #[test]
    fn linear_direction_poly() {
        // P = 2x + 3y, Q = 5x + 7y: t = -3κ² + 5κ + 5
        let dp = direction_poly(&field(1, &[2.0, 3.0, 5.0, 7.0]));
        assert_eq!(dp.coeffs, vec![5.0, 5.0, -3.0]);
        assert!(!dp.x_axis_invariant);
        assert!(!dp.identically_zero);
    }

    #[test]
    fn quartic_plus_one_field() {
        // P = x³ - y³, Q = x³ + x²y gives t₃ = κ⁴ + 1: no invariant lines
        let f = field(3, &[1.0, 0.0, 0.0, -1.0, 1.0, 1.0, 0.0, 0.0]);
        let dp = direction_poly(&f);
        assert_eq!(dp.coeffs, vec![1.0, 0.0, 0.0, 0.0, 1.0]);
        assert_eq!(count_lines(&f), Ok(0));
        assert_eq!(count_lines_lenient(&f), Ok((0, None)));
    }

    #[test]
    fn all_ones_quadratic() {
        // t₂ = -κ³ + 1: one real slope
        let f = field(2, &[1.0; 6]);
        let dp = direction_poly(&f);
        assert_eq!(dp.coeffs, vec![1.0, 0.0, 0.0, -1.0]);
        assert_eq!(count_lines(&f), Ok(1));
    }

    #[test]
    fn saddle_counts_both_axes() {
        // P = x, Q = -y: t₁ = -2κ, and x = 0 is invariant
        let f = field(1, &[1.0, 0.0, 0.0, -1.0]);
        let dp = direction_poly(&f);
        assert!(dp.x_axis_invariant);
        assert!(matches!(count_lines(&f), Err(LineError::Degenerate { .. })));
        assert_eq!(count_lines_lenient(&f), Ok((2, Some(AXIS_WARNING))));
    }

    #[test]
    fn zero_direction_polynomial() {
        // radial field x·(x² + y²): every line is invariant
        let f = field(3, &[1.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 1.0]);
        let dp = direction_poly(&f);
        assert!(dp.identically_zero);
        assert!(matches!(count_lines(&f), Err(LineError::Degenerate { .. })));
        assert!(count_lines_lenient(&f).is_err());
    }

    #[test]
    fn counts_match_numeric_roots() {
        // mixed fixed fields; compare the discriminant route with the
        // companion-matrix count of the same polynomial
        let fields = [
            field(2, &[0.7, -1.3, 0.4, 1.1, 0.6, -0.9]),
            field(2, &[1.5, 0.2, -0.8, -0.3, 1.9, 0.5]),
            field(3, &[0.3, -1.2, 0.7, 0.5, -0.6, 1.4, -0.2, 0.8]),
            field(3, &[1.1, 0.4, -0.9, 0.2, 0.8, -1.5, 0.3, -0.7]),
        ];
        for f in &fields {
            let l = count_lines(f).unwrap();
            let t = Poly::new(direction_poly(f).coeffs);
            let numeric = realroots::real_roots(&t).unwrap().len();
            assert_eq!(l, numeric, "field {f}");
        }
    }

    #[test]
    fn scaling_leaves_count_alone() {
        let f = field(3, &[0.3, -1.2, 0.7, 0.5, -0.6, 1.4, -0.2, 0.8]);
        let scaled = f.scaled(37.5).unwrap();
        assert_eq!(count_lines(&f).unwrap(), count_lines(&scaled).unwrap());
    }

    #[test]
    fn infinity_signs_on_constructed_quartic() {
        // t₃ = κ⁴ - 5κ² + 4 = (κ²-1)(κ²-4), P chosen sign-definite on the roots
        let f = field(3, &[2.0, 0.5, 0.0, -1.0, 4.0, 2.0, -4.5, 0.0]);
        let s = infinity_signs(&f).unwrap();
        for (got, want) in s.roots.iter().zip([-2.0, -1.0, 1.0, 2.0]) {
            assert!((got - want).abs() < 1e-9, "roots {:?}", s.roots);
        }
        assert_eq!(s.signs, [1, -1, 1, 1]);
    }

    #[test]
    fn non_alternating_pattern() {
        // t₃ = κ⁴ - 5κ² + 4 again, with P = -(κ+1.5)(κ-1.5)(κ-5) on slopes:
        // two nodes then two saddles, so the portrait is not the
        // saddle-node necklace
        let f = field(
            3,
            &[-11.25, 2.25, 5.0, -1.0, 4.0, -11.25, -2.75, 5.0],
        );
        let s = infinity_signs(&f).unwrap();
        assert_eq!(s.signs, [1, 1, -1, -1]);
        assert!(!s.alternating());
    }

    #[test]
    fn alternating_sign_pattern() {
        // same slope set, but P stays positive on every root, so the signs
        // come straight from the alternation of t₃′
        let f = field(
            3,
            &[1.0, 0.0, 0.0, -0.01, 0.04, 1.0, -0.05, 0.0],
        );
        let s = infinity_signs(&f).unwrap();
        assert_eq!(s.signs, [1, -1, 1, -1]);
        assert!(s.alternating());
    }

    #[test]
    fn wrong_line_count_for_two_line_field() {
        // t₃ = -κ⁴ + 1 has two real roots
        let f = field(3, &[1.0; 8]);
        assert_eq!(count_lines(&f), Ok(2));
        assert_eq!(
            infinity_signs(&f),
            Err(LineError::WrongLineCount { got: 2 })
        );
    }

    #[test]
    fn wrong_degree_for_infinity_signs() {
        let f = field(2, &[1.0; 6]);
        assert_eq!(
            infinity_signs(&f),
            Err(LineError::WrongDegree {
                expected: 3,
                got: 2
            })
        );
    }
}
