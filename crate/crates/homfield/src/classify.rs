//! Phase-portrait classes and the classifier.
//!
//! A generic homogeneous field is pinned down, up to topological equivalence
//! of its phase portrait, by two integers: the index of the origin and the
//! number of invariant straight lines. Degree 1 has three classes (saddle,
//! node, focus), degree 2 has five, degree 3 has nine. The single collision
//! is at degree 3 with (index, lines) = (1, 4), where the cyclic arrangement
//! of saddles and nodes at infinity separates C3 from C4. For odd degree the
//! classifier also reports whether the origin attracts or repels globally.

use crate::band;
use crate::field::VectorField;
use crate::index::{self, IndexError};
use crate::invlines::{self, LineError};
use crate::quadrature;
use crate::realroots::{self, Poly, RootError};
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, TAU};
use std::fmt;
use thiserror::Error;

/// Phase-portrait class. Declaration order is report order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Label {
    L1,
    L2,
    L3,
    Q1,
    Q2,
    Q3,
    Q4,
    Q5,
    C1,
    C2,
    C3,
    C4,
    C5,
    C6,
    C7,
    C8,
    C9,
}

impl Label {
    pub const fn as_str(self) -> &'static str {
        match self {
            Label::L1 => "L1",
            Label::L2 => "L2",
            Label::L3 => "L3",
            Label::Q1 => "Q1",
            Label::Q2 => "Q2",
            Label::Q3 => "Q3",
            Label::Q4 => "Q4",
            Label::Q5 => "Q5",
            Label::C1 => "C1",
            Label::C2 => "C2",
            Label::C3 => "C3",
            Label::C4 => "C4",
            Label::C5 => "C5",
            Label::C6 => "C6",
            Label::C7 => "C7",
            Label::C8 => "C8",
            Label::C9 => "C9",
        }
    }

    /// Every class of the given degree, in report order.
    pub fn all(degree: usize) -> &'static [Label] {
        match degree {
            1 => &[Label::L1, Label::L2, Label::L3],
            2 => &[Label::Q1, Label::Q2, Label::Q3, Label::Q4, Label::Q5],
            3 => &[
                Label::C1,
                Label::C2,
                Label::C3,
                Label::C4,
                Label::C5,
                Label::C6,
                Label::C7,
                Label::C8,
                Label::C9,
            ],
            other => panic!("no portrait classes for degree {other}"),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        out.write_str(self.as_str())
    }
}

/// Global behavior of the origin for odd degree; even-degree fields cannot
/// attract or repel globally and get [`Stability::NotApplicable`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stability {
    Attractor,
    Repeller,
    Neither,
    NotApplicable,
}

impl fmt::Display for Stability {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        out.write_str(match self {
            Stability::Attractor => "attractor",
            Stability::Repeller => "repeller",
            Stability::Neither => "neither",
            Stability::NotApplicable => "not applicable",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub label: Label,
    pub index: i32,
    pub lines: usize,
    pub stability: Stability,
    /// Non-fatal notes: an invariant vertical line counted explicitly, an
    /// index rescued by the winding oracle, a tiebreak read in a tilted frame.
    pub warnings: Vec<String>,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClassifyError {
    /// A decision quantity landed inside its degeneracy band, or the field
    /// sits on a boundary stratum the class table does not cover.
    #[error("degenerate field: {}", reasons.join("; "))]
    Degenerate { reasons: Vec<String> },
    /// The computed pair matches no row of the table. Theory rules this out
    /// for exact arithmetic, so it flags a numerical inconsistency.
    #[error("(index, lines) = ({index}, {lines}) matches no portrait of degree {degree}")]
    UnrealizedPair {
        degree: usize,
        index: i32,
        lines: usize,
    },
    #[error("stability requires odd degree, field has degree {0}")]
    EvenDegree(usize),
}

/// One row of the class table: a realizable (index, lines) pair and the
/// class or classes living on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableRow {
    pub index: i32,
    pub lines: usize,
    pub labels: &'static [Label],
}

static LINEAR_ROWS: [TableRow; 3] = [
    TableRow {
        index: -1,
        lines: 2,
        labels: &[Label::L1],
    },
    TableRow {
        index: 1,
        lines: 2,
        labels: &[Label::L2],
    },
    TableRow {
        index: 1,
        lines: 0,
        labels: &[Label::L3],
    },
];

static QUADRATIC_ROWS: [TableRow; 5] = [
    TableRow {
        index: -2,
        lines: 3,
        labels: &[Label::Q1],
    },
    TableRow {
        index: 0,
        lines: 3,
        labels: &[Label::Q2],
    },
    TableRow {
        index: 2,
        lines: 3,
        labels: &[Label::Q3],
    },
    TableRow {
        index: 0,
        lines: 1,
        labels: &[Label::Q4],
    },
    TableRow {
        index: 2,
        lines: 1,
        labels: &[Label::Q5],
    },
];

static CUBIC_ROWS: [TableRow; 8] = [
    TableRow {
        index: -3,
        lines: 4,
        labels: &[Label::C1],
    },
    TableRow {
        index: -1,
        lines: 4,
        labels: &[Label::C2],
    },
    TableRow {
        index: 1,
        lines: 4,
        labels: &[Label::C3, Label::C4],
    },
    TableRow {
        index: 3,
        lines: 4,
        labels: &[Label::C5],
    },
    TableRow {
        index: -1,
        lines: 2,
        labels: &[Label::C6],
    },
    TableRow {
        index: 1,
        lines: 2,
        labels: &[Label::C7],
    },
    TableRow {
        index: 3,
        lines: 2,
        labels: &[Label::C8],
    },
    TableRow {
        index: 1,
        lines: 0,
        labels: &[Label::C9],
    },
];

/// The class table for a degree.
pub fn portrait_table(degree: usize) -> &'static [TableRow] {
    match degree {
        1 => &LINEAR_ROWS,
        2 => &QUADRATIC_ROWS,
        3 => &CUBIC_ROWS,
        other => panic!("no portrait table for degree {other}"),
    }
}

fn lookup(degree: usize, index: i32, lines: usize) -> Option<&'static [Label]> {
    portrait_table(degree)
        .iter()
        .find(|row| row.index == index && row.lines == lines)
        .map(|row| row.labels)
}

/// Warning attached when a NotWellPosed closed-form index was replaced by
/// the winding number of the field around the unit circle.
pub const ORACLE_WARNING: &str = "closed-form index not well-posed; used the winding oracle";

/// Warning attached when the saddle/node pattern at infinity had to be read
/// in a rotated frame because one of the four lines was vertical.
pub const ROTATED_FRAME_WARNING: &str =
    "saddle/node pattern at infinity read in a rotated frame (a line was vertical)";

// Fixed tilt angles for re-reading the pattern at infinity when x = 0 is one
// of the invariant lines. Arbitrary irrational-looking values; the second is
// a backstop in case a rotated line lands vertical again.
const ROTATION_ANGLES: [f64; 2] = [0.3770972217, 0.7129840293];

// Absolute integration tolerance and decision band for the spiral integral.
// The integrand R/|Θ| is invariant under coefficient scaling, so absolute
// thresholds are safe.
const SPIRAL_TOL: f64 = 1e-8;
const SPIRAL_BAND: f64 = 1e-6;
const SPIRAL_MAX_INTERVALS: usize = 512;

/// How the classifier treats inputs off the generic strata.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassifyPolicy {
    /// Replace a NotWellPosed closed-form index with the winding number
    /// (recorded in the warnings) instead of refusing the field.
    pub oracle_fallback: bool,
    /// Count an invariant vertical line into the line total instead of
    /// refusing the field.
    pub lenient_axis: bool,
}

impl Default for ClassifyPolicy {
    /// The interactive default: honest about index degeneracies, tolerant of
    /// the invariant vertical line that hand-typed round coefficients
    /// produce constantly.
    fn default() -> Self {
        Self {
            oracle_fallback: false,
            lenient_axis: true,
        }
    }
}

/// Classifies with [`ClassifyPolicy::default`].
pub fn classify(f: &VectorField) -> Result<Classification, ClassifyError> {
    classify_with(f, ClassifyPolicy::default())
}

/// Full classification: index, invariant-line count, table lookup, the
/// saddle/node tiebreak where needed, and the stability verdict for odd
/// degree. Degree 1 short-circuits to [`classify_linear`], which the policy
/// cannot affect (the determinant/discriminant route has no degenerate
/// strata to be lenient about).
pub fn classify_with(f: &VectorField, policy: ClassifyPolicy) -> Result<Classification, ClassifyError> {
    let degree = f.degree();
    if degree == 1 {
        let &[a, b] = f.p_coeffs() else { unreachable!() };
        let &[c, d] = f.q_coeffs() else { unreachable!() };
        return classify_linear(a, b, c, d);
    }

    let mut warnings = Vec::new();
    let index = match index::index(f) {
        Ok(i) => i,
        Err(IndexError::NotWellPosed { violated }) if policy.oracle_fallback => {
            let i = index::winding_index(f, 1.0, FRAC_PI_2).map_err(from_index_error)?;
            warnings.push(format!("{ORACLE_WARNING} ({} in band)", violated.join(", ")));
            i
        }
        Err(e) => return Err(from_index_error(e)),
    };

    let lines = if policy.lenient_axis {
        let (l, warning) = invlines::count_lines_lenient(f).map_err(from_line_error)?;
        warnings.extend(warning.map(String::from));
        l
    } else {
        invlines::count_lines(f).map_err(from_line_error)?
    };

    let labels = lookup(degree, index, lines).ok_or(ClassifyError::UnrealizedPair {
        degree,
        index,
        lines,
    })?;
    let label = match labels {
        &[single] => single,
        _ => {
            if alternating_at_infinity(f, &mut warnings)? {
                Label::C4
            } else {
                Label::C3
            }
        }
    };

    let stability = if degree % 2 == 1 {
        if index == 1 {
            stability_by_rule(f)?
        } else {
            // a global attractor or repeller has only parabolic sectors,
            // which forces index 1, so any other index settles the verdict
            Stability::Neither
        }
    } else {
        Stability::NotApplicable
    };

    Ok(Classification {
        label,
        index,
        lines,
        stability,
        warnings,
    })
}

/// Saddle, node or focus for ẋ = ax + by, ẏ = cx + dy, with the stability
/// verdict from the trace. Pure closed form: sign of the determinant, then
/// sign of the eigenvalue discriminant (a-d)² + 4bc.
pub fn classify_linear(a: f64, b: f64, c: f64, d: f64) -> Result<Classification, ClassifyError> {
    let det = a * d - b * c;
    let Some(det_sign) = band::sign_mag(det, (a * d).abs() + (b * c).abs()) else {
        return Err(degenerate(
            "determinant in band: the origin is not an elementary singular point",
        ));
    };
    let no_warnings = Vec::new();
    if det_sign < 0 {
        return Ok(Classification {
            label: Label::L1,
            index: -1,
            lines: 2,
            stability: Stability::Neither,
            warnings: no_warnings,
        });
    }
    let gap = a - d;
    let disc = gap * gap + 4.0 * b * c;
    let Some(disc_sign) = band::sign_mag(disc, gap * gap + (4.0 * b * c).abs()) else {
        return Err(degenerate("eigenvalue discriminant in band: borderline node"));
    };
    let Some(trace_sign) = band::sign_mag(a + d, a.abs() + d.abs()) else {
        return Err(degenerate("trace in band: borderline center"));
    };
    let stability = if trace_sign < 0 {
        Stability::Attractor
    } else {
        Stability::Repeller
    };
    Ok(if disc_sign > 0 {
        Classification {
            label: Label::L2,
            index: 1,
            lines: 2,
            stability,
            warnings: no_warnings,
        }
    } else {
        Classification {
            label: Label::L3,
            index: 1,
            lines: 0,
            stability,
            warnings: no_warnings,
        }
    })
}

/// Global stability verdict for an odd-degree field, independent of the
/// classifier: ray signs when invariant lines exist, the spiral integral
/// when none do. Even degree is refused.
pub fn stability(f: &VectorField) -> Result<Stability, ClassifyError> {
    if f.degree() % 2 == 0 {
        return Err(ClassifyError::EvenDegree(f.degree()));
    }
    if f.degree() == 1 {
        let &[a, b] = f.p_coeffs() else { unreachable!() };
        let &[c, d] = f.q_coeffs() else { unreachable!() };
        return classify_linear(a, b, c, d).map(|r| r.stability);
    }
    stability_by_rule(f)
}

/// True when the origin attracts every orbit.
pub fn is_global_attractor(f: &VectorField) -> Result<bool, ClassifyError> {
    stability(f).map(|s| s == Stability::Attractor)
}

/// True when the origin repels every orbit (equivalently, the reversed flow
/// attracts globally).
pub fn is_global_repeller(f: &VectorField) -> Result<bool, ClassifyError> {
    stability(f).map(|s| s == Stability::Repeller)
}

// The verdict from the geometry alone. With invariant rays, every ray must
// carry inward flow for an attractor (for odd degree the two rays of a line
// agree, and an invariant vertical line contributes q_n(0,1)). With no rays,
// Θ never vanishes, every orbit spirals, and the per-revolution change of
// ln r is the integral of R/|Θ| over the circle of directions.
fn stability_by_rule(f: &VectorField) -> Result<Stability, ClassifyError> {
    let dp = invlines::direction_poly(f);
    if dp.identically_zero {
        return Err(degenerate(
            "direction polynomial is identically zero: every line is invariant",
        ));
    }
    let (slopes, axis) = invariant_ray_slopes(f, dp)?;
    if slopes.is_empty() && !axis {
        return spiral_stability(f);
    }
    ray_stability(f, &slopes, axis)
}

fn invariant_ray_slopes(
    f: &VectorField,
    dp: invlines::DirectionPoly,
) -> Result<(Vec<f64>, bool), ClassifyError> {
    let axis = dp.x_axis_invariant;
    let mut coeffs = dp.coeffs;
    if axis {
        let tol = band::threshold(f.coeff_scale(), 1);
        coeffs.pop();
        while coeffs.last().is_some_and(|c| c.abs() < tol) {
            coeffs.pop();
        }
    }
    match realroots::real_roots(&Poly::new(coeffs)) {
        Ok(slopes) => Ok((slopes, axis)),
        Err(RootError::ConstantPolynomial) => Ok((Vec::new(), axis)),
        Err(e) => Err(degenerate(format!("slope roots: {e}"))),
    }
}

fn ray_stability(f: &VectorField, slopes: &[f64], axis: bool) -> Result<Stability, ClassifyError> {
    let p_slope = Poly::new(f.p_coeffs().to_vec());
    let mut inward = 0usize;
    let mut outward = 0usize;
    for &kappa in slopes {
        let (v, m) = p_slope.eval_with_magnitude(kappa);
        match band::sign_mag(v, m) {
            Some(s) if s < 0 => inward += 1,
            Some(_) => outward += 1,
            None => {
                return Err(degenerate(format!(
                    "radial speed on the invariant line of slope {kappa} is in the degeneracy band"
                )))
            }
        }
    }
    if axis {
        match band::sign(f.q_at_unit_y(), f.coeff_scale(), 1) {
            Some(s) if s < 0 => inward += 1,
            Some(_) => outward += 1,
            None => {
                return Err(degenerate(
                    "radial speed on the vertical invariant line is in the degeneracy band",
                ))
            }
        }
    }
    let total = inward + outward;
    if total == 0 {
        return Err(degenerate("no invariant ray found for the ray rule"));
    }
    Ok(if inward == total {
        Stability::Attractor
    } else if outward == total {
        Stability::Repeller
    } else {
        Stability::Neither
    })
}

fn spiral_stability(f: &VectorField) -> Result<Stability, ClassifyError> {
    let integrand = |theta: f64| {
        let (x, y) = (theta.cos(), theta.sin());
        let (pv, qv) = f.eval(x, y);
        (x * pv + y * qv) / (x * qv - y * pv).abs()
    };
    let result = quadrature::integrate(integrand, 0.0, TAU, SPIRAL_TOL, SPIRAL_MAX_INTERVALS)
        .map_err(|e| degenerate(format!("spiral integral: {e}")))?;
    if !result.value.is_finite() {
        return Err(degenerate("spiral integral diverged"));
    }
    match band::sign_rel(result.value, SPIRAL_BAND) {
        Some(s) if s < 0 => Ok(Stability::Attractor),
        Some(_) => Ok(Stability::Repeller),
        None => Err(degenerate("spiral integral is in the degeneracy band")),
    }
}

// C3 versus C4. The cyclic saddle/node arrangement at infinity is invariant
// under rotation (rotations preserve or reverse the cyclic order, and the
// alternation predicate survives both), so when one of the four lines is
// vertical the pattern is simply read in a tilted copy of the field.
fn alternating_at_infinity(
    f: &VectorField,
    warnings: &mut Vec<String>,
) -> Result<bool, ClassifyError> {
    match invlines::infinity_signs(f) {
        Ok(s) => return Ok(s.alternating()),
        Err(LineError::WrongLineCount { got }) => {
            return Err(degenerate(format!(
                "slope-root disagreement: discriminant count said 4, root solver found {got}"
            )));
        }
        Err(_) => {}
    }
    for &theta in &ROTATION_ANGLES {
        if let Ok(s) = invlines::infinity_signs(&f.rotated(theta)) {
            warnings.push(ROTATED_FRAME_WARNING.into());
            return Ok(s.alternating());
        }
    }
    Err(degenerate(
        "saddle/node pattern at infinity unreadable in every frame tried",
    ))
}

fn from_index_error(e: IndexError) -> ClassifyError {
    match e {
        IndexError::NotWellPosed { violated } => ClassifyError::Degenerate {
            reasons: vec![format!(
                "index closed form not well-posed: {} in band",
                violated.join(", ")
            )],
        },
        other => ClassifyError::Degenerate {
            reasons: vec![other.to_string()],
        },
    }
}

fn from_line_error(e: LineError) -> ClassifyError {
    ClassifyError::Degenerate {
        reasons: vec![e.to_string()],
    }
}

fn degenerate(reason: impl Into<String>) -> ClassifyError {
    ClassifyError::Degenerate {
        reasons: vec![reason.into()],
    }
}
