//! Phase portraits of planar homogeneous polynomial vector fields.
//!
//! A homogeneous field of degree n is a pair of real forms
//! P(x, y), Q(x, y) of degree n driving x' = P, y' = Q. Its phase portrait
//! is determined up to topological equivalence by the index of the origin
//! and the number of invariant lines, plus one saddle/node pattern at
//! infinity in a single ambiguous case. This crate computes those
//! invariants from the coefficients by sign evaluations of polynomial
//! quantities, names the resulting portrait class (three linear, five
//! quadratic, nine cubic), and decides whether the origin attracts or
//! repels the whole plane when the degree is odd.
//!
//! On top of the classifier sit two quantitative tools: a reproducible
//! parallel Monte Carlo estimator for the probability of each class when
//! the coefficients are i.i.d. standard normal ([`montecarlo`]), and the
//! integral formula for the expected number of invariant lines of such a
//! random field ([`kostlan`]).
//!
//! Everything sign-based is guarded by a relative degeneracy band: inputs
//! too close to a decision surface are reported as degenerate rather than
//! silently pushed to one side. The [`selfcheck`] module cross-validates
//! the closed forms against a winding-number oracle and a companion-matrix
//! root solver on random inputs.

pub mod band;
pub mod classify;
pub mod field;
pub mod index;
pub mod invlines;
pub mod kostlan;
pub mod montecarlo;
pub mod quadrature;
pub mod realroots;
pub mod selfcheck;

pub use classify::{
    classify, classify_with, stability, Classification, ClassifyError, ClassifyPolicy, Label,
    Stability,
};
pub use field::{FieldError, VectorField};
pub use kostlan::expected_lines;
pub use montecarlo::{estimate, EstimateError, EstimationReport, SamplerConfig};
