//! Topological index of the origin.
//!
//! Closed forms per degree: sign of the determinant for linear fields, and
//! sign tables in derived quantities (λ, μ) and (r, s, p, q, h₁..h₄, α, β,
//! γ, C₂, D₃) for quadratic and cubic fields. A winding-number traversal of
//! the unit circle serves as a formula-independent oracle.
//!
//! Every sign decision runs through a relative degeneracy band: alongside
//! each derived value we carry its first-order sensitivity to relative
//! perturbations of the coefficients, and a value that a relative
//! perturbation of `band::REL_BAND` could drive to zero is treated as
//! unsigned. Fields that trip a band are reported as not well-posed rather
//! than silently classified.

use crate::band;
use crate::field::VectorField;
use std::ops::{Add, Div, Mul, Neg, Sub};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IndexError {
    #[error("operation expects degree {expected}, field has degree {got}")]
    WrongDegree { expected: usize, got: usize },
    #[error("determinant inside the degeneracy band; origin is not an elementary singularity")]
    DegenerateField,
    #[error("field is not well-posed for the closed-form index; conditions in band: {}", violated.join(", "))]
    NotWellPosed { violated: Vec<&'static str> },
    #[error("field norm drops below the vanishing threshold on the sample circle")]
    VanishesOnCircle,
    #[error("winding traversal did not stabilize within {max_samples} samples")]
    NoConvergence { max_samples: usize },
}

/// Derived quantities of the quadratic sign table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticIndexData {
    pub lambda: f64,
    pub mu: f64,
    pub j: f64,
    pub epsilon: i8,
    pub index: i32,
}

/// Derived quantities of the cubic sign table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicIndexData {
    pub r: f64,
    pub s: f64,
    pub p: f64,
    pub q: f64,
    pub h: [f64; 4],
    pub j: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub c2: f64,
    pub d3: f64,
    pub epsilon: i8,
    pub index: i32,
}

/// A value paired with its first-order sensitivity: `m` bounds how far `v`
/// moves when every original coefficient is perturbed by a relative epsilon,
/// per unit of epsilon. Sums add sensitivities, products obey the Leibniz
/// rule, and quotients add the divisor's contribution. `|v| <= REL_BAND * m`
/// then means a relative coefficient perturbation of `REL_BAND` could flip
/// the sign of `v`, i.e. the field sits within the band of the stratum
/// `v = 0`, and the computed sign is not meaningful. Cancellation is covered
/// by the same test: a sum that nearly cancels keeps the large `m` of its
/// terms while `v` collapses.
#[derive(Debug, Clone, Copy)]
struct Mag {
    v: f64,
    m: f64,
}

impl Mag {
    fn of(v: f64) -> Self {
        Mag { v, m: v.abs() }
    }

    /// Sign gate. The sensitivity `m` is the yardstick itself: it scales
    /// with the inputs, so no absolute floor is imposed. An exact zero with
    /// zero sensitivity (all contributing terms vanish) is banded.
    fn sign(self) -> Option<i8> {
        band::sign_rel(self.v, band::REL_BAND * self.m)
    }

    /// Sign gate for discriminant-type quantities, which vanish to second
    /// order on their stratum and therefore get the narrower band.
    fn sign_disc(self) -> Option<i8> {
        band::sign_rel(self.v, band::DISC_REL_BAND * self.m)
    }
}

impl Add for Mag {
    type Output = Mag;
    fn add(self, o: Mag) -> Mag {
        Mag {
            v: self.v + o.v,
            m: self.m + o.m,
        }
    }
}

impl Sub for Mag {
    type Output = Mag;
    fn sub(self, o: Mag) -> Mag {
        Mag {
            v: self.v - o.v,
            m: self.m + o.m,
        }
    }
}

impl Mul for Mag {
    type Output = Mag;
    fn mul(self, o: Mag) -> Mag {
        Mag {
            v: self.v * o.v,
            m: self.v.abs() * o.m + o.v.abs() * self.m,
        }
    }
}

impl Mul<f64> for Mag {
    type Output = Mag;
    fn mul(self, k: f64) -> Mag {
        Mag {
            v: self.v * k,
            m: self.m * k.abs(),
        }
    }
}

impl Div for Mag {
    type Output = Mag;
    // only called after the divisor's own sign check passed
    fn div(self, den: Mag) -> Mag {
        let v = self.v / den.v;
        Mag {
            v,
            m: (self.m + v.abs() * den.m) / den.v.abs(),
        }
    }
}

impl Neg for Mag {
    type Output = Mag;
    fn neg(self) -> Mag {
        Mag {
            v: -self.v,
            m: self.m,
        }
    }
}

// x*y - u*w as a banded quantity
fn minor(x: f64, y: f64, u: f64, w: f64) -> Mag {
    Mag::of(x * y) - Mag::of(u * w)
}

/// Index of a linear field: -1 for a saddle, +1 otherwise.
pub fn linear_index(f: &VectorField) -> Result<i32, IndexError> {
    expect_degree(f, 1)?;
    let &[a, b] = f.p_coeffs() else {
        unreachable!()
    };
    let &[c, d] = f.q_coeffs() else {
        unreachable!()
    };
    match minor(a, d, b, c).sign() {
        Some(s) if s < 0 => Ok(-1),
        Some(_) => Ok(1),
        None => Err(IndexError::DegenerateField),
    }
}

/// Index of a quadratic field via the (λ, μ) sign table.
pub fn quadratic_index(f: &VectorField) -> Result<i32, IndexError> {
    quadratic_index_data(f).map(|d| d.index)
}

pub fn quadratic_index_data(f: &VectorField) -> Result<QuadraticIndexData, IndexError> {
    expect_degree(f, 2)?;
    let &[a, b, c] = f.p_coeffs() else {
        unreachable!()
    };
    let &[d, e, g] = f.q_coeffs() else {
        unreachable!()
    };
    // g is the trailing Q coefficient (y² term); the name f is taken
    let af_cd = minor(a, g, c, d);
    let lam_num = minor(a, e, b, d); // λ = -lam_num / af_cd
    let mu_num = minor(b, g, c, e); // μ = -mu_num / af_cd
    let k = lam_num * mu_num - af_cd * af_cd; // sign(λμ - 1)
    let s = lam_num + mu_num; // -(λ+μ)·(af-cd)

    let mut violated = Vec::new();
    let den_sign = record(&mut violated, "af-cd", af_cd.sign());
    record(&mut violated, "lambda", lam_num.sign());
    record(&mut violated, "mu", mu_num.sign());
    let k_sign = record(&mut violated, "lambda*mu-1", k.sign());
    let s_sign = record(&mut violated, "lambda+mu", s.sign());
    if !violated.is_empty() {
        return Err(IndexError::NotWellPosed { violated });
    }
    let (den_sign, k_sign, s_sign) = (den_sign.unwrap(), k_sign.unwrap(), s_sign.unwrap());

    let lambda = -lam_num.v / af_cd.v;
    let mu = -mu_num.v / af_cd.v;
    let j = 4.0 * af_cd.v * (1.0 - lambda * mu);
    // j = -4K/(af-cd), so its sign is robust even when the direct product
    // above cancels
    let epsilon = -k_sign * den_sign;
    let index = if k_sign < 0 {
        0
    } else if k_sign * s_sign > 0 {
        // ε(λ+μ) and K·S share a sign once K > 0
        2
    } else {
        -2
    };
    Ok(QuadraticIndexData {
        lambda,
        mu,
        j,
        epsilon,
        index,
    })
}

/// Index of a cubic field via the (α, β, γ, C₂, D₃) sign table.
pub fn cubic_index(f: &VectorField) -> Result<i32, IndexError> {
    cubic_index_data(f).map(|d| d.index)
}

pub fn cubic_index_data(f: &VectorField) -> Result<CubicIndexData, IndexError> {
    expect_degree(f, 3)?;
    let &[a, b, c, d] = f.p_coeffs() else {
        unreachable!()
    };
    let &[e, fq, g, h] = f.q_coeffs() else {
        unreachable!()
    };

    let mut violated = Vec::new();

    let dd = minor(a, h, d, e);
    let Some(dd_sign) = dd.sign() else {
        return Err(IndexError::NotWellPosed {
            violated: vec!["ah-de"],
        });
    };

    // Reduction relations x³ ≡ r·x²y + s·xy², y³ ≡ p·x²y + q·xy² modulo the
    // field, obtained from h·P - d·Q and a·Q - e·P, give r, s, p, q and from
    // them h₁..h₄, j, α, β, γ, C₂, D₃ as rational functions with poles at
    // ah-de = 0 and 1-ps = 0. Evaluating that chain directly makes the
    // sensitivity tracking blind to cancellations that are structural (the
    // poles largely divide out of the final quantities), so fields with a
    // merely smallish ah-de would trip bands they are nowhere near. The
    // gates therefore read cleared-denominator forms: every decided
    // quantity is a polynomial over a power of W = (ah-de)·DEN, where
    // DEN = (ah-de)²·(1-ps) is itself a polynomial. Even powers of W drop
    // out of the sign; odd powers contribute sign(W).
    let m_bh = minor(b, h, d, fq);
    let m_ch = minor(c, h, d, g);
    let m_af = minor(a, fq, b, e);
    let m_ag = minor(a, g, c, e);

    let den = dd * dd - m_af * m_ch;
    let Some(den_sign) = den.sign() else {
        return Err(IndexError::NotWellPosed {
            violated: vec!["1-ps"],
        });
    };
    let w = dd * den;
    let w_sign = dd_sign * den_sign;

    // numerators of h₁..h₄ over the common denominator W
    let n1 = m_bh * m_bh * dd - m_bh * m_ch * m_ag - m_ch * den;
    let n2 = dd * (m_ch * m_ag - m_bh * dd);
    let n3 = dd * (m_af * m_bh - m_ag * dd);
    let n4 = m_ag * m_ag * dd - m_af * m_ag * m_bh - m_af * den;

    // j·W; the plain coefficient block is the part of j with no pole
    let j_num = m_af * n1 * 3.0
        + m_ag * n2 * 6.0
        + (Mag::of(a * h) * 9.0 + Mag::of(b * g) * 3.0 - Mag::of(c * fq) * 3.0 - Mag::of(d * e) * 9.0) * w
        + m_bh * n3 * 6.0
        + m_ch * n4 * 3.0;
    let Some(j_num_sign) = j_num.sign() else {
        violated.push("j");
        return Err(IndexError::NotWellPosed { violated });
    };
    let eps = j_num_sign * w_sign;

    // α = -ε·A/W, β = B/W², γ = ε·G/W³, C₂ = ε·C2P/W³, D₃ = D/W⁶
    let big_a = w + n1 + n4;
    let big_b = n1 * n4 - n2 * n2 - n3 * n3 + (n1 + n4) * w - w * w;
    let big_g = n1 * n3 * n3 + n2 * n2 * n4 - (n1 * n4 + n2 * n3 * 2.0) * w + w * w * w;
    let big_c2 = -(big_a * big_b + big_g * 9.0);
    let big_d = big_a * big_a * big_b * big_b - big_b * big_b * big_b * 4.0
        + big_a * big_a * big_a * big_g * 4.0
        - big_a * big_b * big_g * 18.0
        - big_g * big_g * 27.0;

    let beta_sign = record(&mut violated, "beta", big_b.sign());
    let gamma_sign = record(&mut violated, "gamma", big_g.sign());
    let c2_sign = record(&mut violated, "C2", big_c2.sign());
    let d3_sign = record(&mut violated, "D3", big_d.sign_disc());
    if !violated.is_empty() {
        return Err(IndexError::NotWellPosed { violated });
    }
    let beta_sign = beta_sign.unwrap();
    let gamma_sign = eps * gamma_sign.unwrap() * w_sign;
    let c2_sign = eps * c2_sign.unwrap() * w_sign;
    let d3_sign = d3_sign.unwrap();

    let index = match (d3_sign > 0, c2_sign > 0, beta_sign > 0, gamma_sign > 0) {
        (true, true, true, true) => -3,
        (true, false, true, false) => 3,
        (false, _, _, true) | (true, true, _, false) | (true, false, false, false) => -1,
        (false, _, _, false) | (true, false, _, true) | (true, true, false, true) => 1,
    };

    // Reported diagnostics use the plain rational chain; nothing below is
    // banded or decided on.
    let r = -m_bh.v / dd.v;
    let s = -m_ch.v / dd.v;
    let p = -m_af.v / dd.v;
    let q = -m_ag.v / dd.v;
    let denv = 1.0 - p * s;
    let r_sq = r + s * q;
    let pr_q = p * r + q;
    let h1 = (r * r_sq + s * denv) / denv;
    let h2 = r_sq / denv;
    let h3 = pr_q / denv;
    let h4 = (p * denv + q * pr_q) / denv;
    let j = m_af.v * 3.0 * h1
        + m_ag.v * 6.0 * h2
        + (9.0 * a * h + 3.0 * b * g - 3.0 * c * fq - 9.0 * d * e)
        + m_bh.v * 6.0 * h3
        + m_ch.v * 3.0 * h4;
    let epsf = f64::from(eps);
    let alpha = -(1.0 + h1 + h4) * epsf;
    let beta = h1 * h4 - h2 * h2 - h3 * h3 + h1 + h4 - 1.0;
    let gamma = (h1 * h3 * h3 + h2 * h2 * h4 - h1 * h4 - 2.0 * h2 * h3 + 1.0) * epsf;
    let c2 = alpha * beta - 9.0 * gamma;
    let d3 = -27.0 * gamma * gamma + 18.0 * alpha * beta * gamma - 4.0 * alpha * alpha * alpha * gamma
        + alpha * alpha * beta * beta
        - 4.0 * beta * beta * beta;

    Ok(CubicIndexData {
        r,
        s,
        p,
        q,
        h: [h1, h2, h3, h4],
        j,
        alpha,
        beta,
        gamma,
        c2,
        d3,
        epsilon: eps,
        index,
    })
}

/// Dispatches to the closed form for the field's degree.
pub fn index(f: &VectorField) -> Result<i32, IndexError> {
    match f.degree() {
        1 => linear_index(f),
        2 => quadratic_index(f),
        _ => cubic_index(f),
    }
}

pub const WINDING_INITIAL_SAMPLES: usize = 1 << 10;
pub const WINDING_MAX_SAMPLES: usize = 1 << 20;
const WINDING_VANISH_REL: f64 = 1e-13;

/// Degree of f/‖f‖ on the circle of the given radius: sums the signed angle
/// between consecutive field directions around one traversal. Refinement
/// doubles the sample count until no step turns by `angular_tol` or more and
/// the accumulated winding sits within 0.01 of an integer.
pub fn winding_index(f: &VectorField, radius: f64, angular_tol: f64) -> Result<i32, IndexError> {
    assert!(
        radius.is_finite() && radius > 0.0,
        "winding radius must be positive"
    );
    assert!(
        angular_tol > 0.0 && angular_tol <= std::f64::consts::PI,
        "angular tolerance must lie in (0, pi]"
    );
    let scale = f.coeff_scale();
    let vanish = WINDING_VANISH_REL * scale * radius.powi(f.degree() as i32);
    if scale == 0.0 {
        return Err(IndexError::VanishesOnCircle);
    }

    let mut samples = WINDING_INITIAL_SAMPLES;
    loop {
        match sweep(f, radius, samples, vanish, angular_tol) {
            Ok(turns) => {
                let nearest = turns.round();
                if (turns - nearest).abs() < 0.01 {
                    return Ok(nearest as i32);
                }
            }
            Err(SweepFail::Vanished) => return Err(IndexError::VanishesOnCircle),
            Err(SweepFail::StepTooLarge) => {}
        }
        samples *= 2;
        if samples > WINDING_MAX_SAMPLES {
            return Err(IndexError::NoConvergence {
                max_samples: WINDING_MAX_SAMPLES,
            });
        }
    }
}

enum SweepFail {
    Vanished,
    StepTooLarge,
}

fn sweep(
    f: &VectorField,
    radius: f64,
    samples: usize,
    vanish: f64,
    angular_tol: f64,
) -> Result<f64, SweepFail> {
    let step = std::f64::consts::TAU / samples as f64;
    let eval_at = |k: usize| {
        let theta = step * k as f64;
        f.eval(radius * theta.cos(), radius * theta.sin())
    };
    let first = eval_at(0);
    let mut prev = first;
    let mut total = 0.0;
    for k in 1..=samples {
        let cur = if k == samples { first } else { eval_at(k) };
        if prev.0.hypot(prev.1) < vanish {
            return Err(SweepFail::Vanished);
        }
        let cross = prev.0 * cur.1 - prev.1 * cur.0;
        let dot = prev.0 * cur.0 + prev.1 * cur.1;
        let delta = cross.atan2(dot);
        if delta.abs() >= angular_tol {
            return Err(SweepFail::StepTooLarge);
        }
        total += delta;
        prev = cur;
    }
    Ok(total / std::f64::consts::TAU)
}

fn expect_degree(f: &VectorField, expected: usize) -> Result<(), IndexError> {
    if f.degree() != expected {
        return Err(IndexError::WrongDegree {
            expected,
            got: f.degree(),
        });
    }
    Ok(())
}

fn record(
    violated: &mut Vec<&'static str>,
    name: &'static str,
    sign: Option<i8>,
) -> Option<i8> {
    if sign.is_none() {
        violated.push(name);
    }
    sign
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::VectorField;
    use std::f64::consts::FRAC_PI_2;

    fn field(degree: usize, coeffs: &[f64]) -> VectorField {
        let (p, q) = coeffs.split_at(coeffs.len() / 2);
        VectorField::new(degree, p, q).unwrap()
    }

    #[test]
    fn linear_signs() {
        assert_eq!(linear_index(&field(1, &[1.0, 0.0, 0.0, -1.0])), Ok(-1));
        assert_eq!(linear_index(&field(1, &[1.0, 0.0, 0.0, 2.0])), Ok(1));
        // rotation with weak outward drift
        let spiral = field(1, &[0.1, 1.0, -1.0, 0.1]);
        assert_eq!(linear_index(&spiral), Ok(1));
        assert_eq!(winding_index(&spiral, 1.0, FRAC_PI_2), Ok(1));
        assert_eq!(
            linear_index(&field(1, &[1.0, 0.0, 1.0, 0.0])),
            Err(IndexError::DegenerateField)
        );
    }

    #[test]
    fn quadratic_spec_cases() {
        let zero_case = field(2, &[1.0, 2.0, 0.0, 0.0, -1.0, 1.0]);
        let data = quadratic_index_data(&zero_case).unwrap();
        assert_eq!(data.index, 0);
        assert!((data.lambda - 1.0).abs() < 1e-12);
        assert!((data.mu + 2.0).abs() < 1e-12);
        assert_eq!(winding_index(&zero_case, 1.0, FRAC_PI_2), Ok(0));

        let plus_two = field(2, &[1.0, 0.1, -1.0, 0.1, 2.0, 0.0]);
        let data = quadratic_index_data(&plus_two).unwrap();
        assert_eq!(data.index, 2);
        assert_eq!(data.epsilon, -1);
        assert!(data.j < 0.0);
        assert_eq!(winding_index(&plus_two, 1.0, FRAC_PI_2), Ok(2));

        let err = quadratic_index(&field(2, &[1.0, 0.0, 0.0, 0.0, 0.0, 1.0])).unwrap_err();
        match err {
            IndexError::NotWellPosed { violated } => {
                assert!(violated.contains(&"lambda"), "violated = {violated:?}");
            }
            other => panic!("expected NotWellPosed, got {other:?}"),
        }
    }

    #[test]
    fn quadratic_sign_flip() {
        let base = field(2, &[1.0, 0.1, -1.0, 0.1, 2.0, 0.0]);
        let neg_q: Vec<f64> = base.q_coeffs().iter().map(|c| -c).collect();
        let flipped = VectorField::new(2, base.p_coeffs(), &neg_q).unwrap();
        assert_eq!(quadratic_index(&flipped), Ok(-2));
        assert_eq!(winding_index(&flipped, 1.0, FRAC_PI_2), Ok(-2));
    }

    // fixed small offsets standing in for a generic perturbation
    const JIGGLE: [f64; 8] = [
        3.2e-3, -1.7e-3, 2.4e-3, -2.9e-3, 1.1e-3, 2.8e-3, -1.3e-3, 1.9e-3,
    ];

    fn perturbed(base: [f64; 8]) -> VectorField {
        let mut c = base;
        for (ci, di) in c.iter_mut().zip(JIGGLE) {
            *ci += di;
        }
        field(3, &c)
    }

    #[test]
    fn cubic_diagonal_node() {
        // x³ / y³ with every coefficient nudged off the degenerate surface
        let f = perturbed([1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
        let data = cubic_index_data(&f).unwrap();
        assert_eq!(data.index, 1);
        assert_eq!(winding_index(&f, 1.0, FRAC_PI_2), Ok(1));
    }

    #[test]
    fn cubic_tolerates_vanishing_reduction_coefficients() {
        // P = x³ - y³, Q = x³ + x²y has s = q = 0 exactly, yet every quantity
        // the sign table reads is comfortably nonzero (j = 18, D₃ = 144).
        let f = field(3, &[1.0, 0.0, 0.0, -1.0, 1.0, 1.0, 0.0, 0.0]);
        let data = cubic_index_data(&f).unwrap();
        assert_eq!(data.s, 0.0);
        assert_eq!(data.q, 0.0);
        assert_eq!(data.index, 1);
        assert_eq!(winding_index(&f, 1.0, FRAC_PI_2), Ok(1));
    }

    #[test]
    fn cubic_complex_cube() {
        // real and imaginary parts of z³, nudged to well-posedness
        let f = perturbed([1.0, 0.0, -3.0, 0.0, 0.0, 3.0, 0.0, -1.0]);
        assert_eq!(cubic_index(&f), Ok(3));
        assert_eq!(winding_index(&f, 1.0, FRAC_PI_2), Ok(3));

        let swapped = perturbed([0.0, 3.0, 0.0, -1.0, 1.0, 0.0, -3.0, 0.0]);
        assert_eq!(cubic_index(&swapped), Ok(-3));
        assert_eq!(winding_index(&swapped, 1.0, FRAC_PI_2), Ok(-3));
    }

    #[test]
    fn winding_reference_maps() {
        assert_eq!(
            winding_index(&field(1, &[1.0, 0.0, 0.0, 1.0]), 1.0, FRAC_PI_2),
            Ok(1)
        );
        // complex z²: P = x² - y², Q = 2xy
        assert_eq!(
            winding_index(
                &field(2, &[1.0, 0.0, -1.0, 0.0, 2.0, 0.0]),
                1.0,
                FRAC_PI_2
            ),
            Ok(2)
        );
        // complex z³
        assert_eq!(
            winding_index(
                &field(3, &[1.0, 0.0, -3.0, 0.0, 0.0, 3.0, 0.0, -1.0]),
                1.0,
                FRAC_PI_2
            ),
            Ok(3)
        );
    }

    #[test]
    fn winding_detects_vanishing() {
        // P = Q = x vanishes on the circle where x = 0
        assert_eq!(
            winding_index(&field(1, &[1.0, 0.0, 1.0, 0.0]), 1.0, FRAC_PI_2),
            Err(IndexError::VanishesOnCircle)
        );
    }

    #[test]
    fn index_parity_bound() {
        for (deg, coeffs) in [
            (1usize, vec![0.4, -1.2, 0.8, 0.9]),
            (2, vec![1.0, 0.1, -1.0, 0.1, 2.0, 0.0]),
            (3, vec![1.2, -0.3, 0.4, 0.9, -0.7, 1.1, 0.5, -0.8]),
        ] {
            let f = field(deg, &coeffs);
            let i = index(&f).unwrap();
            assert!(i.unsigned_abs() as usize <= deg);
            assert_eq!(i.rem_euclid(2) as usize, deg % 2);
            assert_eq!(i, winding_index(&f, 1.0, FRAC_PI_2).unwrap());
        }
    }

    #[test]
    fn wrong_degree_is_reported() {
        let quat = field(2, &[1.0, 0.0, -1.0, 0.0, 2.0, 0.0]);
        assert_eq!(
            linear_index(&quat),
            Err(IndexError::WrongDegree {
                expected: 1,
                got: 2
            })
        );
        assert!(matches!(
            cubic_index(&quat),
            Err(IndexError::WrongDegree { .. })
        ));
    }
}
