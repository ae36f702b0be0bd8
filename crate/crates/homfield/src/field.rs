//! Planar homogeneous polynomial vector fields of degree 1 to 3.
//!
//! A field is F = P(x,y) d/dx + Q(x,y) d/dy with P and Q homogeneous of the
//! same degree n. Coefficients are stored lexicographically by descending
//! x-power:
//!
//! ```text
//!   P(x,y) = sum_{j=0..n} p[j] x^(n-j) y^j
//!   Q(x,y) = sum_{j=0..n} q[j] x^(n-j) y^j
//! ```
//!
//! so for n = 2 the six coefficients (a,b,c,d,e,f) read
//! P = a x^2 + b xy + c y^2, Q = d x^2 + e xy + f y^2, and for n = 3 the
//! eight coefficients (a..h) read P = a x^3 + b x^2 y + c x y^2 + d y^3,
//! Q = e x^3 + f x^2 y + g x y^2 + h y^3. The same order is used by the
//! comma-separated text format everywhere in the crate: all of P first,
//! then all of Q.

use std::fmt;

use thiserror::Error;

/// Smallest supported degree.
pub const MIN_DEGREE: usize = 1;
/// Largest supported degree.
pub const MAX_DEGREE: usize = 3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FieldError {
    #[error("degree must be between {MIN_DEGREE} and {MAX_DEGREE}, got {0}")]
    BadDegree(usize),
    #[error("expected {expected} coefficients for degree {degree}, got {got}")]
    CoefficientCount {
        degree: usize,
        expected: usize,
        got: usize,
    },
    #[error("coefficient {index} is not finite")]
    NonFinite { index: usize },
    #[error("scale factor must be finite and positive, got {0}")]
    BadScale(f64),
    #[error("cannot parse coefficient {index:?}: {text}")]
    Parse { index: usize, text: String },
}

/// An immutable homogeneous field. Construction validates the degree, the
/// coefficient counts, and finiteness; afterwards the value never changes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VectorField {
    degree: u8,
    // slots beyond degree are zero; fixed arrays keep sampling allocation-free
    p: [f64; MAX_DEGREE + 1],
    q: [f64; MAX_DEGREE + 1],
}

impl VectorField {
    /// Builds a field of the given degree from the two coefficient slices,
    /// each of length `degree + 1` in the documented order.
    pub fn new(degree: usize, p: &[f64], q: &[f64]) -> Result<Self, FieldError> {
        if !(MIN_DEGREE..=MAX_DEGREE).contains(&degree) {
            return Err(FieldError::BadDegree(degree));
        }
        for (slice, offset) in [(p, 0), (q, degree + 1)] {
            if slice.len() != degree + 1 {
                return Err(FieldError::CoefficientCount {
                    degree,
                    expected: degree + 1,
                    got: slice.len(),
                });
            }
            if let Some(i) = slice.iter().position(|c| !c.is_finite()) {
                return Err(FieldError::NonFinite { index: offset + i });
            }
        }
        let mut pa = [0.0; MAX_DEGREE + 1];
        let mut qa = [0.0; MAX_DEGREE + 1];
        pa[..=degree].copy_from_slice(p);
        qa[..=degree].copy_from_slice(q);
        Ok(Self {
            degree: degree as u8,
            p: pa,
            q: qa,
        })
    }

    /// Parses the comma-separated coefficient format: 2n+2 reals, all of P
    /// first, then all of Q.
    pub fn parse(degree: usize, text: &str) -> Result<Self, FieldError> {
        if !(MIN_DEGREE..=MAX_DEGREE).contains(&degree) {
            return Err(FieldError::BadDegree(degree));
        }
        let mut coeffs = Vec::with_capacity(2 * degree + 2);
        for (index, part) in text.split(',').enumerate() {
            let value: f64 = part.trim().parse().map_err(|_| FieldError::Parse {
                index,
                text: part.trim().to_owned(),
            })?;
            coeffs.push(value);
        }
        if coeffs.len() != 2 * degree + 2 {
            return Err(FieldError::CoefficientCount {
                degree,
                expected: 2 * degree + 2,
                got: coeffs.len(),
            });
        }
        Self::new(degree, &coeffs[..degree + 1], &coeffs[degree + 1..])
    }

    pub fn degree(&self) -> usize {
        self.degree as usize
    }

    /// Coefficients of P, descending x-power.
    pub fn p_coeffs(&self) -> &[f64] {
        &self.p[..=self.degree as usize]
    }

    /// Coefficients of Q, descending x-power.
    pub fn q_coeffs(&self) -> &[f64] {
        &self.q[..=self.degree as usize]
    }

    /// Evaluates (P, Q) at a point.
    pub fn eval(&self, x: f64, y: f64) -> (f64, f64) {
        let n = self.degree as usize;
        // monomials x^(n-j) y^j accumulated in one sweep
        let mut pv = 0.0;
        let mut qv = 0.0;
        let mut xp = [1.0; MAX_DEGREE + 1];
        for j in (0..n).rev() {
            xp[j] = xp[j + 1] * x;
        }
        let mut yp = 1.0;
        for j in 0..=n {
            let m = xp[j] * yp;
            pv += self.p[j] * m;
            qv += self.q[j] * m;
            yp *= y;
        }
        (pv, qv)
    }

    /// The field with all coefficients multiplied by `lambda` (> 0). The
    /// phase portrait is unchanged; only time is rescaled.
    pub fn scaled(&self, lambda: f64) -> Result<Self, FieldError> {
        if !lambda.is_finite() || lambda <= 0.0 {
            return Err(FieldError::BadScale(lambda));
        }
        let mut out = *self;
        for j in 0..=self.degree as usize {
            out.p[j] *= lambda;
            out.q[j] *= lambda;
        }
        Ok(out)
    }

    /// The field conjugated by a rotation of angle `theta`:
    /// g(v) = R(-theta) f(R(theta) v). The phase portrait turns rigidly, so
    /// index, invariant-line count and stability are untouched while the
    /// coefficients change completely; useful for escaping frames where a
    /// line of interest is vertical.
    pub fn rotated(&self, theta: f64) -> Self {
        let n = self.degree as usize;
        let (s, c) = theta.sin_cos();
        let mut out = Self {
            degree: self.degree,
            p: [0.0; 4],
            q: [0.0; 4],
        };
        for j in 0..=n {
            // x^(n-j) y^j after substituting (x, y) -> (cx - sy, sx + cy)
            let basis = convolve(&binomial_power(c, -s, n - j), &binomial_power(s, c, j));
            let (pj, qj) = (self.p[j], self.q[j]);
            for (k, &b) in basis.iter().enumerate() {
                out.p[k] += (c * pj + s * qj) * b;
                out.q[k] += (c * qj - s * pj) * b;
            }
        }
        out
    }

    /// Largest coefficient magnitude; the input scale for degeneracy bands.
    pub fn coeff_scale(&self) -> f64 {
        let n = self.degree as usize;
        self.p[..=n]
            .iter()
            .chain(&self.q[..=n])
            .fold(0.0f64, |m, c| m.max(c.abs()))
    }

    /// P restricted to the ray of slope kappa: p_n(1, kappa).
    pub fn p_on_slope(&self, kappa: f64) -> f64 {
        horner(&self.p[..=self.degree as usize], kappa)
    }

    /// Q restricted to the ray of slope kappa: q_n(1, kappa).
    pub fn q_on_slope(&self, kappa: f64) -> f64 {
        horner(&self.q[..=self.degree as usize], kappa)
    }

    /// q_n(0, 1), the Q component on the positive y-axis.
    pub fn q_at_unit_y(&self) -> f64 {
        self.q[self.degree as usize]
    }

    /// Coefficients in the text format order (P then Q).
    pub fn coeff_string(&self) -> String {
        let n = self.degree as usize;
        self.p[..=n]
            .iter()
            .chain(&self.q[..=n])
            .map(|c| format!("{c}"))
            .collect::<Vec<_>>()
            .join(",")
    }
}

// p_n(1,k) = p[0] + p[1] k + ... + p[n] k^n, evaluated by Horner
fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

// coefficients of (a·x + b·y)^k, ordered by ascending y power
fn binomial_power(a: f64, b: f64, k: usize) -> Vec<f64> {
    let mut out = vec![1.0];
    let mut binom = 1.0;
    for i in 1..=k {
        binom *= (k - i + 1) as f64 / i as f64;
        out.push(binom);
    }
    for (i, coeff) in out.iter_mut().enumerate() {
        *coeff *= a.powi((k - i) as i32) * b.powi(i as i32);
    }
    out
}

fn convolve(u: &[f64], v: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; u.len() + v.len() - 1];
    for (i, &ui) in u.iter().enumerate() {
        for (j, &vj) in v.iter().enumerate() {
            out[i + j] += ui * vj;
        }
    }
    out
}

impl fmt::Display for VectorField {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.degree as usize;
        write!(out, "P = {}, Q = {}", poly_string(&self.p[..=n], n), poly_string(&self.q[..=n], n))
    }
}

fn poly_string(coeffs: &[f64], n: usize) -> String {
    let mut terms = Vec::new();
    for (j, &c) in coeffs.iter().enumerate() {
        if c == 0.0 {
            continue;
        }
        let mono = match (n - j, j) {
            (0, 0) => String::new(),
            (xp, 0) => format!("x{}", sup(xp)),
            (0, yp) => format!("y{}", sup(yp)),
            (xp, yp) => format!("x{}y{}", sup(xp), sup(yp)),
        };
        let lead = terms.is_empty();
        let sign = if c < 0.0 {
            if lead { "-" } else { " - " }
        } else if lead {
            ""
        } else {
            " + "
        };
        let mag = c.abs();
        if mag == 1.0 && !mono.is_empty() {
            terms.push(format!("{sign}{mono}"));
        } else {
            terms.push(format!("{sign}{mag}{mono}"));
        }
    }
    if terms.is_empty() {
        "0".to_owned()
    } else {
        terms.concat()
    }
}

fn sup(power: usize) -> String {
    if power == 1 {
        String::new()
    } else {
        format!("^{power}")
    }
}
