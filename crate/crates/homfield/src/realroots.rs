//! Real-root counting for low-degree real polynomials.
//!
//! Three routes are deliberately kept independent so they can check each
//! other: closed-form sign classifications for cubics and quartics (the
//! production path for root *counts*), a Sturm-chain counter (the
//! measure-zero fallback), and a companion-matrix eigenvalue solver, which
//! doubles as the numeric oracle for the self-check suites and as the
//! supplier of root *values* where those are genuinely needed (infinity
//! signs, stability along invariant rays).

use nalgebra::{Complex, DMatrix, Schur};
use thiserror::Error;

use crate::band;

/// Relative imaginary-part threshold below which an eigenvalue counts as a
/// real root: |Im| < TAU_IM * (1 + |Re|).
pub const TAU_IM: f64 = 1e-8;

/// Roots closer than ROOT_SEPARATION * (1 + |x|) are treated as a
/// degeneracy by callers that need strict ordering, never silently merged.
pub const ROOT_SEPARATION: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RootError {
    #[error("sign quantity {quantity} is inside the degeneracy band")]
    DegenerateSigns { quantity: &'static str },
    #[error("polynomial is not squarefree (gcd with derivative has positive degree)")]
    NonSquarefree,
    #[error("interval endpoint {0} is a root")]
    EndpointRoot(f64),
    #[error("interval is empty or reversed")]
    InvalidInterval,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("constant polynomial has no roots to locate")]
    ConstantPolynomial,
    #[error("eigenvalue iteration did not converge on the companion matrix")]
    EigenFailure,
}

/// Dense univariate polynomial, coefficients lowest degree first. Exact
/// trailing zeros are trimmed on construction; the zero polynomial is kept
/// representable and reported by [`Poly::is_zero`].
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<f64>,
}

impl Poly {
    /// From coefficients lowest degree first.
    pub fn new(coeffs: Vec<f64>) -> Self {
        let mut coeffs = coeffs;
        while coeffs.len() > 1 && *coeffs.last().unwrap() == 0.0 {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Self { coeffs }
    }

    /// From coefficients highest degree first.
    pub fn from_descending(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().rev().copied().collect())
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs == [0.0]
    }

    /// Degree, or None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    /// Value together with the sum of term magnitudes, for banded signs.
    pub fn eval_with_magnitude(&self, x: f64) -> (f64, f64) {
        let mut value = 0.0;
        let mut magnitude = 0.0;
        let mut xp = 1.0;
        for &c in &self.coeffs {
            value += c * xp;
            magnitude += (c * xp).abs();
            xp *= x;
        }
        (value, magnitude)
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::new(vec![0.0]);
        }
        Poly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * (i + 1) as f64)
                .collect(),
        )
    }

    /// Coefficients of p(x + delta): same degree, same leading coefficient,
    /// every root moved by -delta. Computed by repeated synthetic division.
    pub fn translated(&self, delta: f64) -> Poly {
        let mut b: Vec<f64> = self.coeffs.iter().rev().copied().collect();
        let n = b.len();
        for i in 0..n {
            for j in 1..n - i {
                b[j] += delta * b[j - 1];
            }
        }
        Poly::from_descending(&b)
    }
}

// ---------------------------------------------------------------------------
// Sturm chains
// ---------------------------------------------------------------------------

/// Number of distinct real roots of a squarefree `p` in the open interval
/// (lo, hi); the bounds may be infinite. Finite endpoints must not be roots.
pub fn sturm_count(p: &Poly, lo: f64, hi: f64) -> Result<usize, RootError> {
    if !(lo < hi) {
        return Err(RootError::InvalidInterval);
    }
    if p.is_zero() {
        return Err(RootError::ZeroPolynomial);
    }
    if p.degree() == Some(0) {
        return Ok(0);
    }
    let chain = sturm_chain(p)?;
    let v_lo = sign_variations(&chain, lo)?;
    let v_hi = sign_variations(&chain, hi)?;
    Ok(v_lo.saturating_sub(v_hi))
}

// p0 = p, p1 = p', p_{k+1} = -(p_{k-1} mod p_k); every element rescaled to
// unit leading magnitude to limit coefficient growth. A remainder whose
// coefficients all fall inside the relative band terminates the chain; if
// that happens while the divisor still has positive degree the gcd(p, p')
// is nontrivial and p is not squarefree.
fn sturm_chain(p: &Poly) -> Result<Vec<Poly>, RootError> {
    let mut chain = vec![normalize_leading(p.clone()), normalize_leading(p.derivative())];
    loop {
        let g = chain.last().unwrap();
        if g.degree().unwrap_or(0) == 0 {
            if g.is_zero() && chain[chain.len() - 2].degree().unwrap_or(0) >= 1 {
                return Err(RootError::NonSquarefree);
            }
            return Ok(chain);
        }
        let f = &chain[chain.len() - 2];
        let rem = poly_rem(f, g);
        let rem_mag = rem.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        let f_mag = f.coeffs().iter().fold(0.0f64, |m, c| m.max(c.abs()));
        if rem_mag < band::REL_BAND * f_mag.max(1.0) {
            // exact division: gcd(p, p') = g up to scale, positive degree
            return Err(RootError::NonSquarefree);
        }
        let mut neg: Vec<f64> = rem.iter().map(|c| -c).collect();
        while neg.len() > 1 && neg.last().unwrap().abs() < band::REL_BAND * rem_mag {
            neg.pop();
        }
        chain.push(normalize_leading(Poly::new(neg)));
    }
}

fn normalize_leading(p: Poly) -> Poly {
    match p.degree() {
        None => p,
        Some(_) => {
            let lead = p.coeffs().last().unwrap().abs();
            Poly::new(p.coeffs().iter().map(|c| c / lead).collect())
        }
    }
}

// remainder of f by g, ascending coefficients; deg(g) >= 1
fn poly_rem(f: &Poly, g: &Poly) -> Vec<f64> {
    let dg = g.degree().unwrap();
    let gc = g.coeffs();
    let mut r: Vec<f64> = f.coeffs().to_vec();
    while r.len() > dg {
        let factor = r.last().unwrap() / gc[dg];
        let top = r.len() - 1;
        for i in 0..dg {
            r[top - dg + i] -= factor * gc[i];
        }
        r.pop();
    }
    r
}

fn sign_variations(chain: &[Poly], x: f64) -> Result<usize, RootError> {
    let mut signs = Vec::with_capacity(chain.len());
    for (k, poly) in chain.iter().enumerate() {
        let s = if x.is_infinite() {
            sign_at_infinity(poly, x > 0.0)
        } else {
            let (v, mag) = poly.eval_with_magnitude(x);
            band::sign_mag(v, mag).unwrap_or(0)
        };
        if k == 0 && s == 0 && x.is_finite() {
            return Err(RootError::EndpointRoot(x));
        }
        signs.push(s);
    }
    // zero entries are disregarded when counting alternations
    let mut changes = 0;
    let mut prev = 0i8;
    for s in signs.into_iter().filter(|s| *s != 0) {
        if prev != 0 && s != prev {
            changes += 1;
        }
        prev = s;
    }
    Ok(changes)
}

fn sign_at_infinity(p: &Poly, positive: bool) -> i8 {
    match p.degree() {
        None => 0,
        Some(d) => {
            let lead = *p.coeffs().last().unwrap();
            let mut s = if lead > 0.0 { 1i8 } else { -1 };
            if !positive && d % 2 == 1 {
                s = -s;
            }
            s
        }
    }
}

// ---------------------------------------------------------------------------
// Cubic sign lemma
// ---------------------------------------------------------------------------

/// The sign quantities a root classification rests on. Carried in
/// [`RealRootProfile`] so callers can audit a decision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SignWitnesses {
    Cubic { c2: f64, d2: f64, d3: f64 },
    Quartic { c2: f64, c3: f64, d2: f64, d3: f64, d4: f64 },
}

/// Root-sign classification of a monic real polynomial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealRootProfile {
    pub n_negative: usize,
    pub n_zero: usize,
    pub n_positive: usize,
    pub distinct: bool,
    pub witnesses: SignWitnesses,
}

/// Witness quantities for x^3 + a x^2 + b x + c.
pub fn cubic_witnesses(a: f64, b: f64, c: f64) -> SignWitnesses {
    let c2 = a * b - 9.0 * c;
    let d2 = a * a - 3.0 * b;
    let d3 = -27.0 * c * c + 18.0 * a * b * c - 4.0 * a * a * a * c + a * a * b * b
        - 4.0 * b * b * b;
    SignWitnesses::Cubic { c2, d2, d3 }
}

/// Sign classification of the roots of x^3 + a x^2 + b x + c.
///
/// d3 < 0: one simple real root, two complex; the real root is negative
/// when c > 0 and positive when c < 0. d3 > 0: three simple real roots
/// whose negative/positive split is decided by the signs of (c2, b, c).
/// Each branch is gated only on the quantities it actually consumes; any
/// gate inside the band is a `DegenerateSigns` error and the caller falls
/// back to the Sturm machine.
pub fn cubic_signature(a: f64, b: f64, c: f64) -> Result<RealRootProfile, RootError> {
    let scale = a.abs().max(b.abs()).max(c.abs());
    let witnesses = cubic_witnesses(a, b, c);
    let SignWitnesses::Cubic { c2, d2, d3 } = witnesses else {
        unreachable!()
    };
    let s_d3 = banded(d3, scale, 4, "d3")?;
    let s_c = banded(c, scale, 1, "c")?;
    let (n_negative, n_positive) = if s_d3 < 0 {
        // one real root, sign opposite to c
        if s_c > 0 {
            (1, 0)
        } else {
            (0, 1)
        }
    } else {
        let s_c2 = banded(c2, scale, 2, "c2")?;
        let s_b = banded(b, scale, 1, "b")?;
        if banded(d2, scale, 2, "d2")? < 0 {
            // d3 > 0 forces d2 > 0 in exact arithmetic
            return Err(RootError::DegenerateSigns { quantity: "d2" });
        }
        match (s_c2 > 0, s_b > 0, s_c > 0) {
            (true, true, true) => (3, 0),
            (false, true, false) => (0, 3),
            (true, _, false) | (false, false, false) => (2, 1),
            (false, _, true) | (true, false, true) => (1, 2),
        }
    };
    Ok(RealRootProfile {
        n_negative,
        n_zero: 0,
        n_positive,
        distinct: true,
        witnesses,
    })
}

// ---------------------------------------------------------------------------
// Quartic real-root count
// ---------------------------------------------------------------------------

/// Witness quantities for x^4 + a x^3 + b x^2 + c x + d; d4 is the quartic
/// discriminant.
pub fn quartic_witnesses(a: f64, b: f64, c: f64, d: f64) -> SignWitnesses {
    let d2 = 3.0 * a * a - 8.0 * b;
    let c2 = a * c - 16.0 * d;
    let d3 = -3.0 * a.powi(3) * c + a * a * b * b - 6.0 * a * a * d + 14.0 * a * b * c
        - 4.0 * b.powi(3)
        + 16.0 * b * d
        - 18.0 * c * c;
    let c3 = -9.0 * a.powi(3) * d + a * a * b * c + 32.0 * a * b * d + 3.0 * a * c * c
        - 4.0 * b * b * c
        - 48.0 * c * d;
    let d4 = -27.0 * a.powi(4) * d * d + 18.0 * a.powi(3) * b * c * d - 4.0 * a.powi(3) * c.powi(3)
        - 4.0 * a * a * b.powi(3) * d
        + a * a * b * b * c * c
        + 144.0 * a * a * b * d * d
        - 6.0 * a * a * c * c * d
        - 80.0 * a * b * b * c * d
        + 18.0 * a * b * c.powi(3)
        + 16.0 * b.powi(4) * d
        - 4.0 * b.powi(3) * c * c
        - 192.0 * a * c * d * d
        - 128.0 * b * b * d * d
        + 144.0 * b * c * c * d
        - 27.0 * c.powi(4)
        + 256.0 * d.powi(3);
    SignWitnesses::Quartic { c2, c3, d2, d3, d4 }
}

/// Number of distinct real roots (0, 2 or 4) of x^4 + a x^3 + b x^2 + c x + d:
/// 2 iff d4 < 0; 4 iff d4 > 0, d2 > 0 and d3 > 0; 0 iff d4 > 0 and
/// (d2 < 0 or d3 < 0). All seven gating quantities (c, d, c2, c3, d2, d3,
/// d4) must sit outside the band, else `DegenerateSigns` (fall back to
/// `sturm_count`).
pub fn quartic_real_count(a: f64, b: f64, c: f64, d: f64) -> Result<usize, RootError> {
    let scale = a.abs().max(b.abs()).max(c.abs()).max(d.abs());
    let SignWitnesses::Quartic { c2, c3, d2, d3, d4 } = quartic_witnesses(a, b, c, d) else {
        unreachable!()
    };
    banded(c, scale, 1, "c")?;
    banded(d, scale, 1, "d")?;
    banded(c2, scale, 2, "c2")?;
    banded(c3, scale, 4, "c3")?;
    let s_d2 = banded(d2, scale, 2, "d2")?;
    let s_d3 = banded(d3, scale, 4, "d3")?;
    let s_d4 = banded(d4, scale, 6, "d4")?;
    Ok(if s_d4 < 0 {
        2
    } else if s_d2 > 0 && s_d3 > 0 {
        4
    } else {
        0
    })
}

fn banded(q: f64, scale: f64, deg: i32, quantity: &'static str) -> Result<i8, RootError> {
    band::sign(q, scale, deg).ok_or(RootError::DegenerateSigns { quantity })
}

// ---------------------------------------------------------------------------
// Companion-matrix oracle
// ---------------------------------------------------------------------------

const EIGEN_MAX_ITER: usize = 500;

// The Francis double-shift iteration has no exceptional-shift escape, so
// spectra with exact symmetries make it cycle forever; u^4 + 1 is the
// canonical example, its companion matrix being orthogonal. Translating the
// variable destroys the symmetry without touching the root geometry, so a
// failed solve is retried on p(x + delta) and shifted back.
const EIGEN_SHIFTS: [f64; 3] = [0.0, 0.5, -1.0];

/// All complex roots of `p` via the eigenvalues of its balanced companion
/// matrix, with the iteration capped and retried under a variable
/// translation when the cap is hit.
pub fn companion_roots(p: &Poly) -> Result<Vec<Complex<f64>>, RootError> {
    let deg = match p.degree() {
        None => return Err(RootError::ZeroPolynomial),
        Some(0) => return Err(RootError::ConstantPolynomial),
        Some(d) => d,
    };
    for delta in EIGEN_SHIFTS {
        if let Some(eigen) = companion_eigenvalues(&p.translated(delta), deg) {
            return Ok(eigen.into_iter().map(|z| z + delta).collect());
        }
    }
    Err(RootError::EigenFailure)
}

fn companion_eigenvalues(p: &Poly, deg: usize) -> Option<Vec<Complex<f64>>> {
    let lead = *p.coeffs().last().unwrap();
    let mut m = DMatrix::<f64>::zeros(deg, deg);
    for i in 1..deg {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..deg {
        m[(i, deg - 1)] = -p.coeffs()[i] / lead;
    }
    balance(&mut m);
    let schur = Schur::try_new(m, f64::EPSILON, EIGEN_MAX_ITER)?;
    Some(schur.complex_eigenvalues().iter().copied().collect())
}

/// Real roots of `p` (eigenvalues with |Im| < TAU_IM * (1 + |Re|)),
/// ascending.
pub fn real_roots(p: &Poly) -> Result<Vec<f64>, RootError> {
    let mut out: Vec<f64> = companion_roots(p)?
        .into_iter()
        .filter(|z| z.im.abs() < TAU_IM * (1.0 + z.re.abs()))
        .map(|z| z.re)
        .collect();
    out.sort_by(f64::total_cmp);
    Ok(out)
}

/// True when consecutive entries of an ascending list satisfy the
/// ROOT_SEPARATION rule.
pub fn well_separated(sorted: &[f64]) -> bool {
    sorted
        .windows(2)
        .all(|w| w[1] - w[0] >= ROOT_SEPARATION * (1.0 + w[0].abs()))
}

// Parlett-Reinsch balancing by powers of two; improves eigenvalue accuracy
// for companion matrices with mixed coefficient magnitudes.
fn balance(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    let radix: f64 = 2.0;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut row_norm = 0.0;
            let mut col_norm = 0.0;
            for j in 0..n {
                if j != i {
                    row_norm += m[(i, j)].abs();
                    col_norm += m[(j, i)].abs();
                }
            }
            if row_norm == 0.0 || col_norm == 0.0 {
                continue;
            }
            let total = row_norm + col_norm;
            let mut factor = 1.0;
            let mut col = col_norm;
            let target = row_norm / radix;
            while col < target {
                factor *= radix;
                col *= radix * radix;
            }
            let target = row_norm * radix;
            while col > target {
                factor /= radix;
                col /= radix * radix;
            }
            if (col + row_norm) / factor < 0.95 * total {
                done = false;
                let inv = 1.0 / factor;
                for j in 0..n {
                    m[(i, j)] *= inv;
                }
                for j in 0..n {
                    m[(j, i)] *= factor;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(desc: &[f64]) -> Poly {
        Poly::from_descending(desc)
    }

    #[test]
    fn sturm_basic_counts() {
        assert_eq!(
            sturm_count(&poly(&[1.0, 0.0, -1.0]), f64::NEG_INFINITY, f64::INFINITY).unwrap(),
            2
        );
        assert_eq!(
            sturm_count(&poly(&[1.0, 0.0, 1.0]), f64::NEG_INFINITY, f64::INFINITY).unwrap(),
            0
        );
        // (x-1)(x-2)(x-3) = x^3 - 6x^2 + 11x - 6 on (0, 2.5)
        assert_eq!(
            sturm_count(&poly(&[1.0, -6.0, 11.0, -6.0]), 0.0, 2.5).unwrap(),
            2
        );
    }

    #[test]
    fn sturm_rejects_non_squarefree() {
        // (x-1)^2
        assert_eq!(
            sturm_count(&poly(&[1.0, -2.0, 1.0]), f64::NEG_INFINITY, f64::INFINITY),
            Err(RootError::NonSquarefree)
        );
    }

    #[test]
    fn sturm_rejects_endpoint_root() {
        assert_eq!(
            sturm_count(&poly(&[1.0, 0.0, -1.0]), 1.0, 5.0),
            Err(RootError::EndpointRoot(1.0))
        );
    }

    #[test]
    fn sturm_degenerate_edges() {
        assert_eq!(
            sturm_count(&poly(&[1.0, 0.0, -1.0]), 2.0, 1.0),
            Err(RootError::InvalidInterval)
        );
        assert_eq!(
            sturm_count(&Poly::new(vec![0.0]), 0.0, 1.0),
            Err(RootError::ZeroPolynomial)
        );
        assert_eq!(sturm_count(&Poly::new(vec![5.0]), 0.0, 1.0).unwrap(), 0);
    }

    #[test]
    fn cubic_lemma_examples() {
        // (x-1)(x-2)(x-3): three positive roots, c2 = -12
        let prof = cubic_signature(-6.0, 11.0, -6.0).unwrap();
        assert_eq!((prof.n_negative, prof.n_positive), (0, 3));
        assert!(prof.distinct);
        match prof.witnesses {
            SignWitnesses::Cubic { c2, d2, d3 } => {
                assert_eq!(c2, -12.0);
                assert_eq!(d2, 3.0);
                assert!(d3 > 0.0);
            }
            _ => panic!("expected cubic witnesses"),
        }

        // x^3 + x - 1: d3 = -31, one positive root (a = 0 must not be gated)
        let prof = cubic_signature(0.0, 1.0, -1.0).unwrap();
        assert_eq!((prof.n_negative, prof.n_positive), (0, 1));
        match prof.witnesses {
            SignWitnesses::Cubic { d3, .. } => assert_eq!(d3, -31.0),
            _ => panic!("expected cubic witnesses"),
        }

        // mirror of the first example: three negative roots
        let prof = cubic_signature(6.0, 11.0, 6.0).unwrap();
        assert_eq!((prof.n_negative, prof.n_positive), (3, 0));
    }

    #[test]
    fn cubic_lemma_flags_band_hits() {
        // c = 0 gates the one-real-root branch
        assert_eq!(
            cubic_signature(1.0, 1.0, 0.0),
            Err(RootError::DegenerateSigns { quantity: "c" })
        );
    }

    #[test]
    fn quartic_lemma_examples() {
        // (x-1)(x-2)(x-3)(x-4)
        assert_eq!(quartic_real_count(-10.0, 35.0, -50.0, 24.0).unwrap(), 4);
        // no real roots: d4 = 1396 > 0, d2 = -5 < 0
        assert_eq!(quartic_real_count(1.0, 1.0, 1.0, 2.0).unwrap(), 0);
        // frozen from the companion-matrix oracle
        assert_eq!(quartic_real_count(0.3, -1.2, 0.7, 0.5).unwrap(), 2);
    }

    #[test]
    fn quartic_lemma_gates_c_and_d() {
        assert!(matches!(
            quartic_real_count(1.0, 1.0, 0.0, 1.0),
            Err(RootError::DegenerateSigns { quantity: "c" })
        ));
        assert!(matches!(
            quartic_real_count(1.0, 1.0, 1.0, 0.0),
            Err(RootError::DegenerateSigns { quantity: "d" })
        ));
        // the fifth cyclotomic has d3 = 0 exactly; the lemma must refuse it
        // rather than guess (the Sturm fallback handles it)
        assert!(matches!(
            quartic_real_count(1.0, 1.0, 1.0, 1.0),
            Err(RootError::DegenerateSigns { quantity: "d3" })
        ));
    }

    #[test]
    fn companion_simple_roots() {
        let mut roots = real_roots(&poly(&[1.0, 0.0, -2.0])).unwrap();
        assert_eq!(roots.len(), 2);
        let r = roots.pop().unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-10);

        let cube = companion_roots(&poly(&[1.0, 0.0, 0.0, -1.0])).unwrap();
        assert_eq!(cube.len(), 3);
        let mut reals = 0;
        for z in &cube {
            if z.im.abs() < TAU_IM * (1.0 + z.re.abs()) {
                reals += 1;
                assert!((z.re - 1.0).abs() < 1e-10);
            } else {
                // e^{+-2 pi i/3}
                assert!((z.re + 0.5).abs() < 1e-10);
                assert!((z.im.abs() - 0.75f64.sqrt()).abs() < 1e-10);
            }
        }
        assert_eq!(reals, 1);
    }

    #[test]
    fn companion_rejects_trivial_input() {
        assert_eq!(
            companion_roots(&Poly::new(vec![0.0])),
            Err(RootError::ZeroPolynomial)
        );
        assert_eq!(
            companion_roots(&Poly::new(vec![3.0])),
            Err(RootError::ConstantPolynomial)
        );
    }

    #[test]
    fn separation_rule() {
        assert!(well_separated(&[-1.0, 0.0, 1.0]));
        assert!(!well_separated(&[1.0, 1.0 + 1e-12]));
    }

    #[test]
    fn translation_moves_the_argument() {
        let p = poly(&[2.0, -3.0, 1.0, 7.0]);
        let q = p.translated(0.8);
        assert_eq!(q.degree(), p.degree());
        for x in [-2.0f64, -0.3, 0.0, 1.1, 4.5] {
            let want = p.eval(x + 0.8);
            assert!((q.eval(x) - want).abs() < 1e-12 * (1.0 + want.abs()));
        }
        assert_eq!(p.translated(0.0), p);
    }

    #[test]
    fn symmetric_spectra_converge() {
        // the companion matrices of these polynomials are orthogonal, the
        // worst case for the shift iteration; the translated retry must
        // rescue each solve
        let octic = companion_roots(&poly(&[1.0, 0.0, 0.0, 0.0, 1.0])).unwrap();
        assert_eq!(octic.len(), 4);
        for z in &octic {
            assert!((z.norm() - 1.0).abs() < 1e-9);
            assert!(
                (z.re.abs() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-9,
                "expected eighth root of unity, got {z}"
            );
        }
        assert!(real_roots(&poly(&[1.0, 0.0, 0.0, 0.0, 1.0]))
            .unwrap()
            .is_empty());

        let pair = real_roots(&poly(&[1.0, 0.0, 0.0, 0.0, -1.0])).unwrap();
        assert_eq!(pair.len(), 2);
        assert!((pair[0] + 1.0).abs() < 1e-9);
        assert!((pair[1] - 1.0).abs() < 1e-9);
    }
}
