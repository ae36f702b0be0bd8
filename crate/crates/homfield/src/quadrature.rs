//! Adaptive Gauss-Kronrod quadrature (7-point Gauss, 15-point Kronrod).
//!
//! Serves the expected-line-count integral and the attractor/repeller
//! boundary integral. Both integrands are smooth and bounded after their
//! substitutions, so a plain bisection strategy with the conservative
//! |K - G| error estimate converges in a handful of splits.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadError {
    #[error("adaptive quadrature did not reach tolerance {tol} within {intervals} intervals (error estimate {abs_error})")]
    NoConvergence {
        tol: f64,
        intervals: usize,
        abs_error: f64,
    },
    #[error("integration bounds must be finite with lo < hi")]
    BadInterval,
    #[error("tolerance must be positive and finite")]
    BadTolerance,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    /// Sum of per-interval |K15 - G7| differences; a conservative bound.
    pub abs_error: f64,
    pub intervals: usize,
}

// Kronrod abscissae for [-1, 1]; the even-indexed entries are the Gauss-7
// nodes. Zero is last.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// (kronrod, |kronrod - gauss|) on [lo, hi]
fn gk15<F: FnMut(f64) -> f64>(f: &mut F, lo: f64, hi: f64) -> (f64, f64) {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let f_center = f(center);
    let mut kronrod = WGK[7] * f_center;
    let mut gauss = WG[3] * f_center;
    for j in 0..7 {
        let x = half * XGK[j];
        let pair = f(center - x) + f(center + x);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (half * kronrod, (half * (kronrod - gauss)).abs())
}

/// Integrates `f` over [lo, hi] to absolute tolerance `abs_tol`, splitting
/// the worst interval until the summed error estimate fits the budget or
/// `max_intervals` is exceeded.
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    abs_tol: f64,
    max_intervals: usize,
) -> Result<QuadResult, QuadError> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(QuadError::BadInterval);
    }
    if !(abs_tol.is_finite() && abs_tol > 0.0) {
        return Err(QuadError::BadTolerance);
    }
    // segments kept sorted by error estimate, worst last
    let mut segments: Vec<(f64, f64, f64, f64)> = Vec::new(); // (lo, hi, value, err)
    let (v, e) = gk15(&mut f, lo, hi);
    segments.push((lo, hi, v, e));
    loop {
        let total_err: f64 = segments.iter().map(|s| s.3).sum();
        if total_err <= abs_tol {
            let value = segments.iter().map(|s| s.2).sum();
            return Ok(QuadResult {
                value,
                abs_error: total_err,
                intervals: segments.len(),
            });
        }
        if segments.len() >= max_intervals {
            let value: f64 = segments.iter().map(|s| s.2).sum();
            let _ = value;
            return Err(QuadError::NoConvergence {
                tol: abs_tol,
                intervals: segments.len(),
                abs_error: total_err,
            });
        }
        let worst = segments
            .iter()
            .enumerate()
            .max_by(|a, b| a.1 .3.total_cmp(&b.1 .3))
            .map(|(i, _)| i)
            .unwrap();
        let (a, b, _, _) = segments.swap_remove(worst);
        let mid = 0.5 * (a + b);
        let (v1, e1) = gk15(&mut f, a, mid);
        let (v2, e2) = gk15(&mut f, mid, b);
        segments.push((a, mid, v1, e1));
        segments.push((mid, b, v2, e2));
    }
}
