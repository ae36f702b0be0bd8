//! Cross-validation of the closed-form machinery against independent
//! numerical oracles on random inputs.
//!
//! Two checks run the production code paths against methods that share no
//! arithmetic with them: the sign-based index formulas against the winding
//! number of the field around a circle, and the discriminant-based root
//! counters against the eigenvalues of a companion matrix. A third run
//! drives the same harness with a deliberately broken formula to confirm
//! the comparison would actually catch a wrong sign.

use crate::band;
use crate::index;
use crate::montecarlo::{normal_pair, sample_field};
use crate::realroots::{self, Poly, RootError, SignWitnesses};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

const MAX_EXAMPLES: usize = 5;

/// Tally of one agreement run.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Agreement {
    /// Inputs where both methods produced an answer.
    pub checked: u64,
    /// Inputs where the answers differed.
    pub mismatches: u64,
    /// Inputs where at least one method declined (a sign sat inside its
    /// degeneracy band, or the numerical method failed to converge).
    pub skipped: u64,
    /// The first few mismatching inputs, as coefficient strings.
    pub examples: Vec<String>,
}

impl Agreement {
    fn record(&mut self, agree: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !agree {
            self.mismatches += 1;
            if self.examples.len() < MAX_EXAMPLES {
                self.examples.push(describe());
            }
        }
    }
}

/// Compares the sign-based index formula with the winding number on random
/// standard-normal fields of the given degree.
pub fn check_index_agreement(degree: usize, samples: u64, seed: u64) -> Agreement {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut agreement = Agreement::default();
    for _ in 0..samples {
        let f = sample_field(degree, &mut rng);
        match (index::index(&f), index::winding_index(&f, 1.0, FRAC_PI_2)) {
            (Ok(closed), Ok(winding)) => {
                agreement.record(closed == winding, || f.coeff_string());
            }
            _ => agreement.skipped += 1,
        }
    }
    agreement
}

/// Compares the discriminant-based root counters with the companion-matrix
/// eigenvalues on random monic cubics and quartics. Each sample contributes
/// one cubic and one quartic comparison.
pub fn check_root_count_agreement(samples: u64, seed: u64) -> Agreement {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut agreement = Agreement::default();
    for _ in 0..samples {
        let (a, b) = normal_pair(&mut rng);
        let (c, d) = normal_pair(&mut rng);

        match (
            realroots::cubic_signature(a, b, c),
            companion_split(&[1.0, a, b, c]),
        ) {
            (Ok(profile), Ok((neg, pos))) => agreement.record(
                profile.n_negative == neg && profile.n_positive == pos,
                || format!("cubic 1,{a},{b},{c}"),
            ),
            _ => agreement.skipped += 1,
        }

        match (
            realroots::quartic_real_count(a, b, c, d),
            companion_split(&[1.0, a, b, c, d]),
        ) {
            (Ok(count), Ok((neg, pos))) => {
                agreement.record(count == neg + pos, || format!("quartic 1,{a},{b},{c},{d}"));
            }
            _ => agreement.skipped += 1,
        }
    }
    agreement
}

/// Runs the quartic comparison with the discriminant test inverted. A
/// healthy harness reports plenty of mismatches here; zero would mean the
/// agreement checks are vacuous.
pub fn negative_control(samples: u64, seed: u64) -> Agreement {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut agreement = Agreement::default();
    for _ in 0..samples {
        let (a, b) = normal_pair(&mut rng);
        let (c, d) = normal_pair(&mut rng);
        match (
            corrupted_quartic_count(a, b, c, d),
            companion_split(&[1.0, a, b, c, d]),
        ) {
            (Ok(count), Ok((neg, pos))) => {
                agreement.record(count == neg + pos, || format!("quartic 1,{a},{b},{c},{d}"));
            }
            _ => agreement.skipped += 1,
        }
    }
    agreement
}

// (negative roots, positive roots) from the companion-matrix oracle
fn companion_split(descending: &[f64]) -> Result<(usize, usize), RootError> {
    let roots = realroots::real_roots(&Poly::from_descending(descending))?;
    let neg = roots.iter().filter(|&&r| r < 0.0).count();
    Ok((neg, roots.len() - neg))
}

// The production rule is `2 iff d4 < 0`; this one reads the discriminant
// backwards and must disagree with the eigenvalue oracle whenever a random
// quartic has exactly two real roots.
fn corrupted_quartic_count(a: f64, b: f64, c: f64, d: f64) -> Result<usize, RootError> {
    let scale = a.abs().max(b.abs()).max(c.abs()).max(d.abs());
    let SignWitnesses::Quartic { d2, d3, d4, .. } = realroots::quartic_witnesses(a, b, c, d)
    else {
        unreachable!()
    };
    let gate = |q: f64, deg: i32, quantity: &'static str| {
        band::sign(q, scale, deg).ok_or(RootError::DegenerateSigns { quantity })
    };
    let s_d2 = gate(d2, 2, "d2")?;
    let s_d3 = gate(d3, 4, "d3")?;
    let s_d4 = gate(d4, 6, "d4")?;
    Ok(if s_d4 > 0 {
        2
    } else if s_d2 > 0 && s_d3 > 0 {
        4
    } else {
        0
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_methods_agree() {
        for degree in 1..=3 {
            let a = check_index_agreement(degree, 400, 2026);
            assert_eq!(a.mismatches, 0, "degree {degree}: {:?}", a.examples);
            assert!(a.checked > 350, "degree {degree} skipped too much: {a:?}");
        }
    }

    #[test]
    fn root_counters_agree() {
        let a = check_root_count_agreement(400, 2026);
        assert_eq!(a.mismatches, 0, "{:?}", a.examples);
        assert!(a.checked > 700, "skipped too much: {a:?}");
    }

    #[test]
    fn broken_formula_is_caught() {
        let a = negative_control(400, 2026);
        assert!(
            a.mismatches > 50,
            "negative control barely fired: {a:?}"
        );
        assert!(a.examples.len() == MAX_EXAMPLES);
    }

    #[test]
    fn example_list_is_capped() {
        let mut agreement = Agreement::default();
        for i in 0..20 {
            agreement.record(false, || format!("input {i}"));
        }
        assert_eq!(agreement.mismatches, 20);
        assert_eq!(agreement.examples.len(), MAX_EXAMPLES);
    }
}
