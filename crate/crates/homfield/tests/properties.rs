//! Randomized invariants of the classifier: the facts that must hold for
//! every field regardless of coefficients, checked over a box of random
//! inputs rather than hand-picked examples.

use std::f64::consts::{FRAC_PI_2, TAU};

use homfield::classify::{self, Label};
use homfield::index::{index, winding_index};
use homfield::{classify_with, ClassifyPolicy, Stability, VectorField};
use proptest::prelude::*;

fn arb_field() -> impl Strategy<Value = VectorField> {
    (1usize..=3).prop_flat_map(|n| {
        prop::collection::vec(-3.0f64..3.0, 2 * n + 2)
            .prop_map(move |c| VectorField::new(n, &c[..n + 1], &c[n + 1..]).unwrap())
    })
}

fn negated(f: &VectorField) -> VectorField {
    let p: Vec<f64> = f.p_coeffs().iter().map(|c| -c).collect();
    let q: Vec<f64> = f.q_coeffs().iter().map(|c| -c).collect();
    VectorField::new(f.degree(), &p, &q).unwrap()
}

proptest! {
    #[test]
    fn eval_is_homogeneous(f in arb_field(), t in 0.25f64..4.0, x in -2.0f64..2.0, y in -2.0f64..2.0) {
        let n = f.degree() as i32;
        let (px, qx) = f.eval(t * x, t * y);
        let (p1, q1) = f.eval(x, y);
        let scale = t.powi(n);
        let tol = 1e-9 * f.coeff_scale() * t.powi(n).max(1.0);
        prop_assert!((px - scale * p1).abs() <= tol, "P broke homogeneity: {px} vs {}", scale * p1);
        prop_assert!((qx - scale * q1).abs() <= tol, "Q broke homogeneity: {qx} vs {}", scale * q1);
    }

    #[test]
    fn slope_restrictions_match_eval(f in arb_field(), kappa in -5.0f64..5.0) {
        let (p, q) = f.eval(1.0, kappa);
        prop_assert!((f.p_on_slope(kappa) - p).abs() <= 1e-9 * f.coeff_scale() * kappa.abs().powi(f.degree() as i32).max(1.0));
        prop_assert!((f.q_on_slope(kappa) - q).abs() <= 1e-9 * f.coeff_scale() * kappa.abs().powi(f.degree() as i32).max(1.0));
    }

    #[test]
    fn index_is_bounded_with_degree_parity(f in arb_field()) {
        if let Ok(c) = classify::classify(&f) {
            let n = f.degree() as i32;
            prop_assert!(c.index.abs() <= n, "index {} outside |i| <= {}", c.index, n);
            prop_assert_eq!(
                (c.index - n).rem_euclid(2),
                0,
                "index {} has wrong parity for degree {}",
                c.index,
                n
            );
        }
    }

    #[test]
    fn line_count_is_bounded_with_degree_parity(f in arb_field()) {
        if let Ok(c) = classify::classify(&f) {
            let cap = f.degree() + 1;
            prop_assert!(c.lines <= cap, "{} invariant lines exceeds the cap {cap}", c.lines);
            prop_assert_eq!((c.lines as i32 - cap as i32).rem_euclid(2), 0,
                "line count {} has wrong parity for degree {}", c.lines, f.degree());
        }
    }

    #[test]
    fn positive_scaling_preserves_the_class(f in arb_field(), lambda in 0.2f64..5.0) {
        let g = f.scaled(lambda).unwrap();
        if let (Ok(a), Ok(b)) = (classify::classify(&f), classify::classify(&g)) {
            prop_assert_eq!(a.label, b.label);
            prop_assert_eq!(a.index, b.index);
            prop_assert_eq!(a.lines, b.lines);
            prop_assert_eq!(a.stability, b.stability);
        }
    }

    #[test]
    fn sign_flip_swaps_attractor_and_repeller(f in arb_field()) {
        let g = negated(&f);
        if let (Ok(a), Ok(b)) = (classify::classify(&f), classify::classify(&g)) {
            // Reversing time reverses every trajectory but moves no orbit,
            // so the class and both integer invariants stay put.
            prop_assert_eq!(a.label, b.label);
            prop_assert_eq!(a.index, b.index);
            prop_assert_eq!(a.lines, b.lines);
            let swapped = match a.stability {
                Stability::Attractor => Stability::Repeller,
                Stability::Repeller => Stability::Attractor,
                other => other,
            };
            prop_assert_eq!(swapped, b.stability);
        }
    }

    #[test]
    fn rotation_preserves_the_symbolic_index(f in arb_field(), theta in 0.0f64..TAU) {
        let g = f.rotated(theta);
        if let (Ok(a), Ok(b)) = (index(&f), index(&g)) {
            prop_assert_eq!(a, b, "index changed under rotation by {}", theta);
        }
    }

    #[test]
    fn rotation_preserves_the_winding_number(f in arb_field(), theta in 0.0f64..TAU) {
        let g = f.rotated(theta);
        if let (Ok(a), Ok(b)) = (
            winding_index(&f, 1.0, FRAC_PI_2),
            winding_index(&g, 1.0, FRAC_PI_2),
        ) {
            prop_assert_eq!(a, b, "winding changed under rotation by {}", theta);
        }
    }

    #[test]
    fn stability_follows_the_degree_and_index(f in arb_field()) {
        if let Ok(c) = classify::classify(&f) {
            if f.degree() % 2 == 0 {
                prop_assert_eq!(c.stability, Stability::NotApplicable);
            } else if c.index != 1 {
                // Only index +1 leaves room for a global sink or source.
                prop_assert_eq!(c.stability, Stability::Neither);
            }
        }
    }

    #[test]
    fn label_belongs_to_the_degree(f in arb_field()) {
        if let Ok(c) = classify::classify(&f) {
            prop_assert!(Label::all(f.degree()).contains(&c.label),
                "{} is not a degree-{} label", c.label, f.degree());
        }
    }

    #[test]
    fn strict_policy_is_never_contradicted_by_the_default(f in arb_field()) {
        let strict = ClassifyPolicy { oracle_fallback: false, lenient_axis: false };
        if let (Ok(a), Ok(b)) = (classify_with(&f, strict), classify::classify(&f)) {
            // The lenient axis handling may only ever add the vertical line;
            // it must never change the verdict reached without it.
            prop_assert_eq!(a.label, b.label);
            prop_assert_eq!(a.index, b.index);
            prop_assert_eq!(a.lines, b.lines);
        }
    }
}
