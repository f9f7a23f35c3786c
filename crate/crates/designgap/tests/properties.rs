//! Property tests for the algebraic invariants that hold on the whole
//! parameter space, not just at the named gates.

use designgap::gadget::{gadget_abc, gadget_t2_spectrum, psd_compare, PsdOrdering};
use designgap::kak::{canonicalize, KakCoefficients};
use proptest::prelude::*;

fn arb_coeffs() -> impl Strategy<Value = KakCoefficients> {
    (-4.0..4.0_f64, -4.0..4.0_f64, -4.0..4.0_f64)
        .prop_map(|(x, y, z)| KakCoefficients::new(x, y, z))
}

proptest! {
    #[test]
    fn canonicalize_is_idempotent_and_canonical(k in arb_coeffs()) {
        let c = canonicalize(&k);
        prop_assert!(c.is_canonical(), "{c:?} not canonical");
        let cc = canonicalize(&c);
        prop_assert!((c.kx - cc.kx).abs() < 1e-12);
        prop_assert!((c.ky - cc.ky).abs() < 1e-12);
        prop_assert!((c.kz - cc.kz).abs() < 1e-12);
    }

    #[test]
    fn canonicalize_respects_equivalence_moves(
        k in arb_coeffs(),
        shifts in prop::collection::vec((0usize..3, -2i32..3), 0..4),
        flips in prop::collection::vec((0usize..3, 0usize..3), 0..3),
        swaps in prop::collection::vec((0usize..3, 0usize..3), 0..3),
    ) {
        let mut v = k.as_array();
        for (i, s) in shifts {
            v[i] += s as f64 * std::f64::consts::FRAC_PI_2;
        }
        for (i, j) in flips {
            if i != j {
                v[i] = -v[i];
                v[j] = -v[j];
            }
        }
        for (i, j) in swaps {
            v.swap(i, j);
        }
        let a = canonicalize(&k);
        let b = canonicalize(&KakCoefficients::new(v[0], v[1], v[2]));
        prop_assert!((a.kx - b.kx).abs() < 1e-9, "{a:?} vs {b:?}");
        prop_assert!((a.ky - b.ky).abs() < 1e-9);
        prop_assert!((a.kz - b.kz).abs() < 1e-9);
    }

    #[test]
    fn abc_constraints_hold_everywhere(k in arb_coeffs()) {
        let p = gadget_abc(&k);
        prop_assert!((p.b - 0.5 * (1.0 - p.a)).abs() < 1e-12);
        prop_assert!(p.a >= 1.0 / 3.0 - 1e-12 && p.a <= 1.0 + 1e-12);
        // the closed-form non-unit eigenvalues are bounded by 1 in modulus
        let (l2, l3) = gadget_t2_spectrum(&k);
        prop_assert!(l2 >= l3);
        prop_assert!(l2 <= 1.0 + 1e-12 && l3 >= -1.0 - 1e-12);
    }

    #[test]
    fn psd_compare_is_antisymmetric(a in arb_coeffs(), b in arb_coeffs()) {
        let fwd = psd_compare(&a, &b);
        let bwd = psd_compare(&b, &a);
        let expected = match fwd {
            PsdOrdering::Le => PsdOrdering::Ge,
            PsdOrdering::Ge => PsdOrdering::Le,
            other => other,
        };
        prop_assert_eq!(bwd, expected);
    }
}
