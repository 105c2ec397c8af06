mod common;

use common::*;
use gfix_core::control::{construct_phi1, construct_phi2, integral_transform, validate_phi, validate_psi, Interval};
use gfix_core::Scalar;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_pairs_are_admissible(seed in arb_pair_seed(8)) {
        let (psi, phi) = seed.build();
        prop_assert!(validate_psi(&psi).passed());
        prop_assert!(validate_phi(&phi).passed());
    }

    #[test]
    fn psi_is_monotone(seed in arb_pair_seed(4)) {
        let (psi, _) = seed.build();
        let grid = test_grid(96, 8);
        for w in grid.windows(2) {
            prop_assert!(psi.eval(&w[0]).unwrap() <= psi.eval(&w[1]).unwrap());
        }
    }

    #[test]
    fn phi2_sits_below_both(seed in arb_pair_seed(8)) {
        let (psi, phi) = seed.build();
        let out = construct_phi2(&psi, &phi).unwrap();
        prop_assert!(validate_phi(&out.phi2).passed());
        for t in test_grid(96, 8) {
            let v = out.phi2.eval(&t).unwrap();
            prop_assert!(v <= psi.eval(&t).unwrap() && v <= phi.eval(&t).unwrap());
            prop_assert_eq!(v.is_zero(), t.is_zero());
        }
    }

    #[test]
    fn phi1_meets_the_lemma_on_its_range(seed in arb_pair_seed(4), alpha in 1i64..5, depth in 1usize..6) {
        let (psi, phi) = seed.build();
        let alpha = r(alpha, 2);
        let out = construct_phi1(&psi, &phi, &alpha, depth).unwrap();
        prop_assert!(validate_phi(&out.phi1).passed());
        let grid = test_grid(64, 8);
        for v in grid.iter().filter(|v| **v >= out.constructed_from && **v < out.constructed_to) {
            let right = psi.eval(v).unwrap() - out.phi1.eval(v).unwrap();
            for u in grid.iter().take_while(|u| *u <= v) {
                let left = psi.eval(u).unwrap() - phi.eval(u).unwrap();
                prop_assert!(left <= right, "u={} v={}", u, v);
            }
        }
    }

    #[test]
    fn tau_has_the_lower_riemann_bound(seed in arb_pair_seed(4), a in 0i64..40, b in 1i64..40) {
        let (_, phi) = seed.build();
        let tau = integral_transform(&phi).unwrap();
        let (a, b) = (r(a, 4), r(b, 4));
        let top = &a + &b;
        let inf = phi.inf_over(&Interval::closed(a.clone(), top.clone()));
        prop_assert!(tau.eval(&top).unwrap() >= tau.eval(&a).unwrap() + &inf * &b);
    }
}

#[test]
fn tau_of_identity_integrand() {
    let tau = integral_transform(&gfix_core::control::PiecewiseFn::linear(Scalar::one())).unwrap();
    assert_eq!(tau.eval(&r(9, 64)).unwrap(), r(81, 8192));
}
