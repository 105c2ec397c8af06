mod common;

use common::*;
use gfix_core::contraction::{check_contraction, compute_m, compute_m1, ContractionKind};
use gfix_core::control::{ControlFn, PiecewiseFn};
use gfix_core::space::{enumerate_comparable_triples, DeriveMode};
use gfix_core::Scalar;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn g_below_m_below_m1((xs, map) in arb_numeric_case(), order in arb_order()) {
        let space = numeric_space(&xs, order);
        let map = total_map(&space, &map);
        for (x, y, z) in enumerate_comparable_triples(&space) {
            let m = compute_m(&space, &map, x, y, z).unwrap();
            prop_assert!(space.g(x, y, z) <= m);
            prop_assert!(m <= compute_m1(&space, &map, x, y, z).unwrap());
        }
    }

    #[test]
    fn violations_re_evaluate((rows, map) in arb_metric_case(), k in 1i64..=4, kind_ix in 0usize..8) {
        let kind = ContractionKind::ALL[kind_ix];
        let space = metric_space(rows, DeriveMode::Sum, gfix_core::space::PartialOrder::NumericLeq);
        let map = total_map(&space, &map);
        let psi = PiecewiseFn::linear(Scalar::one());
        let phi = PiecewiseFn::linear(r(k, 4));
        let report = check_contraction(&space, &map, &psi, &phi, kind).unwrap();
        prop_assert_eq!(report.verdict.is_pass(), report.violations.is_empty());
        for v in &report.violations {
            // ψ is the identity here, so the sides reduce to the distance and F − φ(F)
            prop_assert_eq!(&v.lhs, &v.distance);
            prop_assert_eq!(&v.rhs, &(&v.functional - &phi.apply(&v.functional).unwrap()));
            prop_assert!(v.lhs > v.rhs);
            if matches!(kind, ContractionKind::Thm21M) {
                let t: Vec<_> = v.tuple.iter().map(|&p| map.apply(p).unwrap()).collect();
                prop_assert_eq!(&v.distance, &space.g(t[0], t[1], t[2]));
                prop_assert_eq!(&v.functional, &compute_m(&space, &map, v.tuple[0], v.tuple[1], v.tuple[2]).unwrap());
            }
        }
    }

    #[test]
    fn scaling_preserves_linear_verdicts(
        (rows, map) in arb_metric_case(),
        k in 1i64..=4,
        scale in (1i64..6, 1i64..6),
        kind_ix in 0usize..8,
    ) {
        let kind = ContractionKind::ALL[kind_ix];
        let c = r(scale.0, scale.1);
        let scaled: Vec<Vec<Scalar>> = rows.iter().map(|row| row.iter().map(|v| v * &c).collect()).collect();
        let psi = PiecewiseFn::linear(Scalar::one());
        let phi = PiecewiseFn::linear(r(k, 8));
        let verdicts: Vec<_> = [rows, scaled].into_iter().map(|rows| {
            let space = metric_space(rows, DeriveMode::Max, gfix_core::space::PartialOrder::NumericLeq);
            let map = total_map(&space, &map);
            let rep = check_contraction(&space, &map, &psi, &phi, kind).unwrap();
            (rep.verdict, rep.violations.iter().map(|v| v.tuple.clone()).collect::<Vec<_>>())
        }).collect();
        prop_assert_eq!(&verdicts[0], &verdicts[1]);
    }
}
