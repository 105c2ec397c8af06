#![allow(dead_code)]

use gfix_core::control::{Affine, PiecewiseFn};
use gfix_core::space::{
    derive_gmetric, Carrier, DeriveMode, GMetric, Image, MetricTable, PartialOrder, PointValue, Regularity, SelfMap,
};
use gfix_core::{PointId, Scalar, Space};
use proptest::prelude::*;

pub fn r(n: i64, d: i64) -> Scalar {
    Scalar::ratio(n, d)
}

/// Shortest-path closure of random positive weights, so the triangle
/// inequality holds by construction.
#[allow(clippy::needless_range_loop)]
pub fn metric_rows(n: usize, weights: &[i64], den: i64) -> Vec<Vec<Scalar>> {
    let mut d = vec![vec![0i64; n]; n];
    let mut w = weights.iter().cycle();
    for i in 0..n {
        for j in i + 1..n {
            let v = *w.next().unwrap();
            d[i][j] = v;
            d[j][i] = v;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                d[i][j] = d[i][j].min(d[i][k] + d[k][j]);
            }
        }
    }
    d.iter().map(|row| row.iter().map(|&v| r(v, den)).collect()).collect()
}

pub fn integer_points(n: usize) -> Vec<PointValue> {
    (0..n as i64).map(|i| PointValue::Number(Scalar::from_int(i))).collect()
}

pub fn metric_space(rows: Vec<Vec<Scalar>>, mode: DeriveMode, order: PartialOrder) -> Space {
    let n = rows.len();
    let g = derive_gmetric(MetricTable::from_rows(rows).unwrap(), mode).unwrap();
    Space::new(integer_points(n), g, order, Carrier::Finite, Regularity::Unknown).unwrap()
}

pub fn numeric_space(xs: &[Scalar], order: PartialOrder) -> Space {
    Space::new(
        xs.iter().cloned().map(PointValue::Number).collect(),
        GMetric::MaxAbsDiff,
        order,
        Carrier::Finite,
        Regularity::Unknown,
    )
    .unwrap()
}

pub fn total_map(space: &Space, targets: &[usize]) -> SelfMap {
    let images = targets
        .iter()
        .map(|&t| Image::Point(PointId(t % space.len())))
        .collect();
    SelfMap::new(space, images).unwrap()
}

/// A random finite metric space with a random self-map.
pub fn arb_metric_case() -> impl Strategy<Value = (Vec<Vec<Scalar>>, Vec<usize>)> {
    (2usize..=7)
        .prop_flat_map(|n| {
            (
                Just(n),
                prop::collection::vec(1i64..12, n * (n - 1) / 2),
                1i64..5,
                prop::collection::vec(0usize..n, n),
            )
        })
        .prop_map(|(n, w, den, map)| (metric_rows(n, &w, den), map))
}

/// Distinct rationals with a random map, for the closed-form G-metric.
pub fn arb_numeric_case() -> impl Strategy<Value = (Vec<Scalar>, Vec<usize>)> {
    (prop::collection::btree_set(-16i64..16, 2..=7), 1i64..5).prop_flat_map(|(nums, den)| {
        let xs: Vec<Scalar> = nums.into_iter().map(|k| r(k, den)).collect();
        let n = xs.len();
        (Just(xs), prop::collection::vec(0usize..n, n))
    })
}

pub fn arb_order() -> impl Strategy<Value = PartialOrder> {
    prop_oneof![
        Just(PartialOrder::NumericLeq),
        Just(PartialOrder::NumericGeq),
        Just(PartialOrder::ProductSign)
    ]
}

/// Continuous piecewise-linear interpolation of `(breakpoint, value)` with
/// the given slope after the last breakpoint.
pub fn interpolate(bps: &[Scalar], values: &[Scalar], last_slope: Scalar) -> PiecewiseFn {
    let mut pieces = Vec::new();
    for i in 0..bps.len() {
        if i + 1 < bps.len() {
            let slope = (&values[i + 1] - &values[i]) / (&bps[i + 1] - &bps[i]);
            pieces.push(Affine::new(slope.clone(), &values[i] - &(&slope * &bps[i])));
        } else {
            pieces.push(Affine::new(last_slope.clone(), &values[i] - &(&last_slope * &bps[i])));
        }
    }
    PiecewiseFn::new(bps.to_vec(), values.to_vec(), pieces).unwrap()
}

/// Raw material for a ψ/φ pair on shared breakpoints: gaps, ψ increments,
/// φ/ψ ratios in quarters and the final slopes.
#[derive(Debug, Clone)]
pub struct PairSeed {
    pub gaps: Vec<i64>,
    pub increments: Vec<i64>,
    pub ratios: Vec<i64>,
    pub psi_slope: i64,
    pub phi_ratio: i64,
}

/// `max_ratio` is in quarters: 4 keeps φ ≤ ψ, larger allows exceedance.
pub fn arb_pair_seed(max_ratio: i64) -> impl Strategy<Value = PairSeed> {
    (1usize..5).prop_flat_map(move |k| {
        (
            prop::collection::vec(1i64..6, k),
            prop::collection::vec(0i64..6, k),
            prop::collection::vec(1i64..=max_ratio, k),
            0i64..4,
            0i64..=max_ratio,
        )
            .prop_map(|(gaps, increments, ratios, psi_slope, phi_ratio)| PairSeed {
                gaps,
                increments,
                ratios,
                psi_slope,
                phi_ratio,
            })
    })
}

impl PairSeed {
    pub fn build(&self) -> (PiecewiseFn, PiecewiseFn) {
        let mut bps = vec![Scalar::zero()];
        let mut psi_v = vec![Scalar::zero()];
        let mut phi_v = vec![Scalar::zero()];
        for (i, gap) in self.gaps.iter().enumerate() {
            bps.push(&bps[i] + &r(*gap, 4));
            // first increment forced positive so ψ vanishes only at 0
            let inc = if i == 0 {
                self.increments[i] + 1
            } else {
                self.increments[i]
            };
            psi_v.push(&psi_v[i] + &r(inc, 2));
            phi_v.push(&psi_v[i + 1] * &r(self.ratios[i], 4));
        }
        let psi_slope = r(self.psi_slope, 2);
        let phi_slope = &psi_slope * &r(self.phi_ratio, 4);
        (
            interpolate(&bps, &psi_v, psi_slope),
            interpolate(&bps, &phi_v, phi_slope),
        )
    }
}

/// `0, 1/8, 2/8, …` up to `count` points.
pub fn test_grid(count: i64, den: i64) -> Vec<Scalar> {
    (0..count).map(|k| r(k, den)).collect()
}
