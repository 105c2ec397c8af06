//! The worked examples as scenarios.
//!
//! Each builder states the example's space, map and control functions and
//! the verdicts it is expected to produce. Expected values are written out
//! by hand (or from an independent computation), never filled in by running
//! the checkers. The shipped `corpus/*.json` files are the default builds.

use gfix_core::contraction::ContractionKind;
use gfix_core::control::{Affine, PiecewiseFn};
use gfix_core::space::{Carrier, GMetric, GTable, PartialOrder, PointValue, Regularity, SelfMap};
use gfix_core::{PointId, Provenance, Scalar, Space, Verdict};

use crate::doc::{
    ConditionDoc, ConditionsDoc, ContractionExpect, ExpectedDoc, LoadError, MetricTermsDoc, NonEquivalenceDoc, NoteDoc,
    OrbitDoc, Origin, Rat, Scenario, ScenarioDoc, TupleDoc,
};

pub const EXAMPLE_IDS: [&str; 9] = [
    "ex2.1", "ex2.2", "ex2.3", "ex2.4", "ex2.5", "ex2.6", "ex2.7", "ex3.1", "ex3.2",
];

pub const DEFAULT_GRID_STEP: (i64, i64) = (1, 64);
pub const DEFAULT_POWERS: usize = 10;
pub const DEFAULT_PRIMES: usize = 12;

const BUNDLED: [(&str, &str); 9] = [
    ("ex2.1", include_str!("../corpus/ex2.1.json")),
    ("ex2.2", include_str!("../corpus/ex2.2.json")),
    ("ex2.3", include_str!("../corpus/ex2.3.json")),
    ("ex2.4", include_str!("../corpus/ex2.4.json")),
    ("ex2.5", include_str!("../corpus/ex2.5.json")),
    ("ex2.6", include_str!("../corpus/ex2.6.json")),
    ("ex2.7", include_str!("../corpus/ex2.7.json")),
    ("ex3.1", include_str!("../corpus/ex3.1.json")),
    ("ex3.2", include_str!("../corpus/ex3.2.json")),
];

/// Knobs for rebuilding an example at a different resolution.
#[derive(Debug, Clone, Default)]
pub struct Params {
    /// Grid step for the examples on `[0, 1]`; must divide 1.
    pub grid_step: Option<Scalar>,
    /// Number of powers of two, or of primes, in the truncated examples.
    pub size: Option<usize>,
}

impl Params {
    pub fn is_default(&self) -> bool {
        self.grid_step.as_ref().is_none_or(|s| *s == default_step()) && self.size.is_none()
    }
}

fn default_step() -> Scalar {
    Scalar::ratio(DEFAULT_GRID_STEP.0, DEFAULT_GRID_STEP.1)
}

/// The shipped document text of an example.
pub fn bundled_json(id: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(k, _)| *k == id).map(|(_, v)| *v)
}

/// Loads a shipped example.
pub fn load_example(id: &str) -> Result<Scenario, LoadError> {
    let text = bundled_json(id).ok_or_else(|| LoadError::UnknownExample(id.to_string()))?;
    Scenario::from_json(text)
}

/// Builds an example from scratch.
pub fn build_example(id: &str, params: &Params) -> Result<Scenario, LoadError> {
    let step = params.grid_step.clone().unwrap_or_else(default_step);
    if matches!(id, "ex2.1" | "ex2.2" | "ex2.6") && !(step.is_positive() && step.recip().is_integer()) {
        return Err(LoadError::invalid(
            "--grid-step",
            "the step must be 1/k for a positive integer k",
        ));
    }
    let golden = params.is_default();
    match id {
        "ex2.1" => Ok(ex2_1(&step, golden)),
        "ex2.2" => Ok(ex2_2(&step, golden)),
        "ex2.3" => Ok(ex2_3()),
        "ex2.4" => Ok(ex2_4()),
        "ex2.5" => ex2_5(params.size.unwrap_or(DEFAULT_POWERS)),
        "ex2.6" => Ok(ex2_6(&step, golden)),
        "ex2.7" => Ok(ex2_7()),
        "ex3.1" => Ok(ex3_1()),
        "ex3.2" => ex3_2(params.size.unwrap_or(DEFAULT_PRIMES)),
        _ => Err(LoadError::UnknownExample(id.to_string())),
    }
}

pub fn build_doc(id: &str, params: &Params) -> Result<ScenarioDoc, LoadError> {
    Ok(build_example(id, params)?.to_doc())
}

fn r(n: i64, d: i64) -> Scalar {
    Scalar::ratio(n, d)
}

fn int(n: i64) -> Scalar {
    Scalar::from_int(n)
}

fn strs(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn rat(n: i64, d: i64) -> Rat {
    Rat(r(n, d))
}

fn identity() -> PiecewiseFn {
    PiecewiseFn::linear(Scalar::one())
}

/// `t/2` on `[0, 2]`, then the constant 1 (value 1 at `t = 2`).
pub fn half_then_one() -> PiecewiseFn {
    PiecewiseFn::new(
        vec![Scalar::zero(), int(2)],
        vec![Scalar::zero(), Scalar::one()],
        vec![Affine::new(r(1, 2), Scalar::zero()), Affine::constant(Scalar::one())],
    )
    .expect("well-formed")
}

fn cond(verdict: Verdict, provenance: Provenance, witness: Option<&[&str]>) -> ConditionDoc {
    ConditionDoc {
        verdict,
        provenance,
        witness: witness.map(strs),
    }
}

fn note(topic: &str, origin: Origin, text: &str) -> NoteDoc {
    NoteDoc {
        topic: topic.into(),
        origin,
        text: text.into(),
    }
}

fn contraction(kind: ContractionKind, verdict: Verdict, violations: &[&[&str]]) -> ContractionExpect {
    ContractionExpect {
        kind,
        verdict,
        violations: Some(violations.iter().map(|t| strs(t)).collect()),
        min_gap: None,
        sharpest_ratio: None,
    }
}

fn orbit(seed: &str, outcome: &str, points: &[&str]) -> OrbitDoc {
    OrbitDoc {
        seed: seed.into(),
        outcome: outcome.into(),
        points: strs(points),
    }
}

fn numbers(values: impl IntoIterator<Item = Scalar>) -> Vec<PointValue> {
    values.into_iter().map(PointValue::Number).collect()
}

fn unit_grid(step: &Scalar) -> Vec<PointValue> {
    let k = step.recip().floor_int();
    let k = i64::try_from(k).expect("grid too fine");
    numbers((0..=k).map(|i| step * &int(i)))
}

fn space(points: Vec<PointValue>, order: PartialOrder, carrier: Carrier, regular: Option<bool>) -> Space {
    Space::new(
        points,
        GMetric::MaxAbsDiff,
        order,
        carrier,
        Regularity::from_flag(regular),
    )
    .expect("example spaces are valid")
}

fn numeric_map(space: &Space, f: impl Fn(&Scalar) -> Option<Scalar>) -> SelfMap {
    SelfMap::from_values(space, |v| v.number().and_then(&f).map(PointValue::Number))
}

struct Parts {
    id: &'static str,
    description: &'static str,
    space: Space,
    map: SelfMap,
    psi: PiecewiseFn,
    phi: PiecewiseFn,
    theorem: ContractionKind,
    expected: ExpectedDoc,
    notes: Vec<NoteDoc>,
}

impl From<Parts> for Scenario {
    fn from(p: Parts) -> Self {
        Scenario {
            id: p.id.into(),
            description: p.description.into(),
            space: p.space,
            map: p.map,
            psi: Some(p.psi),
            phi: Some(p.phi),
            theorem: Some(p.theorem),
            expected: p.expected,
            notes: p.notes,
        }
    }
}

fn ex2_1(step: &Scalar, golden: bool) -> Scenario {
    let space = space(
        unit_grid(step),
        PartialOrder::NumericLeq,
        Carrier::Grid { step: step.clone() },
        Some(true),
    );
    let quarter = r(1, 4);
    let map = numeric_map(&space, |x| {
        Some(if *x == Scalar::one() {
            quarter.clone()
        } else {
            Scalar::zero()
        })
    })
    .with_source("T(x) = 0 on [0, 1), T(1) = 1/4")
    .with_declared_continuity(Some(false));
    let on_grid = quarter.ceil_to_step(step) == quarter;
    let mut expected = ExpectedDoc {
        fixed_points: Some(strs(&["0"])),
        axioms: Some(Verdict::Pass),
        contraction: vec![contraction(ContractionKind::Thm21M, Verdict::PassOnGrid, &[])],
        conditions: Some(ConditionsDoc {
            continuity_or_regularity: cond(Verdict::Pass, Provenance::Declared, None),
            monotone_nondecreasing: cond(Verdict::PassOnGrid, Provenance::Grid, None),
            seed_exists: cond(Verdict::PassOnGrid, Provenance::Grid, Some(&["0"])),
            contraction: cond(Verdict::PassOnGrid, Provenance::Grid, None),
        }),
        uniqueness: Some(Verdict::PassOnGrid),
        orbits: if on_grid {
            vec![orbit("1", "fixed_point_reached", &["1", "1/4", "0", "0"])]
        } else {
            vec![]
        },
        ..Default::default()
    };
    if golden {
        expected.contraction[0].sharpest_ratio = Some(rat(1, 4));
    }
    Parts {
        id: "ex2.1",
        description: "Discontinuous map on [0, 1] with the usual order; the space is regular, so a fixed point exists",
        space,
        map,
        psi: identity(),
        phi: PiecewiseFn::linear(r(1, 2)),
        theorem: ContractionKind::Thm21M,
        expected,
        notes: vec![
            note("regularity", Origin::Stated, "The map is not continuous; the space is regular non-decreasing."),
            note(
                "contraction constant",
                Origin::Stated,
                "Claimed bound G(Tx,Ty,Tz) <= 3/4 M(x,y,z), paired with phi(t) = t/2.",
            ),
            note(
                "contraction constant",
                Origin::Computed,
                "On the 1/64 grid the largest ratio G(Tx,Ty,Tz)/M(x,y,z) is 1/4, attained at (63/64, 1, 1); phi(t) = t/2 needs at most 1/2.",
            ),
        ],
    }
    .into()
}

fn ex2_2(step: &Scalar, golden: bool) -> Scenario {
    let space = space(
        unit_grid(step),
        PartialOrder::ProductSign,
        Carrier::Grid { step: step.clone() },
        Some(false),
    );
    let map = numeric_map(&space, |x| Some(if x.is_zero() { r(1, 4) } else { Scalar::zero() }))
        .with_source("T(x) = 0 on (0, 1], T(0) = 1/4")
        .with_declared_continuity(Some(false));
    let quarter_on_grid = r(1, 4).ceil_to_step(step) == r(1, 4);
    Parts {
        id: "ex2.2",
        description: "Zero is comparable only with itself; without a seed x <= Tx there is no fixed point",
        space,
        map,
        psi: identity(),
        phi: PiecewiseFn::linear(r(1, 4)),
        theorem: ContractionKind::Thm21M,
        expected: ExpectedDoc {
            fixed_points: Some(vec![]),
            axioms: Some(Verdict::Pass),
            contraction: vec![contraction(ContractionKind::Thm21M, Verdict::PassOnGrid, &[])],
            conditions: Some(ConditionsDoc {
                continuity_or_regularity: cond(Verdict::Fail, Provenance::Declared, None),
                monotone_nondecreasing: cond(Verdict::PassOnGrid, Provenance::Grid, None),
                seed_exists: cond(Verdict::Fail, Provenance::Grid, None),
                contraction: cond(Verdict::PassOnGrid, Provenance::Grid, None),
            }),
            orbits: if golden || quarter_on_grid {
                vec![orbit("0", "cycle", &["0", "1/4", "0"])]
            } else {
                vec![]
            },
            ..Default::default()
        },
        notes: vec![
            note("conditions", Origin::Stated, "Only conditions 2, 3 and 4 are claimed to hold."),
            note(
                "conditions",
                Origin::Computed,
                "No point satisfies x <= Tx: every image is 0 or 1/4, and neither is comparable with a positive x or with 0 respectively. Condition 3 therefore fails as well; condition 1 fails by declaration.",
            ),
        ],
    }
    .into()
}

fn divides_space(values: &[i64]) -> Space {
    space(
        numbers(values.iter().map(|&v| int(v))),
        PartialOrder::Divides,
        Carrier::Finite,
        None,
    )
}

fn table_map(space: &Space, images: &[usize]) -> SelfMap {
    SelfMap::new(
        space,
        images
            .iter()
            .map(|&i| gfix_core::space::Image::Point(PointId(i)))
            .collect(),
    )
    .expect("valid images")
}

fn finite_conditions(
    c2: Verdict,
    c2_witness: Option<&[&str]>,
    c3: Verdict,
    c3_witness: Option<&[&str]>,
) -> ConditionsDoc {
    ConditionsDoc {
        continuity_or_regularity: cond(Verdict::Pass, Provenance::Computed, None),
        monotone_nondecreasing: cond(c2, Provenance::Computed, c2_witness),
        seed_exists: cond(c3, Provenance::Computed, c3_witness),
        contraction: cond(Verdict::Pass, Provenance::Computed, None),
    }
}

fn ex2_3() -> Scenario {
    let space = divides_space(&[2, 3, 4]);
    let map = table_map(&space, &[2, 2, 1]).with_source("T(2) = T(3) = 4, T(4) = 3");
    Parts {
        id: "ex2.3",
        description: "Divisibility on {2, 3, 4}; the map is not monotone and has no fixed point",
        space,
        map,
        psi: identity(),
        phi: PiecewiseFn::linear(r(1, 4)),
        theorem: ContractionKind::Thm21M,
        expected: ExpectedDoc {
            fixed_points: Some(vec![]),
            axioms: Some(Verdict::Pass),
            contraction: vec![contraction(ContractionKind::Thm21M, Verdict::Pass, &[])],
            conditions: Some(finite_conditions(
                Verdict::Fail,
                Some(&["2", "4"]),
                Verdict::Pass,
                Some(&["2"]),
            )),
            orbits: vec![orbit("2", "cycle", &["2", "4", "3", "4"])],
            tuples: vec![TupleDoc {
                kind: ContractionKind::Thm21M,
                at: strs(&["2", "2", "4"]),
                distance: rat(1, 1),
                functional: rat(2, 1),
                phi_of_f: Some(rat(1, 2)),
            }],
            ..Default::default()
        },
        notes: vec![note(
            "conditions",
            Origin::Stated,
            "Only conditions 1, 3 and 4 are claimed to hold.",
        )],
    }
    .into()
}

fn ex2_4() -> Scenario {
    let space = divides_space(&[2, 3]);
    let map = table_map(&space, &[1, 0]).with_source("T(2) = 3, T(3) = 2");
    Parts {
        id: "ex2.4",
        description: "Two incomparable points swapped by the map; no seed x <= Tx exists",
        space,
        map,
        psi: identity(),
        phi: PiecewiseFn::linear(r(1, 2)),
        theorem: ContractionKind::Thm21M,
        expected: ExpectedDoc {
            fixed_points: Some(vec![]),
            axioms: Some(Verdict::Pass),
            contraction: vec![contraction(ContractionKind::Thm21M, Verdict::Pass, &[])],
            conditions: Some(finite_conditions(Verdict::Pass, None, Verdict::Fail, None)),
            orbits: vec![orbit("2", "cycle", &["2", "3", "2"])],
            ..Default::default()
        },
        notes: vec![note(
            "conditions",
            Origin::Stated,
            "Only conditions 1, 2 and 4 are claimed to hold.",
        )],
    }
    .into()
}

fn ex2_5(powers: usize) -> Result<Scenario, LoadError> {
    if !(2..=62).contains(&powers) {
        return Err(LoadError::invalid(
            "--depth",
            "the number of powers must be between 2 and 62",
        ));
    }
    let values: Vec<i64> = (1..=powers as u32).map(|k| 1i64 << k).collect();
    let top = *values.last().unwrap();
    let space = space(
        numbers(values.iter().map(|&v| int(v))),
        PartialOrder::Divides,
        Carrier::Truncated,
        Some(true),
    );
    let map = numeric_map(&space, |x| {
        let doubled = x * &int(2);
        (doubled <= int(top)).then_some(doubled)
    })
    .with_source("T(2^n) = 2^(n+1); the image of the largest power leaves the truncation")
    .with_declared_continuity(Some(true));
    let names: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    let name_refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let mut m1 = contraction(ContractionKind::M1Variant, Verdict::Pass, &[]);
    m1.min_gap = Some(rat(2, 1));
    Ok(Parts {
        id: "ex2.5",
        description: "Powers of two under divisibility, doubled by the map: the seven-term functional admits every hypothesis yet no fixed point",
        space,
        map,
        psi: identity(),
        phi: half_then_one(),
        theorem: ContractionKind::M1Variant,
        expected: ExpectedDoc {
            fixed_points: Some(vec![]),
            axioms: Some(Verdict::Pass),
            contraction: vec![m1],
            conditions: Some(ConditionsDoc {
                continuity_or_regularity: cond(Verdict::Pass, Provenance::Declared, None),
                monotone_nondecreasing: cond(Verdict::Pass, Provenance::Computed, None),
                seed_exists: cond(Verdict::Pass, Provenance::Computed, Some(&["2"])),
                contraction: cond(Verdict::Pass, Provenance::Computed, None),
            }),
            orbits: vec![orbit("2", "left_domain", &name_refs)],
            ..Default::default()
        },
        notes: vec![
            note("truncation", Origin::Computed, "The carrier keeps 2^1 .. 2^N; tuples whose images leave it are skipped."),
            note("margin", Origin::Stated, "M1(x,y,z) - G(Tx,Ty,Tz) >= 2 for every comparable triple."),
        ],
    }
    .into())
}

/// `2x + 1/16` up to `7/32`, then `16x/25 + 9/25`, rounded up to the grid.
pub fn ex2_6_map_value(x: &Scalar, step: &Scalar) -> Scalar {
    let exact = if *x <= r(7, 32) {
        &(x * &int(2)) + &r(1, 16)
    } else {
        &(x * &r(16, 25)) + &r(9, 25)
    };
    exact.ceil_to_step(step)
}

fn ex2_6(step: &Scalar, golden: bool) -> Scenario {
    let space = space(
        unit_grid(step),
        PartialOrder::NumericGeq,
        Carrier::Grid { step: step.clone() },
        None,
    );
    let map = numeric_map(&space, |x| Some(ex2_6_map_value(x, step)))
        .with_source("T(x) = 2x + 1/16 on [0, 7/32], 16x/25 + 9/25 on (7/32, 1], rounded up to the grid")
        .with_declared_continuity(Some(true));
    let mut expected = ExpectedDoc {
        fixed_points: Some(strs(&["1"])),
        axioms: Some(Verdict::Pass),
        contraction: vec![contraction(ContractionKind::Thm21M, Verdict::PassOnGrid, &[])],
        conditions: Some(ConditionsDoc {
            continuity_or_regularity: cond(Verdict::Pass, Provenance::Declared, None),
            monotone_nondecreasing: cond(Verdict::PassOnGrid, Provenance::Grid, None),
            seed_exists: cond(Verdict::PassOnGrid, Provenance::Grid, Some(&["1"])),
            contraction: cond(Verdict::PassOnGrid, Provenance::Grid, None),
        }),
        uniqueness: Some(Verdict::PassOnGrid),
        ..Default::default()
    };
    if golden {
        expected.orbits = vec![orbit(
            "0",
            "fixed_point_reached",
            &[
                "0", "1/16", "3/16", "7/16", "41/64", "25/32", "7/8", "59/64", "61/64", "63/64", "1", "1",
            ],
        )];
        expected.tuples = vec![TupleDoc {
            kind: ContractionKind::Thm21M,
            at: strs(&["5/64", "0", "0"]),
            distance: rat(5, 32),
            functional: rat(7, 32),
            phi_of_f: Some(rat(7, 1024)),
        }];
        expected.nonequivalence = Some(NonEquivalenceDoc {
            x: "5/64".into(),
            y: "0".into(),
            image_distance: rat(5, 32),
            metric_m: rat(9, 64),
            g_xyy: rat(5, 64),
            strict: true,
            defeats_g_form: true,
            terms: MetricTermsDoc {
                tx_ty: rat(5, 32),
                x_y: rat(5, 64),
                x_tx: rat(9, 64),
                y_ty: rat(1, 16),
                y_tx: rat(7, 32),
                x_ty: rat(1, 64),
            },
        });
    }
    Parts {
        id: "ex2.6",
        description: "Continuous increasing map on [0, 1] ordered by >=: the generalized functional works where the metric and plain G forms cannot",
        space,
        map,
        psi: identity(),
        phi: PiecewiseFn::linear(r(1, 32)),
        theorem: ContractionKind::Thm21M,
        expected,
        notes: vec![
            note(
                "grid",
                Origin::Computed,
                "The exact map leaves the grid and its orbits only approach 1. Images are rounded up to the grid, which keeps the map nondecreasing and 1 its only fixed point; rounding to nearest would create a second fixed point at 63/64.",
            ),
            note(
                "witness",
                Origin::Stated,
                "At x = 5/64, y = z = 0: |Tx - Ty| = 5/32 exceeds the metric functional 9/64, so no (psi, phi) pair satisfies the metric or plain G conditions.",
            ),
        ],
    }
    .into()
}

fn ex2_7() -> Scenario {
    let points = numbers([int(1), int(2), int(3)]);
    let entries: Vec<((usize, usize, usize), Scalar)> = [
        ((0, 0, 1), 3),
        ((1, 1, 2), 3),
        ((0, 1, 1), 5),
        ((0, 1, 2), 5),
        ((0, 0, 2), 4),
        ((1, 2, 2), 4),
        ((0, 2, 2), 2),
    ]
    .into_iter()
    .map(|(at, v)| (at, int(v)))
    .collect();
    let table = GTable::from_entries(3, &entries).expect("complete table");
    let space = Space::new(
        points,
        GMetric::Table(table),
        PartialOrder::NumericLeq,
        Carrier::Finite,
        Regularity::Unknown,
    )
    .expect("valid");
    let map = table_map(&space, &[1, 2, 2]).with_source("T(1) = 2, T(2) = T(3) = 3");
    let row = |x: &str, y: &str, distance: i64, n: i64, phi: (i64, i64)| TupleDoc {
        kind: ContractionKind::Thm26N,
        at: strs(&[x, y]),
        distance: rat(distance, 1),
        functional: rat(n, 1),
        phi_of_f: Some(rat(phi.0, phi.1)),
    };
    Parts {
        id: "ex2.7",
        description: "Three-point tabulated G-metric: the N functional certifies a fixed point that the G(x,Tx,y) form cannot",
        space,
        map,
        psi: identity(),
        phi: PiecewiseFn::linear(r(1, 20)),
        theorem: ContractionKind::Thm26N,
        expected: ExpectedDoc {
            fixed_points: Some(strs(&["3"])),
            axioms: Some(Verdict::Pass),
            contraction: vec![
                contraction(ContractionKind::Thm26N, Verdict::Pass, &[]),
                contraction(ContractionKind::Thm27GxTxy, Verdict::Fail, &[&["1", "1"]]),
            ],
            conditions: Some(finite_conditions(Verdict::Pass, None, Verdict::Pass, Some(&["1"]))),
            uniqueness: Some(Verdict::Pass),
            orbits: vec![orbit("1", "fixed_point_reached", &["1", "2", "3", "3"])],
            tuples: vec![
                row("1", "1", 3, 5, (1, 4)),
                row("1", "2", 4, 5, (1, 4)),
                row("1", "3", 4, 5, (1, 4)),
                row("2", "2", 0, 4, (1, 5)),
                row("2", "3", 0, 4, (1, 5)),
                row("3", "3", 0, 0, (0, 1)),
                TupleDoc {
                    kind: ContractionKind::Thm27GxTxy,
                    at: strs(&["1", "1"]),
                    distance: rat(3, 1),
                    functional: rat(3, 1),
                    phi_of_f: Some(rat(3, 20)),
                },
            ],
            ..Default::default()
        },
        notes: vec![
            note("rows", Origin::Stated, "Five comparable pairs are tabulated; the pair (2, 3) is not listed."),
            note(
                "G(x,Tx,y) form",
                Origin::Computed,
                "At x = y = 1 the image distance G(2, 3, 2) equals G(1, 2, 1) = 3, so no (psi, phi) pair satisfies that form. The table gives 3 for G(2, 3, 2), not 5.",
            ),
        ],
    }
    .into()
}

fn ex3_1() -> Scenario {
    let space = divides_space(&[2, 3]);
    let map = table_map(&space, &[0, 1]).with_source("T(2) = 2, T(3) = 3");
    Parts {
        id: "ex3.1",
        description:
            "Identity on two incomparable points: every existence hypothesis holds, yet there are two fixed points",
        space,
        map,
        psi: identity(),
        phi: PiecewiseFn::linear(r(1, 2)),
        theorem: ContractionKind::Thm21M,
        expected: ExpectedDoc {
            fixed_points: Some(strs(&["2", "3"])),
            axioms: Some(Verdict::Pass),
            contraction: vec![contraction(ContractionKind::Thm21M, Verdict::Pass, &[])],
            conditions: Some(finite_conditions(Verdict::Pass, None, Verdict::Pass, Some(&["2"]))),
            uniqueness: Some(Verdict::Fail),
            ..Default::default()
        },
        notes: vec![note(
            "uniqueness",
            Origin::Stated,
            "2 and 3 have no common upper bound.",
        )],
    }
    .into()
}

const PRIMES: [i64; 40] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109,
    113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173,
];

/// `(-1)^n p_n 6` for `n = 1..=count`.
pub fn signed_prime_multiples(count: usize) -> Vec<i64> {
    PRIMES[..count]
        .iter()
        .enumerate()
        .map(|(i, p)| if i % 2 == 0 { -6 * p } else { 6 * p })
        .collect()
}

fn ex3_2(primes: usize) -> Result<Scenario, LoadError> {
    if !(2..=PRIMES.len()).contains(&primes) {
        return Err(LoadError::invalid(
            "--depth",
            format_args!("the number of primes must be between 2 and {}", PRIMES.len()),
        ));
    }
    let chain = signed_prime_multiples(primes);
    let mut values = vec![2, 3];
    values.extend(&chain);
    let space = space(
        numbers(values.iter().map(|&v| int(v))),
        PartialOrder::Divides,
        Carrier::Truncated,
        None,
    );
    let map = numeric_map(&space, |x| {
        if *x == int(2) || *x == int(3) {
            return Some(x.clone());
        }
        let at = chain.iter().position(|&c| int(c) == *x)?;
        chain.get(at + 1).map(|&c| int(c))
    })
    .with_source("T(2) = 2, T(3) = 3, T((-1)^n p_n 6) = (-1)^(n+1) p_(n+1) 6; the last image leaves the truncation")
    .with_declared_continuity(Some(true));
    let names: Vec<String> = chain.iter().map(|v| v.to_string()).collect();
    let name_refs: Vec<&str> = names.iter().map(String::as_str).collect();
    Ok(Parts {
        id: "ex3.2",
        description: "Two fixed points with common upper bounds whose orbits never settle",
        space,
        map,
        psi: identity(),
        phi: half_then_one(),
        theorem: ContractionKind::Thm21M,
        expected: ExpectedDoc {
            fixed_points: Some(strs(&["2", "3"])),
            axioms: Some(Verdict::Pass),
            contraction: vec![contraction(ContractionKind::Thm21M, Verdict::Pass, &[])],
            conditions: Some(ConditionsDoc {
                continuity_or_regularity: cond(Verdict::Pass, Provenance::Declared, None),
                monotone_nondecreasing: cond(Verdict::Pass, Provenance::Computed, None),
                seed_exists: cond(Verdict::Pass, Provenance::Computed, Some(&["2"])),
                contraction: cond(Verdict::Pass, Provenance::Computed, None),
            }),
            uniqueness: Some(Verdict::Fail),
            orbits: vec![orbit(&names[0], "left_domain", &name_refs)],
            ..Default::default()
        },
        notes: vec![
            note("truncation", Origin::Computed, "The chain keeps the first N signed prime multiples; the last image leaves the truncation."),
            note(
                "signs",
                Origin::Computed,
                "Chain elements follow (-1)^n p_n 6, starting at -12; listing them as 12, -18, 30, ... flips every sign but changes no divisibility.",
            ),
        ],
    }
    .into())
}
