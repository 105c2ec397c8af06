//! Contraction functionals and exhaustive inequality checks.
//!
//! Every check has the shape `ψ(lhs) ≤ ψ(F) − φ(F)` where `lhs` is a
//! distance between images and `F` is the kind's control functional. The
//! checkers visit every comparable tuple of the kind's shape and keep every
//! violation.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::control::{construct_phi1, construct_phi2, ControlError, ControlFn, Phi1Construction, PiecewiseFn};
use crate::scalar::Scalar;
use crate::space::{comparable_pairs, enumerate_comparable_triples, GMetric, PointId, SelfMap, Space, SpaceError};
use crate::verdict::Verdict;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ContractionKind {
    /// ψ(G(Tx,Ty,Tz)) ≤ ψ(M) − φ(M) over x ⪯ y ⪯ z.
    #[serde(rename = "thm2.1")]
    Thm21M,
    /// ψ(G(Tx,Ty,Tz)) ≤ ψ(G(x,y,z)) − φ(G(x,y,z)) over x ⪯ y ⪯ z.
    #[serde(rename = "thm2.5")]
    Thm25G,
    /// ψ(G(Tx,Ty,T²x)) ≤ ψ(N) − φ(N) over x ⪯ y.
    #[serde(rename = "thm2.6")]
    Thm26N,
    /// ψ(G(Tx,T²x,Ty)) ≤ ψ(G(x,Tx,y)) − φ(G(x,Tx,y)) over x ⪯ y.
    #[serde(rename = "thm2.7")]
    Thm27GxTxy,
    /// As `Thm21M` with the unaveraged seven-term M₁.
    #[serde(rename = "m1")]
    M1Variant,
    /// ψ(d(Tx,Ty)) ≤ ψ(d(x,y)) − φ(d(x,y)) over x ⪯ y.
    #[serde(rename = "metric-psi-phi")]
    MetricPsiPhi,
    /// ψ(d(Tx,Ty)) ≤ ψ(M(x,y)) − φ(M(x,y)) over x ⪯ y.
    #[serde(rename = "metric-genM")]
    MetricGenM,
    /// G(Tx,T²x,Ty) ≤ G(x,Tx,y) − φ(G(x,Tx,y)) over x ⪯ y; ψ is ignored.
    #[serde(rename = "ka1.5")]
    Ka15,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TupleShape {
    Triples,
    Pairs,
}

impl ContractionKind {
    pub const ALL: [ContractionKind; 8] = [
        ContractionKind::Thm21M,
        ContractionKind::Thm25G,
        ContractionKind::Thm26N,
        ContractionKind::Thm27GxTxy,
        ContractionKind::M1Variant,
        ContractionKind::MetricPsiPhi,
        ContractionKind::MetricGenM,
        ContractionKind::Ka15,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ContractionKind::Thm21M => "thm2.1",
            ContractionKind::Thm25G => "thm2.5",
            ContractionKind::Thm26N => "thm2.6",
            ContractionKind::Thm27GxTxy => "thm2.7",
            ContractionKind::M1Variant => "m1",
            ContractionKind::MetricPsiPhi => "metric-psi-phi",
            ContractionKind::MetricGenM => "metric-genM",
            ContractionKind::Ka15 => "ka1.5",
        }
    }

    pub fn shape(self) -> TupleShape {
        match self {
            ContractionKind::Thm21M | ContractionKind::Thm25G | ContractionKind::M1Variant => TupleShape::Triples,
            _ => TupleShape::Pairs,
        }
    }
}

impl fmt::Display for ContractionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown contraction kind `{0}`")]
pub struct UnknownKind(pub alloc::string::String);

impl FromStr for ContractionKind {
    type Err = UnknownKind;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ContractionKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| UnknownKind(s.into()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ContractionError {
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Control(#[from] ControlError),
    #[error("image of {0} lies outside the truncated carrier")]
    OutsideImage(PointId),
    #[error("this check needs the closed-form max |x - y| G-metric")]
    NotClosedForm,
}

fn image(map: &SelfMap, x: PointId) -> Result<PointId, ContractionError> {
    map.apply(x).ok_or(ContractionError::OutsideImage(x))
}

fn check_ids(space: &Space, ids: &[PointId]) -> Result<(), ContractionError> {
    for &id in ids {
        space.check_id(id)?;
    }
    Ok(())
}

/// M(x,y,z) = max{G(x,Tx,y), G(x,Tx,z), G(x,y,z), G(y,Ty,Ty), G(z,Tz,Tz),
/// ½[G(x,Ty,Tz) + G(Tx,y,z)]}.
pub fn compute_m(space: &Space, map: &SelfMap, x: PointId, y: PointId, z: PointId) -> Result<Scalar, ContractionError> {
    let [a, b, c, d, e, f, g] = m_terms(space, map, x, y, z)?;
    let averaged = (f + g).half();
    Ok([a, b, c, d, e, averaged].into_iter().max().unwrap())
}

/// M₁: the seven terms of M with the last two left unaveraged.
pub fn compute_m1(
    space: &Space,
    map: &SelfMap,
    x: PointId,
    y: PointId,
    z: PointId,
) -> Result<Scalar, ContractionError> {
    Ok(m_terms(space, map, x, y, z)?.into_iter().max().unwrap())
}

fn m_terms(space: &Space, map: &SelfMap, x: PointId, y: PointId, z: PointId) -> Result<[Scalar; 7], ContractionError> {
    check_ids(space, &[x, y, z])?;
    let (tx, ty, tz) = (image(map, x)?, image(map, y)?, image(map, z)?);
    let g = |a, b, c| space.g(a, b, c);
    Ok([
        g(x, tx, y),
        g(x, tx, z),
        g(x, y, z),
        g(y, ty, ty),
        g(z, tz, tz),
        g(x, ty, tz),
        g(tx, y, z),
    ])
}

/// N(x,y,Tx) = max{G(x,Tx,y), G(Tx,T²x,T²x), ½[G(x,Tx,Tx) + G(y,Ty,Ty)],
/// ½[G(x,T²x,Ty) + G(Tx,Tx,y)]}.
pub fn compute_n(space: &Space, map: &SelfMap, x: PointId, y: PointId) -> Result<Scalar, ContractionError> {
    check_ids(space, &[x, y])?;
    let tx = image(map, x)?;
    let ttx = image(map, tx)?;
    let ty = image(map, y)?;
    let g = |a, b, c| space.g(a, b, c);
    Ok([
        g(x, tx, y),
        g(tx, ttx, ttx),
        (g(x, tx, tx) + g(y, ty, ty)).half(),
        (g(x, ttx, ty) + g(tx, tx, y)).half(),
    ]
    .into_iter()
    .max()
    .unwrap())
}

/// M(x,y) = max{d(x,y), d(x,Tx), d(y,Ty), ½[d(x,Ty) + d(y,Tx)]} for the
/// space's paired metric.
pub fn compute_metric_m(space: &Space, map: &SelfMap, x: PointId, y: PointId) -> Result<Scalar, ContractionError> {
    let t = metric_terms(space, map, x, y)?;
    Ok([t.x_y, t.x_tx, t.y_ty, (t.x_ty + t.y_tx).half()]
        .into_iter()
        .max()
        .unwrap())
}

/// The pairwise distances that enter the metric functional, plus the image
/// distance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MetricTerms {
    pub tx_ty: Scalar,
    pub x_y: Scalar,
    pub x_tx: Scalar,
    pub y_ty: Scalar,
    pub y_tx: Scalar,
    pub x_ty: Scalar,
}

pub fn metric_terms(space: &Space, map: &SelfMap, x: PointId, y: PointId) -> Result<MetricTerms, ContractionError> {
    check_ids(space, &[x, y])?;
    let (tx, ty) = (image(map, x)?, image(map, y)?);
    let d = |a, b| space.d(a, b);
    Ok(MetricTerms {
        tx_ty: d(tx, ty),
        x_y: d(x, y),
        x_tx: d(x, tx),
        y_ty: d(y, ty),
        y_tx: d(y, tx),
        x_ty: d(x, ty),
    })
}

/// The image distance and control functional for one tuple.
pub fn tuple_sides(
    space: &Space,
    map: &SelfMap,
    kind: ContractionKind,
    tuple: &[PointId],
) -> Result<(Scalar, Scalar), ContractionError> {
    use ContractionKind::*;
    match (kind.shape(), tuple) {
        (TupleShape::Triples, &[x, y, z]) => {
            check_ids(space, tuple)?;
            let (tx, ty, tz) = (image(map, x)?, image(map, y)?, image(map, z)?);
            let lhs = space.g(tx, ty, tz);
            let f = match kind {
                Thm21M => compute_m(space, map, x, y, z)?,
                M1Variant => compute_m1(space, map, x, y, z)?,
                _ => space.g(x, y, z),
            };
            Ok((lhs, f))
        }
        (TupleShape::Pairs, &[x, y]) => {
            check_ids(space, tuple)?;
            let (tx, ty) = (image(map, x)?, image(map, y)?);
            match kind {
                Thm26N => {
                    let ttx = image(map, tx)?;
                    Ok((space.g(tx, ty, ttx), compute_n(space, map, x, y)?))
                }
                Thm27GxTxy | Ka15 => {
                    let ttx = image(map, tx)?;
                    Ok((space.g(tx, ttx, ty), space.g(x, tx, y)))
                }
                MetricPsiPhi => Ok((space.d(tx, ty), space.d(x, y))),
                _ => Ok((space.d(tx, ty), compute_metric_m(space, map, x, y)?)),
            }
        }
        _ => Err(SpaceError::DimensionMismatch {
            expected: match kind.shape() {
                TupleShape::Triples => 3,
                TupleShape::Pairs => 2,
            },
            found: tuple.len(),
        }
        .into()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub tuple: Vec<PointId>,
    /// Raw image distance.
    pub distance: Scalar,
    #[serde(rename = "F")]
    pub functional: Scalar,
    /// ψ(distance)
    pub lhs: Scalar,
    /// ψ(F) − φ(F)
    pub rhs: Scalar,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContractionReport {
    pub kind: ContractionKind,
    pub verdict: Verdict,
    pub checked: usize,
    pub violations: Vec<Violation>,
    pub truncated: bool,
    /// Tuples skipped because an image left the truncated carrier.
    pub skipped: usize,
    /// max distance / F over tuples with F > 0.
    pub sharpest_ratio: Option<Scalar>,
    /// min F − distance over checked tuples.
    pub min_gap: Option<Scalar>,
}

impl ContractionReport {
    pub fn passed(&self) -> bool {
        self.verdict.is_pass()
    }
}

struct Identity;

impl ControlFn for Identity {
    fn apply(&self, t: &Scalar) -> Result<Scalar, ControlError> {
        Ok(t.clone())
    }
}

/// Checks the kind's inequality on every comparable tuple.
///
/// ψ and φ are taken as given; callers holding [`PiecewiseFn`]s validate
/// them with [`crate::control::validate_psi`] / [`crate::control::validate_phi`].
pub fn check_contraction(
    space: &Space,
    map: &SelfMap,
    psi: &dyn ControlFn,
    phi: &dyn ControlFn,
    kind: ContractionKind,
) -> Result<ContractionReport, ContractionError> {
    let psi: &dyn ControlFn = if kind == ContractionKind::Ka15 { &Identity } else { psi };
    let tuples: Vec<Vec<PointId>> = match kind.shape() {
        TupleShape::Triples => enumerate_comparable_triples(space)
            .map(|(x, y, z)| alloc::vec![x, y, z])
            .collect(),
        TupleShape::Pairs => comparable_pairs(space).map(|(x, y)| alloc::vec![x, y]).collect(),
    };
    let mut report = ContractionReport {
        kind,
        verdict: Verdict::Pass,
        checked: 0,
        violations: Vec::new(),
        truncated: false,
        skipped: 0,
        sharpest_ratio: None,
        min_gap: None,
    };
    for tuple in tuples {
        let (distance, functional) = match tuple_sides(space, map, kind, &tuple) {
            Ok(sides) => sides,
            Err(ContractionError::OutsideImage(_)) => {
                report.truncated = true;
                report.skipped += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        report.checked += 1;
        let gap = &functional - &distance;
        if report.min_gap.as_ref().is_none_or(|g| &gap < g) {
            report.min_gap = Some(gap);
        }
        if functional.is_positive() {
            let ratio = &distance / &functional;
            if report.sharpest_ratio.as_ref().is_none_or(|r| &ratio > r) {
                report.sharpest_ratio = Some(ratio);
            }
        }
        let lhs = psi.apply(&distance)?;
        let rhs = psi.apply(&functional)? - phi.apply(&functional)?;
        if lhs > rhs {
            report.violations.push(Violation {
                tuple,
                distance,
                functional,
                lhs,
                rhs,
            });
        }
    }
    report.verdict = Verdict::from_holds(report.violations.is_empty(), space.is_grid());
    Ok(report)
}

/// A comparable pair whose image distance is at least the metric
/// functional, which no admissible (ψ, φ) can absorb.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NonEquivalenceWitness {
    pub x: PointId,
    pub y: PointId,
    /// G(Tx, Ty, Ty)
    pub image_distance: Scalar,
    /// M(x, y) of the metric form.
    pub metric_m: Scalar,
    /// G(x, y, y), the functional of the non-generalized G form.
    pub g_xyy: Scalar,
    /// `image_distance > metric_m` rather than equal.
    pub strict: bool,
    /// Also defeats ψ(G(Tx,Ty,Ty)) ≤ ψ(G(x,y,y)) − φ(G(x,y,y)).
    pub defeats_g_form: bool,
    pub terms: MetricTerms,
}

/// Scans comparable pairs for a witness with `M(x,y) > 0` and
/// `G(Tx,Ty,Ty) ≥ M(x,y)`. Returns the first strict witness in id order,
/// falling back to the first tight one.
pub fn find_nonequivalence_witness(
    space: &Space,
    map: &SelfMap,
) -> Result<Option<NonEquivalenceWitness>, ContractionError> {
    if *space.gmetric() != GMetric::MaxAbsDiff {
        return Err(ContractionError::NotClosedForm);
    }
    let mut tight = None;
    for (x, y) in comparable_pairs(space) {
        let (tx, ty) = match (map.apply(x), map.apply(y)) {
            (Some(a), Some(b)) => (a, b),
            _ => continue,
        };
        let metric_m = compute_metric_m(space, map, x, y)?;
        let image_distance = space.g(tx, ty, ty);
        if !metric_m.is_positive() || image_distance < metric_m {
            continue;
        }
        let g_xyy = space.g(x, y, y);
        let witness = NonEquivalenceWitness {
            x,
            y,
            strict: image_distance > metric_m,
            defeats_g_form: g_xyy.is_positive() && image_distance >= g_xyy,
            image_distance,
            metric_m,
            g_xyy,
            terms: metric_terms(space, map, x, y)?,
        };
        if witness.strict {
            return Ok(Some(witness));
        }
        tight.get_or_insert(witness);
    }
    Ok(tight)
}

/// Chooses α and a depth so that every positive M value over the comparable
/// triples lies in the constructed range, then builds φ₁ from φ₂:
/// first φ₂ ≤ min(ψ, φ), then φ₁ for the pair (ψ, φ₂).
pub fn generalized_phi(
    space: &Space,
    map: &SelfMap,
    psi: &PiecewiseFn,
    phi: &PiecewiseFn,
) -> Result<Phi1Construction, ContractionError> {
    let phi2 = construct_phi2(psi, phi)?.phi2;
    let mut lo: Option<Scalar> = None;
    let mut hi: Option<Scalar> = None;
    for (x, y, z) in enumerate_comparable_triples(space) {
        let m = match compute_m(space, map, x, y, z) {
            Ok(m) => m,
            Err(ContractionError::OutsideImage(_)) => continue,
            Err(e) => return Err(e),
        };
        if m.is_positive() {
            if lo.as_ref().is_none_or(|l| &m < l) {
                lo = Some(m.clone());
            }
            if hi.as_ref().is_none_or(|h| &m > h) {
                hi = Some(m);
            }
        }
    }
    let alpha = lo.unwrap_or_else(Scalar::one);
    let top = hi.unwrap_or_else(Scalar::one);
    let depth = (&top / &alpha).ceil_int();
    let depth = usize::try_from(depth).unwrap_or(usize::MAX).max(1);
    Ok(construct_phi1(psi, &phi2, &alpha, depth)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::control::PiecewiseFn;
    use crate::space::{Carrier, Image, PartialOrder, PointValue, Regularity};
    use alloc::vec;

    fn r(n: i64, d: i64) -> Scalar {
        Scalar::ratio(n, d)
    }

    fn ints(values: &[i64]) -> Vec<PointValue> {
        values
            .iter()
            .map(|&v| PointValue::Number(Scalar::from_int(v)))
            .collect()
    }

    fn two_three_four() -> (Space, SelfMap) {
        let s = Space::new(
            ints(&[2, 3, 4]),
            GMetric::MaxAbsDiff,
            PartialOrder::Divides,
            Carrier::Finite,
            Regularity::Unknown,
        )
        .unwrap();
        let t = SelfMap::new(
            &s,
            vec![
                Image::Point(PointId(2)),
                Image::Point(PointId(2)),
                Image::Point(PointId(1)),
            ],
        )
        .unwrap();
        (s, t)
    }

    #[test]
    fn m_on_divisibility_example() {
        let (s, t) = two_three_four();
        assert_eq!(
            compute_m(&s, &t, PointId(0), PointId(0), PointId(2)).unwrap(),
            Scalar::from_int(2)
        );
        // seven-term brute force
        let (x, y, z) = (PointId(0), PointId(0), PointId(2));
        let (tx, ty, tz) = (PointId(2), PointId(2), PointId(1));
        let terms = [
            s.g(x, tx, y),
            s.g(x, tx, z),
            s.g(x, y, z),
            s.g(y, ty, ty),
            s.g(z, tz, tz),
            s.g(x, ty, tz),
            s.g(tx, y, z),
        ];
        assert_eq!(
            compute_m1(&s, &t, x, y, z).unwrap(),
            terms.iter().max().unwrap().clone()
        );
    }

    #[test]
    fn functionals_vanish_at_fixed_points() {
        let (s, _) = two_three_four();
        let id = SelfMap::new(&s, s.ids().map(Image::Point).collect()).unwrap();
        let p = PointId(1);
        assert!(compute_m(&s, &id, p, p, p).unwrap().is_zero());
        assert!(compute_m1(&s, &id, p, p, p).unwrap().is_zero());
        assert!(compute_n(&s, &id, p, p).unwrap().is_zero());
        assert!(compute_metric_m(&s, &id, p, p).unwrap().is_zero());
    }

    #[test]
    fn g_is_below_m_below_m1() {
        let (s, t) = two_three_four();
        for x in s.ids() {
            for y in s.ids() {
                for z in s.ids() {
                    let m = compute_m(&s, &t, x, y, z).unwrap();
                    assert!(s.g(x, y, z) <= m);
                    assert!(m <= compute_m1(&s, &t, x, y, z).unwrap());
                }
            }
        }
    }

    #[test]
    fn kind_names_round_trip() {
        for k in ContractionKind::ALL {
            assert_eq!(k.name().parse::<ContractionKind>().unwrap(), k);
        }
        assert!("thm9".parse::<ContractionKind>().is_err());
    }

    #[test]
    fn check_collects_every_violation() {
        let (s, t) = two_three_four();
        let psi = PiecewiseFn::linear(Scalar::one());
        let phi = PiecewiseFn::linear(r(1, 4));
        let rep = check_contraction(&s, &t, &psi, &phi, ContractionKind::Thm21M).unwrap();
        assert_eq!(rep.checked, 5);
        assert_eq!(rep.verdict, Verdict::Pass);
        // A too-greedy φ fails on the two non-degenerate triples.
        let greedy = PiecewiseFn::linear(Scalar::one());
        let rep = check_contraction(&s, &t, &psi, &greedy, ContractionKind::Thm21M).unwrap();
        assert_eq!(rep.verdict, Verdict::Fail);
        for v in &rep.violations {
            let (d, f) = tuple_sides(&s, &t, ContractionKind::Thm21M, &v.tuple).unwrap();
            assert_eq!((d, f.clone()), (v.distance.clone(), v.functional.clone()));
            assert_eq!(v.rhs, &f - &f);
        }
    }

    #[test]
    fn constant_map_has_no_witness_identity_is_tight() {
        let s = Space::new(
            (0..=8).map(|k| PointValue::Number(r(k, 8))).collect(),
            GMetric::MaxAbsDiff,
            PartialOrder::NumericLeq,
            Carrier::Grid { step: r(1, 8) },
            Regularity::Unknown,
        )
        .unwrap();
        let id = SelfMap::new(&s, s.ids().map(Image::Point).collect()).unwrap();
        // d(Tx, Ty) = d(x, y) = M(x, y): tight, which no φ > 0 absorbs.
        let w = find_nonequivalence_witness(&s, &id).unwrap().unwrap();
        assert!(!w.strict);
        assert_eq!(w.image_distance, w.metric_m);
        let constant = SelfMap::new(&s, s.ids().map(|_| Image::Point(PointId(3))).collect()).unwrap();
        assert_eq!(find_nonequivalence_witness(&s, &constant).unwrap(), None);
    }

    #[test]
    fn witness_needs_closed_form() {
        let s = Space::new(
            ints(&[0, 1]),
            GMetric::SumOfMetric(crate::space::MetricTable::absolute_difference(&[
                Scalar::zero(),
                Scalar::one(),
            ])),
            PartialOrder::NumericLeq,
            Carrier::Finite,
            Regularity::Unknown,
        )
        .unwrap();
        let id = SelfMap::new(&s, s.ids().map(Image::Point).collect()).unwrap();
        assert_eq!(
            find_nonequivalence_witness(&s, &id),
            Err(ContractionError::NotClosedForm)
        );
    }
}
