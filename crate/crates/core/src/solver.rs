//! Picard iteration, fixed-point enumeration and hypothesis checks.

use alloc::vec;
use alloc::vec::Vec;

use serde::Serialize;

use crate::contraction::{check_contraction, ContractionError, ContractionKind, ContractionReport};
use crate::control::ControlFn;
use crate::scalar::Scalar;
use crate::space::{comparable_pairs, Carrier, PointId, SelfMap, Space, SpaceError};
use crate::verdict::{Provenance, Verdict};

pub const DEFAULT_BUDGET: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolverError {
    #[error("orbit budget must be positive")]
    ZeroBudget,
    #[error(transparent)]
    Space(#[from] SpaceError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OrbitVerdict {
    FixedPointReached {
        point: PointId,
        steps: usize,
    },
    Cycle {
        period: usize,
        entry: PointId,
    },
    /// The image of the last recorded point lies outside the carrier.
    LeftDomain {
        steps: usize,
    },
    BudgetExceeded,
}

impl OrbitVerdict {
    pub fn converged(&self) -> bool {
        matches!(self, OrbitVerdict::FixedPointReached { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitTrace {
    pub seed: PointId,
    /// x₀, x₁ = Tx₀, …; ends with the repeated point, the first revisited
    /// point, or the last point before leaving the carrier.
    pub points: Vec<PointId>,
    /// G(xₙ, xₙ₊₁, xₙ₊₁) for each recorded step.
    pub step_distances: Vec<Scalar>,
    pub step_nonincreasing: bool,
    pub verdict: OrbitVerdict,
}

/// Iterates `T` from `seed` for at most `budget` applications.
pub fn picard_orbit(space: &Space, map: &SelfMap, seed: PointId, budget: usize) -> Result<OrbitTrace, SolverError> {
    if budget == 0 {
        return Err(SolverError::ZeroBudget);
    }
    space.check_id(seed)?;
    let mut visited: Vec<Option<usize>> = vec![None; space.len()];
    let mut points = vec![seed];
    let mut step_distances = Vec::new();
    let mut current = seed;
    visited[seed.index()] = Some(0);
    let verdict = loop {
        let n = points.len() - 1;
        if n == budget {
            break OrbitVerdict::BudgetExceeded;
        }
        let Some(next) = map.apply(current) else {
            break OrbitVerdict::LeftDomain { steps: n };
        };
        step_distances.push(space.g(current, next, next));
        points.push(next);
        if next == current {
            break OrbitVerdict::FixedPointReached { point: next, steps: n };
        }
        if let Some(j) = visited[next.index()] {
            break OrbitVerdict::Cycle {
                period: n + 1 - j,
                entry: next,
            };
        }
        visited[next.index()] = Some(n + 1);
        current = next;
    };
    let step_nonincreasing = step_distances.windows(2).all(|w| w[1] <= w[0]);
    Ok(OrbitTrace {
        seed,
        points,
        step_distances,
        step_nonincreasing,
        verdict,
    })
}

/// `{p : T(p) = p}` in id order.
pub fn enumerate_fixed_points(space: &Space, map: &SelfMap) -> Vec<PointId> {
    space.ids().filter(|&p| map.is_fixed(p)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    ContinuityOrRegularity,
    MonotoneNondecreasing,
    SeedExists,
    Contraction,
}

impl Condition {
    pub fn number(self) -> u8 {
        match self {
            Condition::ContinuityOrRegularity => 1,
            Condition::MonotoneNondecreasing => 2,
            Condition::SeedExists => 3,
            Condition::Contraction => 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionCheck {
    pub condition: Condition,
    pub verdict: Verdict,
    pub provenance: Provenance,
    /// For monotonicity the first failing pair, for the seed the first
    /// `x ⪯ Tx`.
    pub witness: Option<Vec<PointId>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HypothesisReport {
    pub theorem: ContractionKind,
    pub conditions: Vec<ConditionCheck>,
    pub contraction: ContractionReport,
}

impl HypothesisReport {
    pub fn condition(&self, c: Condition) -> &ConditionCheck {
        self.conditions
            .iter()
            .find(|k| k.condition == c)
            .expect("all four recorded")
    }

    pub fn passed(&self) -> bool {
        self.conditions.iter().all(|c| c.verdict.is_pass())
    }

    /// Condition numbers whose verdict is not a pass.
    pub fn failed(&self) -> Vec<u8> {
        self.conditions
            .iter()
            .filter(|c| !c.verdict.is_pass())
            .map(|c| c.condition.number())
            .collect()
    }

    /// As [`failed`](Self::failed), restricted to computed verdicts.
    pub fn failed_computed(&self) -> Vec<u8> {
        self.conditions
            .iter()
            .filter(|c| !c.verdict.is_pass() && c.provenance != Provenance::Declared)
            .map(|c| c.condition.number())
            .collect()
    }
}

fn scan_provenance(space: &Space) -> Provenance {
    if space.is_grid() {
        Provenance::Grid
    } else {
        Provenance::Computed
    }
}

fn continuity_or_regularity(space: &Space, map: &SelfMap) -> ConditionCheck {
    let (regular, provenance) = space.regularity();
    let verdict = if provenance == Provenance::Computed {
        regular
    } else {
        match (map.declared_continuity(), regular) {
            (Some(true), _) | (_, Verdict::Pass) => Verdict::Pass,
            (Some(false), Verdict::Fail) => Verdict::Fail,
            _ => Verdict::Unknown,
        }
    };
    ConditionCheck {
        condition: Condition::ContinuityOrRegularity,
        verdict,
        provenance,
        witness: None,
    }
}

fn monotone(space: &Space, map: &SelfMap) -> ConditionCheck {
    let witness = comparable_pairs(space).find(|&(x, y)| match (map.apply(x), map.apply(y)) {
        (Some(tx), Some(ty)) => !space.leq(tx, ty),
        _ => false,
    });
    ConditionCheck {
        condition: Condition::MonotoneNondecreasing,
        verdict: Verdict::from_holds(witness.is_none(), space.is_grid()),
        provenance: scan_provenance(space),
        witness: witness.map(|(x, y)| vec![x, y]),
    }
}

fn seed(space: &Space, map: &SelfMap) -> ConditionCheck {
    let witness = space.ids().find(|&x| map.apply(x).is_some_and(|tx| space.leq(x, tx)));
    ConditionCheck {
        condition: Condition::SeedExists,
        verdict: Verdict::from_holds(witness.is_some(), space.is_grid()),
        provenance: scan_provenance(space),
        witness: witness.map(|x| vec![x]),
    }
}

/// Checks the four hypotheses shared by the existence results for the
/// kind's contraction condition.
pub fn check_hypotheses(
    space: &Space,
    map: &SelfMap,
    psi: &dyn ControlFn,
    phi: &dyn ControlFn,
    theorem: ContractionKind,
) -> Result<HypothesisReport, ContractionError> {
    let contraction = check_contraction(space, map, psi, phi, theorem)?;
    let conditions = vec![
        continuity_or_regularity(space, map),
        monotone(space, map),
        seed(space, map),
        ConditionCheck {
            condition: Condition::Contraction,
            verdict: contraction.verdict,
            provenance: scan_provenance(space),
            witness: contraction.violations.first().map(|v| v.tuple.clone()),
        },
    ];
    Ok(HypothesisReport {
        theorem,
        conditions,
        contraction,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CandidateOrbit {
    pub upper_bound: PointId,
    pub verdict: OrbitVerdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairEvidence {
    pub pair: [PointId; 2],
    /// Every common upper bound with the verdict of its orbit.
    pub candidates: Vec<CandidateOrbit>,
    /// First upper bound whose orbit reaches a fixed point.
    pub witness: Option<PointId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UniquenessReport {
    pub fixed_points: Vec<PointId>,
    pub pairs: Vec<PairEvidence>,
    pub verdict: Verdict,
    /// Non-convergence was concluded on a truncation or from a partial map.
    pub truncated_evidence: bool,
}

/// Every pair of distinct fixed points needs a common upper bound whose
/// orbit converges. On a finite carrier that means it reaches a fixed point;
/// leaving a truncation or exhausting the budget counts as divergence.
pub fn check_uniqueness_hypothesis(
    space: &Space,
    map: &SelfMap,
    budget: usize,
) -> Result<UniquenessReport, SolverError> {
    if budget == 0 {
        return Err(SolverError::ZeroBudget);
    }
    let fixed_points = enumerate_fixed_points(space, map);
    let mut pairs = Vec::new();
    let mut diverged = false;
    for (i, &x) in fixed_points.iter().enumerate() {
        for &y in &fixed_points[i + 1..] {
            let mut candidates = Vec::new();
            for z in space.ids().filter(|&z| space.leq(x, z) && space.leq(y, z)) {
                let verdict = picard_orbit(space, map, z, budget)?.verdict;
                diverged |= matches!(verdict, OrbitVerdict::LeftDomain { .. } | OrbitVerdict::BudgetExceeded);
                candidates.push(CandidateOrbit {
                    upper_bound: z,
                    verdict,
                });
            }
            let witness = candidates.iter().find(|c| c.verdict.converged()).map(|c| c.upper_bound);
            pairs.push(PairEvidence {
                pair: [x, y],
                candidates,
                witness,
            });
        }
    }
    let holds = pairs.iter().all(|p| p.witness.is_some());
    Ok(UniquenessReport {
        fixed_points,
        verdict: Verdict::from_holds(holds, space.is_grid()),
        truncated_evidence: diverged && (*space.carrier() == Carrier::Truncated || map.is_partial()),
        pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::control::PiecewiseFn;
    use crate::space::{GMetric, Image, PartialOrder, PointValue, Regularity};

    fn ints(values: &[i64]) -> Vec<PointValue> {
        values
            .iter()
            .map(|&v| PointValue::Number(Scalar::from_int(v)))
            .collect()
    }

    fn space(values: &[i64], order: PartialOrder) -> Space {
        Space::new(
            ints(values),
            GMetric::MaxAbsDiff,
            order,
            Carrier::Finite,
            Regularity::Unknown,
        )
        .unwrap()
    }

    fn map(s: &Space, images: &[Option<usize>]) -> SelfMap {
        SelfMap::new(
            s,
            images
                .iter()
                .map(|i| i.map_or(Image::Outside, |i| Image::Point(PointId(i))))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn swap_is_a_two_cycle() {
        let s = space(&[2, 3], PartialOrder::Divides);
        let t = map(&s, &[Some(1), Some(0)]);
        let orbit = picard_orbit(&s, &t, PointId(0), 100).unwrap();
        assert_eq!(
            orbit.verdict,
            OrbitVerdict::Cycle {
                period: 2,
                entry: PointId(0)
            }
        );
        assert_eq!(orbit.points, vec![PointId(0), PointId(1), PointId(0)]);
    }

    #[test]
    fn reaches_fixed_point_and_records_steps() {
        let s = space(&[0, 1, 4], PartialOrder::NumericLeq);
        let t = map(&s, &[Some(0), Some(0), Some(1)]);
        let orbit = picard_orbit(&s, &t, PointId(2), 10).unwrap();
        assert_eq!(
            orbit.verdict,
            OrbitVerdict::FixedPointReached {
                point: PointId(0),
                steps: 2
            }
        );
        assert_eq!(
            orbit.step_distances,
            vec![Scalar::from_int(3), Scalar::one(), Scalar::zero()]
        );
        assert!(orbit.step_nonincreasing);
        for w in orbit.points.windows(2) {
            assert_eq!(t.apply(w[0]), Some(w[1]));
        }
    }

    #[test]
    fn partial_map_leaves_domain() {
        let s = space(&[2, 4, 8], PartialOrder::NumericLeq);
        let t = map(&s, &[Some(1), Some(2), None]);
        let orbit = picard_orbit(&s, &t, PointId(0), 100).unwrap();
        assert_eq!(orbit.verdict, OrbitVerdict::LeftDomain { steps: 2 });
    }

    #[test]
    fn budget_is_enforced() {
        let s = space(&[2, 4, 8], PartialOrder::NumericLeq);
        let t = map(&s, &[Some(1), Some(2), Some(2)]);
        assert_eq!(picard_orbit(&s, &t, PointId(0), 0), Err(SolverError::ZeroBudget));
        assert_eq!(
            picard_orbit(&s, &t, PointId(0), 1).unwrap().verdict,
            OrbitVerdict::BudgetExceeded
        );
        assert!(picard_orbit(&s, &t, PointId(0), 3).unwrap().verdict.converged());
    }

    #[test]
    fn two_incomparable_fixed_points_fail_uniqueness() {
        let s = space(&[2, 3], PartialOrder::Divides);
        let t = map(&s, &[Some(0), Some(1)]);
        assert_eq!(enumerate_fixed_points(&s, &t), vec![PointId(0), PointId(1)]);
        let u = check_uniqueness_hypothesis(&s, &t, 100).unwrap();
        assert_eq!(u.verdict, Verdict::Fail);
        assert!(u.pairs[0].candidates.is_empty());
    }

    #[test]
    fn single_fixed_point_passes_vacuously() {
        let s = space(&[1, 2, 3], PartialOrder::NumericLeq);
        let t = map(&s, &[Some(1), Some(2), Some(2)]);
        let u = check_uniqueness_hypothesis(&s, &t, 100).unwrap();
        assert_eq!(u.verdict, Verdict::Pass);
        assert!(u.pairs.is_empty());
    }

    #[test]
    fn hypotheses_report_monotone_witness() {
        let s = space(&[2, 3, 4], PartialOrder::Divides);
        let t = map(&s, &[Some(2), Some(2), Some(1)]);
        let psi = PiecewiseFn::linear(Scalar::one());
        let phi = PiecewiseFn::linear(Scalar::ratio(1, 4));
        let rep = check_hypotheses(&s, &t, &psi, &phi, ContractionKind::Thm21M).unwrap();
        assert_eq!(rep.failed(), vec![2]);
        assert_eq!(
            rep.condition(Condition::MonotoneNondecreasing).witness,
            Some(vec![PointId(0), PointId(2)])
        );
        assert_eq!(rep.condition(Condition::SeedExists).witness, Some(vec![PointId(0)]));
        assert_eq!(rep.condition(Condition::Contraction).verdict, rep.contraction.verdict);
    }
}
