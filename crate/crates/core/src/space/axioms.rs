use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use super::{PointId, Space};
use crate::scalar::Scalar;
use crate::verdict::Verdict;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Axiom {
    #[serde(rename = "reflexive")]
    Reflexive,
    #[serde(rename = "antisymmetric")]
    Antisymmetric,
    #[serde(rename = "transitive")]
    Transitive,
    #[serde(rename = "nonnegative")]
    Nonnegative,
    /// G(x, x, x) = 0.
    G1,
    /// G(x, x, y) > 0 for x ≠ y.
    G2,
    /// G(x, x, y) ≤ G(x, y, z) for z ≠ y.
    G3,
    /// Invariance under the six argument permutations.
    G4,
    /// Rectangle inequality G(x, y, z) ≤ G(x, a, a) + G(a, y, z).
    G5,
}

impl Axiom {
    pub fn name(self) -> &'static str {
        match self {
            Axiom::Reflexive => "reflexive",
            Axiom::Antisymmetric => "antisymmetric",
            Axiom::Transitive => "transitive",
            Axiom::Nonnegative => "nonnegative",
            Axiom::G1 => "G1",
            Axiom::G2 => "G2",
            Axiom::G3 => "G3",
            Axiom::G4 => "G4",
            Axiom::G5 => "G5",
        }
    }
}

/// A violating tuple, with the two sides of the failed comparison when the
/// axiom is an inequality.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomWitness {
    pub tuple: Vec<PointId>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs: Option<Scalar>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs: Option<Scalar>,
}

impl AxiomWitness {
    pub fn tuple(ids: &[usize]) -> Self {
        AxiomWitness {
            tuple: ids.iter().copied().map(PointId).collect(),
            lhs: None,
            rhs: None,
        }
    }

    fn with_sides(ids: &[usize], lhs: Scalar, rhs: Scalar) -> Self {
        AxiomWitness {
            lhs: Some(lhs),
            rhs: Some(rhs),
            ..Self::tuple(ids)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomCheck {
    pub axiom: Axiom,
    pub verdict: Verdict,
    pub witnesses: Vec<AxiomWitness>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub(crate) fn push(&mut self, axiom: Axiom, witnesses: Vec<AxiomWitness>) {
        let verdict = Verdict::from_holds(witnesses.is_empty(), false);
        self.checks.push(AxiomCheck {
            axiom,
            verdict,
            witnesses,
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.verdict.is_pass())
    }

    pub fn check(&self, axiom: Axiom) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.axiom == axiom)
    }

    pub fn failed_axioms(&self) -> Vec<Axiom> {
        self.checks
            .iter()
            .filter(|c| !c.verdict.is_pass())
            .map(|c| c.axiom)
            .collect()
    }
}

// Dense n³ table of G values. When every denominator divides a common
// denominator small enough, comparisons run on scaled i64 numerators.
struct Dense {
    n: usize,
    exact: Vec<Scalar>,
    scaled: Option<Vec<i64>>,
}

impl Dense {
    fn build(space: &Space) -> Self {
        let n = space.len();
        let mut exact = Vec::with_capacity(n * n * n);
        for x in space.ids() {
            for y in space.ids() {
                for z in space.ids() {
                    exact.push(space.g(x, y, z));
                }
            }
        }
        let scaled = scale_to_integers(&exact);
        Dense { n, exact, scaled }
    }

    #[inline]
    fn idx(&self, x: usize, y: usize, z: usize) -> usize {
        (x * self.n + y) * self.n + z
    }

    fn get(&self, x: usize, y: usize, z: usize) -> &Scalar {
        &self.exact[self.idx(x, y, z)]
    }
}

fn scale_to_integers(values: &[Scalar]) -> Option<Vec<i64>> {
    // Leaves headroom so that a sum of two scaled values cannot overflow.
    const LIMIT: i64 = i64::MAX / 4;
    let mut lcm = BigInt::one();
    for v in values {
        lcm = lcm.lcm(v.denom());
        if lcm > BigInt::from(LIMIT) {
            return None;
        }
    }
    values
        .iter()
        .map(|v| {
            let k = (v.numer() * (&lcm / v.denom())).to_i64()?;
            (k.abs() <= LIMIT).then_some(k)
        })
        .collect()
}

/// Exhaustively checks nonnegativity and (G1)–(G5) on every tuple of the
/// carrier. (G5) is O(n⁴).
pub fn verify_gmetric(space: &Space) -> AxiomReport {
    let table = Dense::build(space);
    let n = table.n;
    let mut report = AxiomReport::default();

    let mut nonneg = Vec::new();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let v = table.get(x, y, z);
                if v.is_negative() {
                    nonneg.push(AxiomWitness::with_sides(&[x, y, z], v.clone(), Scalar::zero()));
                }
            }
        }
    }
    report.push(Axiom::Nonnegative, nonneg);

    let g1 = (0..n)
        .filter(|&x| !table.get(x, x, x).is_zero())
        .map(|x| AxiomWitness::with_sides(&[x, x, x], table.get(x, x, x).clone(), Scalar::zero()))
        .collect();
    report.push(Axiom::G1, g1);

    let mut g2 = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if x != y && !table.get(x, x, y).is_positive() {
                g2.push(AxiomWitness::with_sides(
                    &[x, x, y],
                    table.get(x, x, y).clone(),
                    Scalar::zero(),
                ));
            }
        }
    }
    report.push(Axiom::G2, g2);

    let mut g3 = Vec::new();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if z == y {
                    continue;
                }
                let lhs = table.get(x, x, y);
                let rhs = table.get(x, y, z);
                if lhs > rhs {
                    g3.push(AxiomWitness::with_sides(&[x, y, z], lhs.clone(), rhs.clone()));
                }
            }
        }
    }
    report.push(Axiom::G3, g3);

    let mut g4 = Vec::new();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let v = table.get(x, y, z);
                let perms = [(x, z, y), (y, x, z), (y, z, x), (z, x, y), (z, y, x)];
                if let Some(&(a, b, c)) = perms.iter().find(|&&(a, b, c)| table.get(a, b, c) != v) {
                    g4.push(AxiomWitness {
                        tuple: [x, y, z, a, b, c].into_iter().map(PointId).collect(),
                        lhs: Some(v.clone()),
                        rhs: Some(table.get(a, b, c).clone()),
                    });
                }
            }
        }
    }
    report.push(Axiom::G4, g4);

    let mut g5 = Vec::new();
    let mut record = |x: usize, y: usize, z: usize, a: usize| {
        let lhs = table.get(x, y, z).clone();
        let rhs = table.get(x, a, a) + table.get(a, y, z);
        g5.push(AxiomWitness::with_sides(&[x, y, z, a], lhs, rhs));
    };
    match &table.scaled {
        Some(s) => {
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        let lhs = s[table.idx(x, y, z)];
                        for a in 0..n {
                            if lhs > s[table.idx(x, a, a)] + s[table.idx(a, y, z)] {
                                record(x, y, z, a);
                            }
                        }
                    }
                }
            }
        }
        None => {
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        for a in 0..n {
                            if table.get(x, y, z) > &(table.get(x, a, a) + table.get(a, y, z)) {
                                record(x, y, z, a);
                            }
                        }
                    }
                }
            }
        }
    }
    report.push(Axiom::G5, g5);
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{Carrier, GMetric, GTable, PartialOrder, PointValue, Regularity};
    use alloc::vec;

    fn ints(values: &[i64]) -> Vec<PointValue> {
        values
            .iter()
            .map(|&v| PointValue::Number(Scalar::from_int(v)))
            .collect()
    }

    fn example_table() -> GTable {
        let s = Scalar::from_int;
        GTable::from_entries(
            3,
            &[
                ((0, 0, 1), s(3)),
                ((1, 1, 2), s(3)),
                ((0, 1, 1), s(5)),
                ((0, 1, 2), s(5)),
                ((0, 0, 2), s(4)),
                ((1, 2, 2), s(4)),
                ((0, 2, 2), s(2)),
            ],
        )
        .unwrap()
    }

    fn space_with(g: GMetric, pts: Vec<PointValue>) -> Space {
        Space::new(pts, g, PartialOrder::NumericLeq, Carrier::Finite, Regularity::Unknown).unwrap()
    }

    #[test]
    fn closed_form_on_small_set_passes() {
        let report = verify_gmetric(&space_with(GMetric::MaxAbsDiff, ints(&[1, 2, 3])));
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn three_point_table_passes() {
        let report = verify_gmetric(&space_with(GMetric::Table(example_table()), ints(&[1, 2, 3])));
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn zero_off_diagonal_fails_g2() {
        let mut t = example_table();
        t.set_symmetric(0, 0, 1, Scalar::zero());
        let report = verify_gmetric(&space_with(GMetric::Table(t), ints(&[1, 2, 3])));
        let g2 = report.check(Axiom::G2).unwrap();
        assert_eq!(g2.verdict, Verdict::Fail);
        assert_eq!(g2.witnesses[0].tuple, vec![PointId(0), PointId(0), PointId(1)]);
    }

    #[test]
    fn asymmetric_entry_fails_g4() {
        let mut t = example_table();
        t.set(2, 1, 0, Scalar::from_int(6));
        let report = verify_gmetric(&space_with(GMetric::Table(t), ints(&[1, 2, 3])));
        assert_eq!(report.check(Axiom::G4).unwrap().verdict, Verdict::Fail);
    }

    #[test]
    fn g5_witness_carries_both_sides() {
        let mut t = example_table();
        t.set_symmetric(0, 1, 2, Scalar::from_int(20));
        let report = verify_gmetric(&space_with(GMetric::Table(t), ints(&[1, 2, 3])));
        let g5 = report.check(Axiom::G5).unwrap();
        assert_eq!(g5.verdict, Verdict::Fail);
        for w in &g5.witnesses {
            assert!(w.lhs.as_ref().unwrap() > w.rhs.as_ref().unwrap());
        }
    }

    #[test]
    fn scaling_falls_back_on_huge_denominators() {
        let big = Scalar::ratio(1, i64::MAX);
        assert!(scale_to_integers(&[big.clone(), Scalar::ratio(1, i64::MAX - 1)]).is_none());
        assert_eq!(
            scale_to_integers(&[Scalar::ratio(1, 2), Scalar::ratio(1, 3)]),
            Some(vec![3, 2])
        );
    }
}
