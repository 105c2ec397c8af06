use alloc::vec;
use alloc::vec::Vec;

use serde::Serialize;

use super::axioms::{Axiom, AxiomReport, AxiomWitness};
use super::{PointValue, SpaceError};
use crate::scalar::Scalar;

/// The order `⪯` on a carrier. The reflexive closure is always implied.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "pairs", rename_all = "snake_case")]
pub enum PartialOrder {
    /// `(i, j)` means point `i ⪯` point `j`.
    ExplicitPairs(Vec<(usize, usize)>),
    NumericLeq,
    /// `x ⪯ y` iff `x ≥ y`.
    NumericGeq,
    /// `x ⪯ y` iff `x | y` on integer values.
    Divides,
    /// `x ⪯ y` iff `x = y` or `xy(x − y) > 0`. Zero is comparable only
    /// with itself; on the positive half-line this is `x ≥ y`.
    ProductSign,
}

impl PartialOrder {
    /// Row-major relation matrix over `points`, reflexive closure included.
    pub(crate) fn relation_matrix(&self, points: &[PointValue]) -> Result<Vec<bool>, SpaceError> {
        let n = points.len();
        let mut m = vec![false; n * n];
        for i in 0..n {
            m[i * n + i] = true;
        }
        let numbers = |what| -> Result<Vec<&Scalar>, SpaceError> {
            points
                .iter()
                .enumerate()
                .map(|(index, p)| p.number().ok_or(SpaceError::NotNumeric { index, what }))
                .collect()
        };
        match self {
            PartialOrder::ExplicitPairs(pairs) => {
                for &(i, j) in pairs {
                    for index in [i, j] {
                        if index >= n {
                            return Err(SpaceError::OutOfRange { index, len: n });
                        }
                    }
                    m[i * n + j] = true;
                }
            }
            PartialOrder::NumericLeq | PartialOrder::NumericGeq => {
                let xs = numbers("numeric order")?;
                let geq = matches!(self, PartialOrder::NumericGeq);
                for i in 0..n {
                    for j in 0..n {
                        m[i * n + j] = if geq { xs[i] >= xs[j] } else { xs[i] <= xs[j] };
                    }
                }
            }
            PartialOrder::ProductSign => {
                let xs = numbers("product-sign order")?;
                for i in 0..n {
                    for j in 0..n {
                        if i != j {
                            m[i * n + j] = (&(xs[i] * xs[j]) * &(xs[i] - xs[j])).is_positive();
                        }
                    }
                }
            }
            PartialOrder::Divides => {
                let xs = numbers("divisibility order")?;
                if let Some(index) = xs.iter().position(|x| !x.is_integer()) {
                    return Err(SpaceError::NotInteger { index });
                }
                for i in 0..n {
                    for j in 0..n {
                        if i != j {
                            m[i * n + j] = Scalar::int_divides(xs[i], xs[j]).unwrap_or(false);
                        }
                    }
                }
            }
        }
        Ok(m)
    }
}

/// Checks reflexivity, antisymmetry and transitivity of `order` on `points`.
///
/// Every violation is reported: antisymmetry witnesses are pairs `(i, j)`
/// with `i < j`, transitivity witnesses are triples `(i, j, k)` with
/// `i ⪯ j ⪯ k` but not `i ⪯ k`.
pub fn verify_poset(order: &PartialOrder, points: &[PointValue]) -> Result<AxiomReport, SpaceError> {
    if points.is_empty() {
        return Err(SpaceError::Empty);
    }
    let n = points.len();
    let m = order.relation_matrix(points)?;
    let leq = |i: usize, j: usize| m[i * n + j];
    let mut report = AxiomReport::default();

    let reflexive = (0..n)
        .filter(|&i| !leq(i, i))
        .map(|i| AxiomWitness::tuple(&[i]))
        .collect();
    report.push(Axiom::Reflexive, reflexive);

    let mut antisym = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if leq(i, j) && leq(j, i) {
                antisym.push(AxiomWitness::tuple(&[i, j]));
            }
        }
    }
    report.push(Axiom::Antisymmetric, antisym);

    let mut trans = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j || !leq(i, j) {
                continue;
            }
            for k in 0..n {
                if k != j && leq(j, k) && !leq(i, k) {
                    trans.push(AxiomWitness::tuple(&[i, j, k]));
                }
            }
        }
    }
    report.push(Axiom::Transitive, trans);
    Ok(report)
}
