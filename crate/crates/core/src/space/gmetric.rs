use alloc::vec;
use alloc::vec::Vec;

use super::{PointValue, SpaceError};
use crate::scalar::Scalar;

/// Dense three-index table. Entries are stored exactly as given, so a table
/// can hold asymmetric data and fail (G4).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GTable {
    n: usize,
    values: Vec<Scalar>,
}

impl GTable {
    pub fn zeros(n: usize) -> Self {
        GTable {
            n,
            values: vec![Scalar::zero(); n * n * n],
        }
    }

    /// Builds a table from one representative per unordered triple; each
    /// entry is copied to all six permutations. Unlisted triples with three
    /// equal indices are zero; any other unlisted triple is an error.
    pub fn from_entries(n: usize, entries: &[((usize, usize, usize), Scalar)]) -> Result<Self, SpaceError> {
        let mut table = GTable::zeros(n);
        let mut filled = vec![false; n * n * n];
        for ((i, j, k), v) in entries {
            for &index in &[*i, *j, *k] {
                if index >= n {
                    return Err(SpaceError::OutOfRange { index, len: n });
                }
            }
            for (a, b, c) in permutations(*i, *j, *k) {
                let at = table.idx(a, b, c);
                table.values[at] = v.clone();
                filled[at] = true;
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let diagonal = i == j && j == k;
                    if !diagonal && !filled[table.idx(i, j, k)] {
                        return Err(SpaceError::NotAMetric {
                            axiom: "table entry missing",
                            witness: vec![i, j, k],
                        });
                    }
                }
            }
        }
        Ok(table)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.n + j) * self.n + k
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.values[self.idx(i, j, k)]
    }

    /// Sets exactly one ordered entry.
    pub fn set(&mut self, i: usize, j: usize, k: usize, value: Scalar) {
        let at = self.idx(i, j, k);
        self.values[at] = value;
    }

    pub fn set_symmetric(&mut self, i: usize, j: usize, k: usize, value: Scalar) {
        for (a, b, c) in permutations(i, j, k) {
            self.set(a, b, c, value.clone());
        }
    }

    /// One entry per multiset `i ≤ j ≤ k`, skipping the zero diagonal.
    pub fn canonical_entries(&self) -> Vec<((usize, usize, usize), Scalar)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in i..self.n {
                for k in j..self.n {
                    let v = self.get(i, j, k);
                    if i == j && j == k && v.is_zero() {
                        continue;
                    }
                    out.push(((i, j, k), v.clone()));
                }
            }
        }
        out
    }
}

fn permutations(i: usize, j: usize, k: usize) -> [(usize, usize, usize); 6] {
    [(i, j, k), (i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)]
}

/// Dense symmetric two-index distance table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricTable {
    n: usize,
    values: Vec<Scalar>,
}

impl MetricTable {
    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self, SpaceError> {
        let n = rows.len();
        let mut values = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(SpaceError::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            values.extend(row);
        }
        Ok(MetricTable { n, values })
    }

    /// `|x - y|` on a numeric carrier.
    pub fn absolute_difference(xs: &[Scalar]) -> Self {
        let n = xs.len();
        let mut values = Vec::with_capacity(n * n);
        for a in xs {
            for b in xs {
                values.push((a - b).abs());
            }
        }
        MetricTable { n, values }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.values[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<Scalar>> {
        self.values.chunks(self.n.max(1)).map(|r| r.to_vec()).collect()
    }

    /// First violated metric axiom, if any.
    pub fn validate(&self) -> Result<(), SpaceError> {
        let n = self.n;
        let fail = |axiom, witness: &[usize]| {
            Err(SpaceError::NotAMetric {
                axiom,
                witness: witness.to_vec(),
            })
        };
        for i in 0..n {
            if !self.get(i, i).is_zero() {
                return fail("identity d(x,x)=0", &[i, i]);
            }
            for j in 0..n {
                if i != j && !self.get(i, j).is_positive() {
                    return fail("positivity d(x,y)>0", &[i, j]);
                }
                if self.get(i, j) != self.get(j, i) {
                    return fail("symmetry d(x,y)=d(y,x)", &[i, j]);
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if self.get(i, k) > &(self.get(i, j) + self.get(j, k)) {
                        return fail("triangle d(x,z)<=d(x,y)+d(y,z)", &[i, j, k]);
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeriveMode {
    /// max{d(x,y), d(y,z), d(z,x)}
    Max,
    /// d(x,y) + d(y,z) + d(z,x)
    Sum,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GMetric {
    Table(GTable),
    MaxOfMetric(MetricTable),
    SumOfMetric(MetricTable),
    /// max{|x-y|, |y-z|, |z-x|} on numeric points.
    MaxAbsDiff,
}

impl GMetric {
    pub(crate) fn check_shape(&self, points: &[PointValue]) -> Result<(), SpaceError> {
        let n = points.len();
        let found = match self {
            GMetric::Table(t) => t.len(),
            GMetric::MaxOfMetric(m) | GMetric::SumOfMetric(m) => m.len(),
            GMetric::MaxAbsDiff => {
                for (index, p) in points.iter().enumerate() {
                    if p.number().is_none() {
                        return Err(SpaceError::NotNumeric {
                            index,
                            what: "closed-form G-metric",
                        });
                    }
                }
                n
            }
        };
        if found != n {
            return Err(SpaceError::DimensionMismatch { expected: n, found });
        }
        Ok(())
    }

    pub(crate) fn eval(&self, points: &[PointValue], x: usize, y: usize, z: usize) -> Scalar {
        match self {
            GMetric::Table(t) => t.get(x, y, z).clone(),
            GMetric::MaxOfMetric(m) => {
                let (a, b, c) = (m.get(x, y), m.get(y, z), m.get(z, x));
                a.max(b).max(c).clone()
            }
            GMetric::SumOfMetric(m) => m.get(x, y) + m.get(y, z) + m.get(z, x),
            GMetric::MaxAbsDiff => {
                let num = |i: usize| points[i].number().expect("checked numeric carrier");
                let (a, b, c) = (num(x), num(y), num(z));
                let hi = a.max(b).max(c);
                let lo = a.min(b).min(c);
                hi - lo
            }
        }
    }

    pub(crate) fn pair_distance(&self, points: &[PointValue], x: usize, y: usize) -> Scalar {
        match self {
            GMetric::MaxOfMetric(m) | GMetric::SumOfMetric(m) => m.get(x, y).clone(),
            GMetric::MaxAbsDiff => {
                let num = |i: usize| points[i].number().expect("checked numeric carrier");
                (num(x) - num(y)).abs()
            }
            GMetric::Table(_) => self.eval(points, x, y, y),
        }
    }
}

/// Builds the max- or sum-form G-metric from a metric, rejecting inputs that
/// are not metrics.
pub fn derive_gmetric(metric: MetricTable, mode: DeriveMode) -> Result<GMetric, SpaceError> {
    metric.validate()?;
    Ok(match mode {
        DeriveMode::Max => GMetric::MaxOfMetric(metric),
        DeriveMode::Sum => GMetric::SumOfMetric(metric),
    })
}
