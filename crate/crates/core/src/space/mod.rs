//! Points, partial orders, G-metrics and self-maps.
//!
//! A [`Space`] is a finite carrier: either a genuinely finite set, a rational
//! grid sampling an interval, or a truncation of a countable set. All of the
//! checkers quantify over the carrier exhaustively.

mod axioms;
mod gmetric;
mod map;
mod order;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::Serialize;

use crate::scalar::Scalar;
use crate::verdict::{Provenance, Verdict};

pub use axioms::{verify_gmetric, Axiom, AxiomCheck, AxiomReport, AxiomWitness};
pub use gmetric::{derive_gmetric, DeriveMode, GMetric, GTable, MetricTable};
pub use map::{Image, SelfMap};
pub use order::{verify_poset, PartialOrder};

/// Handle into a space's point list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct PointId(pub usize);

impl PointId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for PointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Carrier element: a rational number or an opaque label.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PointValue {
    Number(Scalar),
    Label(String),
}

impl PointValue {
    pub fn number(&self) -> Option<&Scalar> {
        match self {
            PointValue::Number(s) => Some(s),
            PointValue::Label(_) => None,
        }
    }
}

impl From<Scalar> for PointValue {
    fn from(s: Scalar) -> Self {
        PointValue::Number(s)
    }
}

impl fmt::Display for PointValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointValue::Number(s) => write!(f, "{s}"),
            PointValue::Label(l) => f.write_str(l),
        }
    }
}

impl Serialize for PointValue {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// How the finite point list relates to the set it stands for.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Carrier {
    /// The set itself.
    Finite,
    /// Equally spaced rational sample of an interval.
    Grid { step: Scalar },
    /// First points of a countable unbounded set; maps may leave it.
    Truncated,
}

/// Declared "regular non-decreasing" attribute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regularity {
    RegularNonDecreasing,
    NotRegular,
    Unknown,
}

impl Regularity {
    pub fn from_flag(flag: Option<bool>) -> Self {
        match flag {
            Some(true) => Regularity::RegularNonDecreasing,
            Some(false) => Regularity::NotRegular,
            None => Regularity::Unknown,
        }
    }

    pub fn as_flag(self) -> Option<bool> {
        match self {
            Regularity::RegularNonDecreasing => Some(true),
            Regularity::NotRegular => Some(false),
            Regularity::Unknown => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpaceError {
    #[error("space has no points")]
    Empty,
    #[error("point index {index} out of range for {len} points")]
    OutOfRange { index: usize, len: usize },
    #[error("points {first} and {second} carry the same value")]
    DuplicatePoint { first: usize, second: usize },
    #[error("point {index} is not numeric but the {what} needs numbers")]
    NotNumeric { index: usize, what: &'static str },
    #[error("point {index} is not an integer but divisibility needs integers")]
    NotInteger { index: usize },
    #[error("table covers {found} points, space has {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("not a metric: {axiom} fails at {witness:?}")]
    NotAMetric { axiom: &'static str, witness: Vec<usize> },
}

/// A partially ordered G-metric space on a finite carrier.
#[derive(Debug, Clone)]
pub struct Space {
    points: Vec<PointValue>,
    gmetric: GMetric,
    order: PartialOrder,
    carrier: Carrier,
    regularity: Regularity,
    // Row-major `leq[x * n + y]`, reflexive closure included.
    leq: Vec<bool>,
}

impl Space {
    pub fn new(
        points: Vec<PointValue>,
        gmetric: GMetric,
        order: PartialOrder,
        carrier: Carrier,
        regularity: Regularity,
    ) -> Result<Self, SpaceError> {
        if points.is_empty() {
            return Err(SpaceError::Empty);
        }
        let mut seen = BTreeMap::new();
        for (i, p) in points.iter().enumerate() {
            if let Some(&first) = seen.get(p) {
                return Err(SpaceError::DuplicatePoint { first, second: i });
            }
            seen.insert(p.clone(), i);
        }
        gmetric.check_shape(&points)?;
        let leq = order.relation_matrix(&points)?;
        Ok(Space {
            points,
            gmetric,
            order,
            carrier,
            regularity,
            leq,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[PointValue] {
        &self.points
    }

    pub fn ids(&self) -> impl DoubleEndedIterator<Item = PointId> + Clone {
        (0..self.points.len()).map(PointId)
    }

    pub fn value(&self, id: PointId) -> &PointValue {
        &self.points[id.0]
    }

    pub fn gmetric(&self) -> &GMetric {
        &self.gmetric
    }

    pub fn order(&self) -> &PartialOrder {
        &self.order
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn declared_regularity(&self) -> Regularity {
        self.regularity
    }

    pub fn is_grid(&self) -> bool {
        matches!(self.carrier, Carrier::Grid { .. })
    }

    pub fn is_finite_set(&self) -> bool {
        matches!(self.carrier, Carrier::Finite)
    }

    /// Looks a point up by value.
    pub fn find(&self, value: &PointValue) -> Option<PointId> {
        self.points.iter().position(|p| p == value).map(PointId)
    }

    pub fn check_id(&self, id: PointId) -> Result<(), SpaceError> {
        if id.0 < self.points.len() {
            Ok(())
        } else {
            Err(SpaceError::OutOfRange {
                index: id.0,
                len: self.points.len(),
            })
        }
    }

    /// `x ⪯ y`.
    pub fn leq(&self, x: PointId, y: PointId) -> bool {
        self.leq[x.0 * self.points.len() + y.0]
    }

    pub fn comparable(&self, x: PointId, y: PointId) -> bool {
        self.leq(x, y) || self.leq(y, x)
    }

    /// G(x, y, z) for ids already known to be in range.
    pub fn g(&self, x: PointId, y: PointId, z: PointId) -> Scalar {
        self.gmetric.eval(&self.points, x.0, y.0, z.0)
    }

    /// The two-point distance paired with the G-metric: the generating metric
    /// for derived G-metrics, `|x - y|` for the closed form, and `G(x, y, y)`
    /// for explicit tables.
    pub fn d(&self, x: PointId, y: PointId) -> Scalar {
        self.gmetric.pair_distance(&self.points, x.0, y.0)
    }

    /// "Regular non-decreasing": always true on a genuinely finite set, where
    /// convergent sequences are eventually constant; declared otherwise.
    pub fn regularity(&self) -> (Verdict, Provenance) {
        if self.is_finite_set() {
            return (Verdict::Pass, Provenance::Computed);
        }
        let verdict = match self.regularity {
            Regularity::RegularNonDecreasing => Verdict::Pass,
            Regularity::NotRegular => Verdict::Fail,
            Regularity::Unknown => Verdict::Unknown,
        };
        (verdict, Provenance::Declared)
    }
}

/// Checked accessor for G(x, y, z).
pub fn g_eval(space: &Space, x: PointId, y: PointId, z: PointId) -> Result<Scalar, SpaceError> {
    space.check_id(x)?;
    space.check_id(y)?;
    space.check_id(z)?;
    Ok(space.g(x, y, z))
}

/// Every `(x, y, z)` with `x ⪯ y ⪯ z`, degenerate triples included, in
/// lexicographic id order.
pub fn enumerate_comparable_triples(space: &Space) -> impl Iterator<Item = (PointId, PointId, PointId)> + '_ {
    space.ids().flat_map(move |x| {
        space
            .ids()
            .filter(move |&y| space.leq(x, y))
            .flat_map(move |y| space.ids().filter(move |&z| space.leq(y, z)).map(move |z| (x, y, z)))
    })
}

/// Every `(x, y)` with `x ⪯ y`, in lexicographic id order.
pub fn comparable_pairs(space: &Space) -> impl Iterator<Item = (PointId, PointId)> + '_ {
    space
        .ids()
        .flat_map(move |x| space.ids().filter(move |&y| space.leq(x, y)).map(move |y| (x, y)))
}
