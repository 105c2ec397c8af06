//! The JSON scenario document.
//!
//! Rationals travel as `"p/q"` strings and points are named by their value,
//! so a document reads like the example it encodes. Loading goes in two
//! steps: serde parses the shape (errors carry line and column), then
//! [`ScenarioDoc::build`] validates the mathematics (errors carry a field
//! path).

use std::fmt;

use gfix_core::contraction::ContractionKind;
use gfix_core::control::{Affine, PiecewiseFn};
use gfix_core::space::{Carrier, GMetric, GTable, Image, MetricTable, PartialOrder, PointValue, Regularity, SelfMap};
use gfix_core::{PointId, Provenance, Scalar, Space, Verdict};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid scenario at `{at}`: {message}")]
    Invalid { at: String, message: String },
    #[error("unknown example `{0}`")]
    UnknownExample(String),
}

impl LoadError {
    pub(crate) fn invalid(at: impl Into<String>, message: impl fmt::Display) -> Self {
        LoadError::Invalid {
            at: at.into(),
            message: message.to_string(),
        }
    }
}

impl From<serde_json::Error> for LoadError {
    fn from(e: serde_json::Error) -> Self {
        // serde_json appends " at line L column C"; keep the bare message.
        let full = e.to_string();
        let message = match full.rfind(" at line ") {
            Some(cut) => full[..cut].to_string(),
            None => full,
        };
        LoadError::Parse {
            line: e.line(),
            column: e.column(),
            message,
        }
    }
}

/// A rational in `"p/q"` form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Rat(pub Scalar);

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map(Rat).map_err(serde::de::Error::custom)
    }
}

impl From<Scalar> for Rat {
    fn from(s: Scalar) -> Self {
        Rat(s)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDoc {
    pub id: String,
    pub description: String,
    pub points: Vec<String>,
    pub carrier: CarrierDoc,
    pub order: OrderDoc,
    pub gmetric: GMetricDoc,
    /// Declared "regular non-decreasing" flag; ignored on finite carriers.
    #[serde(default)]
    pub regular: Option<bool>,
    /// Declared continuity of the map; ignored on finite carriers.
    #[serde(default)]
    pub continuous_map: Option<bool>,
    /// Image value per point, `null` when the image leaves the carrier.
    pub map: Vec<Option<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map_source: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi: Option<FnDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<FnDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theorem: Option<ContractionKind>,
    #[serde(default)]
    pub expected: ExpectedDoc,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<NoteDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CarrierDoc {
    Finite,
    Grid { step: Rat },
    Truncated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum OrderDoc {
    Leq,
    Geq,
    Divides,
    ProductSign,
    Pairs { pairs: Vec<[String; 2]> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GMetricDoc {
    MaxAbsDiff,
    /// One entry per unordered triple; permutations are implied and
    /// all-equal triples default to 0.
    Table {
        entries: Vec<TableEntry>,
    },
    MaxOfMetric {
        rows: Vec<Vec<Rat>>,
    },
    SumOfMetric {
        rows: Vec<Vec<Rat>>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableEntry {
    pub at: [String; 3],
    pub value: Rat,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FnDoc {
    pub breakpoints: Vec<Rat>,
    pub values_at: Vec<Rat>,
    pub pieces: Vec<PieceDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceDoc {
    pub slope: Rat,
    pub intercept: Rat,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectedDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed_points: Option<Vec<String>>,
    /// Combined verdict of the poset and G-metric axiom checks.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axioms: Option<Verdict>,
    /// Contraction checks beyond the scenario's theorem are listed too.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub contraction: Vec<ContractionExpect>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conditions: Option<ConditionsDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub uniqueness: Option<Verdict>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub orbits: Vec<OrbitDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tuples: Vec<TupleDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nonequivalence: Option<NonEquivalenceDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContractionExpect {
    pub kind: ContractionKind,
    pub verdict: Verdict,
    /// Every violating tuple, in report order, when pinned down.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub violations: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_gap: Option<Rat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sharpest_ratio: Option<Rat>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConditionsDoc {
    pub continuity_or_regularity: ConditionDoc,
    pub monotone_nondecreasing: ConditionDoc,
    pub seed_exists: ConditionDoc,
    pub contraction: ConditionDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConditionDoc {
    pub verdict: Verdict,
    pub provenance: Provenance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitDoc {
    pub seed: String,
    /// `fixed_point_reached`, `cycle`, `left_domain` or `budget_exceeded`.
    pub outcome: String,
    pub points: Vec<String>,
}

/// Both sides of one contraction inequality at a named tuple.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TupleDoc {
    pub kind: ContractionKind,
    pub at: Vec<String>,
    pub distance: Rat,
    #[serde(rename = "F")]
    pub functional: Rat,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi_of_f: Option<Rat>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NonEquivalenceDoc {
    pub x: String,
    pub y: String,
    pub image_distance: Rat,
    pub metric_m: Rat,
    pub g_xyy: Rat,
    pub strict: bool,
    pub defeats_g_form: bool,
    pub terms: MetricTermsDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricTermsDoc {
    pub tx_ty: Rat,
    pub x_y: Rat,
    pub x_tx: Rat,
    pub y_ty: Rat,
    pub y_tx: Rat,
    pub x_ty: Rat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    /// Claimed in the source of the example.
    Stated,
    /// Established by this tool or an independent computation.
    Computed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoteDoc {
    pub topic: String,
    pub origin: Origin,
    pub text: String,
}

/// A validated scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub id: String,
    pub description: String,
    pub space: Space,
    pub map: SelfMap,
    pub psi: Option<PiecewiseFn>,
    pub phi: Option<PiecewiseFn>,
    pub theorem: Option<ContractionKind>,
    pub expected: ExpectedDoc,
    pub notes: Vec<NoteDoc>,
}

pub fn parse_point(text: &str) -> PointValue {
    match text.parse::<Scalar>() {
        Ok(s) => PointValue::Number(s),
        Err(_) => PointValue::Label(text.to_string()),
    }
}

impl ScenarioDoc {
    pub fn from_json(text: &str) -> Result<Self, LoadError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Pretty JSON with a trailing newline; the corpus files are exactly this.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents always serialize");
        s.push('\n');
        s
    }

    pub fn build(&self) -> Result<Scenario, LoadError> {
        let points: Vec<PointValue> = self.points.iter().map(|p| parse_point(p)).collect();
        let lookup = |at: String, text: &str| -> Result<usize, LoadError> {
            let v = parse_point(text);
            points
                .iter()
                .position(|p| *p == v)
                .ok_or_else(|| LoadError::invalid(at, format_args!("`{text}` is not a point")))
        };
        let carrier = match &self.carrier {
            CarrierDoc::Finite => Carrier::Finite,
            CarrierDoc::Grid { step } => {
                if !step.0.is_positive() {
                    return Err(LoadError::invalid("carrier.step", "grid step must be positive"));
                }
                Carrier::Grid { step: step.0.clone() }
            }
            CarrierDoc::Truncated => Carrier::Truncated,
        };
        let order = match &self.order {
            OrderDoc::Leq => PartialOrder::NumericLeq,
            OrderDoc::Geq => PartialOrder::NumericGeq,
            OrderDoc::Divides => PartialOrder::Divides,
            OrderDoc::ProductSign => PartialOrder::ProductSign,
            OrderDoc::Pairs { pairs } => PartialOrder::ExplicitPairs(
                pairs
                    .iter()
                    .enumerate()
                    .map(|(i, [a, b])| {
                        Ok((
                            lookup(format!("order.pairs[{i}][0]"), a)?,
                            lookup(format!("order.pairs[{i}][1]"), b)?,
                        ))
                    })
                    .collect::<Result<_, LoadError>>()?,
            ),
        };
        let rows = |rows: &[Vec<Rat>]| -> Result<MetricTable, LoadError> {
            let table = MetricTable::from_rows(rows.iter().map(|r| r.iter().map(|x| x.0.clone()).collect()).collect())
                .map_err(|e| LoadError::invalid("gmetric.rows", e))?;
            table.validate().map_err(|e| LoadError::invalid("gmetric.rows", e))?;
            Ok(table)
        };
        let gmetric = match &self.gmetric {
            GMetricDoc::MaxAbsDiff => GMetric::MaxAbsDiff,
            GMetricDoc::Table { entries } => {
                let mut list = Vec::with_capacity(entries.len());
                for (i, e) in entries.iter().enumerate() {
                    let at = |k: usize| lookup(format!("gmetric.entries[{i}].at[{k}]"), &e.at[k]);
                    list.push(((at(0)?, at(1)?, at(2)?), e.value.0.clone()));
                }
                GMetric::Table(
                    GTable::from_entries(points.len(), &list).map_err(|e| LoadError::invalid("gmetric.entries", e))?,
                )
            }
            GMetricDoc::MaxOfMetric { rows: r } => GMetric::MaxOfMetric(rows(r)?),
            GMetricDoc::SumOfMetric { rows: r } => GMetric::SumOfMetric(rows(r)?),
        };
        let space = Space::new(
            points.clone(),
            gmetric,
            order,
            carrier,
            Regularity::from_flag(self.regular),
        )
        .map_err(|e| LoadError::invalid("points", e))?;

        if self.map.len() != space.len() {
            return Err(LoadError::invalid(
                "map",
                format_args!("{} images for {} points", self.map.len(), space.len()),
            ));
        }
        let images = self
            .map
            .iter()
            .enumerate()
            .map(|(i, m)| match m {
                None => Ok(Image::Outside),
                Some(v) => lookup(format!("map[{i}]"), v).map(|j| Image::Point(PointId(j))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut map = SelfMap::new(&space, images)
            .map_err(|e| LoadError::invalid("map", e))?
            .with_declared_continuity(self.continuous_map);
        if let Some(src) = &self.map_source {
            map = map.with_source(src.clone());
        }
        let function = |name: &str, f: &Option<FnDoc>| -> Result<Option<PiecewiseFn>, LoadError> {
            f.as_ref()
                .map(|f| f.build().map_err(|e| LoadError::invalid(name, e)))
                .transpose()
        };
        let scenario = Scenario {
            id: self.id.clone(),
            description: self.description.clone(),
            psi: function("psi", &self.psi)?,
            phi: function("phi", &self.phi)?,
            theorem: self.theorem,
            expected: self.expected.clone(),
            notes: self.notes.clone(),
            space,
            map,
        };
        scenario.check_expected_points()?;
        Ok(scenario)
    }
}

impl FnDoc {
    pub fn build(&self) -> Result<PiecewiseFn, gfix_core::control::ControlError> {
        PiecewiseFn::new(
            self.breakpoints.iter().map(|r| r.0.clone()).collect(),
            self.values_at.iter().map(|r| r.0.clone()).collect(),
            self.pieces
                .iter()
                .map(|p| Affine::new(p.slope.0.clone(), p.intercept.0.clone()))
                .collect(),
        )
    }

    pub fn from_fn(f: &PiecewiseFn) -> Self {
        FnDoc {
            breakpoints: f.breakpoints().iter().cloned().map(Rat).collect(),
            values_at: f.values_at().iter().cloned().map(Rat).collect(),
            pieces: f
                .pieces()
                .iter()
                .map(|p| PieceDoc {
                    slope: Rat(p.slope.clone()),
                    intercept: Rat(p.intercept.clone()),
                })
                .collect(),
        }
    }
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self, LoadError> {
        ScenarioDoc::from_json(text)?.build()
    }

    pub fn load(path: &str) -> Result<Self, LoadError> {
        let text = std::fs::read_to_string(path).map_err(|source| LoadError::Io {
            path: path.to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    /// Finds a point by its written value.
    pub fn point(&self, text: &str) -> Option<PointId> {
        self.space.find(&parse_point(text))
    }

    pub fn name(&self, id: PointId) -> String {
        self.space.value(id).to_string()
    }

    pub fn names(&self, ids: &[PointId]) -> Vec<String> {
        ids.iter().map(|&id| self.name(id)).collect()
    }

    /// Every point named in the expectations must exist.
    fn check_expected_points(&self) -> Result<(), LoadError> {
        let e = &self.expected;
        let mut named: Vec<(String, &String)> = Vec::new();
        for (i, p) in e.fixed_points.iter().flatten().enumerate() {
            named.push((format!("expected.fixed_points[{i}]"), p));
        }
        for (i, c) in e.contraction.iter().enumerate() {
            for (j, t) in c.violations.iter().flatten().enumerate() {
                named.extend(
                    t.iter()
                        .map(|p| (format!("expected.contraction[{i}].violations[{j}]"), p)),
                );
            }
        }
        if let Some(c) = &e.conditions {
            for (name, cond) in [
                ("continuity_or_regularity", &c.continuity_or_regularity),
                ("monotone_nondecreasing", &c.monotone_nondecreasing),
                ("seed_exists", &c.seed_exists),
                ("contraction", &c.contraction),
            ] {
                named.extend(
                    cond.witness
                        .iter()
                        .flatten()
                        .map(|p| (format!("expected.conditions.{name}.witness"), p)),
                );
            }
        }
        for (i, o) in e.orbits.iter().enumerate() {
            named.push((format!("expected.orbits[{i}].seed"), &o.seed));
            named.extend(o.points.iter().map(|p| (format!("expected.orbits[{i}].points"), p)));
        }
        for (i, t) in e.tuples.iter().enumerate() {
            named.extend(t.at.iter().map(|p| (format!("expected.tuples[{i}].at"), p)));
        }
        if let Some(w) = &e.nonequivalence {
            named.push(("expected.nonequivalence.x".into(), &w.x));
            named.push(("expected.nonequivalence.y".into(), &w.y));
        }
        for (at, p) in named {
            if self.point(p).is_none() {
                return Err(LoadError::invalid(at, format_args!("`{p}` is not a point")));
            }
        }
        Ok(())
    }

    /// Rebuilds the document from the validated objects.
    pub fn to_doc(&self) -> ScenarioDoc {
        let s = &self.space;
        let name = |i: usize| self.name(PointId(i));
        let rows = |m: &MetricTable| m.rows().into_iter().map(|r| r.into_iter().map(Rat).collect()).collect();
        ScenarioDoc {
            id: self.id.clone(),
            description: self.description.clone(),
            points: s.points().iter().map(|p| p.to_string()).collect(),
            carrier: match s.carrier() {
                Carrier::Finite => CarrierDoc::Finite,
                Carrier::Grid { step } => CarrierDoc::Grid {
                    step: Rat(step.clone()),
                },
                Carrier::Truncated => CarrierDoc::Truncated,
            },
            order: match s.order() {
                PartialOrder::NumericLeq => OrderDoc::Leq,
                PartialOrder::NumericGeq => OrderDoc::Geq,
                PartialOrder::Divides => OrderDoc::Divides,
                PartialOrder::ProductSign => OrderDoc::ProductSign,
                PartialOrder::ExplicitPairs(pairs) => OrderDoc::Pairs {
                    pairs: pairs.iter().map(|&(a, b)| [name(a), name(b)]).collect(),
                },
            },
            gmetric: match s.gmetric() {
                GMetric::MaxAbsDiff => GMetricDoc::MaxAbsDiff,
                GMetric::Table(t) => GMetricDoc::Table {
                    entries: t
                        .canonical_entries()
                        .into_iter()
                        .map(|((i, j, k), v)| TableEntry {
                            at: [name(i), name(j), name(k)],
                            value: Rat(v),
                        })
                        .collect(),
                },
                GMetric::MaxOfMetric(m) => GMetricDoc::MaxOfMetric { rows: rows(m) },
                GMetric::SumOfMetric(m) => GMetricDoc::SumOfMetric { rows: rows(m) },
            },
            regular: s.declared_regularity().as_flag(),
            continuous_map: self.map.declared_continuity(),
            map: self
                .map
                .images()
                .iter()
                .map(|im| match im {
                    Image::Point(p) => Some(self.name(*p)),
                    Image::Outside => None,
                })
                .collect(),
            map_source: self.map.source().map(str::to_string),
            psi: self.psi.as_ref().map(FnDoc::from_fn),
            phi: self.phi.as_ref().map(FnDoc::from_fn),
            theorem: self.theorem,
            expected: self.expected.clone(),
            notes: self.notes.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = r#"{
  "id": "t",
  "description": "two points",
  "points": ["2", "3"],
  "carrier": {"kind": "finite"},
  "order": {"kind": "divides"},
  "gmetric": {"kind": "max_abs_diff"},
  "map": ["3", "2"]
}"#;

    #[test]
    fn parses_minimal_document() {
        let s = Scenario::from_json(SMALL).unwrap();
        assert_eq!(s.space.len(), 2);
        assert_eq!(s.map.apply(PointId(0)), Some(PointId(1)));
        assert!(s.psi.is_none());
    }

    #[test]
    fn syntax_errors_carry_position() {
        // missing comma after the points array
        let broken = SMALL.replace(r#""3"],"#, r#""3"]"#);
        match Scenario::from_json(&broken) {
            Err(LoadError::Parse { line, column, .. }) => assert_eq!((line, column), (5, 3)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn decimal_literal_is_rejected_with_position() {
        let bad = SMALL.replace(r#"{"kind": "finite"}"#, r#"{"kind": "grid", "step": "0.5"}"#);
        match Scenario::from_json(&bad) {
            Err(LoadError::Parse { line, message, .. }) => {
                assert_eq!(line, 5);
                assert!(message.contains("0.5"), "{message}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn semantic_errors_name_the_field() {
        let bad = SMALL.replace(r#"["3", "2"]"#, r#"["3", "5"]"#);
        match Scenario::from_json(&bad) {
            Err(LoadError::Invalid { at, .. }) => assert_eq!(at, "map[1]"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let bad = SMALL.replace("\"id\": \"t\",", "\"id\": \"t\", \"extra\": 1,");
        assert!(matches!(Scenario::from_json(&bad), Err(LoadError::Parse { .. })));
    }
}
