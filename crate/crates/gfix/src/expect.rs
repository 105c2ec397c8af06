//! Re-verifies a scenario against its recorded expectations.

use gfix_core::contraction::{
    check_contraction, find_nonequivalence_witness, tuple_sides, ContractionKind, ContractionReport,
};
use gfix_core::control::{ControlFn, PiecewiseFn};
use gfix_core::solver::{
    check_hypotheses, check_uniqueness_hypothesis, enumerate_fixed_points, picard_orbit, ConditionCheck, OrbitVerdict,
};
use gfix_core::space::{verify_gmetric, verify_poset};
use gfix_core::{PointId, Scalar, Verdict};
use serde::Serialize;

use crate::doc::{ConditionDoc, Scenario};
use crate::RunError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckLine {
    pub check: String,
    pub expected: String,
    pub actual: String,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScenarioOutcome {
    pub id: String,
    pub ok: bool,
    pub checks: Vec<CheckLine>,
}

struct Lines(Vec<CheckLine>);

impl Lines {
    fn push(&mut self, check: impl Into<String>, expected: impl ToString, actual: impl ToString) {
        let (expected, actual) = (expected.to_string(), actual.to_string());
        self.0.push(CheckLine {
            check: check.into(),
            ok: expected == actual,
            expected,
            actual,
        });
    }
}

fn list(items: &[String]) -> String {
    format!("[{}]", items.join(", "))
}

fn opt_list(items: Option<&[String]>) -> String {
    items.map_or_else(|| "none".to_string(), list)
}

pub fn outcome_name(v: &OrbitVerdict) -> &'static str {
    match v {
        OrbitVerdict::FixedPointReached { .. } => "fixed_point_reached",
        OrbitVerdict::Cycle { .. } => "cycle",
        OrbitVerdict::LeftDomain { .. } => "left_domain",
        OrbitVerdict::BudgetExceeded => "budget_exceeded",
    }
}

pub(crate) fn controls(s: &Scenario) -> Result<(&PiecewiseFn, &PiecewiseFn), RunError> {
    match (&s.psi, &s.phi) {
        (Some(psi), Some(phi)) => Ok((psi, phi)),
        _ => Err(RunError::Missing("the scenario names no psi/phi pair")),
    }
}

/// Poset axioms and G-metric axioms together.
pub fn axioms_verdict(s: &Scenario) -> Result<Verdict, RunError> {
    let poset = verify_poset(s.space.order(), s.space.points())?;
    let g = verify_gmetric(&s.space);
    Ok(Verdict::from_holds(poset.passed() && g.passed(), false))
}

pub fn contraction_for(s: &Scenario, kind: ContractionKind) -> Result<ContractionReport, RunError> {
    let (psi, phi) = controls(s)?;
    Ok(check_contraction(&s.space, &s.map, psi, phi, kind)?)
}

fn opt_scalar(v: Option<&Scalar>) -> String {
    v.map_or_else(|| "none".to_string(), |s| s.to_string())
}

fn condition_line(lines: &mut Lines, s: &Scenario, name: &str, expected: &ConditionDoc, actual: &ConditionCheck) {
    let render = |verdict: Verdict, provenance: &str, witness: String| {
        format!("{} ({provenance}) witness {witness}", verdict.as_str())
    };
    let prov = |p| {
        serde_json::to_value(p)
            .expect("plain enum")
            .as_str()
            .unwrap_or_default()
            .to_string()
    };
    let actual_witness = actual.witness.as_ref().map(|w| s.names(w));
    lines.push(
        format!("condition {name}"),
        render(
            expected.verdict,
            &prov(expected.provenance),
            opt_list(expected.witness.as_deref()),
        ),
        render(
            actual.verdict,
            &prov(actual.provenance),
            opt_list(actual_witness.as_deref()),
        ),
    );
}

pub fn verify_scenario(s: &Scenario, budget: usize) -> Result<ScenarioOutcome, RunError> {
    let e = &s.expected;
    let mut lines = Lines(Vec::new());
    let ids = |names: &[String]| -> Result<Vec<PointId>, RunError> {
        names
            .iter()
            .map(|n| {
                s.point(n)
                    .ok_or_else(|| RunError::Usage(format!("`{n}` is not a point")))
            })
            .collect()
    };

    if let Some(fixed) = &e.fixed_points {
        let actual = s.names(&enumerate_fixed_points(&s.space, &s.map));
        lines.push("fixed points", list(fixed), list(&actual));
    }
    if let Some(v) = e.axioms {
        lines.push("axioms", v.as_str(), axioms_verdict(s)?.as_str());
    }
    for c in &e.contraction {
        let rep = contraction_for(s, c.kind)?;
        let label = |what: &str| format!("{} {what}", c.kind);
        lines.push(label("verdict"), c.verdict.as_str(), rep.verdict.as_str());
        if let Some(v) = &c.violations {
            let expected: Vec<String> = v.iter().map(|t| list(t)).collect();
            let actual: Vec<String> = rep.violations.iter().map(|v| list(&s.names(&v.tuple))).collect();
            lines.push(label("violations"), list(&expected), list(&actual));
        }
        if let Some(g) = &c.min_gap {
            lines.push(label("min gap"), g, opt_scalar(rep.min_gap.as_ref()));
        }
        if let Some(r) = &c.sharpest_ratio {
            lines.push(label("sharpest ratio"), r, opt_scalar(rep.sharpest_ratio.as_ref()));
        }
    }
    if let Some(c) = &e.conditions {
        let theorem = s.theorem.ok_or(RunError::Missing("the scenario names no theorem"))?;
        let (psi, phi) = controls(s)?;
        let rep = check_hypotheses(&s.space, &s.map, psi, phi, theorem)?;
        use gfix_core::solver::Condition::*;
        condition_line(
            &mut lines,
            s,
            "1",
            &c.continuity_or_regularity,
            rep.condition(ContinuityOrRegularity),
        );
        condition_line(
            &mut lines,
            s,
            "2",
            &c.monotone_nondecreasing,
            rep.condition(MonotoneNondecreasing),
        );
        condition_line(&mut lines, s, "3", &c.seed_exists, rep.condition(SeedExists));
        condition_line(&mut lines, s, "4", &c.contraction, rep.condition(Contraction));
    }
    if let Some(v) = e.uniqueness {
        let rep = check_uniqueness_hypothesis(&s.space, &s.map, budget)?;
        lines.push("uniqueness", v.as_str(), rep.verdict.as_str());
    }
    for o in &e.orbits {
        let seed = ids(std::slice::from_ref(&o.seed))?[0];
        let trace = picard_orbit(&s.space, &s.map, seed, budget)?;
        lines.push(
            format!("orbit from {}", o.seed),
            format!("{} {}", o.outcome, list(&o.points)),
            format!("{} {}", outcome_name(&trace.verdict), list(&s.names(&trace.points))),
        );
    }
    for t in &e.tuples {
        let at = ids(&t.at)?;
        let (distance, functional) = tuple_sides(&s.space, &s.map, t.kind, &at)?;
        let label = format!("{} at {}", t.kind, list(&t.at));
        lines.push(format!("{label} distance"), &t.distance, &distance);
        lines.push(format!("{label} F"), &t.functional, &functional);
        if let Some(p) = &t.phi_of_f {
            let (_, phi) = controls(s)?;
            lines.push(format!("{label} phi(F)"), p, phi.apply(&functional)?);
        }
    }
    if let Some(w) = &e.nonequivalence {
        let found = find_nonequivalence_witness(&s.space, &s.map)?;
        let expected = format!(
            "({}, {}) image {} metric M {} G(x,y,y) {} strict {} defeats G form {} terms {} {} {} {} {} {}",
            w.x,
            w.y,
            w.image_distance,
            w.metric_m,
            w.g_xyy,
            w.strict,
            w.defeats_g_form,
            w.terms.tx_ty,
            w.terms.x_y,
            w.terms.x_tx,
            w.terms.y_ty,
            w.terms.y_tx,
            w.terms.x_ty
        );
        let actual = found.map_or_else(
            || "none".to_string(),
            |f| {
                format!(
                    "({}, {}) image {} metric M {} G(x,y,y) {} strict {} defeats G form {} terms {} {} {} {} {} {}",
                    s.name(f.x),
                    s.name(f.y),
                    f.image_distance,
                    f.metric_m,
                    f.g_xyy,
                    f.strict,
                    f.defeats_g_form,
                    f.terms.tx_ty,
                    f.terms.x_y,
                    f.terms.x_tx,
                    f.terms.y_ty,
                    f.terms.y_tx,
                    f.terms.x_ty
                )
            },
        );
        lines.push("nonequivalence witness", expected, actual);
    }

    let checks = lines.0;
    Ok(ScenarioOutcome {
        id: s.id.clone(),
        ok: checks.iter().all(|c| c.ok),
        checks,
    })
}
