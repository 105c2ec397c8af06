//! Command-line verbs.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use gfix_core::contraction::ContractionKind;
use gfix_core::control::{construct_phi1, construct_phi2, integral_transform, validate_phi, DEFAULT_DEPTH};
use gfix_core::solver::{
    check_hypotheses, check_uniqueness_hypothesis, enumerate_fixed_points, picard_orbit, OrbitVerdict, DEFAULT_BUDGET,
};
use gfix_core::space::{verify_gmetric, verify_poset};
use gfix_core::{Scalar, Verdict};
use serde::Serialize;

use crate::corpus::{build_example, load_example, Params, EXAMPLE_IDS};
use crate::doc::{FnDoc, Scenario};
use crate::expect::{contraction_for, controls, outcome_name, verify_scenario, ScenarioOutcome};
use crate::report::{combine, exit_code, Envelope};
use crate::RunError;

#[derive(Debug, Parser)]
#[command(
    name = "gfix",
    version,
    about = "Exact checks of weak-contraction fixed-point hypotheses on ordered G-metric spaces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the order axioms and the G-metric axioms exhaustively.
    VerifyAxioms(Common),
    /// Check one contraction inequality on every comparable tuple.
    CheckContraction {
        #[command(flatten)]
        common: Common,
        /// thm2.1 | thm2.5 | thm2.6 | thm2.7 | m1 | metric-psi-phi | metric-genM | ka1.5
        #[arg(long, value_parser = parse_kind)]
        kind: ContractionKind,
    },
    /// Check the four existence hypotheses for the scenario's theorem.
    CheckHypotheses {
        #[command(flatten)]
        common: Common,
        /// Overrides the scenario's theorem.
        #[arg(long, value_parser = parse_kind)]
        kind: Option<ContractionKind>,
    },
    /// Run Picard iteration from a seed.
    Solve {
        #[command(flatten)]
        common: Common,
        /// Seed point value; defaults to the first x with x <= Tx.
        #[arg(long)]
        seed: Option<String>,
    },
    /// List every fixed point.
    FixedPoints(Common),
    /// Check the common-upper-bound hypothesis for uniqueness.
    CheckUniqueness(Common),
    /// Re-verify every bundled example against its expectations.
    RunCorpus(Output),
    /// Build a derived control function from the scenario's psi and phi.
    Construct {
        #[arg(value_enum)]
        what: Construct,
        #[command(flatten)]
        common: Common,
        /// Anchor of the phi1 construction.
        #[arg(long, value_parser = parse_scalar, default_value = "1")]
        alpha: Scalar,
        /// Extra arguments at which to tabulate the result.
        #[arg(long = "at", value_parser = parse_scalar)]
        at: Vec<Scalar>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Construct {
    Phi1,
    Phi2,
    Tau,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Args)]
pub struct Output {
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Orbit step budget.
    #[arg(long, value_parser = parse_budget, default_value_t = DEFAULT_BUDGET)]
    pub budget: usize,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Scenario file, or the id of a bundled example.
    #[arg(long, conflicts_with = "example")]
    pub scenario: Option<String>,
    /// Bundled example id (ex2.1 .. ex3.2).
    #[arg(long)]
    pub example: Option<String>,
    /// Rebuild a grid example with this step (p/q).
    #[arg(long, value_parser = parse_scalar)]
    pub grid_step: Option<Scalar>,
    /// Truncation size for the unbounded examples; recursion depth for
    /// `construct phi1`.
    #[arg(long)]
    pub depth: Option<usize>,
    #[command(flatten)]
    pub output: Output,
}

fn parse_kind(s: &str) -> Result<ContractionKind, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_scalar(s: &str) -> Result<Scalar, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_budget(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("the budget must be positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

/// A finished report, ready to print.
#[derive(Debug)]
pub struct Rendered {
    pub body: String,
    pub exit: u8,
    pub out: Option<PathBuf>,
}

impl Rendered {
    pub fn emit(&self) -> Result<(), RunError> {
        match &self.out {
            Some(path) => std::fs::write(path, &self.body).map_err(|source| RunError::Write {
                path: path.display().to_string(),
                source,
            }),
            None => {
                print!("{}", self.body);
                Ok(())
            }
        }
    }
}

pub fn load_scenario(common: &Common, use_depth_as_size: bool) -> Result<Scenario, RunError> {
    let params = Params {
        grid_step: common.grid_step.clone(),
        size: if use_depth_as_size { common.depth } else { None },
    };
    let example = |id: &str| -> Result<Scenario, RunError> {
        if params.is_default() {
            Ok(load_example(id)?)
        } else {
            Ok(build_example(id, &params)?)
        }
    };
    match (&common.scenario, &common.example) {
        (Some(p), None) if !Path::new(p).exists() && EXAMPLE_IDS.contains(&p.as_str()) => example(p),
        (Some(p), None) => {
            if params.grid_step.is_some() || params.size.is_some() {
                return Err(RunError::Usage(
                    "--grid-step and --depth only rebuild bundled examples".into(),
                ));
            }
            Ok(Scenario::load(p)?)
        }
        (None, Some(id)) => example(id),
        _ => Err(RunError::Usage("give one of --scenario or --example".into())),
    }
}

struct Report<T: Serialize> {
    envelope: Envelope<T>,
    text: String,
}

fn finish<T: Serialize>(r: Report<T>, output: &Output) -> Rendered {
    let body = match output.format {
        Format::Json => r.envelope.to_json(),
        Format::Text => r.text,
    };
    Rendered {
        body,
        exit: exit_code(r.envelope.verdict),
        out: output.out.clone(),
    }
}

fn envelope<T: Serialize>(command: &'static str, s: Option<&Scenario>, verdict: Verdict, report: T) -> Envelope<T> {
    Envelope {
        tool: "gfix",
        command,
        scenario: s.map(|s| s.id.clone()),
        verdict,
        points: s.map(|s| s.space.points().iter().map(|p| p.to_string()).collect()),
        report,
    }
}

fn header(command: &str, s: &Scenario, v: Verdict) -> String {
    format!("{command} {}: {}\n", s.id, v.as_str())
}

pub fn execute(command: &Command) -> Result<Rendered, RunError> {
    match command {
        Command::VerifyAxioms(c) => verify_axioms(c),
        Command::CheckContraction { common, kind } => check_contraction_cmd(common, *kind),
        Command::CheckHypotheses { common, kind } => check_hypotheses_cmd(common, *kind),
        Command::Solve { common, seed } => solve(common, seed.as_deref()),
        Command::FixedPoints(c) => fixed_points(c),
        Command::CheckUniqueness(c) => check_uniqueness(c),
        Command::RunCorpus(o) => Ok(run_corpus(o)?),
        Command::Construct {
            what,
            common,
            alpha,
            at,
        } => construct(*what, common, alpha, at),
    }
}

#[derive(Serialize)]
struct AxiomsReport {
    poset: gfix_core::space::AxiomReport,
    gmetric: gfix_core::space::AxiomReport,
}

fn verify_axioms(c: &Common) -> Result<Rendered, RunError> {
    let s = load_scenario(c, true)?;
    let poset = verify_poset(s.space.order(), s.space.points())?;
    let gmetric = verify_gmetric(&s.space);
    let verdict = Verdict::from_holds(poset.passed() && gmetric.passed(), false);
    let mut text = header("verify-axioms", &s, verdict);
    for check in poset.checks.iter().chain(&gmetric.checks) {
        let _ = write!(text, "  {:<14} {}", check.axiom.name(), check.verdict.as_str());
        if let Some(w) = check.witnesses.first() {
            let _ = write!(text, "  first witness {}", list(&s.names(&w.tuple)));
        }
        text.push('\n');
    }
    Ok(finish(
        Report {
            envelope: envelope("verify-axioms", Some(&s), verdict, AxiomsReport { poset, gmetric }),
            text,
        },
        &c.output,
    ))
}

fn list(items: &[String]) -> String {
    format!("({})", items.join(", "))
}

fn check_contraction_cmd(c: &Common, kind: ContractionKind) -> Result<Rendered, RunError> {
    let s = load_scenario(c, true)?;
    let rep = contraction_for(&s, kind)?;
    let mut text = header("check-contraction", &s, rep.verdict);
    let _ = writeln!(
        text,
        "  kind {kind}, {} tuples checked, {} skipped",
        rep.checked, rep.skipped
    );
    if let Some(r) = &rep.sharpest_ratio {
        let _ = writeln!(text, "  largest distance/F ratio {r}");
    }
    for v in &rep.violations {
        let _ = writeln!(
            text,
            "  violation at {}: lhs {} > rhs {} (distance {}, F {})",
            list(&s.names(&v.tuple)),
            v.lhs,
            v.rhs,
            v.distance,
            v.functional
        );
    }
    Ok(finish(
        Report {
            envelope: envelope("check-contraction", Some(&s), rep.verdict, rep),
            text,
        },
        &c.output,
    ))
}

fn check_hypotheses_cmd(c: &Common, kind: Option<ContractionKind>) -> Result<Rendered, RunError> {
    let s = load_scenario(c, true)?;
    let theorem = kind.or(s.theorem).ok_or(RunError::Missing("no theorem: pass --kind"))?;
    let (psi, phi) = controls(&s)?;
    let rep = check_hypotheses(&s.space, &s.map, psi, phi, theorem)?;
    let verdict = combine(rep.conditions.iter().map(|c| c.verdict));
    let mut text = header("check-hypotheses", &s, verdict);
    for cond in &rep.conditions {
        let provenance = serde_json::to_value(cond.provenance).expect("plain enum");
        let _ = write!(
            text,
            "  condition {} {:<12} {}",
            cond.condition.number(),
            cond.verdict.as_str(),
            provenance.as_str().unwrap_or_default()
        );
        if let Some(w) = &cond.witness {
            let _ = write!(text, "  witness {}", list(&s.names(w)));
        }
        text.push('\n');
    }
    Ok(finish(
        Report {
            envelope: envelope("check-hypotheses", Some(&s), verdict, rep),
            text,
        },
        &c.output,
    ))
}

#[derive(Serialize)]
struct SolveReport {
    values: Vec<String>,
    #[serde(flatten)]
    trace: gfix_core::solver::OrbitTrace,
}

fn solve(c: &Common, seed: Option<&str>) -> Result<Rendered, RunError> {
    let s = load_scenario(c, true)?;
    let seed = match seed {
        Some(v) => s
            .point(v)
            .ok_or_else(|| RunError::Usage(format!("seed `{v}` is not a point")))?,
        None => s
            .space
            .ids()
            .find(|&x| s.map.apply(x).is_some_and(|tx| s.space.leq(x, tx)))
            .ok_or(RunError::Missing("no x with x <= Tx: pass --seed"))?,
    };
    let trace = picard_orbit(&s.space, &s.map, seed, c.output.budget)?;
    let verdict = Verdict::from_holds(trace.verdict.converged(), false);
    let values = s.names(&trace.points);
    let mut text = header("solve", &s, verdict);
    let _ = writeln!(text, "  orbit {}", values.join(" -> "));
    let _ = match trace.verdict {
        OrbitVerdict::FixedPointReached { point, steps } => {
            writeln!(text, "  fixed point {} after {steps} steps", s.name(point))
        }
        OrbitVerdict::Cycle { period, entry } => {
            writeln!(text, "  cycle of period {period} entered at {}", s.name(entry))
        }
        other => writeln!(text, "  {}", outcome_name(&other)),
    };
    Ok(finish(
        Report {
            envelope: envelope("solve", Some(&s), verdict, SolveReport { values, trace }),
            text,
        },
        &c.output,
    ))
}

#[derive(Serialize)]
struct FixedPointsReport {
    fixed_points: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    expected: Option<Vec<String>>,
}

fn fixed_points(c: &Common) -> Result<Rendered, RunError> {
    let s = load_scenario(c, true)?;
    let found = s.names(&enumerate_fixed_points(&s.space, &s.map));
    let expected = s.expected.fixed_points.clone();
    let verdict = Verdict::from_holds(expected.as_ref().is_none_or(|e| *e == found), false);
    let text = format!("{}  {}\n", header("fixed-points", &s, verdict).trim_end(), list(&found));
    Ok(finish(
        Report {
            envelope: envelope(
                "fixed-points",
                Some(&s),
                verdict,
                FixedPointsReport {
                    fixed_points: found,
                    expected,
                },
            ),
            text,
        },
        &c.output,
    ))
}

fn check_uniqueness(c: &Common) -> Result<Rendered, RunError> {
    let s = load_scenario(c, true)?;
    let rep = check_uniqueness_hypothesis(&s.space, &s.map, c.output.budget)?;
    let mut text = header("check-uniqueness", &s, rep.verdict);
    let _ = writeln!(text, "  fixed points {}", list(&s.names(&rep.fixed_points)));
    for p in &rep.pairs {
        let _ = write!(
            text,
            "  pair {}: {} common upper bounds",
            list(&s.names(&p.pair)),
            p.candidates.len()
        );
        match p.witness {
            Some(z) => {
                let _ = writeln!(text, ", orbit of {} converges", s.name(z));
            }
            None => {
                let _ = writeln!(text, ", none with a convergent orbit");
            }
        }
    }
    if rep.truncated_evidence {
        text.push_str("  divergence concluded on a truncation\n");
    }
    Ok(finish(
        Report {
            envelope: envelope("check-uniqueness", Some(&s), rep.verdict, rep),
            text,
        },
        &c.output,
    ))
}

#[derive(Serialize)]
struct CorpusReport {
    passed: usize,
    failed: usize,
    scenarios: Vec<ScenarioOutcome>,
}

/// Re-verifies every bundled example.
pub fn run_corpus(o: &Output) -> Result<Rendered, RunError> {
    let mut scenarios = Vec::new();
    for id in EXAMPLE_IDS {
        scenarios.push(verify_scenario(&load_example(id)?, o.budget)?);
    }
    let passed = scenarios.iter().filter(|s| s.ok).count();
    let verdict = Verdict::from_holds(passed == scenarios.len(), false);
    let mut text = format!("run-corpus: {}\n", verdict.as_str());
    for sc in &scenarios {
        let good = sc.checks.iter().filter(|c| c.ok).count();
        let _ = writeln!(
            text,
            "  {:<6} {:<4} {good}/{} checks",
            sc.id,
            if sc.ok { "ok" } else { "FAIL" },
            sc.checks.len()
        );
        for c in sc.checks.iter().filter(|c| !c.ok) {
            let _ = writeln!(text, "         {}: expected {}, got {}", c.check, c.expected, c.actual);
        }
    }
    Ok(finish(
        Report {
            envelope: envelope::<CorpusReport>(
                "run-corpus",
                None,
                verdict,
                CorpusReport {
                    passed,
                    failed: scenarios.len() - passed,
                    scenarios,
                },
            ),
            text,
        },
        o,
    ))
}

#[derive(Serialize)]
struct Sample {
    t: Scalar,
    value: Scalar,
}

#[derive(Serialize)]
struct ConstructReport {
    what: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha: Option<Scalar>,
    #[serde(skip_serializing_if = "Option::is_none")]
    depth: Option<usize>,
    function: Option<FnDoc>,
    checks: Option<gfix_core::control::ClassReport>,
    samples: Vec<Sample>,
}

fn construct(what: Construct, c: &Common, alpha: &Scalar, at: &[Scalar]) -> Result<Rendered, RunError> {
    let s = load_scenario(c, false)?;
    let (psi, phi) = controls(&s)?;
    let mut points: Vec<Scalar> = Vec::new();
    let report = match what {
        Construct::Phi2 => {
            let built = construct_phi2(psi, phi)?;
            points.extend(built.phi2.breakpoints().iter().cloned());
            ConstructReport {
                what: "phi2",
                alpha: None,
                depth: None,
                checks: Some(validate_phi(&built.phi2)),
                function: Some(FnDoc::from_fn(&built.phi2)),
                samples: Vec::new(),
            }
        }
        Construct::Phi1 => {
            let depth = c.depth.unwrap_or(DEFAULT_DEPTH);
            let built = construct_phi1(psi, phi, alpha, depth)?;
            points.extend(built.phi1.breakpoints().iter().cloned());
            ConstructReport {
                what: "phi1",
                alpha: Some(alpha.clone()),
                depth: Some(depth),
                checks: Some(validate_phi(&built.phi1)),
                function: Some(FnDoc::from_fn(&built.phi1)),
                samples: Vec::new(),
            }
        }
        Construct::Tau => {
            let tau = integral_transform(phi)?;
            points.extend(phi.breakpoints().iter().cloned());
            ConstructReport {
                what: "tau",
                alpha: None,
                depth: None,
                checks: None,
                function: None,
                samples: points
                    .iter()
                    .chain(at)
                    .map(|t| {
                        Ok(Sample {
                            t: t.clone(),
                            value: tau.eval(t)?,
                        })
                    })
                    .collect::<Result<_, RunError>>()?,
            }
        }
    };
    let mut report = report;
    if let (Some(f), true) = (&report.function, report.samples.is_empty()) {
        let f = f.build()?;
        report.samples = points
            .iter()
            .chain(at)
            .map(|t| {
                Ok(Sample {
                    t: t.clone(),
                    value: f.eval(t)?,
                })
            })
            .collect::<Result<_, RunError>>()?;
    }
    let verdict = report
        .checks
        .as_ref()
        .map_or(Verdict::Pass, |c| Verdict::from_holds(c.passed(), false));
    let mut text = header("construct", &s, verdict);
    let _ = writeln!(text, "  {}", report.what);
    for sample in &report.samples {
        let _ = writeln!(text, "  {:>12}  {}", sample.t.to_string(), sample.value);
    }
    Ok(finish(
        Report {
            envelope: envelope("construct", Some(&s), verdict, report),
            text,
        },
        &c.output,
    ))
}
