//! The shipped corpus files must match what the builders produce.
//!
//! `GFIX_BLESS=1 cargo test -p gfix --test corpus_files` rewrites them.

use gfix::corpus::{build_doc, bundled_json};
use gfix::expect::verify_scenario;
use gfix::{load_example, Params, ScenarioDoc, EXAMPLE_IDS};
use gfix_core::solver::DEFAULT_BUDGET;

fn corpus_path(id: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("corpus")
        .join(format!("{id}.json"))
}

#[test]
fn builders_match_shipped_files() {
    let bless = std::env::var_os("GFIX_BLESS").is_some();
    for id in EXAMPLE_IDS {
        let built = build_doc(id, &Params::default()).unwrap().to_json();
        if bless {
            std::fs::write(corpus_path(id), &built).unwrap();
            continue;
        }
        let shipped = std::fs::read_to_string(corpus_path(id)).unwrap();
        assert_eq!(built, shipped, "{id} drifted from its builder");
        assert_eq!(
            bundled_json(id),
            Some(shipped.as_str()),
            "{id}: rebuild to refresh the bundled copy"
        );
    }
}

#[test]
fn shipped_files_round_trip() {
    for id in EXAMPLE_IDS {
        let shipped = bundled_json(id).unwrap();
        let doc = ScenarioDoc::from_json(shipped).unwrap();
        assert_eq!(doc.to_json(), shipped, "{id}: parse then print");
        let scenario = doc.build().unwrap();
        assert_eq!(scenario.to_doc().to_json(), shipped, "{id}: build then dump");
    }
}

#[test]
fn every_expectation_holds() {
    for id in EXAMPLE_IDS {
        let outcome = verify_scenario(&load_example(id).unwrap(), DEFAULT_BUDGET).unwrap();
        for c in outcome.checks.iter().filter(|c| !c.ok) {
            eprintln!("{id} {}: expected {} got {}", c.check, c.expected, c.actual);
        }
        assert!(outcome.ok, "{id} has failing checks");
    }
}
