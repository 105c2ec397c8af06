//! Scenario documents, the bundled example corpus and the command-line
//! front end over `gfix-core`.

pub mod cli;
pub mod corpus;
pub mod doc;
pub mod expect;
pub mod report;

pub use corpus::{build_example, load_example, Params, EXAMPLE_IDS};
pub use doc::{LoadError, Scenario, ScenarioDoc};

use gfix_core::contraction::ContractionError;
use gfix_core::control::ControlError;
use gfix_core::solver::SolverError;
use gfix_core::space::SpaceError;

/// Anything that stops a command before it can produce a report.
#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error(transparent)]
    Contraction(#[from] ContractionError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Control(#[from] ControlError),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error("{0}")]
    Missing(&'static str),
    #[error("{0}")]
    Usage(String),
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        #[source]
        source: std::io::Error,
    },
}
