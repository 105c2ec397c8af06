//! The report envelope shared by every command.
//!
//! Field order is fixed by the struct layout and every map in a report is a
//! list or a struct, so the same input always serializes to the same bytes.

use gfix_core::Verdict;
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct Envelope<T: Serialize> {
    pub tool: &'static str,
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scenario: Option<String>,
    pub verdict: Verdict,
    /// Point values by id, so ids inside `report` can be read back.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<String>>,
    pub report: T,
}

impl<T: Serialize> Envelope<T> {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
        s.push('\n');
        s
    }
}

/// Fail beats unknown beats pass-on-grid beats pass. An empty list passes.
pub fn combine(verdicts: impl IntoIterator<Item = Verdict>) -> Verdict {
    let rank = |v: Verdict| match v {
        Verdict::Pass => 0,
        Verdict::PassOnGrid => 1,
        Verdict::Unknown => 2,
        Verdict::Fail => 3,
    };
    verdicts.into_iter().max_by_key(|v| rank(*v)).unwrap_or(Verdict::Pass)
}

/// 0 for a pass, 1 otherwise.
pub fn exit_code(v: Verdict) -> u8 {
    if v.is_pass() {
        0
    } else {
        1
    }
}
