//! Outcome records shared by every check in the crate.

use serde::{Deserialize, Serialize};

use crate::laurent::Polynomial;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    ExpectedFailConfirmed,
    ExpectedFailViolated,
}

impl Status {
    /// Maps a raw outcome through the expected-failure registry.
    pub fn resolve(holds: bool, expected_to_fail: bool) -> Status {
        match (holds, expected_to_fail) {
            (true, false) => Status::Pass,
            (false, false) => Status::Fail,
            (false, true) => Status::ExpectedFailConfirmed,
            (true, true) => Status::ExpectedFailViolated,
        }
    }

    pub fn is_mismatch(self) -> bool {
        matches!(self, Status::Fail | Status::ExpectedFailConfirmed)
    }

    pub fn is_ok(self) -> bool {
        matches!(self, Status::Pass | Status::ExpectedFailConfirmed)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::ExpectedFailConfirmed => "expected-fail-confirmed",
            Status::ExpectedFailViolated => "expected-fail-violated",
        }
    }
}

/// Where a check went wrong. For symbolic checks `difference` is the
/// rendered `lhs - rhs` at `(row, col)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub row: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub col: Option<usize>,
    pub difference: String,
    #[serde(skip)]
    pub poly: Option<Polynomial>,
}

impl Witness {
    pub fn entry(row: usize, col: usize, difference: Polynomial) -> Self {
        Witness { row: Some(row), col: Some(col), difference: difference.to_string(), poly: Some(difference) }
    }

    pub fn text(detail: impl Into<String>) -> Self {
        Witness { row: None, col: None, difference: detail.into(), poly: None }
    }
}

/// One verification outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    /// Grouping key for sorting; not part of the serialized record.
    #[serde(skip)]
    pub suite: String,
    pub name: String,
    pub params: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub duration_ms: Option<u64>,
}

impl CheckReport {
    pub fn new(suite: &str, name: &str, params: impl Into<String>, status: Status) -> Self {
        CheckReport {
            suite: suite.to_string(),
            name: name.to_string(),
            params: params.into(),
            status,
            witness: None,
            duration_ms: None,
        }
    }

    pub fn with_witness(mut self, witness: Option<Witness>) -> Self {
        self.witness = witness;
        self
    }

    pub fn with_duration(mut self, started: std::time::Instant) -> Self {
        self.duration_ms = Some(started.elapsed().as_millis() as u64);
        self
    }

    pub fn sort_key(&self) -> (&str, &str, &str) {
        (&self.suite, &self.name, &self.params)
    }
}

/// Stable 64-bit FNV-1a, used to derive per-check seeds from names.
pub fn stable_hash(text: &str) -> u64 {
    text.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}
