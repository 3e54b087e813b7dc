use serde::Serialize;
use serde_json::Value;

use crate::exact::format_rational;
use crate::Rational;

/// One failed instance of an identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub indices: Vec<i64>,
    pub lhs: String,
    pub rhs: String,
}

/// Outcome of checking an identity exhaustively over a finite index range.
///
/// Serializes as `{identity, params, size, checked, violations, notes}` with
/// every number rendered as an exact string.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub identity: String,
    pub params: Value,
    pub size: usize,
    /// Number of individual instances compared.
    pub checked: usize,
    pub violations: Vec<Violation>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(identity: impl Into<String>, params: Value, size: usize) -> Self {
        Report {
            identity: identity.into(),
            params,
            size,
            checked: 0,
            violations: Vec::new(),
            notes: Vec::new(),
        }
    }

    /// Compares `lhs` and `rhs` exactly, recording a violation on mismatch.
    pub fn check(&mut self, indices: &[i64], lhs: &Rational, rhs: &Rational) -> bool {
        self.checked += 1;
        let ok = lhs == rhs;
        if !ok {
            self.violations.push(Violation {
                indices: indices.to_vec(),
                lhs: format_rational(lhs),
                rhs: format_rational(rhs),
            });
        }
        ok
    }

    /// Records a boolean claim; `detail` goes into the `lhs` slot on failure.
    pub fn assert(&mut self, indices: &[i64], ok: bool, detail: impl FnOnce() -> String) -> bool {
        self.checked += 1;
        if !ok {
            self.violations.push(Violation {
                indices: indices.to_vec(),
                lhs: detail(),
                rhs: "true".into(),
            });
        }
        ok
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    /// Folds another report's counts and violations into this one.
    pub fn absorb(&mut self, other: Report) {
        self.checked += other.checked;
        self.violations.extend(other.violations);
        self.notes.extend(other.notes);
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn summary(&self) -> String {
        format!(
            "{:<24} {:<28} size={:<3} checked={:<8} {}",
            self.identity,
            self.params.to_string(),
            self.size,
            self.checked,
            if self.passed() {
                "ok".to_string()
            } else {
                format!("FAILED ({} violations)", self.violations.len())
            }
        )
    }
}
