//! Check reports shared by every validator and by the harness.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// One failed check with a concrete counterexample location.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub check: String,
    pub location: String,
    pub expected: String,
    pub actual: String,
}

/// A verdict plus the failures that justify it. An empty entry list means
/// pass.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub entries: Vec<Entry>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub counters: BTreeMap<String, u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn passed(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn verdict(&self) -> &'static str {
        if self.passed() {
            "pass"
        } else {
            "fail"
        }
    }

    pub fn push(
        &mut self,
        check: impl Into<String>,
        location: impl Into<String>,
        expected: impl fmt::Display,
        actual: impl fmt::Display,
    ) {
        self.entries.push(Entry {
            check: check.into(),
            location: location.into(),
            expected: expected.to_string(),
            actual: actual.to_string(),
        });
    }

    /// Records a failure of `check` at `location` unless `expected == actual`.
    pub fn expect_eq<T: PartialEq + fmt::Display>(
        &mut self,
        check: &str,
        location: impl FnOnce() -> String,
        expected: &T,
        actual: &T,
    ) {
        if expected != actual {
            self.push(check, location(), expected, actual);
        }
    }

    pub fn merge(&mut self, other: Report) {
        self.entries.extend(other.entries);
        for (k, v) in other.counters {
            *self.counters.entry(k).or_default() += v;
        }
    }

    /// Merges `other`, prefixing its check names.
    pub fn merge_prefixed(&mut self, prefix: &str, other: Report) {
        for mut e in other.entries {
            e.check = format!("{prefix}/{}", e.check);
            self.entries.push(e);
        }
        for (k, v) in other.counters {
            *self.counters.entry(k).or_default() += v;
        }
    }

    pub fn count(&mut self, key: &str, n: u64) {
        *self.counters.entry(key.to_string()).or_default() += n;
    }

    pub fn counter(&self, key: &str) -> u64 {
        self.counters.get(key).copied().unwrap_or(0)
    }

    /// Names of the failed checks, deduplicated, in first-seen order.
    pub fn failed_checks(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for e in &self.entries {
            if !out.contains(&e.check.as_str()) {
                out.push(&e.check);
            }
        }
        out
    }

    pub fn has_check(&self, check: &str) -> bool {
        self.entries.iter().any(|e| e.check == check)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("verdict: {}\n", self.verdict());
        for (k, v) in &self.counters {
            s.push_str(&format!("  {k}: {v}\n"));
        }
        for e in &self.entries {
            s.push_str(&format!(
                "  FAIL {} at {}: expected {}, got {}\n",
                e.check, e.location, e.expected, e.actual
            ));
        }
        if let Some(ms) = self.elapsed_ms {
            s.push_str(&format!("  elapsed: {ms} ms\n"));
        }
        s
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}
