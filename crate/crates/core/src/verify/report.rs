use std::fmt::{self, Display, Write as _};
use std::path::PathBuf;
use std::time::Duration;

use serde::Serialize;

use crate::error::Error;

/// One checked claim: what was run, on what, and whether the observed value
/// matched.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Assertion {
    pub operation: String,
    pub inputs: String,
    pub expected: String,
    pub observed: String,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ScenarioStatus {
    Passed,
    Failed,
    Skipped(String),
}

impl Display for ScenarioStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScenarioStatus::Passed => f.write_str("PASS"),
            ScenarioStatus::Failed => f.write_str("FAIL"),
            ScenarioStatus::Skipped(r) => write!(f, "SKIP ({r})"),
        }
    }
}

/// Outcome of one scenario. `elapsed` is informational and never rendered,
/// so reports are byte-identical across runs.
#[derive(Clone, Debug, Serialize)]
pub struct ScenarioReport {
    pub id: String,
    pub parameters: Vec<(String, String)>,
    pub assertions: Vec<Assertion>,
    pub notes: Vec<String>,
    pub skipped: Option<String>,
    #[serde(skip)]
    pub elapsed: Duration,
    pub artifacts: Vec<PathBuf>,
}

impl ScenarioReport {
    pub fn new(id: &str) -> ScenarioReport {
        ScenarioReport {
            id: id.to_string(),
            parameters: Vec::new(),
            assertions: Vec::new(),
            notes: Vec::new(),
            skipped: None,
            elapsed: Duration::ZERO,
            artifacts: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Display) -> &mut Self {
        self.parameters.push((key.to_string(), value.to_string()));
        self
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    /// Records `expected == observed` (compared as rendered text).
    pub fn check(&mut self, operation: &str, inputs: &str, expected: impl Display, observed: impl Display) -> bool {
        let (expected, observed) = (expected.to_string(), observed.to_string());
        let passed = expected == observed;
        self.assertions.push(Assertion {
            operation: operation.to_string(),
            inputs: inputs.to_string(),
            expected,
            observed,
            passed,
        });
        passed
    }

    /// Records a boolean claim with free-form detail as the observation.
    pub fn claim(&mut self, operation: &str, inputs: &str, ok: bool, detail: impl Display) -> bool {
        self.assertions.push(Assertion {
            operation: operation.to_string(),
            inputs: inputs.to_string(),
            expected: "true".into(),
            observed: if ok { "true".into() } else { format!("false: {detail}") },
            passed: ok,
        });
        ok
    }

    /// Folds an error into the report: budget exhaustion skips, anything
    /// else is a failed assertion.
    pub fn absorb(&mut self, operation: &str, e: Error) {
        match e {
            Error::BudgetExceeded { .. } => self.skipped = Some(e.to_string()),
            e => {
                self.claim(operation, "", false, e);
            }
        }
    }

    pub fn status(&self) -> ScenarioStatus {
        if self.assertions.iter().any(|a| !a.passed) {
            ScenarioStatus::Failed
        } else if let Some(r) = &self.skipped {
            ScenarioStatus::Skipped(r.clone())
        } else {
            ScenarioStatus::Passed
        }
    }

    pub fn failed(&self) -> bool {
        self.status() == ScenarioStatus::Failed
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "== {} [{}]", self.id, self.status());
        if !self.parameters.is_empty() {
            let ps: Vec<String> = self.parameters.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let _ = writeln!(out, "   parameters: {}", ps.join(" "));
        }
        for a in &self.assertions {
            let mark = if a.passed { "ok  " } else { "FAIL" };
            let _ = write!(out, "   {mark} {}", a.operation);
            if !a.inputs.is_empty() {
                let _ = write!(out, " [{}]", a.inputs);
            }
            if a.expected == "true" && a.passed {
                out.push('\n');
            } else {
                let _ = writeln!(out, ": expected {}, observed {}", a.expected, a.observed);
            }
        }
        for n in &self.notes {
            let _ = writeln!(out, "   note: {n}");
        }
        for p in &self.artifacts {
            let _ = writeln!(out, "   artifact: {}", p.display());
        }
        out
    }
}

/// All reports followed by a one-line summary.
pub fn render_reports(reports: &[ScenarioReport]) -> String {
    let mut out = String::new();
    for r in reports {
        out.push_str(&r.render());
        out.push('\n');
    }
    let count = |f: fn(&ScenarioStatus) -> bool| reports.iter().filter(|r| f(&r.status())).count();
    let _ = writeln!(
        out,
        "summary: {} passed, {} failed, {} skipped",
        count(|s| *s == ScenarioStatus::Passed),
        count(|s| *s == ScenarioStatus::Failed),
        count(|s| matches!(s, ScenarioStatus::Skipped(_)))
    );
    out
}
