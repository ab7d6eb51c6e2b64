//! Machine-readable run report.

use gaugedeform::jet_forms::MinkowskiConvention;
use serde::Serialize;

use crate::config::RunConfig;

#[derive(Clone, Debug, Serialize)]
pub struct CheckEntry {
    pub name: String,
    pub pass: bool,
    /// Largest residual inside the check, when it has one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_residual: Option<f64>,
    pub result: serde_json::Value,
    /// Wall time; printed to stdout, never written to the report.
    #[serde(skip)]
    pub seconds: f64,
}

impl CheckEntry {
    pub fn new(name: &str, pass: bool, max_residual: Option<f64>, result: impl Serialize) -> Self {
        CheckEntry {
            name: name.to_string(),
            pass,
            max_residual,
            result: serde_json::to_value(result).expect("report values serialize"),
            seconds: 0.0,
        }
    }

    pub fn timed(mut self, seconds: f64) -> Self {
        self.seconds = seconds;
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ErrorEntry {
    pub kind: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub advice: Option<String>,
}

/// Everything written for one command. Contains no timing or host data, so
/// identical inputs give identical bytes.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub conventions: MinkowskiConvention,
    pub config: RunConfig,
    pub checks: Vec<CheckEntry>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorEntry>,
}

impl RunReport {
    pub fn new(command: &str, config: RunConfig) -> Self {
        RunReport {
            command: command.to_string(),
            conventions: MinkowskiConvention::default(),
            config,
            checks: Vec::new(),
            pass: true,
            error: None,
        }
    }

    pub fn push(&mut self, entry: CheckEntry) {
        self.pass &= entry.pass;
        self.checks.push(entry);
    }

    pub fn fail_with(&mut self, error: ErrorEntry) {
        self.pass = false;
        self.error = Some(error);
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Human summary, one line per check.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let res = c.max_residual.map(|r| format!(" max residual {r:.3e}")).unwrap_or_default();
            out.push_str(&format!(
                "{:<32} {}{} ({:.3} s)\n",
                c.name,
                if c.pass { "PASS" } else { "FAIL" },
                res,
                c.seconds
            ));
        }
        if let Some(e) = &self.error {
            out.push_str(&format!("error ({}): {}\n", e.kind, e.message));
            if let Some(a) = &e.advice {
                out.push_str(&format!("advice: {a}\n"));
            }
        }
        out.push_str(&format!("{}: {}\n", self.command, if self.pass { "PASS" } else { "FAIL" }));
        out
    }
}
