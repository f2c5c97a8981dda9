//! Machine-readable check results shared by the library checkers and the CLI.

use serde::Serialize;

/// One assertion result row.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn new(name: &str, passed: bool, lhs: f64, rhs: f64, margin: f64, tolerance: f64) -> Self {
        Check {
            name: name.to_string(),
            passed,
            lhs,
            rhs,
            margin,
            tolerance,
        }
    }
}

/// The JSON report written by the experiment runner.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub experiment: String,
    pub config: serde_json::Value,
    pub checks: Vec<Check>,
    pub version: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eigenvalues: Option<Vec<f64>>,
}

impl Report {
    pub fn new(experiment: &str, config: serde_json::Value) -> Self {
        Report {
            experiment: experiment.to_string(),
            config,
            checks: Vec::new(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            notes: Vec::new(),
            eigenvalues: None,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}
