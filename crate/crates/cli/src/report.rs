use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::time::Duration;

use crate::RunConfig;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    /// Human-readable acceptance condition, such as `<= 1e-5`.
    pub condition: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub experiment: String,
    pub config: RunConfig,
    pub checks: Vec<Check>,
    pub metrics: BTreeMap<String, f64>,
    pub labels: BTreeMap<String, String>,
    /// Excluded from the JSON so output bytes stay reproducible.
    #[serde(skip)]
    pub wall_time: Duration,
}

impl RunReport {
    pub fn new(experiment: &str, config: &RunConfig) -> Self {
        Self {
            experiment: experiment.to_owned(),
            config: config.clone(),
            checks: Vec::new(),
            metrics: BTreeMap::new(),
            labels: BTreeMap::new(),
            wall_time: Duration::ZERO,
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn at_most(&mut self, name: &str, value: f64, bound: f64) {
        self.push_check(name, value <= bound, value, format!("<= {bound:e}"));
    }

    pub fn within(&mut self, name: &str, value: f64, window: [f64; 2]) {
        let ok = window[0] <= value && value <= window[1];
        self.push_check(name, ok, value, format!("in [{}, {}]", window[0], window[1]));
    }

    pub fn holds(&mut self, name: &str, ok: bool) {
        self.push_check(name, ok, if ok { 1.0 } else { 0.0 }, "true".into());
    }

    fn push_check(&mut self, name: &str, passed: bool, value: f64, condition: String) {
        assert!(self.checks.iter().all(|c| c.name != name), "check {name} recorded twice");
        self.checks.push(Check {
            name: name.to_owned(),
            passed,
            value,
            condition,
        });
        self.metric(name, value);
    }

    pub fn metric(&mut self, name: &str, value: f64) {
        let previous = self.metrics.insert(name.to_owned(), value);
        assert!(previous.is_none(), "metric {name} recorded twice");
    }

    pub fn label(&mut self, name: &str, value: impl Into<String>) {
        self.labels.insert(name.to_owned(), value.into());
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
