use std::time::Duration;

use k3g2_core::report::CheckItem;
use serde_json::{json, Map, Value};

/// Floating-point value tagged with the working precision it was computed at.
pub fn approx(value: f64, digits: usize) -> Value {
    json!({ "approximate": value, "digits": digits })
}

pub struct Report {
    command: String,
    config: Value,
    sections: Map<String, Value>,
    checks: Vec<(String, CheckItem)>,
    timings: Vec<(String, Duration)>,
    headlines: Vec<String>,
}

impl Report {
    pub fn new(command: &str, config: Value) -> Self {
        Report {
            command: command.into(),
            config,
            sections: Map::new(),
            checks: Vec::new(),
            timings: Vec::new(),
            headlines: Vec::new(),
        }
    }

    pub fn section(&mut self, name: &str, value: Value) {
        self.sections.insert(name.into(), value);
    }

    pub fn check(&mut self, section: &str, item: CheckItem) {
        self.checks.push((section.into(), item));
    }

    pub fn checks(&mut self, section: &str, items: impl IntoIterator<Item = CheckItem>) {
        for c in items {
            self.check(section, c);
        }
    }

    pub fn headline(&mut self, line: String) {
        self.headlines.push(line);
    }

    pub fn time(&mut self, section: &str, d: Duration) {
        match self.timings.iter_mut().find(|(s, _)| s == section) {
            Some((_, total)) => *total += d,
            None => self.timings.push((section.into(), d)),
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|(_, c)| c.passed)
    }

    pub fn to_json(&self) -> Value {
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|(s, c)| json!({ "section": s, "name": c.name, "passed": c.passed, "detail": c.detail }))
            .collect();
        let failures: Vec<String> = self
            .checks
            .iter()
            .filter(|(_, c)| !c.passed)
            .map(|(s, c)| format!("{s}/{}: {}", c.name, c.detail))
            .collect();
        json!({
            "command": self.command,
            "config": self.config,
            "conventions": "rationals are exact strings p/q; approximate values carry their working precision in digits",
            "sections": self.sections,
            "checks": checks,
            "passed": self.passed(),
            "failures": failures,
        })
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        for h in &self.headlines {
            out.push_str(h);
            out.push('\n');
        }
        for (s, c) in &self.checks {
            let tag = if c.passed { "ok  " } else { "FAIL" };
            out.push_str(&format!("[{tag}] {s}/{}: {}\n", c.name, c.detail));
        }
        for (s, d) in &self.timings {
            out.push_str(&format!("time {s}: {:.3} s\n", d.as_secs_f64()));
        }
        let failed = self.checks.iter().filter(|(_, c)| !c.passed).count();
        out.push_str(&format!("{} checks, {} failed\n", self.checks.len(), failed));
        out
    }
}
