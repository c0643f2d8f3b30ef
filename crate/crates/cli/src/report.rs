//! Verification reports with deterministic rendering and exit codes.
//!
//! Exit-code contract: 0 all checks passed, 1 a mathematical check failed,
//! 2 the input was invalid. Reports render byte-identically for identical
//! inputs except for the trailing `time_ms` field.

use std::fmt::Write as _;
use std::time::Instant;

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug)]
pub struct Report {
    pub command: &'static str,
    pub input: String,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    started: Instant,
}

impl Report {
    pub fn new(command: &'static str, input: &std::path::Path) -> Report {
        Report {
            command,
            input: input.display().to_string(),
            checks: Vec::new(),
            notes: Vec::new(),
            started: Instant::now(),
        }
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.notes.push(line.into());
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn exit_code(&self) -> i32 {
        if self.all_passed() {
            0
        } else {
            1
        }
    }

    pub fn render_human(&self) -> String {
        let mut out = String::new();
        writeln!(out, "command: {}", self.command).unwrap();
        writeln!(out, "input: {}", self.input).unwrap();
        for c in &self.checks {
            let verdict = if c.passed { "PASS" } else { "FAIL" };
            writeln!(out, "check {}: {}", c.name, verdict).unwrap();
            if !c.detail.is_empty() {
                for line in c.detail.lines() {
                    writeln!(out, "  {line}").unwrap();
                }
            }
        }
        for n in &self.notes {
            writeln!(out, "note: {n}").unwrap();
        }
        writeln!(
            out,
            "result: {}",
            if self.all_passed() { "PASS" } else { "FAIL" }
        )
        .unwrap();
        writeln!(out, "time_ms: {}", self.started.elapsed().as_millis()).unwrap();
        out
    }

    pub fn render_json(&self) -> String {
        use serde_json::{json, Value};
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| {
                json!({
                    "name": c.name,
                    "passed": c.passed,
                    "detail": c.detail,
                })
            })
            .collect();
        let v = json!({
            "command": self.command,
            "input": self.input,
            "checks": checks,
            "notes": self.notes,
            "result": if self.all_passed() { "PASS" } else { "FAIL" },
            "exit_code": self.exit_code(),
            "time_ms": self.started.elapsed().as_millis() as u64,
        });
        let mut s = serde_json::to_string_pretty(&v).expect("serializable");
        s.push('\n');
        s
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            self.render_json()
        } else {
            self.render_human()
        }
    }
}
