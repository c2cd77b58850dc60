//! Verdicts, witnesses and their JSON form.

use std::time::Duration;

use serde_json::{json, Map, Value};

use crate::scalar::Scalar;

/// Ordered by severity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Verdict {
    Pass,
    Fail,
    Precondition,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Precondition => "precondition",
        }
    }

    pub fn parse(s: &str) -> Option<Verdict> {
        match s {
            "pass" => Some(Verdict::Pass),
            "fail" => Some(Verdict::Fail),
            "precondition" => Some(Verdict::Precondition),
            _ => None,
        }
    }
}

/// A failing tuple and the nonzero defect it produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub tuple: Vec<usize>,
    pub names: Vec<String>,
    /// Nonzero coordinates of the defect, keyed by basis name.
    pub defect: Vec<(String, Scalar)>,
}

impl Witness {
    pub fn to_json(&self) -> Value {
        let defect: Map<String, Value> = self
            .defect
            .iter()
            .map(|(n, s)| (n.clone(), Value::String(s.to_string())))
            .collect();
        json!({
            "tuple": self.names,
            "indices": self.tuple,
            "defect": defect,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail(Witness),
    Precondition {
        reason: String,
        witness: Option<Witness>,
    },
}

#[derive(Clone, Debug)]
pub struct CheckReport {
    pub check: String,
    pub roles: Vec<String>,
    pub outcome: Outcome,
    pub elapsed: Duration,
}

impl CheckReport {
    pub fn new(check: &str, roles: Vec<String>, outcome: Outcome, elapsed: Duration) -> Self {
        CheckReport {
            check: check.to_string(),
            roles,
            outcome,
            elapsed,
        }
    }

    pub fn verdict(&self) -> Verdict {
        match self.outcome {
            Outcome::Pass => Verdict::Pass,
            Outcome::Fail(_) => Verdict::Fail,
            Outcome::Precondition { .. } => Verdict::Precondition,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict() == Verdict::Pass
    }

    pub fn witness(&self) -> Option<&Witness> {
        match &self.outcome {
            Outcome::Pass => None,
            Outcome::Fail(w) => Some(w),
            Outcome::Precondition { witness, .. } => witness.as_ref(),
        }
    }

    /// Label such as `NOVIKOV_LSYM[diamond]`.
    pub fn label(&self) -> String {
        if self.roles.is_empty() {
            self.check.clone()
        } else {
            format!("{}[{}]", self.check, self.roles.join(","))
        }
    }

    pub fn to_json(&self, timings: bool) -> Value {
        let mut obj = Map::new();
        obj.insert("check".into(), json!(self.check));
        obj.insert("roles".into(), json!(self.roles));
        obj.insert("verdict".into(), json!(self.verdict().as_str()));
        match &self.outcome {
            Outcome::Pass => {}
            Outcome::Fail(w) => {
                obj.insert("witness".into(), w.to_json());
            }
            Outcome::Precondition { reason, witness } => {
                obj.insert("reason".into(), json!(reason));
                if let Some(w) = witness {
                    obj.insert("witness".into(), w.to_json());
                }
            }
        }
        if timings {
            obj.insert("elapsed_ms".into(), json!(self.elapsed.as_secs_f64() * 1e3));
        }
        Value::Object(obj)
    }
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<CheckReport>,
}

impl SuiteReport {
    pub fn new(suite: &str) -> Self {
        SuiteReport {
            suite: suite.to_string(),
            checks: Vec::new(),
        }
    }

    pub fn single(suite: &str, check: CheckReport) -> Self {
        SuiteReport {
            suite: suite.to_string(),
            checks: vec![check],
        }
    }

    pub fn verdict(&self) -> Verdict {
        self.checks
            .iter()
            .map(CheckReport::verdict)
            .max()
            .unwrap_or(Verdict::Pass)
    }

    pub fn passed(&self) -> bool {
        self.verdict() == Verdict::Pass
    }

    pub fn get(&self, label: &str) -> Option<&CheckReport> {
        self.checks
            .iter()
            .find(|c| c.check == label || c.label() == label)
    }

    pub fn first_failure(&self) -> Option<&CheckReport> {
        self.checks.iter().find(|c| !c.passed())
    }

    pub fn elapsed(&self) -> Duration {
        self.checks.iter().map(|c| c.elapsed).sum()
    }

    pub fn extend(&mut self, other: SuiteReport) {
        self.checks.extend(other.checks);
    }

    pub fn to_json(&self, timings: bool) -> Value {
        let mut obj = Map::new();
        obj.insert("format".into(), json!(1));
        obj.insert("suite".into(), json!(self.suite));
        obj.insert("verdict".into(), json!(self.verdict().as_str()));
        obj.insert(
            "checks".into(),
            Value::Array(self.checks.iter().map(|c| c.to_json(timings)).collect()),
        );
        if timings {
            obj.insert("elapsed_ms".into(), json!(self.elapsed().as_secs_f64() * 1e3));
        }
        Value::Object(obj)
    }
}

impl std::fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "{}: {}", self.suite, self.verdict().as_str().to_uppercase())?;
        for c in &self.checks {
            write!(f, "  {:<32} {}", c.label(), c.verdict().as_str())?;
            match &c.outcome {
                Outcome::Pass => {}
                Outcome::Fail(w) => write!(f, " at ({})", w.names.join(", "))?,
                Outcome::Precondition { reason, witness } => {
                    write!(f, ": {reason}")?;
                    if let Some(w) = witness {
                        write!(f, " at ({})", w.names.join(", "))?;
                    }
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
