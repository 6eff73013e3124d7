//! The JSON report shared by all subcommands.

use std::fmt::{Display, Write};

use serde::{Serialize, Serializer};
use serde_json::Value;

use ckz::integrals::Relation;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    #[default]
    Pass,
    Fail,
    Skipped,
    /// Invalid input; no checks ran.
    Error,
}

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    /// Term dump of the nonzero remainder on failure.
    #[serde(skip_serializing_if = "String::is_empty")]
    pub witness: String,
    pub elapsed_ms: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<Value>,
}

impl Check {
    pub fn new(name: String, passed: bool, witness: String, elapsed_ms: u128) -> Self {
        let status = if passed { Status::Pass } else { Status::Fail };
        Check { name, status, witness, elapsed_ms, details: None }
    }
}

#[derive(Debug, Default, Serialize)]
pub struct Report {
    pub command: String,
    pub argv: Vec<String>,
    pub parameters: Value,
    pub version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub status: Status,
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<Value>,
    /// Standing hypotheses the checks rely on.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub assumptions: Option<Vec<&'static str>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub elapsed_ms: u128,
}

impl Report {
    pub fn finish(&mut self) {
        self.version = env!("CARGO_PKG_VERSION");
        self.passed = self.checks.iter().filter(|c| c.status == Status::Pass).count();
        self.failed = self.checks.iter().filter(|c| c.status == Status::Fail).count();
        self.status = if self.error.is_some() {
            Status::Error
        } else if self.failed > 0 {
            Status::Fail
        } else {
            Status::Pass
        };
    }

    pub fn human(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "ckz {}", self.argv.join(" "));
        if let Some(e) = &self.error {
            let _ = writeln!(s, "error: {e}");
        }
        if let Some(out) = &self.output {
            render_value(&mut s, out, 0);
        }
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skipped => "SKIP",
                Status::Error => "ERR ",
            };
            let _ = writeln!(s, "[{tag}] {} ({} ms)", c.name, c.elapsed_ms);
            for line in c.witness.lines() {
                let _ = writeln!(s, "       {line}");
            }
        }
        if let Some(a) = &self.assumptions {
            for x in a {
                let _ = writeln!(s, "assuming: {x}");
            }
        }
        let _ = writeln!(s, "{:?}: {} passed, {} failed, {} ms", self.status, self.passed, self.failed, self.elapsed_ms);
        s
    }
}

fn render_value(s: &mut String, v: &Value, indent: usize) {
    let pad = " ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match x {
                    Value::Object(_) | Value::Array(_) => {
                        let _ = writeln!(s, "{pad}{k}:");
                        render_value(s, x, indent + 2);
                    }
                    Value::String(t) if t.contains('\n') => {
                        let _ = writeln!(s, "{pad}{k}:");
                        for line in t.lines() {
                            let _ = writeln!(s, "{pad}  {line}");
                        }
                    }
                    Value::String(t) => {
                        let _ = writeln!(s, "{pad}{k}: {t}");
                    }
                    _ => {
                        let _ = writeln!(s, "{pad}{k}: {x}");
                    }
                }
            }
        }
        Value::Array(xs) if xs.iter().all(|x| !x.is_object()) => {
            let items: Vec<String> = xs.iter().map(|x| x.as_str().map(str::to_string).unwrap_or(x.to_string())).collect();
            let _ = writeln!(s, "{pad}{}", items.join(", "));
        }
        Value::Array(xs) => {
            for x in xs {
                render_value(s, x, indent);
                let _ = writeln!(s);
            }
        }
        other => {
            let _ = writeln!(s, "{pad}{other}");
        }
    }
}

pub fn params<T: Serialize>(a: &T) -> Value {
    serde_json::to_value(a).unwrap_or(Value::Null)
}

pub fn display<T: Display, S: Serializer>(x: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(x)
}

pub fn opt_display<T: Display, S: Serializer>(x: &Option<T>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(x) => s.collect_str(x),
        None => s.serialize_none(),
    }
}

pub fn relation<S: Serializer>(x: &Option<Relation>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(r) => s.serialize_str(r.name()),
        None => s.serialize_none(),
    }
}
