use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub verdict: String,
    pub detail: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_ms: u128,
}

/// Field order is fixed and `data` objects keep sorted keys, so equal inputs give
/// equal bytes apart from `timing`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub instance_digest: Option<String>,
    pub verdicts: Vec<Verdict>,
    pub witnesses: Vec<Witness>,
    pub data: Value,
    pub timing: Timing,
}

impl Report {
    pub fn new(command: &str, instance_digest: Option<String>) -> Report {
        Report {
            command: command.to_string(),
            instance_digest,
            verdicts: Vec::new(),
            witnesses: Vec::new(),
            data: Value::Object(Default::default()),
            timing: Timing { elapsed_ms: 0 },
        }
    }

    pub fn verdict(&mut self, name: &str, pass: bool) {
        self.verdicts.push(Verdict { name: name.to_string(), pass });
    }

    /// Records a verdict and, when it fails, the witness.
    pub fn check(&mut self, name: &str, pass: bool, witness: impl FnOnce() -> Value) {
        self.verdict(name, pass);
        if !pass {
            self.witness(name, witness());
        }
    }

    pub fn witness(&mut self, verdict: &str, detail: Value) {
        self.witnesses.push(Witness { verdict: verdict.to_string(), detail });
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("report data serializes");
        self.data.as_object_mut().expect("data is an object").insert(key.to_string(), v);
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    /// The verdict list alone, as compact JSON.
    pub fn verdict_bytes(&self) -> String {
        serde_json::to_string(&self.verdicts).expect("verdicts serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let digest = self.instance_digest.as_deref().unwrap_or("-");
        let _ = writeln!(out, "{}  {}", self.command, digest);
        for v in &self.verdicts {
            let _ = writeln!(out, "  {}  {}", if v.pass { "PASS" } else { "FAIL" }, v.name);
            for w in self.witnesses.iter().filter(|w| w.verdict == v.name) {
                let _ = writeln!(out, "        witness: {}", compact(&w.detail));
            }
        }
        if let Some(map) = self.data.as_object() {
            for (k, v) in map {
                let _ = writeln!(out, "  {k}: {}", compact(v));
            }
        }
        let _ = writeln!(out, "  time: {} ms", self.timing.elapsed_ms);
        out
    }
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Error object printed in place of a report.
pub fn error_json(command: &str, err: &CliError) -> String {
    let mut detail = serde_json::json!({ "kind": err.kind(), "message": err.to_string() });
    match err {
        CliError::Parse { line, column, .. } => {
            detail["line"] = (*line).into();
            detail["column"] = (*column).into();
        }
        CliError::Schema { path, .. } | CliError::Invalid { path, .. } => detail["path"] = path.clone().into(),
        _ => {}
    }
    let mut s = serde_json::to_string_pretty(&serde_json::json!({ "command": command, "error": detail })).expect("serializes");
    s.push('\n');
    s
}
