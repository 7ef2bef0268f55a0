//! Machine-readable reports.
//!
//! Exact rationals render as `{"exact": "num/den", "lossy_f64": x}`; the float
//! is a convenience rendering only. Object keys are sorted, so identical
//! inputs give byte-identical reports apart from `runtime_ms`.

use serde::Serialize;
use serde_json::{json, Map, Value};
use sunflower_core::probability::ProbEstimate;
use sunflower_core::rational::{to_f64, to_ratio_string};
use sunflower_core::{MemberSet, Rational};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub params: Map<String, Value>,
    pub result: Map<String, Value>,
    pub runtime_ms: u64,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_owned(),
            params: Map::new(),
            result: Map::new(),
            runtime_ms: 0,
        }
    }

    pub fn param(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.params.insert(key.to_owned(), value.into());
        self
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.result.insert(key.to_owned(), value.into());
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    /// `key = value` lines with dotted paths.
    pub fn to_text(&self) -> String {
        let mut out = format!("command = {}\n", self.command);
        flatten("params", &Value::Object(self.params.clone()), &mut out);
        flatten("result", &Value::Object(self.result.clone()), &mut out);
        out.push_str(&format!("runtime_ms = {}\n", self.runtime_ms));
        out
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut String) {
    match v {
        Value::Object(m) if m.contains_key("exact") && m.contains_key("lossy_f64") => {
            out.push_str(&format!("{prefix} = {} (~{})\n", m["exact"].as_str().unwrap_or("?"), m["lossy_f64"]));
        }
        Value::Object(m) if !m.is_empty() => {
            for (k, x) in m {
                flatten(&format!("{prefix}.{k}"), x, out);
            }
        }
        Value::Array(a) if a.iter().any(|x| x.is_object()) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        other => out.push_str(&format!("{prefix} = {other}\n")),
    }
}

pub fn rational(r: &Rational) -> Value {
    json!({ "exact": to_ratio_string(r), "lossy_f64": to_f64(r) })
}

pub fn set(s: &MemberSet) -> Value {
    json!(s.to_vec())
}

pub fn estimate(e: &ProbEstimate) -> Value {
    let mut m = Map::new();
    m.insert("method".into(), e.method.name().into());
    match &e.exact {
        Some(v) => {
            m.insert("value".into(), rational(v));
        }
        None => {
            m.insert("value_f64".into(), json!(e.value));
            m.insert("abs_error".into(), json!(e.abs_error));
            m.insert("samples".into(), json!(e.samples));
            m.insert("seed".into(), json!(e.seed));
            m.insert("confidence".into(), json!(e.delta.map(|d| 1.0 - d)));
        }
    }
    Value::Object(m)
}
