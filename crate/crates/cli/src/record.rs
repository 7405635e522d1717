//! JSON record printed by every subcommand.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use stackelberg_core::{Point, Scalar};

use crate::rational::decimal12;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flags {
    pub approach_limit: bool,
    pub tie: bool,
    pub degenerate_bisector_used: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    /// The grid was given with `p/a < q/b` and has been reflected in `y = x`;
    /// coordinates refer to the reflected arena.
    pub rotated: bool,
    pub outputs: BTreeMap<String, Value>,
    pub flags: Flags,
}

impl ResultRecord {
    pub fn new(command: &str) -> Self {
        ResultRecord {
            command: command.to_string(),
            inputs: BTreeMap::new(),
            rotated: false,
            outputs: BTreeMap::new(),
            flags: Flags::default(),
        }
    }

    pub fn input(&mut self, key: &str, value: impl ToString) {
        self.inputs.insert(key.to_string(), value.to_string());
    }

    pub fn output(&mut self, key: &str, value: Value) {
        self.outputs.insert(key.to_string(), value);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("records serialize")
    }

    /// Aligned `key: value` lines for people.
    pub fn to_text(&self) -> String {
        let mut lines = vec![format!("{}{}", self.command, if self.rotated { " (rotated)" } else { "" })];
        for (k, v) in &self.outputs {
            lines.push(format!("  {k}: {}", text_of(v)));
        }
        let f = &self.flags;
        lines.push(format!(
            "  flags: approach_limit={} tie={} degenerate_bisector_used={}",
            f.approach_limit, f.tie, f.degenerate_bisector_used
        ));
        lines.join("\n") + "\n"
    }
}

fn text_of(v: &Value) -> String {
    match v {
        Value::Object(m) if m.contains_key("exact") => {
            format!("{} (~{})", m["exact"].as_str().unwrap_or(""), m["decimal"].as_str().unwrap_or(""))
        }
        Value::Object(m) if m.contains_key("x") && m.len() == 2 => {
            format!("({}, {})", text_of(&m["x"]), text_of(&m["y"]))
        }
        Value::Object(m) => {
            let parts: Vec<String> = m.iter().map(|(k, v)| format!("{k}={}", text_of(v))).collect();
            format!("{{{}}}", parts.join(", "))
        }
        Value::String(s) => s.clone(),
        Value::Array(items) => format!("[{}]", items.iter().map(text_of).collect::<Vec<_>>().join(", ")),
        other => other.to_string(),
    }
}

pub fn scalar(v: &Scalar) -> Value {
    json!({ "exact": v.to_string(), "decimal": decimal12(v) })
}

pub fn point(p: &Point) -> Value {
    json!({ "x": scalar(&p.x), "y": scalar(&p.y) })
}

/// Exact value back from a [`scalar`] entry.
pub fn parse_scalar(v: &Value) -> Option<Scalar> {
    v.get("exact")?.as_str()?.parse().ok()
}
