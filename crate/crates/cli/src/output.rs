use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::Result;
use discrete_hardy::report::csv_from_rows;
use discrete_hardy::ExperimentReport;
use serde_json::{Map, Value};

use crate::args::Format;

/// Result of one command: its JSON payload and the verdict that sets the
/// exit status.
pub struct Outcome {
    pub command: String,
    pub result: Value,
    pub verdict: bool,
}

impl Outcome {
    pub fn value(command: impl Into<String>, result: Value) -> Self {
        Self {
            command: command.into(),
            result,
            verdict: true,
        }
    }

    pub fn report(command: impl Into<String>, report: ExperimentReport) -> Self {
        let verdict = report.verdict;
        Self {
            command: command.into(),
            result: serde_json::to_value(report).expect("reports serialize"),
            verdict,
        }
    }
}

pub fn render(outcome: &Outcome, format: Format, timestamp: bool) -> Result<String> {
    match format {
        Format::Json => {
            let mut doc = Map::new();
            doc.insert("command".into(), outcome.command.clone().into());
            if timestamp {
                let secs = SystemTime::now()
                    .duration_since(UNIX_EPOCH)
                    .map(|d| d.as_secs())
                    .unwrap_or(0);
                doc.insert("generated_at".into(), secs.into());
            }
            doc.insert("verdict".into(), outcome.verdict.into());
            doc.insert("result".into(), outcome.result.clone());
            let mut text = serde_json::to_string_pretty(&Value::Object(doc))?;
            text.push('\n');
            Ok(text)
        }
        Format::Csv => Ok(to_csv(&outcome.result)),
    }
}

/// Row-shaped results (`rows`, `artifacts`) become one CSV line per row;
/// anything else is flattened into a single line with dotted column names.
fn to_csv(result: &Value) -> String {
    for key in ["rows", "artifacts"] {
        if let Some(Value::Array(items)) = result.get(key) {
            let rows: Vec<Map<String, Value>> = items
                .iter()
                .filter_map(|v| v.as_object().cloned())
                .collect();
            if !rows.is_empty() {
                return csv_from_rows(&rows);
            }
        }
    }
    let mut flat = Map::new();
    flatten("", result, &mut flat);
    csv_from_rows(&[flat])
}

fn flatten(prefix: &str, v: &Value, out: &mut Map<String, Value>) {
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, child, out);
            }
        }
        Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let joined: Vec<String> = items.iter().map(scalar_text).collect();
            out.insert(prefix.to_string(), Value::from(joined.join(";")));
        }
        Value::Array(items) => {
            for (i, child) in items.iter().enumerate() {
                flatten(&format!("{prefix}.{i}"), child, out);
            }
        }
        _ => {
            out.insert(prefix.to_string(), v.clone());
        }
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
