//! Structured experiment records shared by the harnesses and the CLI.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

/// Outcome of an experiment: what was run, how many samples, the worst
/// observed `LHS / RHS` ratio and the verdict.
///
/// `verdict` is always `worst_ratio <= 1 + tolerance`. Strict inequalities
/// use a negative tolerance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub name: String,
    pub parameters: Map<String, Value>,
    pub samples: u64,
    pub worst_ratio: f64,
    pub tolerance: f64,
    pub verdict: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub artifacts: Vec<Map<String, Value>>,
}

impl ExperimentReport {
    pub fn new(name: impl Into<String>, samples: u64, worst_ratio: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            parameters: Map::new(),
            samples,
            worst_ratio,
            tolerance,
            verdict: worst_ratio <= 1.0 + tolerance,
            artifacts: Vec::new(),
        }
    }

    /// An empty report (no samples, vacuously true).
    pub fn empty(name: impl Into<String>) -> Self {
        Self::new(name, 0, 0.0, 0.0)
    }

    pub fn with_param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }

    pub fn with_rows(mut self, rows: Vec<Map<String, Value>>) -> Self {
        self.artifacts = rows;
        self
    }

    pub fn param_f64(&self, key: &str) -> Option<f64> {
        self.parameters.get(key).and_then(Value::as_f64)
    }

    /// One CSV row per artifact row, or a single summary row when there are
    /// none.
    pub fn to_csv(&self) -> String {
        if self.artifacts.is_empty() {
            let mut row = Map::new();
            row.insert("name".into(), self.name.clone().into());
            row.insert("samples".into(), self.samples.into());
            row.insert("worst_ratio".into(), json_f64(self.worst_ratio));
            row.insert("verdict".into(), self.verdict.into());
            csv_from_rows(&[row])
        } else {
            csv_from_rows(&self.artifacts)
        }
    }
}

/// `f64` to JSON, mapping non-finite values to strings (JSON has no infinity).
pub fn json_f64(x: f64) -> Value {
    if x.is_finite() {
        Value::from(x)
    } else if x.is_nan() {
        Value::from("NaN")
    } else if x > 0.0 {
        Value::from("inf")
    } else {
        Value::from("-inf")
    }
}

/// Builds a row map from `(column, value)` pairs, keeping column order.
pub fn row<I, K>(cells: I) -> Map<String, Value>
where
    I: IntoIterator<Item = (K, Value)>,
    K: Into<String>,
{
    cells.into_iter().map(|(k, v)| (k.into(), v)).collect()
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// CSV text with a header taken from the union of row keys in first-seen
/// order.
pub fn csv_from_rows(rows: &[Map<String, Value>]) -> String {
    let mut columns: Vec<&String> = Vec::new();
    for r in rows {
        for k in r.keys() {
            if !columns.contains(&k) {
                columns.push(k);
            }
        }
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&columns).expect("in-memory write");
    for r in rows {
        let cells = columns
            .iter()
            .map(|c| r.get(*c).map(csv_cell).unwrap_or_default());
        w.write_record(cells).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("UTF-8 input")
}
