//! Machine-readable reports: canonical JSON, or CSV tables with the
//! provenance and scalar results as leading `#` comment lines.

use serde_json::{json, Map, Value};

use crate::load::InputDigest;

pub const TOOLKIT: &str = env!("CARGO_PKG_NAME");
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Table {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub inputs: Vec<InputDigest>,
    pub seed: Option<u64>,
    pub params: Map<String, Value>,
    pub results: Map<String, Value>,
    pub tables: Vec<Table>,
}

/// JSON number, or a string for values JSON cannot carry (`inf`, `NaN`).
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::String(x.to_string())
    }
}

pub fn opt_num(x: Option<f64>) -> Value {
    x.map_or_else(|| Value::String("undefined".into()), num)
}

impl Report {
    pub fn new(command: &str, inputs: Vec<InputDigest>, seed: Option<u64>) -> Self {
        Report {
            command: command.to_string(),
            inputs,
            seed,
            params: Map::new(),
            results: Map::new(),
            tables: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn result(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.results.insert(key.to_string(), value.into());
        self
    }

    pub fn to_value(&self) -> Value {
        let inputs: Vec<Value> = self
            .inputs
            .iter()
            .map(|i| json!({"role": i.role, "path": i.path, "sha256": i.sha256}))
            .collect();
        let tables: Map<String, Value> = self
            .tables
            .iter()
            .map(|t| {
                (
                    t.name.clone(),
                    json!({"columns": t.columns, "rows": t.rows}),
                )
            })
            .collect();
        json!({
            "toolkit": {"name": TOOLKIT, "version": VERSION},
            "command": self.command,
            "inputs": inputs,
            "seed": self.seed,
            "params": self.params,
            "results": self.results,
            "tables": tables,
        })
    }

    /// Pretty JSON with keys in sorted order.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# toolkit={TOOLKIT} version={VERSION}\n"));
        out.push_str(&format!("# command={}\n", self.command));
        match self.seed {
            Some(seed) => out.push_str(&format!("# seed={seed}\n")),
            None => out.push_str("# seed=none\n"),
        }
        for i in &self.inputs {
            out.push_str(&format!(
                "# input {}={} sha256={}\n",
                i.role, i.path, i.sha256
            ));
        }
        for (k, v) in &self.params {
            out.push_str(&format!("# param {k}={}\n", scalar(v)));
        }
        for (k, v) in &self.results {
            out.push_str(&format!("# result {k}={}\n", scalar(v)));
        }
        for t in &self.tables {
            if self.tables.len() > 1 {
                out.push_str(&format!("# table {}\n", t.name));
            }
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&t.columns).expect("in-memory write");
            for row in &t.rows {
                w.write_record(row.iter().map(scalar))
                    .expect("in-memory write");
            }
            out.push_str(&String::from_utf8(w.into_inner().expect("flush")).expect("utf-8"));
        }
        out
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}
