use serde::Serialize;
use serde_json::{Map, Value};

/// Envelope printed for every successful or partially successful run.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub version: &'static str,
    /// SHA-256 over the argument vector and every input read (files, stdin).
    pub inputs_digest: String,
    pub result: Value,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    pub timing_ms: f64,
}

/// Rows for `--format csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Self { header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    /// Two-column `key,value` view of the scalar fields of a JSON object.
    pub fn key_value(value: &Value) -> Self {
        let mut table = Table::new(vec!["key", "value"]);
        if let Value::Object(map) = value {
            flatten("", map, &mut table);
        }
        table
    }

    pub fn to_csv(&self) -> Result<String, csv::Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

fn flatten(prefix: &str, map: &Map<String, Value>, table: &mut Table) {
    for (k, v) in map {
        let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
        match v {
            Value::Object(inner) => flatten(&key, inner, table),
            Value::Array(_) => {}
            other => table.push(vec![key, cell(other)]),
        }
    }
}

/// CSV cell text: strings unquoted, `null` empty.
pub fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn num(x: f64) -> String {
    x.to_string()
}

pub fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// What a command hands back: the JSON payload, its CSV view, warnings.
#[derive(Debug)]
pub struct Output {
    pub result: Value,
    pub table: Option<Table>,
    pub warnings: Vec<String>,
}

impl Output {
    pub fn new(result: Value) -> Self {
        Self { result, table: None, warnings: Vec::new() }
    }

    pub fn with_table(mut self, table: Table) -> Self {
        self.table = Some(table);
        self
    }

    pub fn warn(&mut self, message: impl Into<String>) {
        self.warnings.push(message.into());
    }

    pub fn csv_table(&self) -> Table {
        self.table.clone().unwrap_or_else(|| Table::key_value(&self.result))
    }
}
