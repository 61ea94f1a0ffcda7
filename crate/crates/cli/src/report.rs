//! Report rendering. JSON output is a single object; CSV output is a table
//! preceded by `#`-prefixed metadata lines.

use serde_json::{json, Map, Value};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    pub config_hash: String,
    pub version: String,
    pub table: Option<Table>,
    pub result: Value,
}

fn number(x: f64) -> Value {
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
}

impl Report {
    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("command".into(), json!(self.command));
        m.insert("version".into(), json!(self.version));
        m.insert("config_hash".into(), json!(self.config_hash));
        if let Some(t) = &self.table {
            m.insert("columns".into(), json!(t.columns));
            let rows = t
                .rows
                .iter()
                .map(|r| Value::Array(r.iter().map(|&x| number(x)).collect()))
                .collect();
            m.insert("rows".into(), Value::Array(rows));
        }
        if !self.result.is_null() {
            m.insert("result".into(), self.result.clone());
        }
        Value::Object(m)
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json()).expect("values are finite or null");
                s.push('\n');
                Ok(s)
            }
            Format::Csv => {
                let table = self
                    .table
                    .as_ref()
                    .ok_or_else(|| CliError::Input(format!("`{}` has no tabular output; use --format json", self.command)))?;
                let mut out = format!(
                    "# command={}\n# version={}\n# config_hash={}\n",
                    self.command, self.version, self.config_hash
                );
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&table.columns).map_err(|e| CliError::Input(e.to_string()))?;
                for row in &table.rows {
                    w.write_record(row.iter().map(|x| x.to_string()))
                        .map_err(|e| CliError::Input(e.to_string()))?;
                }
                let bytes = w.into_inner().map_err(|e| CliError::Input(e.to_string()))?;
                out.push_str(&String::from_utf8(bytes).expect("ascii output"));
                Ok(out)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_has_metadata_and_shortest_floats() {
        let mut t = Table::new(&["n", "sup"]);
        t.push(vec![0.0, 1.0]);
        t.push(vec![1.0, std::f64::consts::E]);
        let r = Report {
            command: "norms".into(),
            config_hash: "abc".into(),
            version: "0.1.0".into(),
            table: Some(t),
            result: Value::Null,
        };
        let s = r.render(Format::Csv).unwrap();
        assert!(s.starts_with("# command=norms\n"));
        assert!(s.contains("n,sup\n0,1\n1,2.718281828459045\n"));
        let j = r.render(Format::Json).unwrap();
        assert!(j.contains("\"config_hash\": \"abc\""));
    }
}
