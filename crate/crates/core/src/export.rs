//! Report tables and the versioned JSON envelope.

use serde_json::{json, Map, Value};

pub const SCHEMA_VERSION: u64 = 1;

/// `{schema, command, inputs, results}`.
pub fn envelope(command: &str, inputs: Value, results: Value) -> Value {
    json!({
        "schema": SCHEMA_VERSION,
        "command": command,
        "inputs": inputs,
        "results": results,
    })
}

/// A table of rendered cells; every numeric cell is an exact rendering.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Table {
    pub title: Option<String>,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(headers: impl IntoIterator<Item = S>) -> Self {
        Table {
            title: None,
            headers: headers.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn titled(mut self, title: impl Into<String>) -> Self {
        self.title = Some(title.into());
        self
    }

    pub fn push<S: ToString>(&mut self, row: impl IntoIterator<Item = S>) {
        let row: Vec<String> = row.into_iter().map(|c| c.to_string()).collect();
        assert_eq!(row.len(), self.headers.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String, csv::Error> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(&self.headers)?;
        for row in &self.rows {
            writer.write_record(row)?;
        }
        let bytes = writer.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv output of UTF-8 cells"))
    }

    /// Column-aligned text, with the title on its own line when present.
    pub fn to_text(&self) -> String {
        let widths: Vec<usize> = (0..self.headers.len())
            .map(|i| {
                self.rows
                    .iter()
                    .map(|r| r[i].chars().count())
                    .chain([self.headers[i].chars().count()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let line = |cells: &[String]| {
            cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:<w$}"))
                .collect::<Vec<_>>()
                .join("  ")
                .trim_end()
                .to_string()
        };
        let mut out = String::new();
        if let Some(t) = &self.title {
            out.push_str(t);
            out.push('\n');
        }
        out.push_str(&line(&self.headers));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&line(row));
            out.push('\n');
        }
        out
    }

    /// Array of objects keyed by header.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> = self
                        .headers
                        .iter()
                        .cloned()
                        .zip(row.iter().map(|c| Value::String(c.clone())))
                        .collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_quotes_and_has_header() {
        let mut t = Table::new(["input", "image"]);
        t.push(["e0", "q*e1, twice"]);
        assert_eq!(t.to_csv().unwrap(), "input,image\ne0,\"q*e1, twice\"\n");
    }

    #[test]
    fn text_aligns_columns() {
        let mut t = Table::new(["r", "value"]).titled("demo");
        t.push(["10", "u"]);
        assert_eq!(t.to_text(), "demo\nr   value\n10  u\n");
    }

    #[test]
    fn envelope_is_versioned() {
        let v = envelope("spaces", json!({}), json!([]));
        assert_eq!(v["schema"], 1);
        assert_eq!(v["command"], "spaces");
    }
}
