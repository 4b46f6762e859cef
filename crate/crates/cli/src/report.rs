//! Command output in text, CSV or JSON.

use clap::ValueEnum;
use eqseidel::export::{envelope, Table};
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// Named tables produced by one command, plus its verdict.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub inputs: Value,
    pub sections: Vec<(&'static str, Table)>,
    /// `false` when a verification inside the command failed.
    pub passed: bool,
}

impl Report {
    pub fn new(command: &'static str, inputs: Value) -> Self {
        Report {
            command,
            inputs,
            sections: Vec::new(),
            passed: true,
        }
    }

    pub fn section(&mut self, key: &'static str, table: Table) {
        self.sections.push((key, table));
    }

    pub fn render(&self, format: Format) -> Result<String, csv::Error> {
        Ok(match format {
            Format::Text => self
                .sections
                .iter()
                .map(|(_, t)| t.to_text())
                .collect::<Vec<_>>()
                .join("\n"),
            Format::Csv => {
                if let [(_, t)] = self.sections.as_slice() {
                    return t.to_csv();
                }
                let mut out = Vec::new();
                for (key, t) in &self.sections {
                    out.push(format!("# {key}\n{}", t.to_csv()?));
                }
                out.join("\n")
            }
            Format::Json => {
                let mut results: Map<String, Value> = self
                    .sections
                    .iter()
                    .map(|(key, t)| (key.to_string(), t.to_json()))
                    .collect();
                results.insert("passed".into(), Value::Bool(self.passed));
                let doc = envelope(self.command, self.inputs.clone(), Value::Object(results));
                format!("{}\n", serde_json::to_string_pretty(&doc).expect("JSON values serialize"))
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn sample() -> Report {
        let mut r = Report::new("demo", json!({"r": 1}));
        let mut t = Table::new(["a", "b"]).titled("first");
        t.push(["1", "2*u"]);
        r.section("first", t);
        r
    }

    #[test]
    fn single_table_csv_has_only_the_header_row() {
        assert_eq!(sample().render(Format::Csv).unwrap(), "a,b\n1,2*u\n");
    }

    #[test]
    fn json_envelope_carries_schema_and_verdict() {
        let v: Value = serde_json::from_str(&sample().render(Format::Json).unwrap()).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["command"], "demo");
        assert_eq!(v["results"]["first"][0]["b"], "2*u");
        assert_eq!(v["results"]["passed"], true);
    }

    #[test]
    fn multiple_csv_tables_are_keyed() {
        let mut r = sample();
        r.section("second", Table::new(["x"]));
        let csv = r.render(Format::Csv).unwrap();
        assert!(csv.starts_with("# first\na,b\n"));
        assert!(csv.contains("# second\nx\n"));
    }
}
