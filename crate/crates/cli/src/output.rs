//! Row-oriented output in CSV, JSON-lines, or aligned human tables.
//!
//! Machine formats carry full precision: CSV numbers use 17 significant
//! digits, JSON-lines numbers are shortest-round-trip `f64`, and
//! extended-precision values are 31-digit strings in both. Human tables
//! show 6 significant digits. Rows are emitted in a fixed column order, so
//! identical configurations produce byte-identical output.

use std::io::Write;

use bh_core::DoubleDouble;

/// JSON-lines schema version stamped on every record.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Copy, Clone, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum OutFormat {
    /// Comma-separated values with a header row.
    Csv,
    /// One JSON object per row.
    Jsonl,
    /// Aligned table for reading, 6 significant digits.
    Table,
}

/// One cell of a report row.
#[derive(Clone, Debug)]
pub enum Field {
    Int(u64),
    Num(f64),
    Ext(DoubleDouble),
    Text(String),
    Flag(bool),
}

impl Field {
    pub fn text(s: impl Into<String>) -> Self {
        Field::Text(s.into())
    }

    fn machine(&self) -> String {
        match self {
            Field::Int(v) => v.to_string(),
            Field::Num(v) => format!("{v:.16e}"),
            Field::Ext(v) => v.to_sci_string(31),
            Field::Text(s) => s.clone(),
            Field::Flag(b) => b.to_string(),
        }
    }

    fn human(&self) -> String {
        match self {
            Field::Num(v) => format!("{v:.5e}"),
            Field::Ext(v) => v.to_sci_string(21),
            other => other.machine(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Field::Int(v) => serde_json::Value::from(*v),
            Field::Num(v) => serde_json::Value::from(*v),
            Field::Ext(v) => serde_json::Value::from(v.to_sci_string(31)),
            Field::Text(s) => serde_json::Value::from(s.as_str()),
            Field::Flag(b) => serde_json::Value::from(*b),
        }
    }
}

/// A complete result set for one command.
pub struct Report {
    pub command: &'static str,
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<Field>>,
}

impl Report {
    pub fn new(command: &'static str, headers: Vec<&'static str>) -> Self {
        Report {
            command,
            headers,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Field>) {
        debug_assert_eq!(row.len(), self.headers.len(), "row width mismatch");
        self.rows.push(row);
    }

    pub fn write<W: Write>(&self, mut w: W, format: OutFormat) -> std::io::Result<()> {
        match format {
            OutFormat::Csv => {
                writeln!(w, "{}", self.headers.join(","))?;
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(Field::machine).collect();
                    writeln!(w, "{}", cells.join(","))?;
                }
            }
            OutFormat::Jsonl => {
                for row in &self.rows {
                    let mut record = serde_json::Map::new();
                    record.insert("schema".into(), serde_json::Value::from(SCHEMA_VERSION));
                    record.insert("command".into(), serde_json::Value::from(self.command));
                    for (key, field) in self.headers.iter().zip(row) {
                        record.insert((*key).into(), field.json());
                    }
                    writeln!(w, "{}", serde_json::Value::Object(record))?;
                }
            }
            OutFormat::Table => {
                let mut widths: Vec<usize> = self.headers.iter().map(|h| h.len()).collect();
                let rendered: Vec<Vec<String>> = self
                    .rows
                    .iter()
                    .map(|row| row.iter().map(Field::human).collect())
                    .collect();
                for row in &rendered {
                    for (w_slot, cell) in widths.iter_mut().zip(row) {
                        *w_slot = (*w_slot).max(cell.len());
                    }
                }
                let header_line: Vec<String> = self
                    .headers
                    .iter()
                    .zip(&widths)
                    .map(|(h, w)| format!("{h:<w$}"))
                    .collect();
                writeln!(w, "{}", header_line.join("  "))?;
                for row in &rendered {
                    let line: Vec<String> = row
                        .iter()
                        .zip(&widths)
                        .map(|(c, w)| format!("{c:<w$}"))
                        .collect();
                    writeln!(w, "{}", line.join("  "))?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_numbers_carry_17_digits() {
        let mut report = Report::new("t", vec!["x"]);
        report.push(vec![Field::Num(std::f64::consts::SQRT_2)]);
        let mut out = Vec::new();
        report.write(&mut out, OutFormat::Csv).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text, "x\n1.4142135623730951e0\n");
    }

    #[test]
    fn jsonl_rows_are_tagged_with_schema_and_command() {
        let mut report = Report::new("limits", vec!["kind", "value"]);
        report.push(vec![Field::text("even-ratio"), Field::Num(1.5)]);
        let mut out = Vec::new();
        report.write(&mut out, OutFormat::Jsonl).unwrap();
        let line: serde_json::Value =
            serde_json::from_slice(out.split(|&b| b == b'\n').next().unwrap()).unwrap();
        assert_eq!(line["schema"], 1);
        assert_eq!(line["command"], "limits");
        assert_eq!(line["kind"], "even-ratio");
        assert_eq!(line["value"], 1.5);
    }

    #[test]
    fn table_format_aligns_columns() {
        let mut report = Report::new("t", vec!["name", "v"]);
        report.push(vec![Field::text("a"), Field::Num(1.0)]);
        report.push(vec![Field::text("longer"), Field::Flag(true)]);
        let mut out = Vec::new();
        report.write(&mut out, OutFormat::Table).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].starts_with("name"));
        assert!(lines[1].starts_with("a     "));
    }
}
