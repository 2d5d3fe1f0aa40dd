//! Sweep result tables and their CSV serialization.
//!
//! The CSV dialect is fixed: `#`-prefixed `key=value` metadata lines,
//! then a comma-separated header, then data rows with every float
//! printed to 17 significant digits so that parsing reproduces the exact
//! bits. The header and data rows form the deterministic "body";
//! metadata may carry a timestamp and is excluded from byte-identity
//! guarantees.

use crate::error::{Error, Result};
use std::io::Write;

#[derive(Debug, Clone)]
pub struct SweepTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub metadata: Vec<(String, String)>,
}

impl PartialEq for SweepTable {
    fn eq(&self, other: &Self) -> bool {
        self.columns == other.columns
            && self.metadata == other.metadata
            && self.rows.len() == other.rows.len()
            && self
                .rows
                .iter()
                .zip(&other.rows)
                .all(|(a, b)| {
                    a.len() == b.len()
                        && a.iter().zip(b).all(|(x, y)| x.to_bits() == y.to_bits())
                })
    }
}

fn format_value(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".to_string() } else { "-inf".to_string() }
    } else {
        format!("{v:.16e}")
    }
}

impl SweepTable {
    pub fn new(columns: Vec<String>) -> Self {
        Self { columns, rows: Vec::new(), metadata: Vec::new() }
    }

    pub fn with_metadata(mut self, key: impl Into<String>, value: impl Into<String>) -> Self {
        self.push_metadata(key, value);
        self
    }

    pub fn push_metadata(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.metadata.push((key.into(), value.into()));
    }

    pub fn push_row(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.columns.len(), "row width != header width");
        self.rows.push(row);
    }

    /// Index of a named column.
    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// All values of a named column.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    /// Deterministic part of the CSV: header line plus data rows.
    pub fn body_string(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(|&v| format_value(v)).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            out.push_str(&format!("# {k}={v}\n"));
        }
        out.push_str(&self.body_string());
        out
    }

    pub fn write_csv<W: Write>(&self, w: &mut W) -> Result<()> {
        w.write_all(self.to_csv_string().as_bytes())?;
        Ok(())
    }

    /// Parse the dialect written by [`SweepTable::to_csv_string`].
    pub fn parse_csv(text: &str) -> Result<SweepTable> {
        let mut metadata = Vec::new();
        let mut columns: Option<Vec<String>> = None;
        let mut rows = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                let rest = rest.trim_start();
                match rest.split_once('=') {
                    Some((k, v)) => metadata.push((k.to_string(), v.to_string())),
                    None => metadata.push((rest.to_string(), String::new())),
                }
                continue;
            }
            match &columns {
                None => {
                    columns = Some(line.split(',').map(|s| s.to_string()).collect());
                }
                Some(cols) => {
                    let row: Vec<f64> = line
                        .split(',')
                        .map(|s| {
                            s.parse::<f64>().map_err(|_| {
                                Error::Config(format!("line {}: cannot parse '{s}' as a number", lineno + 1))
                            })
                        })
                        .collect::<Result<_>>()?;
                    if row.len() != cols.len() {
                        return Err(Error::Config(format!(
                            "line {}: {} fields, expected {}",
                            lineno + 1,
                            row.len(),
                            cols.len()
                        )));
                    }
                    rows.push(row);
                }
            }
        }
        let columns = columns.ok_or_else(|| Error::Config("no header line found".into()))?;
        Ok(SweepTable { columns, rows, metadata })
    }
}

/// Unix timestamp string for table metadata.
pub(crate) fn unix_timestamp() -> String {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs().to_string())
        .unwrap_or_else(|_| "0".to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> SweepTable {
        let mut t = SweepTable::new(vec!["bias".into(), "value".into()])
            .with_metadata("version", "0.1.0")
            .with_metadata("kind", "test");
        t.push_row(vec![0.1, 1.2345678901234567e-3]);
        t.push_row(vec![0.2, f64::NAN]);
        t.push_row(vec![0.3, -7.0]);
        t
    }

    #[test]
    fn round_trip_is_exact() {
        let t = sample();
        let parsed = SweepTable::parse_csv(&t.to_csv_string()).unwrap();
        assert_eq!(t, parsed);
    }

    #[test]
    fn body_excludes_metadata() {
        let mut a = sample();
        let mut b = sample();
        a.push_metadata("generated_unix", "111");
        b.push_metadata("generated_unix", "222");
        assert_eq!(a.body_string(), b.body_string());
        assert_ne!(a.to_csv_string(), b.to_csv_string());
    }

    #[test]
    fn seventeen_significant_digits() {
        let v = 0.1f64 + 0.2f64;
        let s = format_value(v);
        assert_eq!(s.parse::<f64>().unwrap().to_bits(), v.to_bits());
    }

    #[test]
    fn rejects_ragged_rows() {
        let text = "a,b\n1.0,2.0\n3.0\n";
        assert!(SweepTable::parse_csv(text).is_err());
    }
}
