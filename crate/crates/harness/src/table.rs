use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use serde_json::{Map, Value};

use crate::HarnessError;

/// Output format of [`emit`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Rectangular numeric table with a provenance header.
///
/// Cells that do not apply to a row are `NaN` (written `NaN` in CSV, `null`
/// in JSON).
#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    columns: Vec<String>,
    rows: Vec<Vec<f64>>,
    pub provenance: BTreeMap<String, String>,
}

/// Name of the per-row numerical failure flag.
pub const FAILED: &str = "failed";

impl ResultTable {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        ResultTable {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
            provenance: BTreeMap::new(),
        }
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn push(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    /// Whether any row carries a nonzero [`FAILED`] flag.
    pub fn has_failures(&self) -> bool {
        self.column(FAILED).is_some_and(|c| c.iter().any(|&v| v != 0.0))
    }

    pub fn annotate(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.provenance.insert(key.into(), value.into());
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.provenance {
            out.push_str(&format!("# {k}={}\n", v.replace('\n', " ")));
        }
        let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(|&v| format_float(v))).expect("in-memory write");
        }
        out.push_str(&String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output"));
        out
    }

    pub fn to_json(&self) -> String {
        let mut cols = Map::new();
        for (j, name) in self.columns.iter().enumerate() {
            let values = self
                .rows
                .iter()
                .map(|r| serde_json::Number::from_f64(r[j]).map_or(Value::Null, Value::Number))
                .collect();
            cols.insert(name.clone(), Value::Array(values));
        }
        let prov: Map<String, Value> = self
            .provenance
            .iter()
            .map(|(k, v)| (k.clone(), Value::String(v.clone())))
            .collect();
        let mut root = Map::new();
        root.insert("provenance".into(), Value::Object(prov));
        root.insert("columns".into(), Value::Object(cols));
        let mut s = serde_json::to_string_pretty(&Value::Object(root)).expect("json values serialize");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    pub fn from_csv(text: &str) -> Result<Self, String> {
        let mut provenance = BTreeMap::new();
        let mut body = String::new();
        for line in text.lines() {
            match line.strip_prefix("# ") {
                Some(kv) => {
                    let (k, v) = kv.split_once('=').ok_or_else(|| format!("bad provenance line `{line}`"))?;
                    provenance.insert(k.to_string(), v.to_string());
                }
                None => {
                    body.push_str(line);
                    body.push('\n');
                }
            }
        }
        let mut r = csv::ReaderBuilder::new().from_reader(body.as_bytes());
        let columns: Vec<String> = r.headers().map_err(|e| e.to_string())?.iter().map(String::from).collect();
        let mut table = ResultTable::new(columns);
        table.provenance = provenance;
        for rec in r.records() {
            let rec = rec.map_err(|e| e.to_string())?;
            let row = rec
                .iter()
                .map(|s| s.parse::<f64>().map_err(|e| format!("bad number `{s}`: {e}")))
                .collect::<Result<Vec<_>, _>>()?;
            if row.len() != table.columns.len() {
                return Err("ragged row".into());
            }
            table.rows.push(row);
        }
        Ok(table)
    }

    pub fn from_json(text: &str) -> Result<Self, String> {
        let root: Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
        let cols = root.get("columns").and_then(Value::as_object).ok_or("missing `columns`")?;
        let mut table = ResultTable::new(cols.keys().cloned());
        if let Some(p) = root.get("provenance").and_then(Value::as_object) {
            for (k, v) in p {
                table.provenance.insert(k.clone(), v.as_str().unwrap_or_default().to_string());
            }
        }
        let arrays: Vec<&Vec<Value>> = cols
            .values()
            .map(|v| v.as_array().ok_or("column is not an array"))
            .collect::<Result<_, _>>()?;
        let n = arrays.first().map_or(0, |a| a.len());
        if arrays.iter().any(|a| a.len() != n) {
            return Err("columns differ in length".into());
        }
        for i in 0..n {
            table.rows.push(arrays.iter().map(|a| a[i].as_f64().unwrap_or(f64::NAN)).collect());
        }
        Ok(table)
    }

    pub fn read(path: &Path) -> Result<Self, HarnessError> {
        let mut text = String::new();
        File::open(path)
            .and_then(|mut f| f.read_to_string(&mut text))
            .map_err(|e| HarnessError::io(path, e))?;
        let parsed = if path.extension().is_some_and(|e| e == "json") {
            Self::from_json(&text)
        } else {
            Self::from_csv(&text)
        };
        parsed.map_err(|reason| HarnessError::Table {
            path: path.to_path_buf(),
            reason,
        })
    }
}

/// 17 significant digits, enough to round-trip every `f64`.
pub fn format_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "NaN".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// Write `table` to `path`, or to stdout when `path` is `None`.
pub fn emit(table: &ResultTable, format: Format, path: Option<&Path>) -> Result<(), HarnessError> {
    let text = table.render(format);
    match path {
        Some(p) => {
            let f = File::create(p).map_err(|e| HarnessError::io(p, e))?;
            let mut w = BufWriter::new(f);
            w.write_all(text.as_bytes())
                .and_then(|_| w.flush())
                .map_err(|e| HarnessError::io(p, e))
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| HarnessError::io("<stdout>", e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ResultTable {
        let mut t = ResultTable::new(["a", "b", FAILED]);
        t.push(vec![0.1, -3.0e-300, 0.0]);
        t.push(vec![f64::NAN, std::f64::consts::PI, 1.0]);
        t.push(vec![1.0 / 3.0, f64::MAX, 0.0]);
        t.annotate("seed", "42");
        t
    }

    fn same(a: &ResultTable, b: &ResultTable) -> bool {
        a.columns == b.columns
            && a.provenance == b.provenance
            && a.rows.len() == b.rows.len()
            && a.rows.iter().zip(&b.rows).all(|(x, y)| {
                x.iter().zip(y).all(|(p, q)| p.to_bits() == q.to_bits() || (p.is_nan() && q.is_nan()))
            })
    }

    #[test]
    fn csv_round_trip_is_bit_exact() {
        let t = sample();
        let back = ResultTable::from_csv(&t.to_csv()).unwrap();
        assert!(same(&t, &back));
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let t = sample();
        let back = ResultTable::from_json(&t.to_json()).unwrap();
        assert!(same(&t, &back));
    }

    #[test]
    fn empty_table_is_header_only() {
        let t = ResultTable::new(["x", "y"]);
        assert_eq!(t.to_csv(), "x,y\n");
    }

    #[test]
    fn seventeen_digits() {
        assert_eq!(format_float(0.1), "1.0000000000000001e-1");
        assert_eq!(format_float(-2.5), "-2.5000000000000000e0");
    }

    #[test]
    fn failure_flag() {
        assert!(sample().has_failures());
        assert!(!ResultTable::new(["a"]).has_failures());
    }
}
