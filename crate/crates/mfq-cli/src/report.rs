//! Result tables and their CSV / JSON renderings.
//!
//! Every command that produces tabular output builds a [`ResultTable`] and
//! renders it through [`ResultTable::to_csv`] or [`ResultTable::to_json`].
//! The CSV layout is one table per file:
//!
//! ```text
//! # key value            <- metadata lines: config echo, seed, version, ...
//! experiment,<param columns...>,statistic,value,stderr,count
//! fig6_tau2_cascade,0.3,16,tau2_density,0.7878...,0.0,1
//! ```
//!
//! Rendering is byte-deterministic: floats are written with Rust's shortest
//! round-trip `Display`, metadata and rows keep insertion order, and no
//! timestamps or machine identifiers are recorded.  Two runs with the same
//! configuration and seed therefore produce identical bytes, which is how
//! the harness checks that worker-count changes cannot leak into results.

use std::fmt::Write as _;

use anyhow::{bail, ensure, Result};

/// One output row: parameter values (aligned with the table's parameter
/// columns), a statistic name, and the measured value.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    /// Parameter values, one per entry of [`ResultTable::param_names`].
    /// Entries may be empty strings for summary rows that do not bind a
    /// particular parameter column.
    pub params: Vec<String>,
    /// Statistic name, e.g. `tau2_density`.
    pub statistic: String,
    /// Point value of the statistic.
    pub value: f64,
    /// Standard error when the statistic is an ensemble estimate.
    pub stderr: Option<f64>,
    /// Number of samples behind the value (1 for deterministic quantities).
    pub count: u64,
}

/// An experiment's complete output: metadata, a parameter-column layout,
/// and rows.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    experiment: String,
    metadata: Vec<(String, String)>,
    param_names: Vec<String>,
    rows: Vec<ResultRow>,
}

impl ResultTable {
    /// Starts an empty table for `experiment` with the given parameter
    /// columns.
    pub fn new(experiment: &str, param_names: &[&str]) -> Self {
        ResultTable {
            experiment: experiment.to_string(),
            metadata: Vec::new(),
            param_names: param_names.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    /// Appends a metadata line (rendered as `# key value`).  Keys may
    /// repeat; insertion order is preserved.
    pub fn meta(&mut self, key: &str, value: impl ToString) {
        self.metadata.push((key.to_string(), value.to_string()));
    }

    /// Appends a row.  Fails if the parameter count does not match the
    /// table layout or if the same (params, statistic) pair was already
    /// recorded: ensemble reductions are keyed on that pair, so a collision
    /// always indicates a bookkeeping bug in the caller.
    pub fn push(
        &mut self,
        params: &[&dyn ToString],
        statistic: &str,
        value: f64,
        stderr: Option<f64>,
        count: u64,
    ) -> Result<()> {
        ensure!(
            params.len() == self.param_names.len(),
            "row has {} parameter values but the table declares {} parameter columns",
            params.len(),
            self.param_names.len()
        );
        let params: Vec<String> = params.iter().map(|p| p.to_string()).collect();
        for cell in params.iter().chain(std::iter::once(&statistic.to_string())) {
            ensure!(
                !cell.contains([',', '"', '\n', '\r']),
                "cell {cell:?} contains a CSV delimiter; fields must be plain tokens"
            );
        }
        if self
            .rows
            .iter()
            .any(|r| r.params == params && r.statistic == statistic)
        {
            bail!(
                "duplicate row for statistic {statistic:?} at parameters {params:?}"
            );
        }
        self.rows.push(ResultRow {
            params,
            statistic: statistic.to_string(),
            value,
            stderr,
            count,
        });
        Ok(())
    }

    /// Experiment name the table was created with.
    pub fn experiment(&self) -> &str {
        &self.experiment
    }

    /// Recorded rows, in insertion order.
    pub fn rows(&self) -> &[ResultRow] {
        &self.rows
    }

    /// Parameter column names.
    pub fn param_names(&self) -> &[String] {
        &self.param_names
    }

    /// Renders the table as CSV with `# key value` metadata lines before
    /// the header row.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (key, value) in &self.metadata {
            let _ = writeln!(out, "# {key} {value}");
        }
        let _ = write!(out, "experiment");
        for name in &self.param_names {
            let _ = write!(out, ",{name}");
        }
        let _ = writeln!(out, ",statistic,value,stderr,count");
        for row in &self.rows {
            let _ = write!(out, "{}", self.experiment);
            for cell in &row.params {
                let _ = write!(out, ",{cell}");
            }
            let _ = write!(out, ",{},{}", row.statistic, fmt_f64(row.value));
            match row.stderr {
                Some(se) => {
                    let _ = write!(out, ",{}", fmt_f64(se));
                }
                None => out.push(','),
            }
            let _ = writeln!(out, ",{}", row.count);
        }
        out
    }

    /// Renders the table as a JSON object with `metadata` and `rows`.
    pub fn to_json(&self) -> serde_json::Value {
        let metadata: Vec<serde_json::Value> = self
            .metadata
            .iter()
            .map(|(k, v)| serde_json::json!({ "key": k, "value": v }))
            .collect();
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = serde_json::Map::new();
                for (name, value) in self.param_names.iter().zip(&row.params) {
                    obj.insert(name.clone(), serde_json::Value::String(value.clone()));
                }
                obj.insert(
                    "statistic".into(),
                    serde_json::Value::String(row.statistic.clone()),
                );
                obj.insert("value".into(), json_f64(row.value));
                obj.insert(
                    "stderr".into(),
                    row.stderr.map_or(serde_json::Value::Null, json_f64),
                );
                obj.insert("count".into(), serde_json::json!(row.count));
                serde_json::Value::Object(obj)
            })
            .collect();
        serde_json::json!({
            "experiment": self.experiment,
            "metadata": metadata,
            "rows": rows,
        })
    }
}

/// Shortest round-trip decimal rendering of a float.  `Display` for `f64`
/// is exact in this sense, so equal bit patterns always render to equal
/// bytes and the rendered text parses back to the identical value.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".to_string() } else { "-inf".to_string() }
    } else {
        format!("{x}")
    }
}

fn json_f64(x: f64) -> serde_json::Value {
    match serde_json::Number::from_f64(x) {
        Some(n) => serde_json::Value::Number(n),
        // JSON has no NaN/inf; fall back to the string rendering.
        None => serde_json::Value::String(fmt_f64(x)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_table() -> ResultTable {
        let mut t = ResultTable::new("fig6_tau2_cascade", &["p1", "n"]);
        t.meta("version", "0.1.0");
        t.meta("seed", 7);
        t.push(&[&0.3, &16], "tau2_density", 0.7878, Some(0.0), 1)
            .unwrap();
        t.push(&[&0.3, &16], "tau2_amplitude", 0.7738, None, 1)
            .unwrap();
        t
    }

    #[test]
    fn csv_layout_matches_schema() {
        let csv = sample_table().to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("# version 0.1.0"));
        assert_eq!(lines.next(), Some("# seed 7"));
        assert_eq!(
            lines.next(),
            Some("experiment,p1,n,statistic,value,stderr,count")
        );
        assert_eq!(
            lines.next(),
            Some("fig6_tau2_cascade,0.3,16,tau2_density,0.7878,0,1")
        );
        assert_eq!(
            lines.next(),
            Some("fig6_tau2_cascade,0.3,16,tau2_amplitude,0.7738,,1")
        );
        assert_eq!(lines.next(), None);
    }

    #[test]
    fn duplicate_rows_are_rejected() {
        let mut t = sample_table();
        let err = t
            .push(&[&0.3, &16], "tau2_density", 0.5, None, 1)
            .unwrap_err();
        assert!(
            err.to_string().contains("duplicate row"),
            "unexpected error: {err}"
        );
    }

    #[test]
    fn param_arity_is_enforced() {
        let mut t = sample_table();
        assert!(t.push(&[&0.3], "tau2_density", 0.5, None, 1).is_err());
    }

    #[test]
    fn delimiter_characters_are_rejected_in_cells() {
        let mut t = ResultTable::new("x", &["a"]);
        assert!(t.push(&[&"1,2"], "s", 0.0, None, 1).is_err());
    }

    #[test]
    fn float_rendering_round_trips() {
        for &x in &[
            0.785_875_194_647_152_7,
            1e-300,
            -3.5,
            0.1 + 0.2,
            f64::MIN_POSITIVE,
        ] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "render of {x:?} was {s}");
        }
        assert_eq!(fmt_f64(f64::NAN), "nan");
        assert_eq!(fmt_f64(f64::INFINITY), "inf");
    }

    #[test]
    fn json_rendering_contains_rows_and_metadata() {
        let json = sample_table().to_json();
        assert_eq!(json["experiment"], "fig6_tau2_cascade");
        assert_eq!(json["rows"].as_array().unwrap().len(), 2);
        assert_eq!(json["rows"][0]["p1"], "0.3");
        assert_eq!(json["rows"][0]["statistic"], "tau2_density");
        assert_eq!(json["rows"][1]["stderr"], serde_json::Value::Null);
        assert_eq!(json["metadata"][1]["value"], "7");
    }
}
