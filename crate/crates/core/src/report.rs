//! Machine-readable output: JSON with a fixed float format and CSV tables.
//!
//! Every finite `f64` is written in scientific notation with 17 significant
//! digits, which round-trips exactly and makes output byte-stable across
//! runs. Non-finite table cells, which JSON cannot represent, become strings.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::{Serialize, Serializer};
use serde_json::ser::{CompactFormatter, Formatter, PrettyFormatter};

use crate::error::{Error, Result};

/// Formats a float with 17 significant digits (`1.4142135623730951e0`).
pub fn format_f64(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.16e}")
    }
}

struct FixedFloats<F>(F);

impl<F: Formatter> Formatter for FixedFloats<F> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(format_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn end_object_key<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_key(w)
    }
    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

fn encode<T: Serialize + ?Sized, F: Formatter>(value: &T, formatter: F) -> Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FixedFloats(formatter));
    value
        .serialize(&mut ser)
        .map_err(|e| Error::Io(format!("JSON encoding failed: {e}")))?;
    Ok(String::from_utf8(out).expect("serde_json emits UTF-8"))
}

/// Single-line JSON.
pub fn to_json(value: &(impl Serialize + ?Sized)) -> Result<String> {
    encode(value, CompactFormatter)
}

/// Indented JSON.
pub fn to_json_pretty(value: &(impl Serialize + ?Sized)) -> Result<String> {
    encode(value, PrettyFormatter::new())
}

/// One table cell.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    Real(f64),
    Bool(bool),
    Text(String),
    Missing,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Real(x) => format_f64(*x),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Missing => String::new(),
        }
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Cell::Int(i) => s.serialize_i64(*i),
            Cell::Real(x) if x.is_finite() => s.serialize_f64(*x),
            Cell::Real(x) => s.serialize_str(&format_f64(*x)),
            Cell::Bool(b) => s.serialize_bool(*b),
            Cell::Text(t) => s.serialize_str(t),
            Cell::Missing => s.serialize_none(),
        }
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    /// Every checked row passed, but some rows were excluded (e.g. unconverged solves).
    PassWithExclusions,
    Fail,
    /// Exploratory table without a claim.
    NoVerdict,
}

/// A checked statement together with its outcome.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Claim {
    pub name: String,
    pub tolerance: Option<f64>,
    pub holds: bool,
    pub detail: String,
}

/// The outcome of an experiment run: parameters, per-instance rows and the
/// verdict over all claims.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub seed: u64,
    pub parameters: BTreeMap<String, serde_json::Value>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub claims: Vec<Claim>,
    /// Rows left out of the verdict, e.g. solves that did not converge.
    pub excluded: usize,
    /// Inputs that were not run, with the reason.
    pub skipped: Vec<String>,
    pub verdict: Verdict,
}

impl ExperimentReport {
    pub fn new(experiment: &str, seed: u64, columns: &[&str]) -> Self {
        ExperimentReport {
            experiment: experiment.to_string(),
            seed,
            parameters: BTreeMap::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            claims: Vec::new(),
            excluded: 0,
            skipped: Vec::new(),
            verdict: Verdict::NoVerdict,
        }
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) {
        let value = serde_json::to_value(value).unwrap_or(serde_json::Value::Null);
        self.parameters.insert(key.to_string(), value);
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Sets the verdict from the claims and the exclusion count.
    pub fn conclude(&mut self) {
        self.verdict = if self.claims.is_empty() {
            Verdict::NoVerdict
        } else if self.claims.iter().any(|c| !c.holds) {
            Verdict::Fail
        } else if self.excluded > 0 {
            Verdict::PassWithExclusions
        } else {
            Verdict::Pass
        };
    }

    pub fn passed(&self) -> bool {
        matches!(self.verdict, Verdict::Pass | Verdict::PassWithExclusions)
    }

    pub fn to_json(&self) -> Result<String> {
        to_json_pretty(self).map(|s| s + "\n")
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(&self.columns).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv)).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("cells are UTF-8"))
    }

    /// Base file name `{experiment}-{seed}`.
    pub fn file_stem(&self) -> String {
        format!("{}-{}", self.experiment, self.seed)
    }

    /// Writes `{experiment}-{seed}.json` and `.csv` into `dir`.
    pub fn write_files(&self, dir: &Path) -> Result<(PathBuf, PathBuf)> {
        fs::create_dir_all(dir)?;
        let json = dir.join(format!("{}.json", self.file_stem()));
        let csv = dir.join(format!("{}.csv", self.file_stem()));
        fs::write(&json, self.to_json()?)?;
        fs::write(&csv, self.to_csv()?)?;
        Ok((json, csv))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format() {
        assert_eq!(format_f64(2f64.sqrt()), "1.4142135623730951e0");
        assert_eq!(format_f64(0.0), "0.0000000000000000e0");
        assert_eq!(format_f64(f64::INFINITY), "inf");
        for x in [1.0 / 3.0, 1e-300, 6.02e23, -2.5] {
            assert_eq!(format_f64(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(
            to_json(&vec![Cell::Real(1.5), Cell::Real(f64::INFINITY)]).unwrap(),
            "[1.5000000000000000e0,\"inf\"]"
        );
    }

    #[test]
    fn report_outputs() {
        let mut r = ExperimentReport::new("demo", 7, &["n", "value", "ok"]);
        r.param("p", 2.0);
        r.push_row(vec![4usize.into(), 0.5.into(), true.into()]);
        r.push_row(vec![5usize.into(), f64::INFINITY.into(), Cell::Missing]);
        r.claims.push(Claim {
            name: "c".into(),
            tolerance: None,
            holds: true,
            detail: String::new(),
        });
        r.conclude();
        assert_eq!(r.verdict, Verdict::Pass);
        assert_eq!(r.to_csv().unwrap(), "n,value,ok\n4,5.0000000000000000e-1,true\n5,inf,\n");
        let json = r.to_json().unwrap();
        assert!(json.contains("\"verdict\": \"pass\""));
        assert!(json.contains("\"inf\""));
        assert_eq!(r.file_stem(), "demo-7");
        r.excluded = 1;
        r.conclude();
        assert_eq!(r.verdict, Verdict::PassWithExclusions);
    }
}
