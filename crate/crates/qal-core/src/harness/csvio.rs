//! CSV schemas, emission, and parsing.
//!
//! Four fixed schemas cover the experiment outputs. Floats are printed in
//! shortest exact form padded to at least six significant digits, so
//! files parse back bit-identically and never depend on locale.

use crate::error::{Error, Result};
use crate::measurement::MeasurementKind;
use std::fs;
use std::path::Path;

/// Formats a float with '.' decimal separator, at least six significant
/// digits, and exact round-trip parsing.
pub fn fmt_f64(x: f64) -> String {
    debug_assert!(x.is_finite(), "CSV floats must be finite, got {x}");
    let repr = format!("{x}");
    let (mut mantissa, exponent) = match repr.find(['e', 'E']) {
        Some(at) => (repr[..at].to_string(), repr[at..].to_string()),
        None => (repr, String::new()),
    };
    if !mantissa.contains('.') {
        mantissa.push('.');
    }
    let significant = mantissa
        .chars()
        .filter(char::is_ascii_digit)
        .skip_while(|&c| c == '0')
        .count();
    for _ in significant..6 {
        mantissa.push('0');
    }
    mantissa + &exponent
}

fn parse_f64(field: &str) -> Result<f64> {
    field
        .parse::<f64>()
        .map_err(|_| Error::Format(format!("bad float '{field}'")))
}

fn parse_usize(field: &str) -> Result<usize> {
    field
        .parse::<usize>()
        .map_err(|_| Error::Format(format!("bad integer '{field}'")))
}

/// `lattice.csv`: one site per line, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeRow {
    pub row: usize,
    pub col: usize,
    pub cos_alpha: f64,
    pub true_class: u8,
}

/// `weak_values.csv`: one single-shot ancilla reading per site.
#[derive(Debug, Clone, PartialEq)]
pub struct WeakValueRow {
    pub row: usize,
    pub col: usize,
    pub q0: f64,
}

/// `strategy_sweep.csv`: one aggregate point per (strategy, n, labels).
#[derive(Debug, Clone, PartialEq)]
pub struct StrategySweepRow {
    pub strategy: String,
    pub n: usize,
    pub sigma: f64,
    pub labels: usize,
    pub mean_accuracy: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub replications: usize,
}

/// `threshold_sweep.csv`: one aggregate cell per (threshold, kind).
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdSweepRow {
    pub threshold: f64,
    pub kind: MeasurementKind,
    pub mean_labels: f64,
    pub mean_accuracy: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub replications: usize,
}

/// A CSV schema: header plus field codecs for its row type.
pub trait CsvSchema: Sized {
    const HEADER: &'static str;
    fn to_fields(&self) -> Vec<String>;
    fn from_fields(fields: &[&str]) -> Result<Self>;
}

impl CsvSchema for LatticeRow {
    const HEADER: &'static str = "row,col,cos_alpha,true_class";

    fn to_fields(&self) -> Vec<String> {
        vec![
            self.row.to_string(),
            self.col.to_string(),
            fmt_f64(self.cos_alpha),
            self.true_class.to_string(),
        ]
    }

    fn from_fields(fields: &[&str]) -> Result<Self> {
        Ok(LatticeRow {
            row: parse_usize(fields[0])?,
            col: parse_usize(fields[1])?,
            cos_alpha: parse_f64(fields[2])?,
            true_class: match fields[3] {
                "0" => 0,
                "1" => 1,
                other => return Err(Error::Format(format!("bad class '{other}'"))),
            },
        })
    }
}

impl CsvSchema for WeakValueRow {
    const HEADER: &'static str = "row,col,q0";

    fn to_fields(&self) -> Vec<String> {
        vec![self.row.to_string(), self.col.to_string(), fmt_f64(self.q0)]
    }

    fn from_fields(fields: &[&str]) -> Result<Self> {
        Ok(WeakValueRow {
            row: parse_usize(fields[0])?,
            col: parse_usize(fields[1])?,
            q0: parse_f64(fields[2])?,
        })
    }
}

impl CsvSchema for StrategySweepRow {
    const HEADER: &'static str =
        "strategy,n,sigma,labels,mean_accuracy,ci_low,ci_high,replications";

    fn to_fields(&self) -> Vec<String> {
        vec![
            self.strategy.clone(),
            self.n.to_string(),
            fmt_f64(self.sigma),
            self.labels.to_string(),
            fmt_f64(self.mean_accuracy),
            fmt_f64(self.ci_low),
            fmt_f64(self.ci_high),
            self.replications.to_string(),
        ]
    }

    fn from_fields(fields: &[&str]) -> Result<Self> {
        Ok(StrategySweepRow {
            strategy: fields[0].to_string(),
            n: parse_usize(fields[1])?,
            sigma: parse_f64(fields[2])?,
            labels: parse_usize(fields[3])?,
            mean_accuracy: parse_f64(fields[4])?,
            ci_low: parse_f64(fields[5])?,
            ci_high: parse_f64(fields[6])?,
            replications: parse_usize(fields[7])?,
        })
    }
}

impl CsvSchema for ThresholdSweepRow {
    const HEADER: &'static str =
        "threshold,kind,mean_labels,mean_accuracy,ci_low,ci_high,replications";

    fn to_fields(&self) -> Vec<String> {
        vec![
            fmt_f64(self.threshold),
            self.kind.name().to_string(),
            fmt_f64(self.mean_labels),
            fmt_f64(self.mean_accuracy),
            fmt_f64(self.ci_low),
            fmt_f64(self.ci_high),
            self.replications.to_string(),
        ]
    }

    fn from_fields(fields: &[&str]) -> Result<Self> {
        Ok(ThresholdSweepRow {
            threshold: parse_f64(fields[0])?,
            kind: MeasurementKind::parse(fields[1])?,
            mean_labels: parse_f64(fields[2])?,
            mean_accuracy: parse_f64(fields[3])?,
            ci_low: parse_f64(fields[4])?,
            ci_high: parse_f64(fields[5])?,
            replications: parse_usize(fields[6])?,
        })
    }
}

/// Renders header plus one line per row.
pub fn emit_csv<R: CsvSchema>(rows: &[R]) -> String {
    let mut out = String::from(R::HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.to_fields().join(","));
        out.push('\n');
    }
    out
}

/// Parses a document produced by [`emit_csv`].
pub fn parse_csv<R: CsvSchema>(content: &str) -> Result<Vec<R>> {
    let mut lines = content.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Format("empty CSV".to_string()))?;
    if header != R::HEADER {
        return Err(Error::Format(format!(
            "unexpected header '{header}', expected '{}'",
            R::HEADER
        )));
    }
    let width = R::HEADER.split(',').count();
    let mut rows = Vec::new();
    for line in lines {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != width {
            return Err(Error::Format(format!(
                "expected {width} fields, got {} in '{line}'",
                fields.len()
            )));
        }
        rows.push(R::from_fields(&fields)?);
    }
    Ok(rows)
}

/// Writes via a temp file in the same directory plus an atomic rename, so
/// an interrupted run never leaves a partial file at the final path.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    fs::create_dir_all(dir)?;
    let file_name = path
        .file_name()
        .ok_or_else(|| Error::InvalidParameter(format!("bad output path {path:?}")))?;
    let tmp = dir.join(format!(
        ".{}.{}.tmp",
        file_name.to_string_lossy(),
        std::process::id()
    ));
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)?;
    Ok(())
}
