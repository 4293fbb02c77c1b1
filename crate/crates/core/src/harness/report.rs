//! CSV rows and JSON summaries.

use std::fmt;
use std::io::Write;

use serde::Serialize;

use crate::norms::GNorm;
use crate::{Error, Result};

pub const CSV_HEADER: [&str; 11] = [
    "experiment",
    "p",
    "lhs",
    "rhs",
    "constant",
    "ratio",
    "factorization_residual",
    "deift_residual",
    "n",
    "L",
    "seconds",
];

/// Schatten exponent of a row; `Inf` marks operator-norm rows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PValue {
    Finite(f64),
    Inf,
}

impl Serialize for PValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            PValue::Finite(p) => s.serialize_f64(*p),
            PValue::Inf => s.serialize_str("inf"),
        }
    }
}

impl fmt::Display for PValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PValue::Finite(p) => write!(f, "{p}"),
            PValue::Inf => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub experiment: String,
    pub p: PValue,
    pub lhs: f64,
    pub rhs: f64,
    pub constant: GNorm,
    /// `None` when the constant diverges.
    pub ratio: Option<f64>,
    pub factorization_residual: Option<f64>,
    pub deift_residual: Option<f64>,
    pub n: usize,
    pub length: f64,
    pub seconds: Option<f64>,
}

/// Shortest round-trip text, in scientific notation outside `[1e-4, 1e15)`.
pub fn format_f64(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || (1e-4..1e15).contains(&a) || !a.is_finite() {
        x.to_string()
    } else {
        format!("{x:e}")
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(format_f64).unwrap_or_default()
}

impl ReportRow {
    fn record(&self) -> [String; 11] {
        [
            self.experiment.clone(),
            self.p.to_string(),
            format_f64(self.lhs),
            format_f64(self.rhs),
            match self.constant {
                GNorm::Finite(c) => format_f64(c),
                GNorm::Divergent => "divergent".into(),
            },
            opt(self.ratio),
            opt(self.factorization_residual),
            opt(self.deift_residual),
            self.n.to_string(),
            format_f64(self.length),
            opt(self.seconds),
        ]
    }
}

/// Writes the header and rows. Floats use the shortest representation that
/// round-trips, so identical inputs give identical bytes.
pub fn write_csv<W: Write>(out: W, rows: &[ReportRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(CSV_HEADER).map_err(io)?;
    for row in rows {
        w.write_record(row.record()).map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

/// One pass/fail check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Assertion {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), passed, detail: detail.into() }
    }
}

/// Row-level checks that can be recomputed from the CSV alone: every finite
/// ratio and every residual against its tolerance.
pub fn row_assertions(rows: &[ReportRow], ratio_slack: f64, factorization: f64, deift: f64) -> Vec<Assertion> {
    let mut out = Vec::new();
    for r in rows {
        if let Some(ratio) = r.ratio {
            out.push(Assertion::new(
                format!("ratio[{},p={}]", r.experiment, r.p),
                ratio.is_finite() && ratio >= 0.0 && ratio <= ratio_slack,
                format!("ratio {} (limit {ratio_slack})", format_f64(ratio)),
            ));
        }
        if let Some(f) = r.factorization_residual {
            out.push(Assertion::new(
                format!("factorization[{},p={}]", r.experiment, r.p),
                f <= factorization,
                format!("residual {} (limit {})", format_f64(f), format_f64(factorization)),
            ));
        }
        if let Some(d) = r.deift_residual {
            out.push(Assertion::new(
                format!("deift[{},p={}]", r.experiment, r.p),
                d <= deift,
                format!("residual {} (limit {})", format_f64(d), format_f64(deift)),
            ));
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary<C: Serialize, S: Serialize> {
    pub command: String,
    pub config: C,
    pub assertions: Vec<Assertion>,
    pub studies: S,
    pub passed: bool,
}

impl<C: Serialize, S: Serialize> Summary<C, S> {
    pub fn new(command: &str, config: C, assertions: Vec<Assertion>, studies: S) -> Self {
        let passed = assertions.iter().all(|a| a.passed);
        Self { command: command.into(), config, assertions, studies, passed }
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))
    }
}
