//! Report emission as human text, CSV rows, or JSON records.

use std::io::Write;

use clap::ValueEnum;
use kstab_core::rational::{from_f64, ExtRational, Rational};
use num_traits::{One, Zero};
use serde::Serialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Csv,
    Json,
}

pub const CSV_HEADER: [&str; 5] = ["instance", "candidate", "quantity", "value_num", "value_den"];

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Exact(Rational),
    Ext(ExtRational),
    Flag(bool),
    Float(f64),
}

impl Value {
    /// Numerator and denominator; `+∞` is `1/0` and flags are `1` or `0`.
    pub fn fraction(&self) -> (String, String) {
        let pair = |r: &Rational| (r.numer().to_string(), r.denom().to_string());
        match self {
            Value::Exact(r) | Value::Ext(ExtRational::Finite(r)) => pair(r),
            Value::Ext(ExtRational::Infinity) => ("1".into(), "0".into()),
            Value::Flag(b) => pair(&if *b { Rational::one() } else { Rational::zero() }),
            Value::Float(x) => from_f64(*x).map_or_else(|| (x.to_string(), "1".into()), |r| pair(&r)),
        }
    }

    pub fn display(&self) -> String {
        match self {
            Value::Exact(r) => r.to_string(),
            Value::Ext(e) => e.to_string(),
            Value::Flag(b) => if *b { "PASS" } else { "FAIL" }.to_string(),
            Value::Float(x) => format!("{x:.12e}"),
        }
    }
}

impl From<Rational> for Value {
    fn from(r: Rational) -> Self {
        Value::Exact(r)
    }
}

impl From<ExtRational> for Value {
    fn from(r: ExtRational) -> Self {
        Value::Ext(r)
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Flag(b)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub instance: String,
    pub candidate: String,
    pub quantity: String,
    pub value: Value,
}

#[derive(Serialize)]
struct JsonRecord<'a> {
    instance: &'a str,
    candidate: &'a str,
    quantity: &'a str,
    value: String,
    value_num: String,
    value_den: String,
}

/// Collected output of one command.
#[derive(Debug, Default)]
pub struct Report {
    pub lines: Vec<String>,
    pub records: Vec<Record>,
}

impl Report {
    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    pub fn record(&mut self, instance: &str, candidate: impl ToString, quantity: &str, value: impl Into<Value>) {
        self.records.push(Record {
            instance: instance.to_string(),
            candidate: candidate.to_string(),
            quantity: quantity.to_string(),
            value: value.into(),
        });
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Human => Ok(self.lines.iter().map(|l| format!("{l}\n")).collect()),
            Format::Csv => to_csv(&self.records),
            Format::Json => {
                let rows: Vec<JsonRecord> = self
                    .records
                    .iter()
                    .map(|r| {
                        let (value_num, value_den) = r.value.fraction();
                        JsonRecord {
                            instance: &r.instance,
                            candidate: &r.candidate,
                            quantity: &r.quantity,
                            value: r.value.display(),
                            value_num,
                            value_den,
                        }
                    })
                    .collect();
                serde_json::to_string_pretty(&rows)
                    .map(|s| s + "\n")
                    .map_err(|e| CliError::Internal(e.to_string()))
            }
        }
    }
}

pub fn to_csv(records: &[Record]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Internal(e.to_string());
    w.write_record(CSV_HEADER).map_err(io)?;
    for r in records {
        let (num, den) = r.value.fraction();
        w.write_record([&r.instance, &r.candidate, &r.quantity, &num, &den]).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Internal(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Internal(e.to_string()))
}

/// Reads CSV rows back to `(instance, candidate, quantity, value)`; `1/0` is `+∞`.
pub fn from_csv(text: &str) -> Result<Vec<(String, String, String, ExtRational)>, CliError> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().map_err(|e| CliError::User(e.to_string()))?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(CliError::User(format!("unexpected CSV header {header:?}")));
    }
    let mut out = Vec::new();
    for row in r.records() {
        let row = row.map_err(|e| CliError::User(e.to_string()))?;
        let value = if &row[4] == "0" {
            ExtRational::Infinity
        } else {
            let text = format!("{}/{}", &row[3], &row[4]);
            ExtRational::Finite(
                kstab_core::rational::parse_rational(&text).map_err(|e| CliError::User(e.to_string()))?,
            )
        };
        out.push((row[0].to_string(), row[1].to_string(), row[2].to_string(), value));
    }
    Ok(out)
}

pub fn emit(text: &str, out: Option<&std::path::Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::User(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Internal(e.to_string()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use kstab_core::rational::{int, rat};

    #[test]
    fn csv_round_trip() {
        let mut rep = Report::default();
        rep.record("blp2", "(1,1)", "S", rat(7, 6));
        rep.record("p2", "", "a-lower", ExtRational::Infinity);
        rep.record("f3", "(0,-1)", "S", rat(-5, 9));
        rep.record("x", "q", "pass", true);
        rep.record("x", "q", "quadrature", Value::Float(1.6875));
        let text = rep.render(Format::Csv).unwrap();
        assert!(text.starts_with("instance,candidate,quantity,value_num,value_den\n"));
        let back = from_csv(&text).unwrap();
        assert_eq!(back[0].3, ExtRational::Finite(rat(7, 6)));
        assert_eq!(back[1].3, ExtRational::Infinity);
        assert_eq!(back[2].3, ExtRational::Finite(rat(-5, 9)));
        assert_eq!(back[3].3, ExtRational::Finite(int(1)));
        assert_eq!(back[4].3, ExtRational::Finite(rat(27, 16)));
    }
}
