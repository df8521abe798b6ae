//! Report records and their JSON and CSV renderings.
//!
//! Every real number is printed in scientific notation with 17 significant
//! digits so that repeated runs produce byte-identical output. Non-finite
//! values become `null` in JSON and an empty field in CSV.

use clap::ValueEnum;
use num_complex::Complex64;
use std::io::{self, Write};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Str(String),
    Bool(bool),
    List(Vec<f64>),
    Null,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Str(s.to_owned())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Str(s)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Null, Into::into)
    }
}

/// An ordered list of named fields. Key order is part of the schema.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Record(Vec<(&'static str, Cell)>);

impl Record {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, key: &'static str, value: impl Into<Cell>) -> Self {
        self.0.push((key, value.into()));
        self
    }

    pub fn int(self, key: &'static str, value: impl Into<i64>) -> Self {
        self.with(key, Cell::Int(value.into()))
    }

    /// Adds `key` (real part) and `key_im` (imaginary part).
    pub fn complex(self, key: &'static str, key_im: &'static str, z: Option<Complex64>) -> Self {
        self.with(key, z.map(|z| z.re)).with(key_im, z.map(|z| z.im))
    }

    pub fn keys(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.0.iter().map(|(k, _)| *k)
    }
}

/// 17 significant digits, or `None` for NaN and infinities. Negative zero
/// is printed as zero.
pub fn number(x: f64) -> Option<String> {
    x.is_finite().then(|| format!("{:.16e}", x + 0.0))
}

fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

fn json_cell(cell: &Cell) -> String {
    match cell {
        Cell::Num(x) => number(*x).unwrap_or_else(|| "null".into()),
        Cell::Int(i) => i.to_string(),
        Cell::Str(s) => json_string(s),
        Cell::Bool(b) => b.to_string(),
        Cell::List(v) => {
            let items: Vec<String> = v
                .iter()
                .map(|x| number(*x).unwrap_or_else(|| "null".into()))
                .collect();
            format!("[{}]", items.join(","))
        }
        Cell::Null => "null".into(),
    }
}

fn csv_cell(cell: &Cell) -> String {
    match cell {
        Cell::Num(x) => number(*x).unwrap_or_default(),
        Cell::Int(i) => i.to_string(),
        Cell::Str(s) => s.clone(),
        Cell::Bool(b) => b.to_string(),
        Cell::List(v) => v
            .iter()
            .map(|x| number(*x).unwrap_or_default())
            .collect::<Vec<_>>()
            .join(";"),
        Cell::Null => String::new(),
    }
}

pub fn record_json(record: &Record) -> String {
    let fields: Vec<String> = record
        .0
        .iter()
        .map(|(k, v)| format!("{}:{}", json_string(k), json_cell(v)))
        .collect();
    format!("{{{}}}", fields.join(","))
}

/// Writes one record as a JSON object, or as a CSV header plus one row.
pub fn emit_one(out: &mut impl Write, format: Format, record: &Record) -> io::Result<()> {
    match format {
        Format::Json => writeln!(out, "{}", record_json(record)),
        Format::Csv => emit_csv(out, std::slice::from_ref(record)),
    }
}

/// Writes records as a JSON array (one element per line), or as CSV.
pub fn emit_many(out: &mut impl Write, format: Format, records: &[Record]) -> io::Result<()> {
    match format {
        Format::Json => {
            writeln!(out, "[")?;
            for (i, r) in records.iter().enumerate() {
                let sep = if i + 1 < records.len() { "," } else { "" };
                writeln!(out, "  {}{sep}", record_json(r))?;
            }
            writeln!(out, "]")
        }
        Format::Csv => emit_csv(out, records),
    }
}

fn emit_csv(out: &mut impl Write, records: &[Record]) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if let Some(first) = records.first() {
        w.write_record(first.keys())?;
    }
    for r in records {
        w.write_record(r.0.iter().map(|(_, v)| csv_cell(v)))?;
    }
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_carry_seventeen_significant_digits() {
        assert_eq!(number(1.0).unwrap(), "1.0000000000000000e0");
        assert_eq!(number(0.1).unwrap(), "1.0000000000000001e-1");
        assert_eq!(number(-0.0).unwrap(), "0.0000000000000000e0");
        assert_eq!(number(f64::NAN), None);
        let back: f64 = number(std::f64::consts::PI).unwrap().parse().unwrap();
        assert_eq!(back, std::f64::consts::PI);
    }

    #[test]
    fn json_record_is_valid_json_with_ordered_keys() {
        let r = Record::new()
            .with("name", "a \"quoted\" name")
            .with("x", 0.5)
            .with("bad", f64::INFINITY)
            .int("j", -2)
            .with("ok", true)
            .with("at", Cell::List(vec![1.0, 0.0]));
        let text = record_json(&r);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["x"], 0.5);
        assert!(v["bad"].is_null());
        assert_eq!(v["j"], -2);
        assert_eq!(v["at"][0], 1.0);
        assert!(text.starts_with("{\"name\""));
    }

    #[test]
    fn csv_quotes_fields_with_commas() {
        let r = Record::new().with("test", "polygauss:poly=x1^2,s=2").with("v", 2.0);
        let mut buf = Vec::new();
        emit_one(&mut buf, Format::Csv, &r).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "test,v\n\"polygauss:poly=x1^2,s=2\",2.0000000000000000e0\n"
        );
    }
}
