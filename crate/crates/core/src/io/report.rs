use crate::error::{Error, Result};
use crate::graph::EdgeUpdate;
use crate::harness::{DeceptionReport, Status};
use serde::{Deserialize, Serialize};
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            _ => Err(Error::UnknownId(s.to_string())),
        }
    }
}

/// `x` with 10 significant digits, trailing zeros dropped, never in
/// exponent notation.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let sci = format!("{:.9e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    let point = exp + 1;
    let mut body = if point <= 0 {
        format!("0.{}{}", "0".repeat((-point) as usize), digits)
    } else if point as usize >= digits.len() {
        format!("{}{}", digits, "0".repeat(point as usize - digits.len()))
    } else {
        format!("{}.{}", &digits[..point as usize], &digits[point as usize..])
    };
    if body.contains('.') {
        body = body.trim_end_matches('0').trim_end_matches('.').to_string();
    }
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

fn round(x: Option<f64>) -> Option<f64> {
    x.map(|v| format_sig(v).parse().expect("formatted float parses"))
}

/// Serialized shape. Field order is the CSV header.
#[derive(Debug, Serialize, Deserialize)]
struct Row {
    dataset: String,
    detector: String,
    deceiver: String,
    budget: usize,
    run: usize,
    seed: u64,
    mod_before: Option<f64>,
    mod_after: Option<f64>,
    saf_before: Option<f64>,
    saf_after: Option<f64>,
    score_before: Option<f64>,
    score_after: Option<f64>,
    updates: String,
    duration_s: f64,
    status: String,
}

impl From<&DeceptionReport> for Row {
    fn from(r: &DeceptionReport) -> Self {
        Row {
            dataset: r.dataset.clone(),
            detector: r.detector.clone(),
            deceiver: r.deceiver.to_string(),
            budget: r.budget,
            run: r.run,
            seed: r.seed,
            mod_before: round(r.mod_before),
            mod_after: round(r.mod_after),
            saf_before: round(r.saf_before),
            saf_after: round(r.saf_after),
            score_before: round(r.score_before),
            score_after: round(r.score_after),
            updates: r.updates.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "),
            duration_s: round(Some(r.duration_s)).unwrap_or(0.0),
            status: r.status.to_string(),
        }
    }
}

impl TryFrom<Row> for DeceptionReport {
    type Error = Error;

    fn try_from(r: Row) -> Result<Self> {
        Ok(DeceptionReport {
            dataset: r.dataset,
            detector: r.detector,
            deceiver: r.deceiver.parse()?,
            budget: r.budget,
            run: r.run,
            seed: r.seed,
            mod_before: r.mod_before,
            mod_after: r.mod_after,
            saf_before: r.saf_before,
            saf_after: r.saf_after,
            score_before: r.score_before,
            score_after: r.score_after,
            updates: r.updates.split_whitespace().map(EdgeUpdate::from_str).collect::<Result<_>>()?,
            duration_s: r.duration_s,
            status: r.status.parse::<Status>()?,
        })
    }
}

fn ser(e: impl std::fmt::Display) -> Error {
    Error::Serialize(e.to_string())
}

/// Reports in the given order. Missing metrics are empty CSV fields or JSON
/// nulls; updates are a space-separated `add(u,v)` / `del(u,v)` list.
pub fn write_reports(reports: &[DeceptionReport], format: ReportFormat) -> Result<Vec<u8>> {
    if reports.is_empty() {
        return Err(Error::EmptyInput);
    }
    let rows: Vec<Row> = reports.iter().map(Row::from).collect();
    match format {
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in &rows {
                w.serialize(row).map_err(ser)?;
            }
            w.into_inner().map_err(ser)
        }
        ReportFormat::Json => {
            let mut out = serde_json::to_vec_pretty(&rows).map_err(ser)?;
            out.push(b'\n');
            Ok(out)
        }
    }
}

pub fn read_reports_json(bytes: &[u8]) -> Result<Vec<DeceptionReport>> {
    let rows: Vec<Row> = serde_json::from_slice(bytes).map_err(ser)?;
    rows.into_iter().map(DeceptionReport::try_from).collect()
}

pub fn read_reports_csv(bytes: &[u8]) -> Result<Vec<DeceptionReport>> {
    let mut r = csv::Reader::from_reader(bytes);
    r.deserialize::<Row>().map(|row| DeceptionReport::try_from(row.map_err(ser)?)).collect()
}
