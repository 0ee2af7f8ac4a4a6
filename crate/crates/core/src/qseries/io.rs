//! The `# qseries v1` text format.
//!
//! ```text
//! # qseries v1
//! conductor: M
//! precision: P
//! level: N          (optional)
//! maxweight: w      (optional)
//! weight: k         (optional, newform files)
//! label: name       (optional, newform files)
//! n: c0 c1 ... c{phi(M)-1}
//! ```
//!
//! Body lines are written in increasing `n`; zero coefficients are omitted.

use std::fmt::Write as _;

use num_traits::Zero;

use super::QSeries;
use crate::arith::euler_phi;
use crate::error::{Error, Result};
use crate::exact::CycNumber;
use crate::scalar::Ring;

const MAGIC: &str = "# qseries v1";

#[derive(Clone, Debug, PartialEq)]
pub struct SeriesFile {
    pub series: QSeries<CycNumber>,
    pub conductor: u64,
    pub level: Option<u64>,
    pub max_weight: Option<u32>,
    pub weight: Option<u32>,
    pub label: Option<String>,
}

impl SeriesFile {
    /// Plain file for `series` in its own coefficient field.
    pub fn new(series: QSeries<CycNumber>) -> Self {
        let conductor = series.conductor();
        SeriesFile { series, conductor, level: None, max_weight: None, weight: None, label: None }
    }
}

pub fn write_series_file(file: &SeriesFile) -> Result<String> {
    let m = file.conductor;
    let mut out = String::new();
    let _ = writeln!(out, "{MAGIC}");
    let _ = writeln!(out, "conductor: {m}");
    let _ = writeln!(out, "precision: {}", file.series.precision());
    if let Some(level) = file.level {
        let _ = writeln!(out, "level: {level}");
    }
    if let Some(w) = file.max_weight {
        let _ = writeln!(out, "maxweight: {w}");
    }
    if let Some(w) = file.weight {
        let _ = writeln!(out, "weight: {w}");
    }
    if let Some(label) = &file.label {
        let _ = writeln!(out, "label: {label}");
    }
    for (n, c) in file.series.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let _ = writeln!(out, "{n}: {}", c.format_in(m)?);
    }
    Ok(out)
}

fn parse_number<T: std::str::FromStr>(line: usize, key: &str, value: &str) -> Result<T> {
    value.trim().parse().map_err(|_| Error::parse(line, format!("bad value for `{key}`: `{value}`")))
}

pub fn parse_series_file(text: &str) -> Result<SeriesFile> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    match lines.next() {
        Some((_, first)) if first.trim() == MAGIC => {}
        _ => return Err(Error::parse(1, format!("expected `{MAGIC}`"))),
    }
    let mut conductor = None;
    let mut precision: Option<usize> = None;
    let mut level = None;
    let mut max_weight = None;
    let mut weight = None;
    let mut label = None;
    let mut body: Vec<(usize, usize, &str)> = Vec::new();
    for (no, raw) in lines {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once(':').ok_or_else(|| Error::parse(no, "expected `key: value`"))?;
        let key = key.trim();
        if key.bytes().all(|b| b.is_ascii_digit()) && !key.is_empty() {
            let n: usize = parse_number(no, "exponent", key)?;
            body.push((no, n, value));
            continue;
        }
        if !body.is_empty() {
            return Err(Error::parse(no, "header line after coefficient lines"));
        }
        match key {
            "conductor" => conductor = Some(parse_number::<u64>(no, key, value)?),
            "precision" => precision = Some(parse_number(no, key, value)?),
            "level" => level = Some(parse_number(no, key, value)?),
            "maxweight" => max_weight = Some(parse_number(no, key, value)?),
            "weight" => weight = Some(parse_number(no, key, value)?),
            "label" => label = Some(value.trim().to_string()),
            other => return Err(Error::parse(no, format!("unknown header `{other}`"))),
        }
    }
    let conductor = conductor.ok_or_else(|| Error::parse(1, "missing `conductor` header"))?;
    let precision = precision.ok_or_else(|| Error::parse(1, "missing `precision` header"))?;
    if conductor == 0 || precision == 0 {
        return Err(Error::parse(1, "conductor and precision must be positive"));
    }
    let phi = euler_phi(conductor) as usize;
    let mut coeffs = vec![CycNumber::zero(); precision];
    let mut seen = vec![false; precision];
    for (no, n, value) in body {
        if n >= precision {
            return Err(Error::parse(no, format!("exponent {n} is beyond precision {precision}")));
        }
        if seen[n] {
            return Err(Error::parse(no, format!("duplicate exponent {n}")));
        }
        seen[n] = true;
        let count = value.split_whitespace().count();
        if count != phi {
            return Err(Error::parse(
                no,
                format!("expected {phi} coordinates for conductor {conductor}, found {count}"),
            ));
        }
        coeffs[n] = CycNumber::parse(conductor, value).map_err(|e| Error::parse(no, e.to_string()))?;
    }
    let series = QSeries::from_coeffs(coeffs)?;
    debug_assert!(series.coeffs().iter().all(|c| conductor % c.conductor() == 0));
    Ok(SeriesFile { series, conductor, level, max_weight, weight, label })
}
