use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use markov_l2::Weight;

use crate::args::Format;
use crate::CliError;

/// How reals are written to CSV. JSON always uses the shortest
/// representation that parses back to the same `f64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Precision {
    Full,
    Sig13,
}

/// `x` with 13 significant digits in positional notation, or scientific
/// notation outside `1e-4 ..= 1e15`.
pub fn sig13(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let e = x.abs().log10().floor() as i32;
    if !(-4..=15).contains(&e) {
        return format!("{x:.12e}");
    }
    let decimals = (12 - e).max(0) as usize;
    let s = format!("{x:.decimals$}");
    // rounding can carry into a new leading digit
    let carried = s.parse::<f64>().is_ok_and(|r| r.abs() >= 10f64.powi(e + 1));
    if carried && decimals > 0 {
        let d = decimals - 1;
        return format!("{x:.d$}");
    }
    s
}

/// Shortest representation that parses back to `x`, in exponent form for
/// very small or large magnitudes.
pub fn full(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || !x.is_finite() || (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn real(x: f64, p: Precision) -> String {
    match p {
        Precision::Full => full(x),
        Precision::Sig13 => sig13(x),
    }
}

fn opt(x: Option<f64>, p: Precision) -> String {
    x.map(|v| real(v, p)).unwrap_or_default()
}

/// One computed cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub n: usize,
    pub k: usize,
    pub weight: String,
    pub param1: Option<f64>,
    pub param2: Option<f64>,
    pub constant: f64,
    pub method: String,
    pub verified: bool,
    #[serde(flatten, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<BoundsColumns>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsColumns {
    pub source: String,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub asymptotic: Option<f64>,
    pub bracket_ok: bool,
}

pub const HEADER: [&str; 8] = ["n", "k", "weight", "param1", "param2", "constant", "method", "verified"];
pub const BOUNDS_HEADER: [&str; 5] = ["source", "lower", "upper", "asymptotic", "bracket_ok"];

impl OutputRecord {
    pub fn new(weight: Weight, n: usize, k: usize, constant: f64, method: &str, verified: bool) -> Self {
        let (param1, param2) = weight.params();
        OutputRecord {
            n,
            k,
            weight: weight.family().to_string(),
            param1,
            param2,
            constant,
            method: method.to_string(),
            verified,
            bounds: None,
        }
    }

    fn csv_fields(&self, p: Precision) -> Vec<String> {
        let mut f = vec![
            self.n.to_string(),
            self.k.to_string(),
            self.weight.clone(),
            opt(self.param1, Precision::Full),
            opt(self.param2, Precision::Full),
            real(self.constant, p),
            self.method.clone(),
            self.verified.to_string(),
        ];
        if let Some(b) = &self.bounds {
            f.extend([
                b.source.clone(),
                opt(b.lower, p),
                opt(b.upper, p),
                opt(b.asymptotic, p),
                b.bracket_ok.to_string(),
            ]);
        }
        f
    }
}

/// Serializes a list of flat rows to bytes.
pub fn render<T: Serialize>(rows: &[T], format: Format, header: &[&str], csv_row: impl Fn(&T) -> Vec<String>) -> Result<Vec<u8>, CliError> {
    match format {
        Format::Json => {
            let mut buf = serde_json::to_vec_pretty(rows)?;
            buf.push(b'\n');
            Ok(buf)
        }
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
            w.write_record(header)?;
            for r in rows {
                w.write_record(csv_row(r))?;
            }
            w.into_inner().map_err(|e| CliError::Io(e.into_error()))
        }
    }
}

pub fn render_records(rows: &[OutputRecord], format: Format, p: Precision) -> Result<Vec<u8>, CliError> {
    let mut header: Vec<&str> = HEADER.to_vec();
    if rows.iter().any(|r| r.bounds.is_some()) {
        header.extend(BOUNDS_HEADER);
    }
    render(rows, format, &header, |r| r.csv_fields(p))
}

pub fn emit(bytes: &[u8], out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => {
            let mut f = BufWriter::new(File::create(path)?);
            f.write_all(bytes)?;
            f.flush()?;
        }
        None => {
            let mut o = io::stdout().lock();
            o.write_all(bytes)?;
            o.flush()?;
        }
    }
    Ok(())
}
