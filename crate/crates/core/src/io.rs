//! Reading and writing coefficient vectors and spectra.
//!
//! Coefficient vectors are a JSON array of numbers or a single-column CSV
//! (an optional non-numeric header line is skipped).

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::ensembles::CoefficientVector;
use crate::error::{Error, Result};
use crate::spectral::Spectrum;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    /// Guesses from the file extension; anything but `.csv` is JSON.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("csv") => Format::Csv,
            _ => Format::Json,
        }
    }
}

pub fn parse_coefficients_json(text: &str) -> Result<CoefficientVector> {
    let values: Vec<f64> = serde_json::from_str(text)?;
    CoefficientVector::new(values)
}

pub fn parse_coefficients_csv(text: &str) -> Result<CoefficientVector> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut values = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        if rec.len() != 1 {
            return Err(Error::InvalidArgument(format!(
                "coefficient CSV must have one column, line {} has {}",
                i + 1,
                rec.len()
            )));
        }
        match rec[0].parse::<f64>() {
            Ok(v) => values.push(v),
            Err(_) if i == 0 => {}
            Err(_) => {
                return Err(Error::InvalidArgument(format!(
                    "line {}: not a number: {:?}",
                    i + 1,
                    &rec[0]
                )))
            }
        }
    }
    CoefficientVector::new(values)
}

pub fn read_coefficients(path: &Path) -> Result<CoefficientVector> {
    let text = fs::read_to_string(path)?;
    match Format::from_path(path) {
        Format::Json => parse_coefficients_json(&text),
        Format::Csv => parse_coefficients_csv(&text),
    }
}

pub fn coefficients_to_json(coeffs: &CoefficientVector) -> Result<String> {
    Ok(serde_json::to_string(coeffs)?)
}

pub fn write_coefficients_csv<W: Write>(coeffs: &CoefficientVector, w: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["a"])?;
    for v in coeffs.values() {
        wtr.write_record([format_float(*v)])?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn write_coefficients(coeffs: &CoefficientVector, path: &Path) -> Result<()> {
    match Format::from_path(path) {
        Format::Json => fs::write(path, coefficients_to_json(coeffs)?)?,
        Format::Csv => write_coefficients_csv(coeffs, fs::File::create(path)?)?,
    }
    Ok(())
}

/// Spectrum as CSV rows `r,lambda` with `r = 1..=n`.
pub fn write_spectrum_csv<W: Write>(spectrum: &Spectrum, w: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["r", "lambda"])?;
    for (i, v) in spectrum.eigenvalues.iter().enumerate() {
        wtr.write_record([(i + 1).to_string(), format_float(*v)])?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn spectrum_to_json(spectrum: &Spectrum) -> Result<String> {
    Ok(serde_json::to_string(spectrum)?)
}

/// Shortest representation that round-trips.
pub fn format_float(v: f64) -> String {
    format!("{v:?}")
}
