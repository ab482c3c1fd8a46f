//! CSV readers and writers.
//!
//! Every file has a one-line header and numbers are written with 17
//! significant digits, which round-trips binary64 exactly.

use std::io::{Read, Write};

use crate::error::{invalid, Error, Result};
use crate::haar::WaveletCoefficients;
use crate::radial::SampledFunction;

/// Formats a value with 17 significant digits.
pub fn format_value(v: f64) -> String {
    format!("{v:.16e}")
}

fn io_error(e: impl std::fmt::Display) -> Error {
    invalid(format!("write failed: {e}"))
}

/// Writes `header` followed by one row per entry of `rows`.
pub fn write_table<W: Write>(out: W, header: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header).map_err(io_error)?;
    for row in rows {
        if row.len() != header.len() {
            return Err(invalid("row width does not match header"));
        }
        w.write_record(row.iter().map(|&v| format_value(v)))
            .map_err(io_error)?;
    }
    w.flush().map_err(io_error)
}

/// Like [`write_table`] for rows that are already formatted.
pub fn write_text_table<W: Write>(out: W, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header).map_err(io_error)?;
    for row in rows {
        if row.len() != header.len() {
            return Err(invalid("row width does not match header"));
        }
        w.write_record(row).map_err(io_error)?;
    }
    w.flush().map_err(io_error)
}

/// `j,k,value` with `j = -1` marking the scaling coefficient.
pub fn write_coefficients<W: Write>(out: W, coeffs: &WaveletCoefficients) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["j", "k", "value"]).map_err(io_error)?;
    w.write_record(["-1".to_string(), "0".to_string(), format_value(coeffs.scaling())])
        .map_err(io_error)?;
    for (j, k, d) in coeffs.details() {
        w.write_record([j.to_string(), k.to_string(), format_value(d)])
            .map_err(io_error)?;
    }
    w.flush().map_err(io_error)
}

/// Reads a `j,k,value` table. The file does not carry `h`, so the caller
/// supplies it. `max_level` defaults to the deepest level present.
pub fn read_coefficients<R: Read>(
    input: R,
    h: f64,
    max_level: Option<u32>,
) -> Result<WaveletCoefficients> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    expect_header(&mut reader, &["j", "k", "value"])?;
    let mut scaling = None;
    let mut details = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let line = i as u64 + 2;
        let record = record.map_err(|e| Error::Input {
            line,
            message: e.to_string(),
        })?;
        if record.len() != 3 {
            return Err(Error::Input {
                line,
                message: format!("expected 3 fields, found {}", record.len()),
            });
        }
        let j: i64 = parse_field(&record[0], line, "j")?;
        let k: u64 = parse_field(&record[1], line, "k")?;
        let value: f64 = parse_field(&record[2], line, "value")?;
        if !value.is_finite() {
            return Err(Error::Input {
                line,
                message: "value is not finite".into(),
            });
        }
        match j {
            -1 if k == 0 => {
                if scaling.replace(value).is_some() {
                    return Err(Error::Input {
                        line,
                        message: "duplicate scaling coefficient".into(),
                    });
                }
            }
            -1 => {
                return Err(Error::Input {
                    line,
                    message: format!("scaling index must be 0 on the unit support, got {k}"),
                })
            }
            j if (0..=crate::haar::MAX_LEVEL as i64).contains(&j) && k < 1u64 << j => {
                details.push(((j as u32, k), value));
            }
            _ => {
                return Err(Error::Input {
                    line,
                    message: format!("index ({j}, {k}) is out of range"),
                })
            }
        }
    }
    let scaling = scaling.ok_or(Error::Input {
        line: 1,
        message: "missing scaling coefficient row (j = -1)".into(),
    })?;
    let deepest = details.iter().map(|((j, _), _)| *j).max().unwrap_or(0);
    let max_level = max_level.unwrap_or(deepest);
    WaveletCoefficients::new(h, max_level, scaling, details, 0.0)
}

/// Two-column `r,value` samples.
pub fn read_samples<R: Read>(input: R) -> Result<SampledFunction> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    expect_header(&mut reader, &["r", "value"])?;
    let mut radii = Vec::new();
    let mut values = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let line = i as u64 + 2;
        let record = record.map_err(|e| Error::Input {
            line,
            message: e.to_string(),
        })?;
        if record.len() != 2 {
            return Err(Error::Input {
                line,
                message: format!("expected 2 fields, found {}", record.len()),
            });
        }
        radii.push(parse_field(&record[0], line, "r")?);
        values.push(parse_field(&record[1], line, "value")?);
    }
    if radii.is_empty() {
        return Err(Error::Input {
            line: 2,
            message: "no samples".into(),
        });
    }
    SampledFunction::new(radii, values)
}

fn expect_header<R: Read>(reader: &mut csv::Reader<R>, expected: &[&str]) -> Result<()> {
    let header = reader.headers().map_err(|e| Error::Input {
        line: 1,
        message: e.to_string(),
    })?;
    if header.iter().ne(expected.iter().copied()) {
        return Err(Error::Input {
            line: 1,
            message: format!("expected header {:?}", expected.join(",")),
        });
    }
    Ok(())
}

fn parse_field<T: std::str::FromStr>(field: &str, line: u64, name: &str) -> Result<T> {
    field.parse().map_err(|_| Error::Input {
        line,
        message: format!("cannot parse {name} from {field:?}"),
    })
}
