//! CSV input and output, and fixed-precision number formatting.
//!
//! * Loss matrix input: header `h0,h1,...`, one row per example, values in `[0,1]`.
//! * Experiment output: `n,method,lambda,mean_excess_risk,trials,seed`.
//! * Coverage output: `bound_kind,dist,n,delta,trials,failures,failure_rate,stderr`.
//!
//! Reals are written with 12 significant digits.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::experiments::{CoverageReport, ExperimentRecord};
use crate::stats::LossMatrix;

/// Significant digits used in CSV output.
pub const CSV_DIGITS: usize = 12;
/// Significant digits used in human-readable output.
pub const TEXT_DIGITS: usize = 6;

/// Formats `x` with `digits` significant digits in the style of C's `%g`:
/// plain notation for moderate exponents, scientific otherwise, trailing
/// zeros removed.
pub fn format_sig(x: f64, digits: usize) -> String {
    assert!(digits >= 1);
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        return format!("{mantissa}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs());
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{:.*}", decimals, x)).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn io_err(e: impl std::fmt::Display) -> Error {
    Error::MalformedMatrix(e.to_string())
}

pub fn write_experiment_csv<W: Write>(records: &[ExperimentRecord], out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "method", "lambda", "mean_excess_risk", "trials", "seed"])?;
    for r in records {
        w.write_record([
            r.sample_size.to_string(),
            r.method.to_string(),
            format_sig(r.lambda, CSV_DIGITS),
            format_sig(r.mean_excess_risk, CSV_DIGITS),
            r.trials.to_string(),
            r.master_seed.to_string(),
        ])?;
    }
    w.flush()
}

pub fn write_coverage_csv<W: Write>(reports: &[CoverageReport], out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["bound_kind", "dist", "n", "delta", "trials", "failures", "failure_rate", "stderr"])?;
    for r in reports {
        w.write_record([
            r.kind.to_string(),
            r.dist.to_string(),
            r.n.to_string(),
            format_sig(r.delta, CSV_DIGITS),
            r.trials.to_string(),
            r.failures.to_string(),
            format_sig(r.failure_rate, CSV_DIGITS),
            format_sig(r.stderr, CSV_DIGITS),
        ])?;
    }
    w.flush()
}

/// Parses a loss matrix. Errors name the 1-based data row and 0-based column.
pub fn read_loss_matrix_csv<R: Read>(input: R) -> Result<LossMatrix> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(input);
    let width = reader.headers().map_err(io_err)?.len();
    if width == 0 {
        return Err(Error::MalformedMatrix("missing header row".into()));
    }
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::MalformedMatrix(format!("row {}: {e}", i + 1)))?;
        if record.len() != width {
            return Err(Error::MalformedMatrix(format!(
                "row {} has {} fields, header has {width}",
                i + 1,
                record.len()
            )));
        }
        let row = record
            .iter()
            .enumerate()
            .map(|(j, field)| match field.parse::<f64>() {
                Ok(v) if (0.0..=1.0).contains(&v) => Ok(v),
                Ok(v) => Err(Error::MatrixEntryOutOfRange { row: i + 1, column: j, value: v }),
                Err(_) => Err(Error::MalformedMatrix(format!("row {}, column {j}: not a number: {field:?}", i + 1))),
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::MalformedMatrix("no data rows".into()));
    }
    LossMatrix::from_rows(&rows)
}

pub fn write_loss_matrix_csv<W: Write>(m: &LossMatrix, out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record((0..m.cols()).map(|j| format!("h{j}")))?;
    for i in 0..m.rows() {
        w.write_record((0..m.cols()).map(|j| format_sig(m.get(i, j), CSV_DIGITS)))?;
    }
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::Method;

    #[test]
    fn significant_digits() {
        assert_eq!(format_sig(0.0, 12), "0");
        assert_eq!(format_sig(0.5, 12), "0.5");
        assert_eq!(format_sig(0.1916803761535621, 6), "0.19168");
        assert_eq!(format_sig(0.1916803761535621, 12), "0.191680376154");
        assert_eq!(format_sig(2.5, 12), "2.5");
        assert_eq!(format_sig(500.0, 12), "500");
        assert_eq!(format_sig(9.9999999999996, 12), "10");
        assert_eq!(format_sig(1.2664165549094176e-14, 6), "1.26642e-14");
        assert_eq!(format_sig(-0.000123456789, 4), "-0.0001235");
        assert_eq!(format_sig(1e15, 12), "1e+15");
        assert_eq!(format_sig(123456.0, 3), "1.23e+05");
    }

    #[test]
    fn formatted_values_round_trip() {
        for x in [0.086541, 1.0 / 3.0, 2.0f64.sqrt() * 1e-9, 12345.678901234] {
            let back: f64 = format_sig(x, 12).parse().unwrap();
            assert!(((back - x) / x).abs() < 1e-11);
        }
    }

    #[test]
    fn experiment_csv_layout() {
        let recs = vec![ExperimentRecord {
            sample_size: 50,
            method: Method::Svp,
            lambda: 2.5,
            mean_excess_risk: 0.0123456789012345,
            std_error: 0.001,
            trials: 1000,
            master_seed: 7,
            misselection_rate: None,
        }];
        let mut buf = Vec::new();
        write_experiment_csv(&recs, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "n,method,lambda,mean_excess_risk,trials,seed\n50,svp,2.5,0.0123456789012,1000,7\n"
        );
    }

    #[test]
    fn loss_matrix_csv() {
        let m = read_loss_matrix_csv("h0,h1\n0.5,0\n0.5,1\n".as_bytes()).unwrap();
        assert_eq!((m.rows(), m.cols()), (2, 2));
        assert_eq!(m.get(1, 1), 1.0);
        let mut buf = Vec::new();
        write_loss_matrix_csv(&m, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "h0,h1\n0.5,0\n0.5,1\n");

        let e = read_loss_matrix_csv("h0,h1\n0.5,0\n0.5,1.2\n".as_bytes()).unwrap_err();
        assert_eq!(e, Error::MatrixEntryOutOfRange { row: 2, column: 1, value: 1.2 });
        let e = read_loss_matrix_csv("h0,h1\n0.5,x\n".as_bytes()).unwrap_err();
        assert!(e.to_string().contains("row 1, column 1"), "{e}");
        assert!(read_loss_matrix_csv("h0,h1\n0.5\n".as_bytes()).is_err());
        assert!(read_loss_matrix_csv("h0\n".as_bytes()).is_err());
    }
}
