use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use padic_spectrum::exactnum::{format_decimal, Rounding};
use padic_spectrum::Rational;
use serde_json::Value;

use crate::args::Format;
use crate::error::CliError;

/// What a command produced: a JSON document plus the same data as rows.
pub struct Output {
    pub json: Value,
    /// Lines printed above the table in text mode.
    pub summary: Vec<String>,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub dot: Option<String>,
    /// Whether text mode prints the table below the summary.
    pub text_table: bool,
    /// Set when a verification check failed.
    pub failed: bool,
}

impl Output {
    pub fn new(json: Value, header: Vec<&'static str>, rows: Vec<Vec<String>>) -> Self {
        Self {
            json,
            summary: Vec::new(),
            header,
            rows,
            dot: None,
            text_table: true,
            failed: false,
        }
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json)
                    .map_err(|e| CliError::Output(e.to_string()))?;
                s.push('\n');
                Ok(s)
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.header)
                    .map_err(|e| CliError::Output(e.to_string()))?;
                for row in &self.rows {
                    w.write_record(row)
                        .map_err(|e| CliError::Output(e.to_string()))?;
                }
                let bytes = w
                    .into_inner()
                    .map_err(|e| CliError::Output(e.to_string()))?;
                String::from_utf8(bytes).map_err(|e| CliError::Output(e.to_string()))
            }
            Format::Text => Ok(self.text()),
            Format::Dot => self.dot.clone().ok_or_else(|| {
                CliError::Config("--format dot is only available for `tree`".into())
            }),
        }
    }

    fn text(&self) -> String {
        let mut out = String::new();
        for line in &self.summary {
            out.push_str(line);
            out.push('\n');
        }
        if !self.text_table || self.header.is_empty() {
            return out;
        }
        let mut widths: Vec<usize> = self.header.iter().map(|h| h.chars().count()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let line = |cells: Vec<&str>| {
            let padded: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
                .collect();
            padded.join("  ").trim_end().to_string()
        };
        out.push_str(&line(self.header.clone()));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&line(row.iter().map(String::as_str).collect()));
            out.push('\n');
        }
        out
    }
}

pub fn lower(x: &Rational, digits: u32) -> String {
    format_decimal(x, digits, Rounding::Floor)
}

pub fn upper(x: &Rational, digits: u32) -> String {
    format_decimal(x, digits, Rounding::Ceil)
}

pub fn nearest(x: &Rational, digits: u32) -> String {
    format_decimal(x, digits, Rounding::Nearest)
}

/// `m·10^e` with `1 ≤ m < 10`, rounded in the given direction; for quantities
/// whose positional form would be dominated by zeros.
pub fn scientific(x: &Rational, digits: u32, rounding: Rounding) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let (neg, rounding) = if x.is_negative() {
        let flipped = match rounding {
            Rounding::Floor => Rounding::Ceil,
            Rounding::Ceil => Rounding::Floor,
            r => r,
        };
        (true, flipped)
    } else {
        (false, rounding)
    };
    let a = x.abs();
    let ten = Rational::from_integer(BigInt::from(10));
    let mut e = a.numer().to_string().len() as i64 - a.denom().to_string().len() as i64;
    let mut m = &a / pow10(&ten, e);
    if m < Rational::one() {
        e -= 1;
        m *= &ten;
    }
    let mant = format_decimal(&m, digits, rounding);
    format!("{}{mant}e{e}", if neg { "-" } else { "" })
}

fn pow10(ten: &Rational, e: i64) -> Rational {
    let r = num_traits::pow(ten.clone(), e.unsigned_abs() as usize);
    if e < 0 {
        r.recip()
    } else {
        r
    }
}

/// Shortest round-trip decimal text of a float; `inf` when unbounded.
pub fn float(x: f64) -> String {
    if x == 0.0 {
        "0e0".into()
    } else if x.is_finite() {
        format!("{x:e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use padic_spectrum::exactnum::rat;

    #[test]
    fn scientific_bounds() {
        assert_eq!(scientific(&rat(3, 1000), 3, Rounding::Ceil), "3.00e-3");
        assert_eq!(scientific(&rat(1, 3), 3, Rounding::Ceil), "3.34e-1");
        assert_eq!(scientific(&rat(-1, 3), 3, Rounding::Ceil), "-3.33e-1");
        assert_eq!(scientific(&rat(12345, 1), 2, Rounding::Floor), "1.2e4");
        assert_eq!(scientific(&rat(0, 1), 4, Rounding::Ceil), "0");
    }

    #[test]
    fn floats() {
        assert_eq!(float(-0.0), "0e0");
        assert_eq!(float(f64::INFINITY), "inf");
        assert_eq!(float(0.5), "5e-1");
    }

    #[test]
    fn text_table_alignment() {
        let out = Output::new(
            Value::Null,
            vec!["a", "bb"],
            vec![vec!["100".into(), "x".into()]],
        );
        assert_eq!(out.render(Format::Text).unwrap(), "a    bb\n100  x\n");
        assert!(out.render(Format::Dot).is_err());
    }
}
