//! CSV rendering shared by experiments and figures.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

/// One data row: sweep value, estimator or theory label, mean loss, and SE
/// (absent for theory rows).
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub x: f64,
    pub label: String,
    pub mean_loss: f64,
    pub std_error: Option<f64>,
}

/// A CSV document: `#` comment lines, a header row and data rows.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub comments: Vec<String>,
    pub sweep_variable: String,
    pub rows: Vec<Row>,
}

impl Table {
    pub fn new(sweep_variable: impl Into<String>) -> Self {
        Table {
            comments: Vec::new(),
            sweep_variable: sweep_variable.into(),
            rows: Vec::new(),
        }
    }

    pub fn comment(&mut self, line: impl Into<String>) {
        self.comments.push(line.into());
    }

    pub fn push(&mut self, x: f64, label: impl Into<String>, mean_loss: f64, std_error: Option<f64>) {
        self.rows.push(Row {
            x,
            label: label.into(),
            mean_loss,
            std_error,
        });
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.comments {
            for line in c.lines() {
                let _ = writeln!(out, "# {line}");
            }
        }
        let _ = writeln!(out, "{},label,mean_loss,std_error", self.sweep_variable);
        for r in &self.rows {
            let se = r.std_error.map(format_g9).unwrap_or_default();
            let _ = writeln!(out, "{},{},{},{}", format_g9(r.x), r.label, format_g9(r.mean_loss), se);
        }
        out
    }

    pub fn write_to(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.render()).map_err(|e| Error::io(path, e))
    }
}

/// Format like C's `%.9g`: nine significant digits, trailing zeros removed,
/// scientific notation outside `1e-4 ≤ |v| < 1e9`.
pub fn format_g9(v: f64) -> String {
    const PRECISION: i32 = 9;
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return if v.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:.*e}", (PRECISION - 1) as usize, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..PRECISION).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        let decimals = (PRECISION - 1 - exp) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g9_matches_printf() {
        let cases = [
            (1.0, "1"),
            (0.5, "0.5"),
            (0.1, "0.1"),
            (1.0 / 3.0, "0.333333333"),
            (2.0 / 3.0, "0.666666667"),
            (123456789.0, "123456789"),
            (1234567890.0, "1.23456789e+09"),
            (0.0001, "0.0001"),
            (0.00001234, "1.234e-05"),
            (-2.5, "-2.5"),
            (9.9999999999, "10"),
            (0.0, "0"),
            (f64::NAN, "nan"),
        ];
        for (v, want) in cases {
            assert_eq!(format_g9(v), want, "{v}");
        }
    }

    #[test]
    fn render_layout() {
        let mut t = Table::new("tau");
        t.comment("seed: 1");
        t.push(0.5, "js_plus", 0.25, Some(0.01));
        t.push(0.5, "theory:js_plus", 0.2, None);
        assert_eq!(
            t.render(),
            "# seed: 1\ntau,label,mean_loss,std_error\n0.5,js_plus,0.25,0.01\n0.5,theory:js_plus,0.2,\n"
        );
    }
}
