//! Output formatting shared by all subcommands.
//!
//! Probabilities, statistics, and residuals print with 12 significant
//! digits so published values can be compared against the output verbatim.
//! Verdict words get ANSI color only when stdout is a terminal and
//! `NO_COLOR` is unset.

use std::io::IsTerminal;

use quorder_core::{Complex64, ComplexMatrix};
use serde_json::{json, Value};

use crate::model::matrix_to_entries;

/// Formats with 12 significant digits: fixed point while the exponent
/// keeps the text compact, scientific notation otherwise.
pub fn sig12(x: f64) -> String {
    if x == 0.0 {
        return "0.00000000000".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exponent = x.abs().log10().floor() as i32;
    if (-4..=11).contains(&exponent) {
        let decimals = (11 - exponent).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.11e}")
    }
}

pub fn fmt_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        sig12(z.re)
    } else {
        let sign = if z.im < 0.0 { '-' } else { '+' };
        format!("{}{}{}i", sig12(z.re), sign, sig12(z.im.abs()))
    }
}

/// Matrix rows, one per line, entries two-space separated, whole block
/// indented.
pub fn fmt_matrix(m: &ComplexMatrix, indent: &str) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        out.push_str(indent);
        let row: Vec<String> = (0..m.cols()).map(|j| fmt_complex(m.get(i, j))).collect();
        out.push_str(&row.join("  "));
        out.push('\n');
    }
    out
}

/// Matrix as JSON rows; real entries collapse to bare numbers.
pub fn matrix_json(m: &ComplexMatrix) -> Value {
    serde_json::to_value(matrix_to_entries(m)).expect("matrix serialization")
}

pub fn complex_json(z: Complex64) -> Value {
    if z.im == 0.0 {
        json!(z.re)
    } else {
        json!([z.re, z.im])
    }
}

#[derive(Clone, Copy)]
pub struct Style {
    color: bool,
}

impl Style {
    pub fn detect() -> Self {
        Style {
            color: std::env::var_os("NO_COLOR").is_none() && std::io::stdout().is_terminal(),
        }
    }

    pub fn plain() -> Self {
        Style { color: false }
    }

    pub fn verdict(&self, ok: bool) -> String {
        match (ok, self.color) {
            (true, true) => "\x1b[32mPASS\x1b[0m".into(),
            (true, false) => "PASS".into(),
            (false, true) => "\x1b[31mFAIL\x1b[0m".into(),
            (false, false) => "FAIL".into(),
        }
    }
}

pub fn yes_no(flag: bool) -> &'static str {
    if flag {
        "yes"
    } else {
        "no"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits_across_magnitudes() {
        assert_eq!(sig12(0.0), "0.00000000000");
        assert_eq!(sig12(3.0), "3.00000000000");
        assert_eq!(sig12(0.5), "0.500000000000");
        assert_eq!(sig12(-0.5), "-0.500000000000");
        assert_eq!(sig12(0.04276668660663895), "0.0427666866066");
        assert_eq!(sig12(0.3769863998131139), "0.376986399813");
        assert_eq!(sig12(123456.789), "123456.789000");
        assert_eq!(sig12(1.0e-4), "0.000100000000000");
        assert_eq!(sig12(9.9e-5), "9.90000000000e-5");
        assert_eq!(sig12(1.11022302463e-16), "1.11022302463e-16");
        assert_eq!(sig12(1.0e12), "1.00000000000e12");
    }

    #[test]
    fn complex_rendering() {
        assert_eq!(fmt_complex(Complex64::new(0.5, 0.0)), "0.500000000000");
        assert_eq!(
            fmt_complex(Complex64::new(0.5, -0.25)),
            "0.500000000000-0.250000000000i"
        );
        assert_eq!(
            fmt_complex(Complex64::new(0.0, 1.0)),
            "0.00000000000+1.00000000000i"
        );
    }

    #[test]
    fn verdicts_color_only_when_asked() {
        assert_eq!(Style::plain().verdict(true), "PASS");
        assert_eq!(Style { color: true }.verdict(false), "\x1b[31mFAIL\x1b[0m");
    }
}
