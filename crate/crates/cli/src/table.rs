//! Comma-separated numeric tables.

use std::fmt::Write;

/// Significant digits written per value.
pub const DEFAULT_DIGITS: usize = 15;

/// Overrides [`DEFAULT_DIGITS`]; values below 12 are raised to 12.
pub const PRECISION_ENV: &str = "UISCATTER_PRECISION";

#[derive(Debug, Clone, PartialEq)]
pub struct OutputTable {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

impl OutputTable {
    pub fn new(header: Vec<&'static str>) -> Self {
        Self { header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.header.len(), "row width must match header");
        self.rows.push(row);
    }

    pub fn to_csv(&self, digits: usize) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            for (i, v) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_value(&mut out, *v, digits);
            }
            out.push('\n');
        }
        out
    }
}

fn write_value(out: &mut String, v: f64, digits: usize) {
    if v.is_nan() {
        out.push_str("NaN");
    } else if v.is_infinite() {
        out.push_str(if v > 0.0 { "inf" } else { "-inf" });
    } else if v == 0.0 {
        out.push('0');
    } else {
        write!(out, "{:.*e}", digits - 1, v).unwrap();
    }
}

/// Digits from [`PRECISION_ENV`] when set to an integer, else the default.
pub fn output_digits() -> usize {
    std::env::var(PRECISION_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .map_or(DEFAULT_DIGITS, |d| d.clamp(12, 17))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_with_requested_digits() {
        let mut t = OutputTable::new(vec!["a", "b", "c"]);
        t.push(vec![1.0 / 3.0, 0.0, f64::NAN]);
        t.push(vec![-2.5e-7, 1e12, 1.0]);
        let csv = t.to_csv(12);
        assert_eq!(
            csv,
            "a,b,c\n3.33333333333e-1,0,NaN\n-2.50000000000e-7,1.00000000000e12,1.00000000000e0\n"
        );
        let v: f64 = csv.lines().nth(1).unwrap().split(',').next().unwrap().parse().unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn default_digits_round_trip_closely() {
        let mut t = OutputTable::new(vec!["x"]);
        t.push(vec![std::f64::consts::PI]);
        let v: f64 = t.to_csv(DEFAULT_DIGITS).lines().nth(1).unwrap().parse().unwrap();
        assert!((v - std::f64::consts::PI).abs() < 1e-14);
    }
}
