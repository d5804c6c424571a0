//! Deterministic CSV text: 17 significant digits, `.` decimal point, `\n`
//! line ends, header row first.

use std::fmt::Write;

/// `x` in scientific notation with 17 significant digits (`NaN` for missing
/// values).
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        "NaN".to_string()
    } else {
        format!("{x:.16e}")
    }
}

pub(crate) struct CsvTable {
    text: String,
    width: usize,
}

impl CsvTable {
    pub(crate) fn new(header: &[&str]) -> Self {
        let mut text = header.join(",");
        text.push('\n');
        Self {
            text,
            width: header.len(),
        }
    }

    pub(crate) fn row(&mut self, values: &[f64]) {
        debug_assert_eq!(values.len(), self.width);
        for (k, v) in values.iter().enumerate() {
            if k > 0 {
                self.text.push(',');
            }
            write!(self.text, "{}", format_number(*v)).expect("writing to a String");
        }
        self.text.push('\n');
    }

    pub(crate) fn into_string(self) -> String {
        self.text
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(format_number(0.1), "1.0000000000000001e-1");
        assert_eq!(format_number(-2.0), "-2.0000000000000000e0");
        assert_eq!(format_number(0.0), "0.0000000000000000e0");
        assert_eq!(format_number(f64::NAN), "NaN");
    }

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [
            std::f64::consts::PI,
            1.0 / 3.0,
            6.02214076e23,
            -1e-300,
            5e-324,
        ] {
            assert_eq!(format_number(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn table_layout() {
        let mut t = CsvTable::new(&["a", "b"]);
        t.row(&[1.0, 0.5]);
        assert_eq!(
            t.into_string(),
            "a,b\n1.0000000000000000e0,5.0000000000000000e-1\n"
        );
    }
}
