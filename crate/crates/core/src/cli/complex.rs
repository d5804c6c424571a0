//! Textual complex numbers: `"re+imi"`, `"re"`, `"imi"`, `"i"`, `"-i"`.

use num_complex::Complex64 as C64;

pub fn parse_complex(text: &str) -> Result<C64, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("cannot parse complex number {text:?} (expected re+imi)");
    if s.is_empty() {
        return Err(bad());
    }
    let Some(body) = s.strip_suffix(['i', 'j']) else {
        return s
            .parse::<f64>()
            .map(|re| C64::new(re, 0.0))
            .map_err(|_| bad());
    };

    // split at the last sign that is not the leading one or part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));

    let imag = |part: &str| -> Result<f64, String> {
        match part {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => part.parse::<f64>().map_err(|_| bad()),
        }
    };
    match split {
        Some(k) => {
            let re = body[..k].parse::<f64>().map_err(|_| bad())?;
            Ok(C64::new(re, imag(&body[k..])?))
        }
        None => Ok(C64::new(0.0, imag(body)?)),
    }
}

/// Shortest round-tripping representation, always in `re±imi` form.
pub fn format_complex(z: C64) -> String {
    let sign = if z.im.is_sign_negative() { "" } else { "+" };
    format!("{}{}{}i", z.re, sign, z.im)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn accepted_forms() {
        let cases = [
            ("1", C64::new(1.0, 0.0)),
            ("0.6+0.8i", C64::new(0.6, 0.8)),
            ("-0.3-0.2i", C64::new(-0.3, -0.2)),
            ("0.5i", C64::new(0.0, 0.5)),
            ("-i", C64::new(0.0, -1.0)),
            ("i", C64::new(0.0, 1.0)),
            ("2-i", C64::new(2.0, -1.0)),
            ("1e-3+2.5e-1i", C64::new(1e-3, 0.25)),
            ("-1E+2-3e-2i", C64::new(-100.0, -0.03)),
            (" 0.7 + 0.1i ", C64::new(0.7, 0.1)),
        ];
        for (text, want) in cases {
            assert_eq!(parse_complex(text).unwrap(), want, "{text}");
        }
    }

    #[test]
    fn rejected_forms() {
        for text in ["", "abc", "1+2", "1+xi", "++1i", "1..2"] {
            assert!(parse_complex(text).is_err(), "{text}");
        }
    }

    proptest! {
        #[test]
        fn format_round_trips(re in proptest::num::f64::NORMAL, im in proptest::num::f64::NORMAL) {
            let z = C64::new(re, im);
            prop_assert_eq!(parse_complex(&format_complex(z)).unwrap(), z);
        }
    }
}
