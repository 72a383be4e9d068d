//! Number formatting and output sinks.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

/// Decimal rendering of `x` with `digits` significant digits, trailing
/// zeros trimmed; scientific notation outside `1e-6 ≤ |x| < 1e15`.
pub fn sig(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-6..15).contains(&exp) {
        return format!("{:.*e}", digits.saturating_sub(1), x);
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    let s = format!("{x:.decimals$}");
    let s = if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

pub fn time(x: f64) -> String {
    sig(x, 9)
}

pub fn value(x: f64) -> String {
    sig(x, 12)
}

/// Buffered writer to `path`, or stdout when absent.
pub fn sink(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(time(0.0), "0");
        assert_eq!(time(1.0), "1");
        assert_eq!(time(std::f64::consts::PI), "3.14159265");
        assert_eq!(value(std::f64::consts::PI), "3.14159265359");
        assert_eq!(time(0.001), "0.001");
        assert_eq!(time(-2.5), "-2.5");
        assert_eq!(time(1234.56789012), "1234.56789");
        assert_eq!(value(1e-9), "1.00000000000e-9");
        assert_eq!(value(f64::NAN), "NaN");
    }

    #[test]
    fn round_trips_to_requested_precision() {
        for x in [0.123456789012345, 9.87654321e-3, 42.0000000001] {
            let back: f64 = value(x).parse().unwrap();
            assert!(((back - x) / x).abs() < 1e-11);
        }
    }
}
