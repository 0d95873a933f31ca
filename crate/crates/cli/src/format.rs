use std::fmt;

use clap::ValueEnum;
use num_rational::Ratio;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
    Csv,
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Text => "text",
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
        })
    }
}

/// Exact decimal rendering of a nonnegative rational, rounded half up.
pub fn decimal(r: &Ratio<u128>, digits: u32) -> String {
    let scale = 10u128.pow(digits);
    let (num, den) = (*r.numer(), *r.denom());
    let scaled = (num * scale * 2 + den) / (2 * den);
    let int = scaled / scale;
    if digits == 0 {
        return int.to_string();
    }
    format!("{int}.{:0width$}", scaled % scale, width = digits as usize)
}

/// `decimal` as a JSON-friendly float; the shortest float repr round-trips
/// the rendered digits.
pub fn decimal_f64(r: &Ratio<u128>, digits: u32) -> f64 {
    decimal(r, digits).parse().expect("rendered decimal parses")
}

/// Parses a plain decimal literal such as `13.0764` into an exact rational.
pub fn parse_decimal(s: &str) -> Ratio<u128> {
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    let scale = 10u128.pow(frac.len() as u32);
    let int: u128 = int.parse().expect("integer part");
    let frac: u128 = if frac.is_empty() { 0 } else { frac.parse().expect("fractional part") };
    Ratio::new(int * scale + frac, scale)
}

pub fn abs_diff(a: &Ratio<u128>, b: &Ratio<u128>) -> Ratio<u128> {
    if a >= b {
        a - b
    } else {
        b - a
    }
}

pub fn exact(r: &Ratio<u128>) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_rounding() {
        assert_eq!(decimal(&Ratio::new(1, 11), 5), "0.09091");
        assert_eq!(decimal(&Ratio::new(2, 11), 5), "0.18182");
        assert_eq!(decimal(&Ratio::new(122, 11), 5), "11.09091");
        assert_eq!(decimal(&Ratio::new(170, 13), 5), "13.07692");
        assert_eq!(decimal(&Ratio::new(1, 2), 0), "1");
        assert_eq!(decimal(&Ratio::new(1, 8), 2), "0.13");
        assert_eq!(decimal_f64(&Ratio::new(1, 11), 5), 0.09091);
    }

    #[test]
    fn decimal_parsing() {
        assert_eq!(parse_decimal("13.0764"), Ratio::new(130764, 10000));
        assert_eq!(parse_decimal("2"), Ratio::from_integer(2));
        assert_eq!(abs_diff(&parse_decimal("0.5"), &parse_decimal("0.75")), Ratio::new(1, 4));
    }
}
