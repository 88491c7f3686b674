//! Exact rational helpers shared by the analysis modules and the command line.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Parses `p/q`, an integer, or a finite decimal such as `0.375`.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let s = text.trim();
    let bad = || Error::InvalidArgument(format!("not a rational number: `{text}`"));
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| bad())?;
        let d: BigInt = den.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::InvalidArgument(format!("zero denominator in `{text}`")));
        }
        return Ok(BigRational::new(n, d));
    }
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let n: BigInt = digits.parse().map_err(|_| bad())?;
    let d = num_traits::pow(BigInt::from(10), frac_part.len());
    Ok(BigRational::new(n * sign, d))
}

/// `p/q` in lowest terms, or just `p` when the denominator is one.
pub fn format_rational(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Decimal expansion truncated (not rounded) to `digits` places.
pub fn truncate_decimal(x: &BigRational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = (x.abs() * BigRational::from_integer(scale.clone())).floor().to_integer();
    let int = &scaled / &scale;
    let frac = (&scaled % &scale).to_string();
    let sign = if x.is_negative() { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac:0>digits$}")
    }
}

pub fn ratio(a: u64, b: u64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_forms() {
        assert_eq!(parse_rational("1/5").unwrap(), ratio(1, 5));
        assert_eq!(parse_rational("2/10").unwrap(), ratio(1, 5));
        assert_eq!(parse_rational("0.6").unwrap(), ratio(3, 5));
        assert_eq!(parse_rational(".25").unwrap(), ratio(1, 4));
        assert_eq!(parse_rational("3").unwrap(), ratio(3, 1));
        assert_eq!(parse_rational("-0.5").unwrap(), -ratio(1, 2));
        for bad in ["", ".", "1/0", "x", "1.2.3", "1e3"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn formats() {
        assert_eq!(format_rational(&ratio(10, 6)), "5/3");
        assert_eq!(format_rational(&ratio(4, 2)), "2");
        assert_eq!(truncate_decimal(&ratio(71, 42), 5), "1.69047");
        assert_eq!(truncate_decimal(&ratio(1, 40), 3), "0.025");
        assert_eq!(truncate_decimal(&ratio(7, 2), 0), "3");
    }
}
