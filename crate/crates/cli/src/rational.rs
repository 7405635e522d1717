//! Exact parsing and decimal display of rationals.

use std::str::FromStr;

use num::{BigInt, One, Signed, ToPrimitive, Zero};
use stackelberg_core::Scalar;

/// Parses `"num/den"`, an integer, or a decimal such as `-0.125` or `2.5e-3`
/// into the exact rational it denotes.
pub fn parse_rational(s: &str) -> Result<Scalar, String> {
    let s = s.trim();
    if s.contains('/') {
        let v = Scalar::from_str(s).map_err(|e| format!("invalid fraction {s:?}: {e}"))?;
        return Ok(v);
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(k) => {
            let e: i32 = s[k + 1..].parse().map_err(|_| format!("invalid exponent in {s:?}"))?;
            (&s[..k], e)
        }
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit())
    {
        return Err(format!("invalid number {s:?}"));
    }
    let all: BigInt = format!("0{int_part}{frac_part}").parse().expect("digits only");
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut v = Scalar::from_integer(all);
    if scale >= 0 {
        v *= Scalar::from_integer(num::pow(ten, scale as usize));
    } else {
        v /= Scalar::from_integer(num::pow(ten, (-scale) as usize));
    }
    Ok(if neg { -v } else { v })
}

/// `v` rounded to 12 significant digits, in plain positional notation.
pub fn decimal12(v: &Scalar) -> String {
    if v.is_zero() {
        return "0".to_string();
    }
    let mag = v.abs();
    let ten = Scalar::from_integer(BigInt::from(10));
    // 10^e <= mag < 10^(e+1)
    let mut e = mag.to_f64().map(|f| f.log10().floor() as i32).unwrap_or(0);
    while pow10(&ten, e) > mag {
        e -= 1;
    }
    while pow10(&ten, e + 1) <= mag {
        e += 1;
    }
    let mut k = 11 - e;
    let half = Scalar::new(BigInt::one(), BigInt::from(2));
    let mut n = (&mag * pow10(&ten, k) + &half).floor().to_integer();
    if n == num::pow(BigInt::from(10), 12) {
        k -= 1;
        n = (&mag * pow10(&ten, k) + &half).floor().to_integer();
    }
    let digits = n.to_string();
    let body = if k <= 0 {
        format!("{digits}{}", "0".repeat((-k) as usize))
    } else {
        let k = k as usize;
        let padded = format!("{}{digits}", "0".repeat((k + 1).saturating_sub(digits.len())));
        let (int_part, frac) = padded.split_at(padded.len() - k);
        format!("{int_part}.{frac}")
    };
    if v.is_negative() {
        format!("-{body}")
    } else {
        body
    }
}

fn pow10(ten: &Scalar, e: i32) -> Scalar {
    if e >= 0 {
        num::pow(ten.clone(), e as usize)
    } else {
        num::pow(ten.clone(), (-e) as usize).recip()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Scalar {
        Scalar::new(n.into(), d.into())
    }

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("3/4").unwrap(), r(3, 4));
        assert_eq!(parse_rational("-6/8").unwrap(), r(-3, 4));
        assert_eq!(parse_rational("0.125").unwrap(), r(1, 8));
        assert_eq!(parse_rational("-.5").unwrap(), r(-1, 2));
        assert_eq!(parse_rational("2.5e-3").unwrap(), r(1, 400));
        assert_eq!(parse_rational("7").unwrap(), r(7, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational(".").is_err());
    }

    #[test]
    fn twelve_digits() {
        assert_eq!(decimal12(&r(5, 4)), "1.25000000000");
        assert_eq!(decimal12(&r(1, 3)), "0.333333333333");
        assert_eq!(decimal12(&r(-2, 3)), "-0.666666666667");
        assert_eq!(decimal12(&r(123456789012345, 1)), "123456789012000");
        assert_eq!(decimal12(&r(9999999999999, 10000000000000)), "1.00000000000");
        assert_eq!(decimal12(&r(1, 400)), "0.00250000000000");
    }
}
