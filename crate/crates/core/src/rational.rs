//! Exact rational scalars.
//!
//! Coefficients are `BigRational`s, always kept in lowest terms with a
//! positive denominator by `num-rational`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::str::FromStr;

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// `num / den` as an exact rational. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn inv_factorial(n: usize) -> Rational {
    Rational::new(BigInt::one(), factorial(n))
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Parses `"p/q"`, `"p"` or `"0"`; the result is reduced.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    if t.is_empty() {
        return Err(Error::EmptyInput);
    }
    let parsed = Rational::from_str(t).map_err(|_| Error::syntax(0, format!("bad rational {t:?}")))?;
    Ok(parsed)
}

/// Reduced `"p/q"` string; integers print without a denominator.
pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

/// `\frac{p}{q}` with the sign pulled out, or the bare integer.
pub fn latex_rational(q: &Rational) -> String {
    if q.is_integer() {
        return q.numer().to_string();
    }
    let sign = if q < &Rational::zero() { "-" } else { "" };
    let n = q.numer().magnitude();
    format!("{sign}\\frac{{{}}}{{{}}}", n, q.denom())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("2/4").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-3").unwrap(), int(-3));
        assert_eq!(parse_rational("0").unwrap(), Rational::zero());
        assert_eq!(format_rational(&rat(-6, 8)), "-3/4");
        assert_eq!(format_rational(&int(5)), "5");
        assert!(parse_rational("1/x").is_err());
        assert_eq!(parse_rational(""), Err(Error::EmptyInput));
    }

    #[test]
    fn latex() {
        assert_eq!(latex_rational(&rat(-1, 12)), "-\\frac{1}{12}");
        assert_eq!(latex_rational(&int(2)), "2");
    }

    #[test]
    fn combinatorics() {
        assert_eq!(factorial(5), BigInt::from(120));
        assert_eq!(binomial(6, 2), BigInt::from(15));
        assert_eq!(binomial(2, 3), BigInt::zero());
    }
}
