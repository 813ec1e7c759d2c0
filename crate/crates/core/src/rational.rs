//! Exact rational helpers shared by the series and stability code.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Formats as `p/q`, or `p` when the denominator is one.
pub fn fmt(r: &Rational) -> String {
    r.to_string()
}

pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Converts an integral rational to `i128`, failing loudly otherwise.
pub fn to_integer(r: &Rational, location: impl FnOnce() -> String) -> Result<i128> {
    if !r.is_integer() {
        return Err(Error::NonIntegral { value: fmt(r), location: location() });
    }
    r.to_integer().to_i128().ok_or(Error::Overflow("rational to integer"))
}

pub fn is_nonnegative(r: &Rational) -> bool {
    !r.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(fmt(&rat(6, 4)), "3/2");
        assert_eq!(fmt(&int(-3)), "-3");
        assert_eq!(parse("3/2").unwrap(), rat(3, 2));
        assert_eq!(parse(" -7 ").unwrap(), int(-7));
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
    }

    #[test]
    fn integrality() {
        assert_eq!(to_integer(&rat(8, 4), String::new).unwrap(), 2);
        assert!(matches!(
            to_integer(&rat(1, 2), || "here".into()),
            Err(Error::NonIntegral { .. })
        ));
        assert_eq!(factorial(5), BigInt::from(120));
    }
}
