//! Exact rationals and the bias parameter of the p-biased distribution.

use alloc::format;
use alloc::string::{String, ToString};
use core::fmt;
use core::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"a/b"`, `"a"` or a finite decimal such as `"0.25"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::InvalidParameter(format!("cannot parse {s:?} as a rational"));
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        if fp.is_empty() || !fp.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = ip.starts_with('-');
        let ip = if ip.is_empty() || ip == "-" { "0" } else { ip };
        let whole = BigInt::from_str(ip).map_err(|_| bad())?;
        let frac = BigInt::from_str(fp).map_err(|_| bad())?;
        let den = num_traits::pow(BigInt::from(10), fp.len());
        let frac = Rational::new(frac, den);
        let whole = Rational::from_integer(whole.abs());
        let v = whole + frac;
        return Ok(if neg { -v } else { v });
    }
    BigInt::from_str(s).map(Rational::from_integer).map_err(|_| bad())
}

/// Canonical `"num/den"` rendering (always with a denominator).
pub fn to_ratio_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn to_f64(r: &Rational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // Shift both sides down until they fit.
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift_n = (nb - 1000).max(0) as usize;
    let shift_d = (db - 1000).max(0) as usize;
    let n = (r.numer() >> shift_n).to_f64().unwrap_or(f64::NAN);
    let d = (r.denom() >> shift_d).to_f64().unwrap_or(f64::NAN);
    n / d * libm::exp2(shift_n as f64 - shift_d as f64)
}

/// Exact conversion of a finite float.
pub fn from_f64(v: f64) -> Result<Rational> {
    Rational::from_float(v).ok_or_else(|| Error::InvalidParameter(format!("{v} is not finite")))
}

pub fn pow(base: &Rational, exp: usize) -> Rational {
    num_traits::pow(base.clone(), exp)
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a, I: IntoIterator<Item = &'a Rational>>(values: I) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

pub fn to_biguint(v: &BigInt) -> Option<BigUint> {
    v.to_biguint()
}

/// The inclusion probability of the p-biased distribution, an exact rational in (0, 1).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Bias(Rational);

impl Bias {
    pub fn new(value: Rational) -> Result<Self> {
        if value <= Rational::zero() || value >= Rational::one() {
            return Err(Error::InvalidParameter(format!(
                "bias {} must lie strictly between 0 and 1",
                to_ratio_string(&value)
            )));
        }
        Ok(Bias(value))
    }

    pub fn from_ratio(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidParameter("zero denominator".to_string()));
        }
        Self::new(ratio(num, den))
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }

    pub fn complement(&self) -> Rational {
        Rational::one() - &self.0
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.0)
    }

    /// `(num, den)` when both fit in a `u64`; used for exact Bernoulli draws.
    pub fn as_u64_ratio(&self) -> Option<(u64, u64)> {
        Some((self.0.numer().to_u64()?, self.0.denom().to_u64()?))
    }
}

impl fmt::Display for Bias {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", to_ratio_string(&self.0))
    }
}

impl FromStr for Bias {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Bias::new(parse_rational(s)?)
    }
}

/// `a^(1/s) <=> b^(1/t)` for positive rationals, exactly.
pub fn cmp_root(a: &Rational, s: u32, b: &Rational, t: u32) -> core::cmp::Ordering {
    num_traits::pow(a.clone(), t as usize).cmp(&num_traits::pow(b.clone(), s as usize))
}

pub fn is_positive(r: &Rational) -> bool {
    r.is_positive()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fraction_integer_and_decimal() {
        assert_eq!(parse_rational("3/6").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert_eq!(parse_rational("0.25").unwrap(), ratio(1, 4));
        assert_eq!(parse_rational("-1.5").unwrap(), ratio(-3, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1.").is_err());
    }

    #[test]
    fn bias_bounds_are_strict() {
        assert!(Bias::from_ratio(0, 1).is_err());
        assert!(Bias::from_ratio(1, 1).is_err());
        assert!(Bias::from_ratio(1, 3).is_ok());
        assert_eq!("1/2".parse::<Bias>().unwrap().complement(), ratio(1, 2));
    }

    #[test]
    fn to_f64_handles_huge_values() {
        let big = pow(&ratio(3, 2), 3000);
        let f = to_f64(&(Rational::one() / big));
        assert!(f >= 0.0 && f < 1e-300);
        assert_eq!(to_f64(&ratio(9, 16)), 0.5625);
    }

    #[test]
    fn root_comparison() {
        // 4^(1/2) = 2 = 8^(1/3)
        assert_eq!(cmp_root(&int(4), 2, &int(8), 3), core::cmp::Ordering::Equal);
        assert_eq!(cmp_root(&int(5), 2, &int(8), 3), core::cmp::Ordering::Greater);
    }
}
