//! Arbitrary-precision rational plumbing shared by every module.
//!
//! Values are [`num_rational::BigRational`], which is always stored in
//! lowest terms with a positive denominator.

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::Result;

/// Exact rational number; always normalized, denominator > 0.
pub type Rational = num_rational::BigRational;

/// `b^k` as an exact rational for integer `k` (negative exponents allowed).
pub fn base_pow(base: u32, k: i64) -> Rational {
    let b = BigInt::from(base);
    if k >= 0 {
        Rational::from_integer(b.pow(k as u32))
    } else {
        Rational::new(BigInt::one(), b.pow((-k) as u32))
    }
}

/// Rational from an integer numerator/denominator pair.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Rational from an integer.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Floor of `q` as a `BigInt`.
pub fn floor_int(q: &Rational) -> BigInt {
    q.floor().to_integer()
}

/// Euclidean fractional part, in `[0, 1)`.
pub fn frac_part(q: &Rational) -> Rational {
    q - Rational::from_integer(floor_int(q))
}

/// Smallest `d >= 0` with `q * base^d` integral, provided the reduced
/// denominator divides a power of `base`; `None` otherwise.
///
/// The minimal exponent is bounded by the largest prime multiplicity of the
/// denominator, hence by its bit length; the scan below uses that cap.
pub fn terminating_depth(q: &Rational, base: u32) -> Option<u64> {
    let cap = q.denom().magnitude().bits() + 1;
    let b = int(base as i64);
    let mut scaled = q.clone();
    let mut d = 0u64;
    while !scaled.is_integer() {
        if d >= cap {
            return None;
        }
        scaled *= &b;
        d += 1;
    }
    Some(d)
}

/// Parse an exact rational from `p/q`, integer, or terminating decimal text.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::Format("empty rational literal".into()));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|_| Error::Format(format!("bad numerator in {s:?}")))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|_| Error::Format(format!("bad denominator in {s:?}")))?;
        if d.is_zero() {
            return Err(Error::Format(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let sign = if int_part.trim_start().starts_with('-') {
            -1i64
        } else {
            1
        };
        let ip: BigInt = if int_part.is_empty() || int_part == "-" {
            BigInt::zero()
        } else {
            int_part
                .parse()
                .map_err(|_| Error::Format(format!("bad decimal in {s:?}")))?
        };
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Format(format!("bad decimal in {s:?}")));
        }
        let fp: BigInt = frac_part
            .parse()
            .map_err(|_| Error::Format(format!("bad decimal in {s:?}")))?;
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let frac = Rational::new(fp * sign, scale);
        return Ok(Rational::from_integer(ip) + frac);
    }
    let n: BigInt = s
        .parse()
        .map_err(|_| Error::Format(format!("bad rational literal {s:?}")))?;
    Ok(Rational::from_integer(n))
}

/// Render as `p/q`, or just `p` for integers.
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Sign of a rational as -1, 0, or 1.
pub fn sign_of(q: &Rational) -> i32 {
    match q.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

/// `|q|`.
pub fn abs(q: &Rational) -> Rational {
    q.abs()
}
