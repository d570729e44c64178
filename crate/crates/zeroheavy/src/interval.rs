//! Closed intervals with exact rational endpoints.

use num_traits::Zero;

use crate::error::Error;
use crate::rational::{self, Rational};
use crate::Result;

/// Closed interval `[lo, hi]` with `lo <= hi`; the enclosure carrier for
/// every certified evaluation in the crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalInterval {
    lo: Rational,
    hi: Rational,
}

impl RationalInterval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::invariant(format!(
                "interval endpoints out of order: [{}, {}]",
                rational::format_rational(&lo),
                rational::format_rational(&hi)
            )));
        }
        Ok(RationalInterval { lo, hi })
    }

    pub fn point(v: Rational) -> Self {
        RationalInterval {
            lo: v.clone(),
            hi: v,
        }
    }

    /// Ball of radius `r >= 0` around `center`.
    pub fn ball(center: &Rational, r: &Rational) -> Self {
        RationalInterval {
            lo: center - r,
            hi: center + r,
        }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / rational::int(2)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, v: &Rational) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn contains_interval(&self, other: &Self) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Strict containment in the interior of `other`.
    pub fn strictly_inside(&self, other: &Self) -> bool {
        other.lo < self.lo && self.hi < other.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive_strict() && !self.hi.is_negative_strict()
    }

    pub fn intersect(&self, other: &Self) -> Option<Self> {
        let lo = if self.lo >= other.lo {
            self.lo.clone()
        } else {
            other.lo.clone()
        };
        let hi = if self.hi <= other.hi {
            self.hi.clone()
        } else {
            other.hi.clone()
        };
        if lo <= hi {
            Some(RationalInterval { lo, hi })
        } else {
            None
        }
    }

    pub fn hull(&self, other: &Self) -> Self {
        let lo = if self.lo <= other.lo {
            self.lo.clone()
        } else {
            other.lo.clone()
        };
        let hi = if self.hi >= other.hi {
            self.hi.clone()
        } else {
            other.hi.clone()
        };
        RationalInterval { lo, hi }
    }

    /// Widen symmetrically by `pad >= 0`.
    pub fn widen(&self, pad: &Rational) -> Self {
        RationalInterval {
            lo: &self.lo - pad,
            hi: &self.hi + pad,
        }
    }

    pub fn neg(&self) -> Self {
        RationalInterval {
            lo: -self.hi.clone(),
            hi: -self.lo.clone(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        RationalInterval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        RationalInterval {
            lo: &self.lo - &other.hi,
            hi: &self.hi - &other.lo,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let candidates = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let mut lo = candidates[0].clone();
        let mut hi = candidates[0].clone();
        for c in &candidates[1..] {
            if c < &lo {
                lo = c.clone();
            }
            if c > &hi {
                hi = c.clone();
            }
        }
        RationalInterval { lo, hi }
    }

    /// Division; errors when the divisor encloses zero.
    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.contains_zero() {
            return Err(Error::domain("division by an interval containing zero"));
        }
        let one = rational::int(1);
        let inv = RationalInterval {
            lo: &one / &other.hi,
            hi: &one / &other.lo,
        };
        Ok(self.mul(&inv))
    }

    /// Integer power with exact monotonicity analysis.
    pub fn pow(&self, n: i32) -> Result<Self> {
        if n == 0 {
            return Ok(RationalInterval::point(rational::int(1)));
        }
        if n < 0 {
            if self.contains_zero() {
                return Err(Error::domain(
                    "negative power of an interval containing zero",
                ));
            }
            return RationalInterval::point(rational::int(1)).div(&self.pow(-n)?);
        }
        let n = n as u32;
        let lo_p = pow_rat(&self.lo, n);
        let hi_p = pow_rat(&self.hi, n);
        if n % 2 == 1 {
            Ok(RationalInterval { lo: lo_p, hi: hi_p })
        } else if !self.contains_zero() {
            let (lo, hi) = if lo_p <= hi_p {
                (lo_p, hi_p)
            } else {
                (hi_p, lo_p)
            };
            Ok(RationalInterval { lo, hi })
        } else {
            let hi = if lo_p >= hi_p { lo_p } else { hi_p };
            Ok(RationalInterval {
                lo: Rational::zero(),
                hi,
            })
        }
    }
}

fn pow_rat(q: &Rational, n: u32) -> Rational {
    let mut acc = Rational::from_integer(num_bigint::BigInt::from(1));
    let mut base = q.clone();
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &base;
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    acc
}

trait StrictSign {
    fn is_positive_strict(&self) -> bool;
    fn is_negative_strict(&self) -> bool;
}

impl StrictSign for Rational {
    fn is_positive_strict(&self) -> bool {
        rational::sign_of(self) > 0
    }
    fn is_negative_strict(&self) -> bool {
        rational::sign_of(self) < 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn arithmetic_encloses_products() {
        let a = RationalInterval::new(ratio(-1, 2), ratio(1, 3)).unwrap();
        let b = RationalInterval::new(ratio(2, 1), ratio(3, 1)).unwrap();
        let p = a.mul(&b);
        assert_eq!(p.lo(), &ratio(-3, 2));
        assert_eq!(p.hi(), &ratio(1, 1));
    }

    #[test]
    fn even_power_clamps_at_zero() {
        let a = RationalInterval::new(ratio(-1, 1), ratio(1, 2)).unwrap();
        let p = a.pow(2).unwrap();
        assert_eq!(p.lo(), &ratio(0, 1));
        assert_eq!(p.hi(), &ratio(1, 1));
    }

    #[test]
    fn division_by_zero_interval_rejected() {
        let a = RationalInterval::new(ratio(1, 1), ratio(2, 1)).unwrap();
        let b = RationalInterval::new(ratio(-1, 1), ratio(1, 1)).unwrap();
        assert!(a.div(&b).is_err());
    }
}
