//! Exact non-negative rational weights.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A non-negative rational number stored in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Weight(BigRational);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WeightError {
    #[error("malformed weight `{0}`")]
    Malformed(String),
    #[error("weight `{0}` is negative")]
    Negative(String),
    #[error("weight `{0}` has a zero denominator")]
    ZeroDenominator(String),
}

impl Weight {
    pub fn zero() -> Weight {
        Weight(BigRational::zero())
    }

    pub fn one() -> Weight {
        Weight(BigRational::one())
    }

    pub fn from_int(n: u64) -> Weight {
        Weight(BigRational::from_integer(BigInt::from(n)))
    }

    /// `numer / denom`; panics on a zero denominator.
    pub fn ratio(numer: u64, denom: u64) -> Weight {
        assert!(denom != 0, "zero denominator");
        Weight(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn from_rational(r: BigRational) -> Result<Weight, WeightError> {
        if r.is_negative() {
            return Err(WeightError::Negative(r.to_string()));
        }
        Ok(Weight(r))
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Decimal rendering rounded to `digits` significant digits.
    ///
    /// Computed from the exact value, so the rounding is correct even when
    /// the nearest double would round the other way.
    pub fn to_significant(&self, digits: u32) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let ten = BigRational::from_integer(BigInt::from(10));
        // Normalise to 1 <= m < 10 with value = m * 10^exp.
        let mut m = self.0.clone();
        let mut exp: i64 = 0;
        while m >= ten {
            m /= &ten;
            exp += 1;
        }
        while m < BigRational::one() {
            m *= &ten;
            exp -= 1;
        }
        let scale = BigInt::from(10).pow(digits - 1);
        let scaled = m * BigRational::from_integer(scale);
        // Round half up.
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let mut mantissa = (scaled + half).floor().to_integer();
        let limit = BigInt::from(10).pow(digits);
        if mantissa >= limit {
            mantissa /= 10;
            exp += 1;
        }
        let digits_str = mantissa.to_string();
        // Place the decimal point: value = 0.d1d2... * 10^(exp+1)
        let point = exp + 1;
        let raw = if point <= 0 {
            format!("0.{}{}", "0".repeat((-point) as usize), digits_str)
        } else if point as usize >= digits_str.len() {
            format!("{}{}", digits_str, "0".repeat(point as usize - digits_str.len()))
        } else {
            let (int, frac) = digits_str.split_at(point as usize);
            format!("{int}.{frac}")
        };
        if raw.contains('.') {
            raw.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            raw
        }
    }
}

impl Default for Weight {
    fn default() -> Self {
        Weight::zero()
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for Weight {
    type Err = WeightError;

    /// Accepts `n` or `p/q` with decimal integers; decimal fractions are rejected.
    fn from_str(s: &str) -> Result<Weight, WeightError> {
        let t = s.trim();
        let parse_int = |x: &str| -> Result<BigInt, WeightError> {
            if x.is_empty() || !x.bytes().all(|b| b.is_ascii_digit()) {
                return Err(WeightError::Malformed(s.to_string()));
            }
            x.parse::<BigInt>().map_err(|_| WeightError::Malformed(s.to_string()))
        };
        let r = match t.split_once('/') {
            Some((n, d)) => {
                let n = parse_int(n.trim())?;
                let d = parse_int(d.trim())?;
                if d.is_zero() {
                    return Err(WeightError::ZeroDenominator(s.to_string()));
                }
                BigRational::new(n, d)
            }
            None => BigRational::from_integer(parse_int(t)?),
        };
        Ok(Weight(r))
    }
}

impl Add for Weight {
    type Output = Weight;
    fn add(self, rhs: Weight) -> Weight {
        Weight(self.0 + rhs.0)
    }
}

impl<'a> Add<&'a Weight> for &'a Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        Weight(&self.0 + &rhs.0)
    }
}

impl AddAssign<&Weight> for Weight {
    fn add_assign(&mut self, rhs: &Weight) {
        self.0 += &rhs.0;
    }
}

impl AddAssign for Weight {
    fn add_assign(&mut self, rhs: Weight) {
        self.0 += rhs.0;
    }
}

impl Mul for Weight {
    type Output = Weight;
    fn mul(self, rhs: Weight) -> Weight {
        Weight(self.0 * rhs.0)
    }
}

impl<'a> Mul<&'a Weight> for &'a Weight {
    type Output = Weight;
    fn mul(self, rhs: &Weight) -> Weight {
        Weight(&self.0 * &rhs.0)
    }
}

impl<'a> Div<&'a Weight> for &'a Weight {
    type Output = Weight;
    /// Panics when dividing by zero.
    fn div(self, rhs: &Weight) -> Weight {
        assert!(!rhs.is_zero(), "division by a zero weight");
        Weight(&self.0 / &rhs.0)
    }
}

impl Sum for Weight {
    fn sum<I: Iterator<Item = Weight>>(iter: I) -> Weight {
        iter.fold(Weight::zero(), |acc, w| acc + w)
    }
}

impl<'a> Sum<&'a Weight> for Weight {
    fn sum<I: Iterator<Item = &'a Weight>>(iter: I) -> Weight {
        let mut acc = Weight::zero();
        for w in iter {
            acc += w;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_render() {
        assert_eq!("1/2".parse::<Weight>().unwrap().to_string(), "1/2");
        assert_eq!("2/4".parse::<Weight>().unwrap().to_string(), "1/2");
        assert_eq!("3".parse::<Weight>().unwrap().to_string(), "3");
        assert_eq!("4/2".parse::<Weight>().unwrap().to_string(), "2");
        assert!(matches!("0.5".parse::<Weight>(), Err(WeightError::Malformed(_))));
        assert!(matches!("-1".parse::<Weight>(), Err(WeightError::Malformed(_))));
        assert!(matches!("1/0".parse::<Weight>(), Err(WeightError::ZeroDenominator(_))));
    }

    #[test]
    fn significant_digits() {
        assert_eq!(Weight::ratio(1, 3).to_significant(10), "0.3333333333");
        assert_eq!(Weight::ratio(2, 3).to_significant(10), "0.6666666667");
        assert_eq!(Weight::ratio(19, 60).to_significant(4), "0.3167");
        assert_eq!(Weight::one().to_significant(10), "1");
        assert_eq!(Weight::ratio(9999999999, 10000000000).to_significant(3), "1");
        assert_eq!(Weight::from_int(1234).to_significant(2), "1200");
        assert_eq!(Weight::ratio(1, 1000).to_significant(2), "0.001");
        assert_eq!(Weight::zero().to_significant(5), "0");
    }

    #[test]
    fn arithmetic_is_exact() {
        let a = Weight::ratio(1, 2);
        let b = Weight::ratio(1, 3);
        assert_eq!(&a + &b, Weight::ratio(5, 6));
        assert_eq!(&a * &b, Weight::ratio(1, 6));
        assert_eq!(&a / &b, Weight::ratio(3, 2));
        let total: Weight = [a, b, Weight::ratio(1, 6)].iter().sum();
        assert!(total.is_one());
    }

    #[test]
    fn negative_rationals_rejected() {
        let r = BigRational::new(BigInt::from(-1), BigInt::from(2));
        assert!(Weight::from_rational(r).is_err());
    }
}
