//! Exact rationals.
//!
//! Values that fit comfortably in machine words are kept as `Ratio<i64>` and
//! every word-sized operation is checked; on overflow the computation is
//! redone over big integers. The representation is canonical (a value is
//! small whenever it fits under [`SMALL_BOUND`]), so derived equality and
//! hashing agree with numeric equality.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

const SMALL_BOUND: u64 = 1 << 62;

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Small(Ratio<i64>),
    Big(BigRational),
}

/// An exact rational number in lowest terms with positive denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rational(Repr);

impl Rational {
    pub fn zero() -> Self {
        Rational(Repr::Small(Ratio::from_integer(0)))
    }

    pub fn one() -> Self {
        Rational(Repr::Small(Ratio::from_integer(1)))
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_small(Ratio::from_integer(n))
    }

    /// `num / den`, reduced. Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_big(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    fn from_small(r: Ratio<i64>) -> Self {
        if fits(r.numer().unsigned_abs(), r.denom().unsigned_abs()) {
            Rational(Repr::Small(r))
        } else {
            Rational(Repr::Big(to_big(&r)))
        }
    }

    fn from_big(r: BigRational) -> Self {
        if let (Some(n), Some(d)) = (r.numer().to_i64(), r.denom().to_i64()) {
            if fits(n.unsigned_abs(), d.unsigned_abs()) {
                return Rational(Repr::Small(Ratio::new_raw(n, d)));
            }
        }
        Rational(Repr::Big(r))
    }

    fn big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(r) => to_big(r),
            Repr::Big(b) => b.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Small(r) => r.is_zero(),
            Repr::Big(b) => b.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.0 {
            Repr::Small(r) => r.is_one(),
            Repr::Big(_) => false,
        }
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small(r) => r.is_negative(),
            Repr::Big(b) => b.is_negative(),
        }
    }

    pub fn numer(&self) -> BigInt {
        self.big().numer().clone()
    }

    pub fn denom(&self) -> BigInt {
        self.big().denom().clone()
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(match &self.0 {
            Repr::Small(r) => Self::from_small(r.recip()),
            Repr::Big(b) => Self::from_big(b.recip()),
        })
    }

    pub fn checked_div(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            return None;
        }
        Some(match (&self.0, &rhs.0) {
            (Repr::Small(a), Repr::Small(b)) => match a.checked_div(b) {
                Some(r) => Self::from_small(r),
                None => Self::from_big(to_big(a) / to_big(b)),
            },
            _ => Self::from_big(self.big() / rhs.big()),
        })
    }
}

fn fits(n: u64, d: u64) -> bool {
    n < SMALL_BOUND && d < SMALL_BOUND
}

fn to_big(r: &Ratio<i64>) -> BigRational {
    BigRational::new_raw(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident, $op:tt) => {
        impl<'a> $tr<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                match (&self.0, &rhs.0) {
                    (Repr::Small(a), Repr::Small(b)) => match a.$checked(b) {
                        Some(r) => Rational::from_small(r),
                        None => Rational::from_big(to_big(a) $op to_big(b)),
                    },
                    _ => Rational::from_big(self.big() $op rhs.big()),
                }
            }
        }
        impl $tr for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, checked_add, +);
binop!(Sub, sub, checked_sub, -);
binop!(Mul, mul, checked_mul, *);

impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        self.checked_div(&rhs).expect("division by zero")
    }
}

impl<'a> Div<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn div(self, rhs: &'a Rational) -> Rational {
        self.checked_div(rhs).expect("division by zero")
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        -&self
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match &self.0 {
            // |numer| < 2^62 so negation cannot overflow
            Repr::Small(r) => Rational(Repr::Small(-r)),
            Repr::Big(b) => Rational::from_big(-b),
        }
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        *self = &*self * rhs;
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => a.cmp(b),
            _ => self.big().cmp(&other.big()),
        }
    }
}

impl Default for Rational {
    fn default() -> Self {
        Rational::zero()
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_int(n)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Repr::Small(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Repr::Big(b) if b.is_integer() => write!(f, "{}", b.numer()),
            Repr::Big(b) => write!(f, "{}/{}", b.numer(), b.denom()),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("invalid rational {s:?}"));
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(Rational::from_big(BigRational::new(n, d)))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Str(String),
            Int(i64),
        }
        match Raw::deserialize(d)? {
            Raw::Str(s) => s.parse().map_err(serde::de::Error::custom),
            Raw::Int(n) => Ok(Rational::from_int(n)),
        }
    }
}

/// Shorthand for an integer-valued rational.
pub fn q(n: i64) -> Rational {
    Rational::from_int(n)
}

/// Shorthand for `num / den`.
pub fn qr(num: i64, den: i64) -> Rational {
    Rational::new(num, den)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms_and_sign() {
        let r = qr(6, -4);
        assert_eq!(r.to_string(), "-3/2");
        assert_eq!(r.denom(), BigInt::from(2));
        assert_eq!(qr(4, 2), q(2));
    }

    #[test]
    fn overflow_promotes_and_demotes() {
        let big = q(1 << 61);
        let prod = &big * &big;
        assert_eq!(prod.to_string(), "5316911983139663491615228241121378304");
        let back = prod.checked_div(&big).unwrap();
        assert_eq!(back, big);
        // canonical representation: equal values compare equal
        assert_eq!(&(&big + &big) - &big, big);
    }

    #[test]
    fn parse_and_print() {
        for s in ["0", "-7", "3/5", "-12/7"] {
            let r: Rational = s.parse().unwrap();
            assert_eq!(r.to_string(), s);
        }
        assert_eq!("4/6".parse::<Rational>().unwrap().to_string(), "2/3");
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
    }

    #[test]
    fn serde_string_form() {
        let v = vec![qr(1, 2), q(-3)];
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"["1/2","-3"]"#);
        let back: Vec<Rational> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn division() {
        assert_eq!(&q(3) / &q(2), qr(3, 2));
        assert!(q(1).checked_div(&q(0)).is_none());
        assert_eq!(qr(-2, 3).recip().unwrap(), qr(-3, 2));
    }
}
