//! Exact rational arithmetic.
//!
//! Everything in this crate is computed over the rationals; there is no
//! floating point anywhere. [`Rat`] wraps an arbitrary-precision rational
//! and fixes the textual form used throughout the CLI and the catalog file
//! format: `p/q` in lowest terms with `q > 0`, printed as a bare integer
//! when `q == 1`.
//!
//! [`QuadRoot`] is the exact value `base + coeff * sqrt(disc)` used to
//! report roots of quadratics whose discriminant is not a perfect square.
//! Comparisons against rationals are exact sign computations, never
//! approximations.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An exact rational number.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rat(BigRational);

impl Rat {
    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Rat(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn from_big(numer: BigInt, denom: BigInt) -> Self {
        assert!(!denom.is_zero(), "zero denominator");
        Rat(BigRational::new(numer, denom))
    }

    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// True when the value is an integer and `>= 0`.
    pub fn is_nonnegative_integer(&self) -> bool {
        self.0.is_integer() && !self.0.is_negative()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    /// The integer value, if the rational is an integer.
    pub fn to_integer(&self) -> Option<BigInt> {
        self.0.is_integer().then(|| self.0.to_integer())
    }

    /// Largest integer `<=` the value.
    pub fn floor(&self) -> Rat {
        Rat(self.0.floor())
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    /// `self^2`, occasionally clearer than `self * self` at call sites.
    pub fn square(&self) -> Rat {
        Rat(&self.0 * &self.0)
    }

    /// `self^3`.
    pub fn cube(&self) -> Rat {
        Rat(&self.0 * &self.0 * &self.0)
    }

    /// Exact square root when the value is the square of a rational.
    pub fn sqrt_exact(&self) -> Option<Rat> {
        if self.is_negative() {
            return None;
        }
        let ns = self.numer().sqrt();
        let ds = self.denom().sqrt();
        if &(&ns * &ns) == self.numer() && &(&ds * &ds) == self.denom() {
            Some(Rat::from_big(ns, ds))
        } else {
            None
        }
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }
}

impl From<u32> for Rat {
    fn from(n: u32) -> Self {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }
}

impl From<BigInt> for Rat {
    fn from(n: BigInt) -> Self {
        Rat(BigRational::from_integer(n))
    }
}

/// Shorthand for `Rat::new(n, d)`.
pub fn rat(numer: i64, denom: i64) -> Rat {
    Rat::new(numer, denom)
}

/// Shorthand for an integer `Rat`.
pub fn rint(n: i64) -> Rat {
    Rat::from(n)
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat((self.0).$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &'a Rat) -> Rat {
                Rat((self.0).$method(&rhs.0))
            }
        }
        impl<'a> $trait<Rat> for &'a Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat((&self.0).$method(rhs.0))
            }
        }
        impl<'a, 'b> $trait<&'b Rat> for &'a Rat {
            type Output = Rat;
            fn $method(self, rhs: &'b Rat) -> Rat {
                Rat((&self.0).$method(&rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl AddAssign for Rat {
    fn add_assign(&mut self, rhs: Rat) {
        self.0 += rhs.0;
    }
}

impl SubAssign for Rat {
    fn sub_assign(&mut self, rhs: Rat) {
        self.0 -= rhs.0;
    }
}

impl MulAssign for Rat {
    fn mul_assign(&mut self, rhs: Rat) {
        self.0 *= rhs.0;
    }
}

impl DivAssign for Rat {
    fn div_assign(&mut self, rhs: Rat) {
        self.0 /= rhs.0;
    }
}

impl std::iter::Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |acc, x| acc + x)
    }
}

impl std::iter::Product for Rat {
    fn product<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::one(), |acc, x| acc * x)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Error parsing a `p/q` string.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational {input:?}: expected `p` or `p/q` with nonzero q")]
pub struct ParseRatError {
    pub input: String,
}

impl FromStr for Rat {
    type Err = ParseRatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ParseRatError {
            input: s.to_string(),
        };
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n, Some(d)),
            None => (s, None),
        };
        let numer = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let denom = match d {
            Some(d) => BigInt::from_str(d.trim()).map_err(|_| bad())?,
            None => BigInt::one(),
        };
        if denom.is_zero() {
            return Err(bad());
        }
        Ok(Rat(BigRational::new(numer, denom)))
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(|e: ParseRatError| D::Error::custom(e))
    }
}

/// Exact real of the form `base + coeff * sqrt(disc)` with `disc >= 0`
/// rational. Perfect-square discriminants are folded away at construction,
/// so `coeff != 0` implies the value is irrational.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuadRoot {
    base: Rat,
    coeff: Rat,
    disc: Rat,
}

impl QuadRoot {
    pub fn rational(value: Rat) -> Self {
        QuadRoot {
            base: value,
            coeff: Rat::zero(),
            disc: Rat::zero(),
        }
    }

    /// `base + coeff * sqrt(disc)`, normalized.
    pub fn new(base: Rat, coeff: Rat, disc: Rat) -> Self {
        assert!(!disc.is_negative(), "negative discriminant");
        if coeff.is_zero() || disc.is_zero() {
            return Self::rational(base);
        }
        if let Some(s) = disc.sqrt_exact() {
            return Self::rational(base + coeff * s);
        }
        QuadRoot { base, coeff, disc }
    }

    /// The larger real root of `a x^2 + b x + c = 0` (requires `a != 0` and
    /// a nonnegative discriminant).
    pub fn larger_root(a: &Rat, b: &Rat, c: &Rat) -> Option<QuadRoot> {
        if a.is_zero() {
            return None;
        }
        let disc = b.square() - rint(4) * a * c;
        if disc.is_negative() {
            return None;
        }
        // Roots are (-b +- sqrt(disc))/(2a); the larger one carries the
        // radical with coefficient 1/(2|a|) regardless of the sign of a.
        let base = -b / (rint(2) * a);
        let coeff = Rat::one() / (rint(2) * a.abs());
        Some(QuadRoot::new(base, coeff, disc))
    }

    pub fn as_rational(&self) -> Option<&Rat> {
        self.coeff.is_zero().then_some(&self.base)
    }

    /// Exact comparison against a rational.
    pub fn cmp_rat(&self, x: &Rat) -> Ordering {
        if self.coeff.is_zero() {
            return self.base.cmp(x);
        }
        // base + coeff*sqrt(disc) <=> x  reduces to  sqrt(disc) <=> t
        // with t = (x - base)/coeff, flipped when coeff < 0.
        let t = (x - &self.base) / &self.coeff;
        let cmp_sqrt_to_t = if t.is_negative() {
            Ordering::Greater
        } else {
            self.disc.cmp(&t.square())
        };
        if self.coeff.is_positive() {
            cmp_sqrt_to_t
        } else {
            cmp_sqrt_to_t.reverse()
        }
    }

    pub fn base(&self) -> &Rat {
        &self.base
    }

    pub fn coeff(&self) -> &Rat {
        &self.coeff
    }

    pub fn disc(&self) -> &Rat {
        &self.disc
    }
}

impl fmt::Display for QuadRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_rational() {
            Some(r) => write!(f, "{r}"),
            None => {
                if self.base.is_zero() {
                    write!(f, "{}*sqrt({})", self.coeff, self.disc)
                } else {
                    write!(f, "{} + {}*sqrt({})", self.base, self.coeff, self.disc)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn display_lowest_terms() {
        assert_eq!(rat(4, 8).to_string(), "1/2");
        assert_eq!(rat(-3, 6).to_string(), "-1/2");
        assert_eq!(rat(3, -6).to_string(), "-1/2");
        assert_eq!(rat(8, 4).to_string(), "2");
        assert_eq!(rint(0).to_string(), "0");
    }

    #[test]
    fn parse_forms() {
        assert_eq!("5/2".parse::<Rat>().unwrap(), rat(5, 2));
        assert_eq!("-7".parse::<Rat>().unwrap(), rint(-7));
        assert_eq!(" 3 / 14 ".parse::<Rat>().unwrap(), rat(3, 14));
        assert!("1/0".parse::<Rat>().is_err());
        assert!("a/b".parse::<Rat>().is_err());
    }

    #[test]
    fn sqrt_exact_detects_squares() {
        assert_eq!(rat(9, 4).sqrt_exact(), Some(rat(3, 2)));
        assert_eq!(rat(49, 1).sqrt_exact(), Some(rint(7)));
        assert_eq!(rat(41, 1).sqrt_exact(), None);
        assert_eq!(rat(2, 9).sqrt_exact(), None);
        assert_eq!(rint(-4).sqrt_exact(), None);
    }

    #[test]
    fn quad_root_folds_perfect_squares() {
        let r = QuadRoot::new(rat(1, 2), rat(1, 2), rint(49));
        assert_eq!(r.as_rational(), Some(&rint(4)));
    }

    #[test]
    fn quad_root_comparisons() {
        // (sqrt(41) - 3) / 4 ~ 0.8508
        let r = QuadRoot::new(rat(-3, 4), rat(1, 4), rint(41));
        assert_eq!(r.cmp_rat(&rint(1)), Ordering::Less);
        assert_eq!(r.cmp_rat(&rat(4, 5)), Ordering::Greater);
        assert_eq!(r.cmp_rat(&rint(0)), Ordering::Greater);
        // negative radical coefficient: 1 - sqrt(2) < 0
        let s = QuadRoot::new(rint(1), rint(-1), rint(2));
        assert_eq!(s.cmp_rat(&rint(0)), Ordering::Less);
        assert_eq!(s.cmp_rat(&rint(-1)), Ordering::Greater);
    }

    proptest! {
        #[test]
        fn parse_display_round_trip(n in -1000i64..1000, d in 1i64..1000) {
            let r = rat(n, d);
            let back: Rat = r.to_string().parse().unwrap();
            prop_assert_eq!(back, r);
        }

        #[test]
        fn serde_round_trip(n in -1000i64..1000, d in 1i64..1000) {
            let r = rat(n, d);
            let json = serde_json::to_string(&r).unwrap();
            let back: Rat = serde_json::from_str(&json).unwrap();
            prop_assert_eq!(back, r);
        }

        #[test]
        fn quad_root_cmp_matches_float(b in -50i64..50, c in -50i64..50, d in 0i64..200, x in -100i64..100) {
            let root = QuadRoot::new(rint(b), rint(c), rint(d));
            let approx = b as f64 + c as f64 * (d as f64).sqrt();
            let xf = x as f64;
            // only check when the float gap is comfortably larger than float error
            if (approx - xf).abs() > 1e-6 {
                let expect = if approx < xf { Ordering::Less } else { Ordering::Greater };
                prop_assert_eq!(root.cmp_rat(&rint(x)), expect);
            }
        }
    }
}
