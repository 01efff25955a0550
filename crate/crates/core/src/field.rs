//! Exact scalar fields: the rationals and small prime fields.

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// An exact field. Every rank and solvability decision in the crate is made
/// over one of these, so no tolerance ever appears.
pub trait Scalar:
    Clone
    + PartialEq
    + Eq
    + Hash
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// 0 for the rationals, p for F_p.
    const CHARACTERISTIC: u64;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn inv(&self) -> Self;
    /// Parse the canonical text form (`p/q` or an integer).
    fn parse(s: &str) -> Option<Self>;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }
}

/// Rational numbers with arbitrary precision.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Rational(pub BigRational);

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

macro_rules! rational_op {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr for Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                Rational(self.0 $op rhs.0)
            }
        }
    };
}
rational_op!(Add, add, +);
rational_op!(Sub, sub, -);
rational_op!(Mul, mul, *);
rational_op!(Div, div, /);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Scalar for Rational {
    const CHARACTERISTIC: u64 = 0;

    fn zero() -> Self {
        Rational(BigRational::zero())
    }
    fn one() -> Self {
        Rational(BigRational::one())
    }
    fn from_i64(v: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(v)))
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn inv(&self) -> Self {
        assert!(!self.is_zero(), "division by zero");
        Rational(self.0.recip())
    }
    fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let n = BigInt::from_str(n).ok()?;
                let d = BigInt::from_str(d).ok()?;
                if d.is_zero() || d.is_negative() {
                    return None;
                }
                let r = BigRational::new(n, d);
                // canonical form only
                let canon = Rational(r);
                (canon.to_string() == s).then_some(canon)
            }
            None => BigInt::from_str(s)
                .ok()
                .map(|n| Rational(BigRational::from_integer(n))),
        }
    }
}

/// The prime field F_P. `P` must be prime; this is checked by `Fp::<P>::assert_prime`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Fp<const P: u64>(u64);

impl<const P: u64> Fp<P> {
    pub fn new(v: i64) -> Self {
        Fp(v.rem_euclid(P as i64) as u64)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    pub fn assert_prime() {
        assert!(is_prime(P), "{P} is not prime");
    }

    fn pow(self, mut e: u64) -> Self {
        let mut base = self.0 as u128;
        let mut acc: u128 = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % P as u128;
            }
            base = base * base % P as u128;
            e >>= 1;
        }
        Fp(acc as u64)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl<const P: u64> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Add for Fp<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Fp((self.0 + rhs.0) % P)
    }
}
impl<const P: u64> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Fp((self.0 + P - rhs.0) % P)
    }
}
impl<const P: u64> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Fp(((self.0 as u128 * rhs.0 as u128) % P as u128) as u64)
    }
}
impl<const P: u64> Div for Fp<P> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        self * rhs.inv()
    }
}
impl<const P: u64> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Fp((P - self.0) % P)
    }
}

impl<const P: u64> Scalar for Fp<P> {
    const CHARACTERISTIC: u64 = P;

    fn zero() -> Self {
        Fp(0)
    }
    fn one() -> Self {
        Fp(1 % P)
    }
    fn from_i64(v: i64) -> Self {
        Fp::new(v)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn inv(&self) -> Self {
        assert!(self.0 != 0, "division by zero in F_{P}");
        self.pow(P - 2)
    }
    fn parse(s: &str) -> Option<Self> {
        let v: u64 = s.trim().parse().ok()?;
        (v < P).then_some(Fp(v))
    }
}

/// F_101, the default second characteristic for cross-checks.
pub type F101 = Fp<101>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_text_roundtrip() {
        for (n, d) in [(1, 2), (-3, 4), (5, 1), (0, 7)] {
            let r = Rational::new(n, d);
            assert_eq!(Rational::parse(&r.to_string()), Some(r));
        }
        assert_eq!(Rational::parse("2/4"), None);
        assert_eq!(Rational::parse("1/0"), None);
    }

    #[test]
    fn fp_inverse() {
        for v in 1..101 {
            let x = F101::new(v);
            assert!((x * x.inv()).is_one());
        }
        assert_eq!(F101::new(-1).value(), 100);
    }

    #[test]
    fn primality() {
        assert!(is_prime(101));
        assert!(!is_prime(100));
        assert!(!is_prime(1));
    }
}
