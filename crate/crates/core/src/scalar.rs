//! Exact scalars over the rationals or a prime field.
//!
//! Every scalar is stored as a [`BigRational`]. Over `F_p` the stored value is
//! always a reduced residue `0 <= r < p` with denominator one, so equality is
//! structural in both cases.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Formats a rational as `"n"` or `"n/d"` in lowest terms.
pub fn format_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// The base field: characteristic zero (rationals) or a prime field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldSpec {
    Rational,
    Prime(u64),
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(FieldSpec::Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rational => 0,
            FieldSpec::Prime(p) => *p,
        }
    }

    pub fn require_char0(&self) -> Result<()> {
        match self {
            FieldSpec::Rational => Ok(()),
            FieldSpec::Prime(_) => Err(Error::PositiveCharacteristic(self.to_string())),
        }
    }

    pub fn check_same(&self, other: &FieldSpec) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::FieldMismatch(self.to_string(), other.to_string()))
        }
    }

    /// Maps a rational into the field. Fails over `F_p` when `p` divides the
    /// denominator.
    pub fn reduce(&self, x: &Q) -> Result<Q> {
        match self {
            FieldSpec::Rational => Ok(x.clone()),
            FieldSpec::Prime(p) => {
                let p = BigInt::from(*p);
                let num = x.numer().mod_floor(&p);
                let den = x.denom().mod_floor(&p);
                if den.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                let inv = mod_inverse(&den, &p).ok_or(Error::DivisionByZero)?;
                Ok(Q::from_integer((num * inv).mod_floor(&p)))
            }
        }
    }

    pub fn from_int(&self, n: i64) -> Q {
        self.reduce(&q(n)).expect("integers always reduce")
    }

    pub fn zero(&self) -> Q {
        Q::zero()
    }

    pub fn one(&self) -> Q {
        Q::one()
    }

    pub fn add(&self, a: &Q, b: &Q) -> Q {
        match self {
            FieldSpec::Rational => a + b,
            FieldSpec::Prime(p) => self.wrap(a.numer() + b.numer(), *p),
        }
    }

    pub fn sub(&self, a: &Q, b: &Q) -> Q {
        match self {
            FieldSpec::Rational => a - b,
            FieldSpec::Prime(p) => self.wrap(a.numer() - b.numer(), *p),
        }
    }

    pub fn neg(&self, a: &Q) -> Q {
        match self {
            FieldSpec::Rational => -a,
            FieldSpec::Prime(p) => self.wrap(-a.numer(), *p),
        }
    }

    pub fn mul(&self, a: &Q, b: &Q) -> Q {
        match self {
            FieldSpec::Rational => a * b,
            FieldSpec::Prime(p) => self.wrap(a.numer() * b.numer(), *p),
        }
    }

    pub fn inv(&self, a: &Q) -> Result<Q> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match self {
            FieldSpec::Rational => Ok(a.recip()),
            FieldSpec::Prime(p) => {
                let p = BigInt::from(*p);
                let inv = mod_inverse(a.numer(), &p).ok_or(Error::DivisionByZero)?;
                Ok(Q::from_integer(inv))
            }
        }
    }

    pub fn div(&self, a: &Q, b: &Q) -> Result<Q> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    fn wrap(&self, n: BigInt, p: u64) -> Q {
        Q::from_integer(n.mod_floor(&BigInt::from(p)))
    }
}

fn mod_inverse(a: &BigInt, p: &BigInt) -> Option<BigInt> {
    let g = a.extended_gcd(p);
    if g.gcd.abs().is_one() {
        Some((g.x * g.gcd.signum()).mod_floor(p))
    } else {
        None
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

impl std::str::FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "Q" || s == "0" {
            return Ok(FieldSpec::Rational);
        }
        let digits = s.strip_prefix("F_").or_else(|| s.strip_prefix('F')).unwrap_or(s);
        let p: u64 = digits
            .parse()
            .map_err(|_| Error::Parse(format!("bad field {s:?}")))?;
        FieldSpec::prime(p)
    }
}

impl Serialize for FieldSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Nonnegative integer power of a rational.
pub fn qpow(x: &Q, e: u32) -> Q {
    num_traits::pow(x.clone(), e as usize)
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Exact rational m-th root, if one exists.
pub fn rational_root(x: &Q, m: u32) -> Option<Q> {
    if x.is_zero() {
        return Some(Q::zero());
    }
    if m % 2 == 0 && x.is_negative() {
        return None;
    }
    let root = |n: &BigInt| -> Option<BigInt> {
        let r = n.abs().nth_root(m);
        (num_traits::pow(r.clone(), m as usize) == n.abs()).then_some(r)
    };
    let n = root(x.numer())?;
    let d = root(x.denom())?;
    let r = Q::new(n, d);
    Some(if x.is_negative() { -r } else { r })
}

pub fn to_i64(x: &Q) -> Option<i64> {
    if x.denom().is_one() {
        x.numer().to_i64()
    } else {
        None
    }
}
