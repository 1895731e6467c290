//! Coefficient rings selectable at runtime: the rationals, the integers,
//! prime fields, and modular rings. All arithmetic is exact; elements carry
//! arbitrary-precision values or reduced residues.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Ring {
    Rationals,
    Integers,
    /// Invariant: the parameter is prime (checked at construction).
    PrimeField(u64),
    /// Invariant: modulus >= 2 (checked at construction).
    ModularRing(u64),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum RingElement {
    Rational(BigRational),
    Integer(BigInt),
    /// Residue in `0..modulus`; the modulus lives on the ring.
    Residue(u64),
}

impl Ring {
    pub fn prime_field(p: u64) -> Result<Ring> {
        if is_prime_u64(p) {
            Ok(Ring::PrimeField(p))
        } else {
            Err(Error::InvalidRing(format!("{} is not prime", p)))
        }
    }

    pub fn modular(n: u64) -> Result<Ring> {
        if n >= 2 {
            Ok(Ring::ModularRing(n))
        } else {
            Err(Error::InvalidRing(format!(
                "modulus {} must be at least 2",
                n
            )))
        }
    }

    /// Parses CLI ring tokens: `Q`, `Z`, `Fp:<p>`, `Zn:<n>`.
    pub fn parse(token: &str) -> Result<Ring> {
        match token {
            "Q" => Ok(Ring::Rationals),
            "Z" => Ok(Ring::Integers),
            _ => {
                if let Some(p) = token.strip_prefix("Fp:") {
                    let p: u64 = p.parse().map_err(|_| {
                        Error::InvalidRing(format!("bad prime in token {:?}", token))
                    })?;
                    Ring::prime_field(p)
                } else if let Some(n) = token.strip_prefix("Zn:") {
                    let n: u64 = n.parse().map_err(|_| {
                        Error::InvalidRing(format!("bad modulus in token {:?}", token))
                    })?;
                    Ring::modular(n)
                } else {
                    Err(Error::InvalidRing(format!(
                        "unknown ring token {:?} (expected Q, Z, Fp:<p>, or Zn:<n>)",
                        token
                    )))
                }
            }
        }
    }

    pub fn zero(&self) -> RingElement {
        self.from_i64(0)
    }

    pub fn one(&self) -> RingElement {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> RingElement {
        match self {
            Ring::Rationals => RingElement::Rational(BigRational::from_integer(BigInt::from(v))),
            Ring::Integers => RingElement::Integer(BigInt::from(v)),
            Ring::PrimeField(m) | Ring::ModularRing(m) => RingElement::Residue(
                BigInt::from(v)
                    .mod_floor(&BigInt::from(*m))
                    .to_u64()
                    .unwrap(),
            ),
        }
    }

    /// Embeds an exact rational into the ring; fails if the denominator is
    /// not invertible (for `Z`: if the value is not an integer).
    pub fn from_rational(&self, v: &BigRational) -> Result<RingElement> {
        match self {
            Ring::Rationals => Ok(RingElement::Rational(v.clone())),
            Ring::Integers => {
                if v.is_integer() {
                    Ok(RingElement::Integer(v.to_integer()))
                } else {
                    Err(Error::Specialization {
                        denom: v.denom().to_string(),
                        ring: self.to_string(),
                    })
                }
            }
            Ring::PrimeField(m) | Ring::ModularRing(m) => {
                let m_big = BigInt::from(*m);
                let num = v.numer().mod_floor(&m_big).to_u64().unwrap();
                let den = v.denom().mod_floor(&m_big).to_u64().unwrap();
                let den_inv = inverse_mod(den, *m).ok_or_else(|| Error::Specialization {
                    denom: v.denom().to_string(),
                    ring: self.to_string(),
                })?;
                Ok(RingElement::Residue(mul_mod(num, den_inv, *m)))
            }
        }
    }

    fn check(&self, x: &RingElement) -> u64 {
        // Returns the modulus for residue rings; panics on a kind mismatch,
        // which is a programming error rather than a user-facing condition.
        match (self, x) {
            (Ring::Rationals, RingElement::Rational(_)) => 0,
            (Ring::Integers, RingElement::Integer(_)) => 0,
            (Ring::PrimeField(m) | Ring::ModularRing(m), RingElement::Residue(r)) => {
                assert!(r < m, "residue {} out of range for modulus {}", r, m);
                *m
            }
            _ => panic!("ring element {:?} does not belong to {}", x, self),
        }
    }

    pub fn add(&self, a: &RingElement, b: &RingElement) -> RingElement {
        let m = self.check(a);
        self.check(b);
        match (a, b) {
            (RingElement::Rational(x), RingElement::Rational(y)) => RingElement::Rational(x + y),
            (RingElement::Integer(x), RingElement::Integer(y)) => RingElement::Integer(x + y),
            (RingElement::Residue(x), RingElement::Residue(y)) => {
                RingElement::Residue(((*x as u128 + *y as u128) % m as u128) as u64)
            }
            _ => unreachable!(),
        }
    }

    pub fn neg(&self, a: &RingElement) -> RingElement {
        let m = self.check(a);
        match a {
            RingElement::Rational(x) => RingElement::Rational(-x),
            RingElement::Integer(x) => RingElement::Integer(-x),
            RingElement::Residue(x) => RingElement::Residue(if *x == 0 { 0 } else { m - x }),
        }
    }

    pub fn sub(&self, a: &RingElement, b: &RingElement) -> RingElement {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &RingElement, b: &RingElement) -> RingElement {
        let m = self.check(a);
        self.check(b);
        match (a, b) {
            (RingElement::Rational(x), RingElement::Rational(y)) => RingElement::Rational(x * y),
            (RingElement::Integer(x), RingElement::Integer(y)) => RingElement::Integer(x * y),
            (RingElement::Residue(x), RingElement::Residue(y)) => {
                RingElement::Residue(mul_mod(*x, *y, m))
            }
            _ => unreachable!(),
        }
    }

    pub fn is_zero(&self, a: &RingElement) -> bool {
        self.check(a);
        match a {
            RingElement::Rational(x) => x.is_zero(),
            RingElement::Integer(x) => x.is_zero(),
            RingElement::Residue(x) => *x == 0,
        }
    }

    pub fn is_unit(&self, a: &RingElement) -> bool {
        let m = self.check(a);
        match (self, a) {
            (Ring::Rationals, RingElement::Rational(x)) => !x.is_zero(),
            (Ring::Integers, RingElement::Integer(x)) => x.abs().is_one(),
            (_, RingElement::Residue(x)) => x.gcd(&m) == 1,
            _ => unreachable!(),
        }
    }

    pub fn inverse(&self, a: &RingElement) -> Result<RingElement> {
        let m = self.check(a);
        let fail = || Error::NotAUnit {
            value: format!("{}", a),
            ring: self.to_string(),
        };
        match a {
            RingElement::Rational(x) => {
                if x.is_zero() {
                    Err(fail())
                } else {
                    Ok(RingElement::Rational(x.recip()))
                }
            }
            RingElement::Integer(x) => {
                if x.abs().is_one() {
                    Ok(RingElement::Integer(x.clone()))
                } else {
                    Err(fail())
                }
            }
            RingElement::Residue(x) => inverse_mod(*x, m)
                .map(RingElement::Residue)
                .ok_or_else(fail),
        }
    }

    /// The group of square roots of 1, in a canonical order.
    pub fn mu2_elements(&self) -> Vec<RingElement> {
        match self {
            Ring::Rationals | Ring::Integers => vec![self.one(), self.from_i64(-1)],
            Ring::PrimeField(2) => vec![self.one()],
            Ring::PrimeField(p) => vec![RingElement::Residue(1), RingElement::Residue(p - 1)],
            Ring::ModularRing(n) => (0..*n)
                .filter(|&x| mul_mod(x, x, *n) == 1)
                .map(RingElement::Residue)
                .collect(),
        }
    }

    pub fn is_mu2(&self, a: &RingElement) -> bool {
        self.mul(a, a) == self.one()
    }

    /// Maps +1/-1 in this ring back to a plain sign where that is possible.
    pub fn as_sign(&self, a: &RingElement) -> Result<i8> {
        if *a == self.one() {
            Ok(1)
        } else if *a == self.from_i64(-1) {
            Ok(-1)
        } else {
            Err(Error::Unsupported(format!(
                "{} is not +1 or -1 in {}",
                a, self
            )))
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Rationals => write!(f, "Q"),
            Ring::Integers => write!(f, "Z"),
            Ring::PrimeField(p) => write!(f, "Fp:{}", p),
            Ring::ModularRing(n) => write!(f, "Zn:{}", n),
        }
    }
}

impl serde::Serialize for Ring {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingElement::Rational(x) => write!(f, "{}", x),
            RingElement::Integer(x) => write!(f, "{}", x),
            RingElement::Residue(x) => write!(f, "{}", x),
        }
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

fn inverse_mod(a: u64, m: u64) -> Option<u64> {
    // Extended Euclid over i128 to dodge sign handling.
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(m as i128) as u64)
}

/// Deterministic Miller-Rabin; the fixed witness set decides primality for
/// every 64-bit integer.
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
