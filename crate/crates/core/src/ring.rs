//! The four coefficient rings and their exact elements.
//!
//! Everything is exact: integers and rationals are arbitrary precision,
//! `Z/m` elements are reduced residues, and p-local elements are rationals
//! whose denominator is checked to be prime to `p` after every operation.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith;
use crate::error::{Error, Result};

/// Ring tag: integers, rationals, integers mod m, or p-local rationals.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Ring {
    Int,
    Rat,
    Mod(u64),
    Local(u64),
}

impl Ring {
    pub fn local(p: u64) -> Result<Ring> {
        if arith::is_prime(p) {
            Ok(Ring::Local(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn modular(m: u64) -> Result<Ring> {
        if m < 2 {
            return Err(Error::InvariantViolation(format!("modulus {m} < 2")));
        }
        Ok(Ring::Mod(m))
    }

    pub fn zero(&self) -> Coeff {
        self.from_int(BigInt::zero())
    }

    pub fn one(&self) -> Coeff {
        self.from_int(BigInt::one())
    }

    pub fn from_int(&self, n: impl Into<BigInt>) -> Coeff {
        let n = n.into();
        match *self {
            Ring::Int => Coeff::Int(n),
            Ring::Rat => Coeff::Rat(BigRational::from_integer(n)),
            Ring::Mod(m) => Coeff::Mod(reduce_mod(&n, m), m),
            Ring::Local(p) => Coeff::Local(BigRational::from_integer(n), p),
        }
    }

    pub fn from_biguint(&self, n: &BigUint) -> Coeff {
        self.from_int(BigInt::from(n.clone()))
    }

    /// Multiplicative inverse, if the element is a unit.
    pub fn inv(&self, a: &Coeff) -> Result<Coeff> {
        let fail = || Error::NotInvertible { ring: self.to_string(), elem: a.to_string() };
        match a {
            Coeff::Int(n) => {
                if n.abs().is_one() {
                    Ok(Coeff::Int(n.clone()))
                } else {
                    Err(fail())
                }
            }
            Coeff::Rat(q) => {
                if q.is_zero() {
                    Err(fail())
                } else {
                    Ok(Coeff::Rat(q.recip()))
                }
            }
            Coeff::Mod(v, m) => {
                let e = BigInt::from(*v).extended_gcd(&BigInt::from(*m));
                if e.gcd.is_one() {
                    Ok(Coeff::Mod(reduce_mod(&e.x, *m), *m))
                } else {
                    Err(fail())
                }
            }
            Coeff::Local(q, p) => {
                if q.is_zero() {
                    return Err(fail());
                }
                let r = q.recip();
                if divides(*p, r.denom()) {
                    Err(fail())
                } else {
                    Ok(Coeff::Local(r, *p))
                }
            }
        }
    }

    /// Parse an element in the same format `Display` emits.
    pub fn parse(&self, s: &str) -> Result<Coeff> {
        let s = s.trim();
        let fail = |msg: &str| Error::Parse { pos: 0, msg: format!("{msg}: {s:?}") };
        match *self {
            Ring::Int => {
                let n = BigInt::from_str(s).map_err(|_| fail("bad integer"))?;
                Ok(Coeff::Int(n))
            }
            Ring::Rat => parse_rational(s).map(Coeff::Rat).ok_or_else(|| fail("bad rational")),
            Ring::Mod(m) => {
                let body = match s.split_once(" mod ") {
                    Some((v, md)) => {
                        let md: u64 = md.trim().parse().map_err(|_| fail("bad modulus"))?;
                        if md != m {
                            return Err(fail("modulus mismatch"));
                        }
                        v
                    }
                    None => s,
                };
                let n = BigInt::from_str(body.trim()).map_err(|_| fail("bad residue"))?;
                Ok(Coeff::Mod(reduce_mod(&n, m), m))
            }
            Ring::Local(p) => {
                let q = parse_rational(s).ok_or_else(|| fail("bad rational"))?;
                if divides(p, q.denom()) {
                    Err(fail("denominator not prime to p"))
                } else {
                    Ok(Coeff::Local(q, p))
                }
            }
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Int => write!(f, "Z"),
            Ring::Rat => write!(f, "Q"),
            Ring::Mod(m) => write!(f, "Zmod:{m}"),
            Ring::Local(p) => write!(f, "Zlocal:{p}"),
        }
    }
}

impl FromStr for Ring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Ring> {
        match s {
            "Z" => Ok(Ring::Int),
            "Q" => Ok(Ring::Rat),
            _ => {
                let fail = || Error::Parse { pos: 0, msg: format!("unknown ring {s:?}") };
                if let Some(m) = s.strip_prefix("Zmod:") {
                    Ring::modular(m.parse().map_err(|_| fail())?)
                } else if let Some(p) = s.strip_prefix("Zlocal:") {
                    Ring::local(p.parse().map_err(|_| fail())?)
                } else {
                    Err(fail())
                }
            }
        }
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).ok()?;
            let d = BigInt::from_str(d.trim()).ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => Some(BigRational::from_integer(BigInt::from_str(s.trim()).ok()?)),
    }
}

fn reduce_mod(n: &BigInt, m: u64) -> u64 {
    let m_big = BigInt::from(m);
    let r = n.mod_floor(&m_big);
    let (_, digits) = r.to_u64_digits();
    digits.first().copied().unwrap_or(0)
}

fn divides(p: u64, n: &BigInt) -> bool {
    (n % BigInt::from(p)).is_zero()
}

/// An exact element of one of the four rings.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Coeff {
    Int(BigInt),
    Rat(BigRational),
    Mod(u64, u64),
    Local(BigRational, u64),
}

impl Coeff {
    pub fn ring(&self) -> Ring {
        match self {
            Coeff::Int(_) => Ring::Int,
            Coeff::Rat(_) => Ring::Rat,
            Coeff::Mod(_, m) => Ring::Mod(*m),
            Coeff::Local(_, p) => Ring::Local(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coeff::Int(n) => n.is_zero(),
            Coeff::Rat(q) => q.is_zero(),
            Coeff::Mod(v, _) => *v == 0,
            Coeff::Local(q, _) => q.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Coeff::Int(n) => n.is_one(),
            Coeff::Rat(q) => q.is_one(),
            Coeff::Mod(v, _) => *v == 1,
            Coeff::Local(q, _) => q.is_one(),
        }
    }

    fn check_ring(&self, other: &Coeff) {
        assert_eq!(self.ring(), other.ring(), "coefficient ring mismatch");
    }

    pub fn add(&self, other: &Coeff) -> Coeff {
        self.check_ring(other);
        match (self, other) {
            (Coeff::Int(a), Coeff::Int(b)) => Coeff::Int(a + b),
            (Coeff::Rat(a), Coeff::Rat(b)) => Coeff::Rat(a + b),
            (Coeff::Mod(a, m), Coeff::Mod(b, _)) => {
                Coeff::Mod(((*a as u128 + *b as u128) % *m as u128) as u64, *m)
            }
            (Coeff::Local(a, p), Coeff::Local(b, _)) => local(a + b, *p),
            _ => unreachable!(),
        }
    }

    pub fn mul(&self, other: &Coeff) -> Coeff {
        self.check_ring(other);
        match (self, other) {
            (Coeff::Int(a), Coeff::Int(b)) => Coeff::Int(a * b),
            (Coeff::Rat(a), Coeff::Rat(b)) => Coeff::Rat(a * b),
            (Coeff::Mod(a, m), Coeff::Mod(b, _)) => {
                Coeff::Mod(((*a as u128 * *b as u128) % *m as u128) as u64, *m)
            }
            (Coeff::Local(a, p), Coeff::Local(b, _)) => local(a * b, *p),
            _ => unreachable!(),
        }
    }

    pub fn neg(&self) -> Coeff {
        match self {
            Coeff::Int(a) => Coeff::Int(-a),
            Coeff::Rat(a) => Coeff::Rat(-a),
            Coeff::Mod(a, m) => Coeff::Mod(if *a == 0 { 0 } else { m - a }, *m),
            Coeff::Local(a, p) => Coeff::Local(-a, *p),
        }
    }

    pub fn sub(&self, other: &Coeff) -> Coeff {
        self.add(&other.neg())
    }

    /// The underlying integer, when the element is integral.
    pub fn as_bigint(&self) -> Option<BigInt> {
        match self {
            Coeff::Int(n) => Some(n.clone()),
            Coeff::Rat(q) | Coeff::Local(q, _) => {
                q.is_integer().then(|| q.to_integer())
            }
            Coeff::Mod(v, _) => Some(BigInt::from(*v)),
        }
    }
}

fn local(q: BigRational, p: u64) -> Coeff {
    // the p-local invariant: reduced denominators stay prime to p
    debug_assert!(
        !divides(p, q.denom()),
        "p-local arithmetic produced a denominator divisible by {p}"
    );
    Coeff::Local(q, p)
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Int(n) => write!(f, "{n}"),
            Coeff::Rat(q) | Coeff::Local(q, _) => write!(f, "{q}"),
            Coeff::Mod(v, m) => write!(f, "{v} mod {m}"),
        }
    }
}
