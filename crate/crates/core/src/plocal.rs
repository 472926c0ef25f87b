//! p-local and characteristic-zero reduction: multinomial valuations,
//! covers whose multiplicities are powers of `p` (or all ones), and the
//! split idempotents they induce in the graph category.
//!
//! Writing a multiplicity `m` in base `p` and replacing the point by one
//! point of multiplicity `p^i` per digit makes the collapse degree a product
//! of multinomial coefficients prime to `p`; inverting that degree splits
//! the original multiset off the cover.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;

use crate::arith;
use crate::error::{Error, Result};
use crate::exactlin;
use crate::multijection::Multijection;
use crate::multiset::{Label, Multiset};
use crate::ring::{Coeff, Ring};
use crate::schurcat::{hom_basis, SchMorphism};

/// The exponent of a prime in a multinomial coefficient, computed by
/// Legendre's formula; equivalently the number of base-p carries when the
/// parts are added.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Valuation {
    pub prime: u64,
    pub value: u64,
}

pub fn multinomial_valuation(p: u64, parts: &[u64]) -> Result<Valuation> {
    if !arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let total: u64 = parts.iter().sum();
    let mut value = arith::factorial_valuation(p, total);
    for &part in parts {
        value -= arith::factorial_valuation(p, part);
    }
    Ok(Valuation { prime: p, value })
}

impl Valuation {
    /// Kummer's count of carries when adding the parts in base `p`.
    pub fn carries(p: u64, parts: &[u64]) -> u64 {
        let mut carries = 0u64;
        let mut carry = 0u64;
        let mut digitsums: Vec<u64> = Vec::new();
        let mut remaining: Vec<u64> = parts.to_vec();
        while remaining.iter().any(|&r| r > 0) || carry > 0 {
            let s: u64 = remaining.iter().map(|r| r % p).sum::<u64>() + carry;
            digitsums.push(s % p);
            carry = s / p;
            carries += carry;
            for r in remaining.iter_mut() {
                *r /= p;
            }
        }
        carries
    }
}

/// A reduction: a cover with constrained multiplicities, the collapse back
/// onto the original, and the collapse degree.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub original: Multiset,
    pub reduced: Multiset,
    /// the collapse `reduced → original`
    pub cover: Multijection,
    pub degree: BigUint,
}

/// Replace every multiplicity by its base-p digits: a point of multiplicity
/// `m = Σ aᵢ pⁱ` becomes `aᵢ` points of multiplicity `pⁱ` per digit.  The
/// collapse degree is then prime to `p`.  Multisets already of p-power
/// multiplicities reduce to themselves with the identity.
pub fn p_reduce(alpha: &Multiset, p: u64) -> Result<Reduction> {
    if !arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let already = alpha
        .entries()
        .iter()
        .all(|&(_, m)| is_p_power(m, p));
    if already {
        return Ok(Reduction {
            original: alpha.clone(),
            reduced: alpha.clone(),
            cover: Multijection::identity(alpha),
            degree: BigUint::one(),
        });
    }
    let mut entries = Vec::new();
    let mut map = Vec::new();
    let mut next: u32 = 1;
    for &(l, m) in alpha.entries() {
        let mut power = 1u64;
        let mut rest = m;
        while rest > 0 {
            let digit = rest % p;
            for _ in 0..digit {
                entries.push((Label(next), power));
                map.push((Label(next), l));
                next += 1;
            }
            rest /= p;
            power *= p;
        }
    }
    let reduced = Multiset::from_entries(entries);
    let cover = Multijection::new(reduced.clone(), alpha.clone(), map)?;
    let degree = cover.degree();
    Ok(Reduction {
        original: alpha.clone(),
        reduced,
        cover,
        degree,
    })
}

fn is_p_power(mut m: u64, p: u64) -> bool {
    while m % p == 0 {
        m /= p;
    }
    m == 1
}

/// The characteristic-zero reduction: the cover is the plain set `[1^n]` and
/// the collapse degree is `n!/α!`.
pub fn char0_reduce(alpha: &Multiset) -> Reduction {
    if alpha.entries().iter().all(|&(_, m)| m == 1) {
        return Reduction {
            original: alpha.clone(),
            reduced: alpha.clone(),
            cover: Multijection::identity(alpha),
            degree: BigUint::one(),
        };
    }
    let mut entries = Vec::new();
    let mut map = Vec::new();
    let mut next: u32 = 1;
    for &(l, m) in alpha.entries() {
        for _ in 0..m {
            entries.push((Label(next), 1));
            map.push((Label(next), l));
            next += 1;
        }
    }
    let reduced = Multiset::from_entries(entries);
    let cover = Multijection::new(reduced.clone(), alpha.clone(), map)
        .expect("the collapse of a set cover is a multijection");
    let degree = cover.degree();
    Reduction {
        original: alpha.clone(),
        reduced,
        cover,
        degree,
    }
}

/// The idempotent `e = d⁻¹ · f^* ∘ f_*` in the endomorphisms of the cover,
/// where `f` is the collapse and `d` its degree.  Requires `d` invertible in
/// the ring.  `f_* ∘ f^* = d · id` certifies the original as a direct factor.
pub fn split_idempotent(reduction: &Reduction, ring: Ring) -> Result<SchMorphism> {
    let d = ring.from_biguint(&reduction.degree);
    let d_inv = ring.inv(&d)?;
    let up = SchMorphism::upperstar(ring, &reduction.cover);
    let low = SchMorphism::lowerstar(ring, &reduction.cover);
    let e = SchMorphism::compose(&up, &low)?;
    Ok(e.scale(&d_inv))
}

/// Rank of `e · End(cover) · e` over the rationals; for the characteristic-
/// zero reduction this recovers the endomorphisms of the original multiset
/// inside the group algebra of permutation graphs.
pub fn compressed_endomorphism_rank(reduction: &Reduction) -> Result<usize> {
    let e = split_idempotent(reduction, Ring::Rat)?;
    let end_basis = hom_basis(&reduction.reduced, &reduction.reduced);
    let index: std::collections::HashMap<_, usize> = end_basis
        .iter()
        .enumerate()
        .map(|(i, g)| (g.clone(), i))
        .collect();
    let mut vectors = Vec::new();
    for x in &end_basis {
        let x = SchMorphism::from_graph(Ring::Rat, x.clone());
        let exe = SchMorphism::compose(&e, &SchMorphism::compose(&x, &e)?)?;
        let mut v = vec![BigRational::from_integer(BigInt::ZERO); end_basis.len()];
        for (g, c) in exe.terms() {
            let Coeff::Rat(q) = c else { unreachable!() };
            v[index[g]] = q.clone();
        }
        vectors.push(v);
    }
    Ok(exactlin::rational_rank(&vectors))
}
