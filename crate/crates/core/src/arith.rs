//! Small exact-arithmetic helpers: factorials, multinomials, primality,
//! p-adic valuations.

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// `n!` as an arbitrary-precision integer.
pub fn factorial(n: u64) -> BigUint {
    let mut acc = BigUint::one();
    for k in 2..=n {
        acc *= k;
    }
    acc
}

/// Multinomial coefficient `(sum parts)! / prod parts!`.
pub fn multinomial(parts: &[u64]) -> BigUint {
    let mut acc = BigUint::one();
    let mut seen: u64 = 0;
    for &p in parts {
        seen += p;
        acc *= binomial(seen, p);
    }
    acc
}

/// Per-tensor structure constants stay far below `u128`; this variant avoids
/// bignum churn in the composition hot loop.
pub fn multinomial_u128(parts: &[u64]) -> Option<u128> {
    let mut acc: u128 = 1;
    let mut seen: u64 = 0;
    for &p in parts {
        seen += p;
        acc = acc.checked_mul(binomial_u128(seen, p)?)?;
    }
    Some(acc)
}

/// Binomial coefficient `C(n, k)`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

fn binomial_u128(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

/// Trial-division primality, adequate for the moduli used here.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Legendre's formula: the exponent of `p` in `n!`.
pub fn factorial_valuation(p: u64, n: u64) -> u64 {
    let mut acc = 0;
    let mut q = n / p;
    while q > 0 {
        acc += q;
        q /= p;
    }
    acc
}

/// Exponent of `p` in an arbitrary-precision integer (must be nonzero).
pub fn valuation(p: u64, n: &BigUint) -> u64 {
    assert!(!n.is_zero(), "valuation of zero");
    let p = BigUint::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = num_integer::Integer::div_rem(&n, &p);
        if !r.is_zero() {
            return v;
        }
        v += 1;
        n = q;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), BigUint::from(1u32));
        assert_eq!(factorial(5), BigUint::from(120u32));
    }

    #[test]
    fn multinomials() {
        assert_eq!(multinomial(&[1, 1]), BigUint::from(2u32));
        assert_eq!(multinomial(&[2, 1]), BigUint::from(3u32));
        assert_eq!(multinomial(&[3, 3]), BigUint::from(20u32));
        assert_eq!(multinomial(&[1, 4]), BigUint::from(5u32));
        assert_eq!(multinomial(&[]), BigUint::from(1u32));
        assert_eq!(
            multinomial_u128(&[2, 3, 4]).map(BigUint::from),
            Some(multinomial(&[2, 3, 4]))
        );
    }

    #[test]
    fn primes() {
        let primes: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn valuations() {
        // v_2(10!) = 8
        assert_eq!(factorial_valuation(2, 10), 8);
        assert_eq!(valuation(2, &factorial(10)), 8);
        assert_eq!(valuation(3, &BigUint::from(20u32)), 0);
    }
}
