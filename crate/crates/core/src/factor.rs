//! Smallest nontrivial divisor of a positive integer, by trial division up to
//! a bound followed by a Miller-Rabin test on what is left.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive};

/// Trial division limit.
pub const TRIAL_LIMIT: u32 = 1 << 20;

/// Outcome of [`smallest_divisor`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SmallestDivisor {
    /// `n = 1`.
    None,
    /// Proven smallest divisor `>= 2` (a prime).
    Exact(BigInt),
    /// `n` has no prime factor below the trial limit and is composite; the
    /// smallest divisor is unknown and `n` itself is returned.
    Unknown(BigInt),
}

fn rem_u32(digits_be: &[u32], p: u32) -> u32 {
    let p = u64::from(p);
    let r = digits_be
        .iter()
        .fold(0u64, |r, &d| ((r << 32) | u64::from(d)) % p);
    r as u32
}

/// Miller-Rabin with the first twelve prime bases: deterministic below
/// 3.3e24, a strong probable-prime test above.
pub fn is_probable_prime(n: &BigUint) -> bool {
    const BASES: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    let one = BigUint::one();
    if *n < BigUint::from(2u32) {
        return false;
    }
    for &p in &BASES {
        if (n % p).to_u32() == Some(0) {
            return *n == BigUint::from(p);
        }
    }
    let n1 = n - &one;
    let s = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s;
    'bases: for &b in &BASES {
        let mut x = BigUint::from(b).modpow(&d, n);
        if x == one || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&BigUint::from(2u32), n);
            if x == n1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Smallest divisor `>= 2` of `n > 0`.
pub fn smallest_divisor(n: &BigInt) -> SmallestDivisor {
    assert!(n.is_positive(), "smallest_divisor needs n > 0");
    let mag = n.magnitude();
    if mag.is_one() {
        return SmallestDivisor::None;
    }
    let mut digits = mag.to_u32_digits();
    digits.reverse();
    let mut p = 2u32;
    while p < TRIAL_LIMIT {
        if BigUint::from(p) * p > *mag {
            return SmallestDivisor::Exact(n.clone());
        }
        if rem_u32(&digits, p) == 0 {
            return SmallestDivisor::Exact(BigInt::from(p));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if is_probable_prime(mag) {
        SmallestDivisor::Exact(n.clone())
    } else {
        SmallestDivisor::Unknown(n.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(n: u64) -> u64 {
        (2..=n).find(|&d| n.is_multiple_of(d)).unwrap()
    }

    #[test]
    fn matches_naive_search() {
        for n in 2..5000u64 {
            assert_eq!(
                smallest_divisor(&BigInt::from(n)),
                SmallestDivisor::Exact(BigInt::from(naive(n))),
                "{n}"
            );
        }
        assert_eq!(smallest_divisor(&BigInt::from(1)), SmallestDivisor::None);
    }

    #[test]
    fn large_inputs() {
        // 2^61 - 1 is prime.
        let m61 = (BigInt::one() << 61u32) - 1;
        assert_eq!(smallest_divisor(&m61), SmallestDivisor::Exact(m61.clone()));
        let p = BigInt::from(1_000_003u64);
        assert_eq!(smallest_divisor(&(&p * &m61)), SmallestDivisor::Exact(p));
        let big_prime = BigInt::from(2_147_483_647u64);
        let sq = &big_prime * &big_prime;
        assert_eq!(smallest_divisor(&sq), SmallestDivisor::Unknown(sq.clone()));
        assert!(!is_probable_prime(&BigUint::from(3_215_031_751u64)));
    }
}
