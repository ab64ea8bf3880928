//! Exact integer square roots and perfect-square testing.

use num_bigint::{BigInt, Sign};
use num_traits::{One, ToPrimitive, Zero};

// Squares modulo 64, 63 and 65 as bitmasks: cheap rejection before a root
// extraction.
const fn square_mask(m: u64) -> u128 {
    let mut mask = 0u128;
    let mut r = 0;
    while r < m {
        mask |= 1u128 << ((r * r) % m);
        r += 1;
    }
    mask
}

const SQ64: u128 = square_mask(64);
const SQ63: u128 = square_mask(63);
const SQ65: u128 = square_mask(65);

fn passes_residue_filter(n: &BigInt) -> bool {
    let r = |m: u32| (n % m).to_u64().unwrap_or(0);
    SQ64 >> r(64) & 1 == 1 && SQ63 >> r(63) & 1 == 1 && SQ65 >> r(65) & 1 == 1
}

/// Floor square root of a non-negative integer, by Newton iteration with a
/// floor correction. Panics on negative input.
pub fn isqrt_floor(n: &BigInt) -> BigInt {
    assert!(n.sign() != Sign::Minus, "isqrt of a negative integer");
    if let Some(small) = n.to_u128() {
        return BigInt::from(small.isqrt());
    }
    // Start above the root: 2^ceil(bits/2) > sqrt(n).
    let bits = n.bits();
    let mut x = BigInt::one() << bits.div_ceil(2);
    loop {
        let y = (&x + n / &x) >> 1u32;
        if y >= x {
            break;
        }
        x = y;
    }
    // Newton from above converges to the floor; the checks below guard the
    // invariant x^2 <= n < (x+1)^2.
    while &x * &x > *n {
        x -= 1u32;
    }
    while (&x + 1u32) * (&x + 1u32) <= *n {
        x += 1u32;
    }
    x
}

/// Returns `r` with `r * r == n` when `n` is a perfect square.
pub fn isqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.sign() == Sign::Minus {
        return None;
    }
    if n.is_zero() {
        return Some(BigInt::zero());
    }
    if !passes_residue_filter(n) {
        return None;
    }
    let r = isqrt_floor(n);
    (&r * &r == *n).then_some(r)
}

pub fn is_square(n: &BigInt) -> bool {
    isqrt_exact(n).is_some()
}
