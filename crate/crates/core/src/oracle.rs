//! Slow, direct reference implementations. They share no code with the fast
//! paths they check: recurrences are run term by term, square roots come
//! from the standard library or `num-bigint`, and searches are exhaustive.
//!
//! These ship with the library so the command-line `--verify` flag can run
//! them on user input.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::intersection::{PellSystem, Triple};
use crate::lattice::{DiscAction, Lattice2};
use crate::lucas::{LucasParams, SeqTerm};
use crate::mat2::Mat2;
use crate::pell::{MembershipVerdict, Parity, PellSign, PellSolution};
use crate::serde_big;

fn exact_sqrt_u128(n: u128) -> Option<u128> {
    let r = n.isqrt();
    (r * r == n).then_some(r)
}

/// Largest `x` with `x^2 + 4` representable in `u64`.
const U64_SQUARE_SAFE: u64 = 4_294_967_295;

// Squares modulo 64 as a bitmask, for cheap rejection.
const SQUARES_MOD_64: u64 = {
    let mut mask = 0u64;
    let mut r = 0;
    while r < 64 {
        mask |= 1 << ((r * r) % 64);
        r += 1;
    }
    mask
};

fn exact_sqrt_u64(n: u64) -> Option<u64> {
    if SQUARES_MOD_64 >> (n % 64) & 1 == 0 {
        return None;
    }
    let r = n.isqrt();
    (r * r == n).then_some(r)
}

fn exact_sqrt_big(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// `U_n`, `V_n` by running the recurrence `x_{k+1} = P x_k - Q x_{k-1}`.
pub fn naive_lucas(params: &LucasParams, n: u64) -> SeqTerm {
    let (mut u0, mut u1) = (BigInt::zero(), BigInt::one());
    let (mut v0, mut v1) = (BigInt::from(2), params.p.clone());
    for _ in 0..n {
        let u2 = &params.p * &u1 - &params.q * &u0;
        let v2 = &params.p * &v1 - &params.q * &v0;
        u0 = std::mem::replace(&mut u1, u2);
        v0 = std::mem::replace(&mut v1, v2);
    }
    SeqTerm {
        index: n,
        u_value: u0,
        v_value: v0,
    }
}

/// `m^n` by `n` multiplications.
pub fn naive_matrix_power(m: &Mat2, n: u64) -> Mat2 {
    (0..n).fold(Mat2::identity(), |acc, _| &acc * m)
}

/// All `(u, v)` with `u >= 0`, `0 <= v <= v_bound` and `u^2 - d v^2 = 4 s`,
/// by testing `d v^2 + 4 s` for squareness.
pub fn enumerate_pell(d: &BigInt, sign: PellSign, v_bound: u64) -> Vec<PellSolution> {
    let s = i128::from(sign.value());
    if let Some(d) = d.to_u64() {
        let small = d
            .checked_mul(v_bound.saturating_mul(v_bound))
            .is_some_and(|x| x < u64::MAX - 4);
        if small {
            let mut out = Vec::new();
            for v in 0..=v_bound {
                let dv2 = d * v * v;
                let t = if s > 0 {
                    dv2 + 4
                } else if dv2 >= 4 {
                    dv2 - 4
                } else {
                    continue;
                };
                if let Some(u) = exact_sqrt_u64(t) {
                    out.push(PellSolution::new(BigInt::from(u), BigInt::from(v), sign));
                }
            }
            return out;
        }
        // d v^2 + 4 fits in u128 for every u64 d and v.
        let fits = u128::from(d)
            .checked_mul(u128::from(v_bound) * u128::from(v_bound))
            .is_some_and(|x| x < u128::MAX / 2);
        if fits {
            let mut out = Vec::new();
            for v in 0..=v_bound {
                let t = i128::try_from(u128::from(d) * u128::from(v) * u128::from(v))
                    .expect("bounded above")
                    + s;
                if t < 0 {
                    continue;
                }
                if let Some(u) = exact_sqrt_u128(t as u128) {
                    out.push(PellSolution::new(BigInt::from(u), BigInt::from(v), sign));
                }
            }
            return out;
        }
    }
    let mut out = Vec::new();
    for v in 0..=v_bound {
        let v = BigInt::from(v);
        let t = d * &v * &v + s;
        if let Some(u) = exact_sqrt_big(&t) {
            out.push(PellSolution::new(u, v, sign));
        }
    }
    out
}

/// Which generalized Fibonacci sequence a membership query is about.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeqFlavor {
    /// `a_n = a a_{n-1} + a_{n-2}`
    A,
    /// `b_n = b b_{n-1} - b_{n-2}`
    B,
}

/// Generates the sequence until it passes `value` or `term_bound` terms, and
/// reports the first index hit. The square witness is computed directly
/// from the hit index's parity.
pub fn naive_membership(
    value: &BigInt,
    flavor: SeqFlavor,
    param: &BigInt,
    term_bound: u64,
) -> MembershipVerdict {
    // Coefficient of the second-to-last term in the recurrence.
    let sign = match flavor {
        SeqFlavor::A => 1,
        SeqFlavor::B => -1,
    };
    let (mut prev, mut cur) = (BigInt::zero(), BigInt::one());
    let mut k = 1u64;
    while k <= term_bound && (cur <= *value || k <= 2) {
        if cur == *value {
            let parity = Parity::of(k);
            let d = match flavor {
                SeqFlavor::A => param * param + 4,
                SeqFlavor::B => param * param - 4,
            };
            let eps = match (flavor, parity) {
                (SeqFlavor::B, _) | (SeqFlavor::A, Parity::Even) => 4,
                (SeqFlavor::A, Parity::Odd) => -4,
            };
            return MembershipVerdict {
                is_member: true,
                index: Some(k),
                parity: Some(parity),
                square_witness: exact_sqrt_big(&(d * value * value + eps)),
            };
        }
        let next = param * &cur + sign * &prev;
        prev = std::mem::replace(&mut cur, next);
        k += 1;
    }
    MembershipVerdict::non_member()
}

/// Minimal `n >= 1` with `m | a_n`, with `a_n` computed in full.
pub fn naive_rank_of_apparition(m: &BigInt, a: &BigInt, limit: u64) -> Option<u64> {
    let (mut prev, mut cur) = (BigInt::zero(), BigInt::one());
    for n in 1..=limit {
        if cur.is_multiple_of(m) {
            return Some(n);
        }
        let next = a * &cur + &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    None
}

/// A nonzero vector of `L` with square `target`, searching `|y| <= bound`
/// and solving the quadratic in `x` exactly for each `y`.
pub fn exhaustive_vector_search(
    lattice: &Lattice2,
    target: i64,
    bound: i64,
) -> Option<(BigInt, BigInt)> {
    // x^T Q x = 2 (a x^2 + b x y + c y^2), so solve f(x, y) = target / 2.
    assert!(target % 2 == 0, "even lattice");
    let t = BigInt::from(target / 2);
    let (a, b, c) = (lattice.a(), lattice.b(), lattice.c());
    for y in -bound..=bound {
        let y = BigInt::from(y);
        let rest = c * &y * &y - &t;
        if a.is_zero() {
            // b x y = -rest
            let by = b * &y;
            if by.is_zero() {
                if rest.is_zero() && !y.is_zero() {
                    return Some((BigInt::zero(), y));
                }
                continue;
            }
            if (-&rest).is_multiple_of(&by) {
                let x = -&rest / by;
                if !(x.is_zero() && y.is_zero()) {
                    return Some((x, y));
                }
            }
            continue;
        }
        // a x^2 + (b y) x + rest = 0
        let by = b * &y;
        let disc = &by * &by - 4 * a * &rest;
        let Some(r) = exact_sqrt_big(&disc) else {
            continue;
        };
        for num in [-&by + &r, -&by - &r] {
            if num.is_multiple_of(&(2 * a)) {
                let x: BigInt = num / (2 * a);
                if !(x.is_zero() && y.is_zero()) {
                    return Some((x, y));
                }
            }
        }
    }
    None
}

/// An element of `A(L) = L*/L`, stored as `numer / denom` with
/// `denom = |det Q|`, and its square `q(x) = x^T Q x` modulo `2Z`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiscElement {
    pub numer: [String; 2],
    #[serde(skip)]
    numer_big: (BigInt, BigInt),
    #[serde(serialize_with = "serde_big::big")]
    pub denom: BigInt,
    /// Numerator of `q(x) mod 2`, over `denom^2`.
    #[serde(serialize_with = "serde_big::big")]
    pub norm_numer: BigInt,
}

impl DiscElement {
    pub fn numer(&self) -> (&BigInt, &BigInt) {
        (&self.numer_big.0, &self.numer_big.1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiscGroup {
    /// Invariant factors `d1 | d2` of the Smith normal form of `Q`.
    pub invariant_factors: [String; 2],
    pub elements: Vec<DiscElement>,
}

/// Maximal `|det Q|` accepted by [`enumerate_disc_group`].
pub const DISC_GROUP_LIMIT: u64 = 10_000;

/// Lists `L*/L`, the group generated by the columns of `Q^{-1}` modulo
/// `Z^2`, by closing `{0}` under adding either column. The Smith invariants
/// come from the determinantal divisors: `d1 = gcd` of the entries and
/// `d1 d2 = |det Q|`.
pub fn enumerate_disc_group(lattice: &Lattice2) -> Result<DiscGroup> {
    let q = lattice.gram();
    let det = q.det();
    if det.is_zero() {
        return Err(Error::DegenerateLattice {
            a: lattice.a().clone(),
            b: lattice.b().clone(),
            c: lattice.c().clone(),
        });
    }
    let n = det.abs();
    n.to_u64()
        .filter(|n| *n <= DISC_GROUP_LIMIT)
        .ok_or_else(|| {
            Error::InvalidParameter(format!("|disc| = {n} exceeds {DISC_GROUP_LIMIT}"))
        })?;
    let d1 = q.e00.gcd(&q.e01).gcd(&q.e10).gcd(&q.e11);
    let d2 = &n / &d1;

    // Q^{-1} y = adj(Q) y / det, so with denominator |det| the numerator is
    // sign(det) adj(Q) y, reduced mod |det| to pick a coset representative.
    let adj = q.adjugate();
    let sgn = det.signum();
    let reduce = |x: (BigInt, BigInt)| ((&sgn * x.0).mod_floor(&n), (&sgn * x.1).mod_floor(&n));
    let gens = [
        reduce(adj.apply((&BigInt::one(), &BigInt::zero()))),
        reduce(adj.apply((&BigInt::zero(), &BigInt::one()))),
    ];
    let origin = (BigInt::zero(), BigInt::zero());
    let mut seen = BTreeSet::from([origin.clone()]);
    let mut queue = vec![origin];
    let mut elements = Vec::new();
    while let Some(key) = queue.pop() {
        for (g0, g1) in &gens {
            let next = ((&key.0 + g0).mod_floor(&n), (&key.1 + g1).mod_floor(&n));
            if seen.insert(next.clone()) {
                queue.push(next);
            }
        }
        let (k0, k1) = (&key.0, &key.1);
        let (qk0, qk1) = q.apply((k0, k1));
        let norm = k0 * qk0 + k1 * qk1;
        let norm_numer = norm.mod_floor(&(2 * &n * &n));
        elements.push(DiscElement {
            numer: [k0.to_string(), k1.to_string()],
            numer_big: key,
            denom: n.clone(),
            norm_numer,
        });
    }
    elements.sort_by(|x, y| x.numer_big.cmp(&y.numer_big));
    assert_eq!(BigInt::from(elements.len()), &d1 * &d2, "|A(L)| = |det Q|");
    Ok(DiscGroup {
        invariant_factors: [d1.to_string(), d2.to_string()],
        elements,
    })
}

/// How `g` acts on `A(L)`, by applying it to every element and comparing
/// modulo `L`.
pub fn disc_action_direct(lattice: &Lattice2, g: &Mat2) -> Result<DiscAction> {
    let group = enumerate_disc_group(lattice)?;
    let acts_as = |eps: i32| {
        group.elements.iter().all(|e| {
            let (x0, x1) = e.numer();
            let (g0, g1) = g.apply((x0, x1));
            let n = &e.denom;
            (g0 - eps * x0).is_multiple_of(n) && (g1 - eps * x1).is_multiple_of(n)
        })
    };
    Ok(if acts_as(1) {
        DiscAction::PlusId
    } else if acts_as(-1) {
        DiscAction::MinusId
    } else {
        DiscAction::Other
    })
}

/// Every `x` in `[0, x_bound]` solving the system with one of the flavor's
/// sign pairs, with all matching `(y, z)`.
///
/// Candidates are restricted to residue classes modulo `lcm(d1, d2)` where
/// `x^2 - 4 s_i` is divisible by `d_i`; each candidate is then tested with
/// exact square roots.
pub fn brute_force_common(system: &PellSystem, x_bound: u64) -> Vec<Triple> {
    let (Some(d1), Some(d2)) = (system.d1.to_u64(), system.d2.to_u64()) else {
        return brute_force_common_big(system, x_bound);
    };
    let l = d1.lcm(&d2);
    let mut out = Vec::new();
    for &(s1, s2) in system.flavor.sign_pairs() {
        let e1 = i128::from(s1.value());
        let e2 = i128::from(s2.value());
        let residues: Vec<u64> = (0..l)
            .filter(|&r| {
                let r2 = i128::from(r) * i128::from(r);
                (r2 - e1).rem_euclid(i128::from(d1)) == 0
                    && (r2 - e2).rem_euclid(i128::from(d2)) == 0
            })
            .collect();
        let push = |out: &mut Vec<Triple>, x: u64, y: u128, z: u128| {
            out.push(Triple {
                x: BigInt::from(x),
                y: BigInt::from(y),
                z: BigInt::from(z),
                sign1: s1,
                sign2: s2,
            })
        };
        for &r in &residues {
            let mut x = r;
            while x <= x_bound {
                if x <= U64_SQUARE_SAFE {
                    // x^2 + 4 fits in u64.
                    let x2 = x * x;
                    let shifted = |e: i128| -> Option<u64> {
                        if e > 0 {
                            x2.checked_sub(e as u64)
                        } else {
                            Some(x2 + e.unsigned_abs() as u64)
                        }
                    };
                    if let (Some(t1), Some(t2)) = (shifted(e1), shifted(e2)) {
                        if let Some(y) = exact_sqrt_u64(t1 / d1) {
                            if let Some(z) = exact_sqrt_u64(t2 / d2) {
                                push(&mut out, x, y.into(), z.into());
                            }
                        }
                    }
                } else {
                    let x2 = i128::from(x) * i128::from(x);
                    let (t1, t2) = (x2 - e1, x2 - e2);
                    if t1 >= 0 && t2 >= 0 {
                        let y2 = (t1 / i128::from(d1)) as u128;
                        let z2 = (t2 / i128::from(d2)) as u128;
                        if let (Some(y), Some(z)) = (exact_sqrt_u128(y2), exact_sqrt_u128(z2)) {
                            push(&mut out, x, y, z);
                        }
                    }
                }
                match x.checked_add(l) {
                    Some(nx) => x = nx,
                    None => break,
                }
            }
        }
    }
    out.sort_by(|a, b| a.x.cmp(&b.x).then(a.sign1.value().cmp(&b.sign1.value())));
    out
}

fn brute_force_common_big(system: &PellSystem, x_bound: u64) -> Vec<Triple> {
    let mut out = Vec::new();
    for x in 0..=x_bound {
        let x = BigInt::from(x);
        for &(s1, s2) in system.flavor.sign_pairs() {
            let t1 = &x * &x - s1.value();
            let t2 = &x * &x - s2.value();
            if !t1.is_multiple_of(&system.d1) || !t2.is_multiple_of(&system.d2) {
                continue;
            }
            if let (Some(y), Some(z)) = (
                exact_sqrt_big(&(t1 / &system.d1)),
                exact_sqrt_big(&(t2 / &system.d2)),
            ) {
                out.push(Triple {
                    x: x.clone(),
                    y,
                    z,
                    sign1: s1,
                    sign2: s2,
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intersection::SystemFlavor;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn pairs(sols: &[PellSolution]) -> Vec<(i64, i64)> {
        sols.iter()
            .map(|s| (i64::try_from(&s.u).unwrap(), i64::try_from(&s.v).unwrap()))
            .collect()
    }

    #[test]
    fn naive_lucas_examples() {
        assert_eq!(naive_lucas(&LucasParams::new(1, -1), 7).u_value, big(13));
        let t = naive_lucas(&LucasParams::new(2, -1), 0);
        assert_eq!((t.u_value, t.v_value), (big(0), big(2)));
        assert_eq!(naive_lucas(&LucasParams::new(4, 1), 4).u_value, big(56));
    }

    #[test]
    fn enumerate_pell_examples() {
        assert_eq!(
            pairs(&enumerate_pell(&big(5), PellSign::Plus, 10)),
            [(2, 0), (3, 1), (7, 3), (18, 8)]
        );
        assert_eq!(
            pairs(&enumerate_pell(&big(5), PellSign::Minus, 6)),
            [(1, 1), (4, 2), (11, 5)]
        );
        assert!(enumerate_pell(&big(7), PellSign::Minus, 10_000).is_empty());
    }

    #[test]
    fn naive_membership_examples() {
        let v = naive_membership(&big(8), SeqFlavor::A, &big(1), 100);
        assert_eq!((v.is_member, v.index), (true, Some(6)));
        assert!(!naive_membership(&big(9), SeqFlavor::A, &big(1), 100).is_member);
        let v = naive_membership(&big(1), SeqFlavor::B, &big(9), 100);
        assert_eq!(v.index, Some(1));
    }

    #[test]
    fn disc_group_examples() {
        let g = enumerate_disc_group(&Lattice2::l_b(&big(4)).unwrap()).unwrap();
        assert_eq!(g.elements.len(), 12);
        let g = enumerate_disc_group(&Lattice2::new(1, 1, 1).unwrap()).unwrap();
        assert_eq!(g.elements.len(), 3);
        let g = enumerate_disc_group(&Lattice2::new(1, 0, -1).unwrap()).unwrap();
        assert_eq!(g.elements.len(), 4);
        assert_eq!(g.invariant_factors, ["2".to_string(), "2".to_string()]);
    }

    #[test]
    fn brute_force_examples() {
        let xs = |f, p1, p2, bound| -> Vec<(i64, i64, i64)> {
            brute_force_common(&PellSystem::new(f, p1, p2).unwrap(), bound)
                .iter()
                .map(|t| {
                    (
                        i64::try_from(&t.x).unwrap(),
                        i64::try_from(&t.y).unwrap(),
                        i64::try_from(&t.z).unwrap(),
                    )
                })
                .collect()
        };
        assert_eq!(
            xs(SystemFlavor::PlusPlus, 1, 4, 100),
            [(2, 0, 0), (4, 2, 1), (18, 8, 4), (76, 34, 17)]
        );
        assert_eq!(xs(SystemFlavor::PlusPlus, 1, 2, 1_000_000), [(2, 0, 0)]);
        assert_eq!(
            xs(SystemFlavor::MinusMinus, 4, 14, 200),
            [(2, 0, 0), (14, 4, 1), (194, 56, 14)]
        );
    }

    #[test]
    fn vector_search_finds_roots() {
        let l3 = Lattice2::l_b(&big(3)).unwrap();
        let (x, y) = exhaustive_vector_search(&l3, -2, 10).unwrap();
        assert_eq!(l3.norm((&x, &y)), big(-2));
        assert!(exhaustive_vector_search(&Lattice2::l_b(&big(4)).unwrap(), -2, 200).is_none());
    }
}
