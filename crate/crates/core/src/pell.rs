//! The Pell equations `u^2 - d v^2 = +4` and `u^2 - d v^2 = -4`.
//!
//! A solution `(u, v)` stands for the quadratic integer `(u + v sqrt(d)) / 2`.
//! Products of such numbers are computed with the half-integer composition
//!
//! ```text
//! (u1, v1) * (u2, v2) = ((u1 u2 + d v1 v2) / 2, (u1 v2 + u2 v1) / 2)
//! ```
//!
//! whose numerators are always even for genuine solutions. If `alpha` is the
//! smallest positive solution of the `+4` equation, its powers give every
//! positive solution. If the `-4` equation is solvable with smallest positive
//! solution `beta`, then `beta^2 = alpha`, and the odd powers of `beta` give
//! every positive `-4` solution.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

pub use crate::arith::{is_square, isqrt_exact, isqrt_floor};
use crate::error::{Error, Result};
use crate::lucas::{gen_fib_a, gen_fib_b};
use crate::serde_big;

/// Right-hand side of the equation, `+4` or `-4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PellSign {
    Plus,
    Minus,
}

impl PellSign {
    pub fn value(self) -> i32 {
        match self {
            PellSign::Plus => 4,
            PellSign::Minus => -4,
        }
    }

    pub fn times(self, other: PellSign) -> PellSign {
        if self == other {
            PellSign::Plus
        } else {
            PellSign::Minus
        }
    }

    pub fn flip(self) -> PellSign {
        match self {
            PellSign::Plus => PellSign::Minus,
            PellSign::Minus => PellSign::Plus,
        }
    }

    /// `+4` for even `n`, `-4` for odd `n`.
    pub fn from_parity(n: u64) -> PellSign {
        if n.is_multiple_of(2) {
            PellSign::Plus
        } else {
            PellSign::Minus
        }
    }
}

impl fmt::Display for PellSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PellSign::Plus => "+4",
            PellSign::Minus => "-4",
        })
    }
}

impl std::str::FromStr for PellSign {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "+4" | "4" | "+" | "plus" => Ok(PellSign::Plus),
            "-4" | "-" | "minus" => Ok(PellSign::Minus),
            other => Err(format!("expected +4 or -4, got {other:?}")),
        }
    }
}

impl Serialize for PellSign {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `u^2 - d v^2 = sign` with `d > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PellProblem {
    #[serde(serialize_with = "serde_big::big")]
    pub d: BigInt,
    pub sign: PellSign,
}

impl PellProblem {
    pub fn new(d: impl Into<BigInt>, sign: PellSign) -> Result<Self> {
        let d = d.into();
        if !d.is_positive() {
            return Err(Error::InvalidParameter(format!(
                "Pell discriminant must be positive, got {d}"
            )));
        }
        Ok(Self { d, sign })
    }
}

/// A solution `(u, v)` with `u, v >= 0`; sign variants are not enumerated.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PellSolution {
    #[serde(serialize_with = "serde_big::big")]
    pub u: BigInt,
    #[serde(serialize_with = "serde_big::big")]
    pub v: BigInt,
    pub sign: PellSign,
}

impl PellSolution {
    pub fn new(u: impl Into<BigInt>, v: impl Into<BigInt>, sign: PellSign) -> Self {
        Self {
            u: u.into(),
            v: v.into(),
            sign,
        }
    }

    /// The trivial solution `(2, 0)` of the `+4` equation.
    pub fn trivial() -> Self {
        Self::new(2, 0, PellSign::Plus)
    }

    pub fn satisfies(&self, d: &BigInt) -> bool {
        &self.u * &self.u - d * &self.v * &self.v == BigInt::from(self.sign.value())
    }
}

impl fmt::Display for PellSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.u, self.v)
    }
}

fn halve(x: BigInt) -> Result<BigInt> {
    if x.is_odd() {
        return Err(Error::Parity(x));
    }
    Ok(x >> 1u32)
}

/// Half-integer product of two solutions for the same `d`.
pub fn compose(d: &BigInt, x: &PellSolution, y: &PellSolution) -> Result<PellSolution> {
    let u = halve(&x.u * &y.u + d * &x.v * &y.v)?;
    let v = halve(&x.u * &y.v + &y.u * &x.v)?;
    Ok(PellSolution {
        u,
        v,
        sign: x.sign.times(y.sign),
    })
}

/// Smallest positive solutions of both equations for one `d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Fundamentals {
    pub plus: PellSolution,
    pub minus: Option<PellSolution>,
}

impl Fundamentals {
    pub fn get(&self, sign: PellSign) -> Option<&PellSolution> {
        match sign {
            PellSign::Plus => Some(&self.plus),
            PellSign::Minus => self.minus.as_ref(),
        }
    }
}

// Below this bound a solution of |u^2 - d v^2| = 4 need not come from a
// convergent of sqrt(d) (that needs 4 < sqrt(d)), so small d are enumerated.
const ENUMERATION_LIMIT: u32 = 16;

/// Fundamental solutions of `u^2 - d v^2 = +-4`.
///
/// For square `d` the `+4` equation only has `(2, 0)`; the `-4` equation is
/// solvable only for `d = 1` (`(0, 2)`) and `d = 4` (`(0, 1)`).
pub fn fundamentals(d: &BigInt) -> Result<Fundamentals> {
    if !d.is_positive() {
        return Err(Error::InvalidParameter(format!(
            "Pell discriminant must be positive, got {d}"
        )));
    }
    if is_square(d) {
        let minus = if d.is_one() {
            Some(PellSolution::new(0, 2, PellSign::Minus))
        } else if *d == BigInt::from(4) {
            Some(PellSolution::new(0, 1, PellSign::Minus))
        } else {
            None
        };
        return Ok(Fundamentals {
            plus: PellSolution::trivial(),
            minus,
        });
    }
    if *d <= BigInt::from(ENUMERATION_LIMIT) {
        return Ok(fundamentals_by_enumeration(d));
    }
    Ok(fundamentals_by_continued_fraction(d))
}

fn fundamentals_by_enumeration(d: &BigInt) -> Fundamentals {
    let mut minus = None;
    let mut v = BigInt::one();
    loop {
        let dv2 = d * &v * &v;
        if minus.is_none() {
            if let Some(u) = isqrt_exact(&(&dv2 - 4)) {
                minus = Some(PellSolution::new(u, v.clone(), PellSign::Minus));
            }
        }
        if let Some(u) = isqrt_exact(&(&dv2 + 4)) {
            // Any -4 solution is a square root of this one, so it has a
            // smaller v and has already been seen.
            return Fundamentals {
                plus: PellSolution::new(u, v, PellSign::Plus),
                minus,
            };
        }
        v += 1u32;
    }
}

/// Scans the convergents `p/q` of `sqrt(d)` (integer recurrence, no floating
/// point) up to the first one with `p^2 - d q^2 = 1`. Every solution with
/// `gcd(u, v) = 1` of `|u^2 - d v^2| = 4 < sqrt(d)` is a convergent, and
/// solutions with `gcd(u, v) = 2` come from `p^2 - d q^2 = +-1`. The `+4`
/// fundamental has `v <= 2q` at the stopping convergent and, if its `v` is
/// not exactly `2q`, then `v <= q`; the `-4` fundamental is smaller still.
fn fundamentals_by_continued_fraction(d: &BigInt) -> Fundamentals {
    let a0 = isqrt_floor(d);
    let (mut m, mut den, mut a) = (BigInt::zero(), BigInt::one(), a0.clone());
    let (mut p_prev, mut p) = (BigInt::one(), a0.clone());
    let (mut q_prev, mut q) = (BigInt::zero(), BigInt::one());

    let mut best_plus: Option<PellSolution> = None;
    let mut best_minus: Option<PellSolution> = None;
    let offer = |slot: &mut Option<PellSolution>, cand: PellSolution| {
        if slot.as_ref().is_none_or(|s| cand.v < s.v) {
            *slot = Some(cand);
        }
    };

    loop {
        let norm = &p * &p - d * &q * &q;
        let two = || BigInt::from(2);
        if norm == BigInt::from(4) {
            offer(
                &mut best_plus,
                PellSolution::new(p.clone(), q.clone(), PellSign::Plus),
            );
        } else if norm == BigInt::from(-4) {
            offer(
                &mut best_minus,
                PellSolution::new(p.clone(), q.clone(), PellSign::Minus),
            );
        } else if norm == BigInt::from(-1) {
            offer(
                &mut best_minus,
                PellSolution::new(two() * &p, two() * &q, PellSign::Minus),
            );
        } else if norm.is_one() {
            offer(
                &mut best_plus,
                PellSolution::new(two() * &p, two() * &q, PellSign::Plus),
            );
            break;
        }

        m = &den * &a - &m;
        den = (d - &m * &m) / &den;
        a = (&a0 + &m) / &den;
        let p_next = &a * &p + &p_prev;
        let q_next = &a * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
    }

    Fundamentals {
        plus: best_plus.expect("convergent with norm 1 always yields a +4 solution"),
        minus: best_minus,
    }
}

/// Smallest positive solution, or `None` when the equation is unsolvable.
pub fn fundamental_solution(problem: &PellProblem) -> Option<PellSolution> {
    fundamentals(&problem.d)
        .ok()
        .and_then(|f| f.get(problem.sign).cloned())
}

/// Positive solutions in increasing order, generated from the fundamental one.
#[derive(Debug, Clone)]
pub struct PellSolutions {
    d: BigInt,
    step: Option<PellSolution>,
    next: Option<PellSolution>,
}

impl PellSolutions {
    pub fn new(problem: &PellProblem) -> Result<Self> {
        let f = fundamentals(&problem.d)?;
        let first = f
            .get(problem.sign)
            .cloned()
            .ok_or_else(|| Error::NoFundamentalSolution {
                d: problem.d.clone(),
                sign: problem.sign.value(),
            })?;
        // Square d: a single solution, no group to walk.
        let step = (!first.v.is_zero()).then(|| f.plus.clone());
        Ok(Self {
            d: problem.d.clone(),
            step,
            next: Some(first),
        })
    }
}

impl Iterator for PellSolutions {
    type Item = PellSolution;

    fn next(&mut self) -> Option<PellSolution> {
        let current = self.next.take()?;
        if let Some(step) = &self.step {
            let following = compose(&self.d, &current, step)
                .expect("solutions of the +-4 equations compose to integers");
            self.next = Some(following);
        }
        Some(current)
    }
}

/// The first `count` positive solutions: powers of the `+4` fundamental, or
/// odd powers of the `-4` fundamental.
pub fn solutions_iter(problem: &PellProblem, count: usize) -> Result<Vec<PellSolution>> {
    Ok(PellSolutions::new(problem)?.take(count).collect())
}

/// All positive solutions with `v <= v_bound` (for square `d`, the single
/// solution when it fits).
pub fn solutions_up_to_v(problem: &PellProblem, v_bound: &BigInt) -> Result<Vec<PellSolution>> {
    Ok(PellSolutions::new(problem)?
        .take_while(|s| s.v <= *v_bound)
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: u64) -> Parity {
        if n.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Outcome of a membership query. For members, regenerating the sequence at
/// `index` reproduces the value and `square_witness^2` is the tested quantity
/// of the branch matching `parity`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MembershipVerdict {
    pub is_member: bool,
    pub index: Option<u64>,
    pub parity: Option<Parity>,
    #[serde(serialize_with = "serde_big::opt_big")]
    pub square_witness: Option<BigInt>,
}

impl MembershipVerdict {
    pub fn non_member() -> Self {
        Self {
            is_member: false,
            index: None,
            parity: None,
            square_witness: None,
        }
    }
}

/// First `k >= 1` with `term(k) == value`, walking an increasing sequence.
fn regenerate_index(value: &BigInt, term: impl Fn(u64) -> BigInt) -> Option<u64> {
    (1..)
        .map(|k| (k, term(k)))
        .take_while(|(k, t)| t <= value || *k <= 2)
        .find(|(_, t)| t == value)
        .map(|(k, _)| k)
}

fn require_positive(name: &str, x: &BigInt) -> Result<()> {
    if !x.is_positive() {
        return Err(Error::InvalidParameter(format!(
            "{name} must be >= 1, got {x}"
        )));
    }
    Ok(())
}

/// Is `n` a term `a_k` of `U_k(a, -1)`? Exactly when `(a^2 + 4) n^2 + 4`
/// (then `k` is even) or `(a^2 + 4) n^2 - 4` (then `k` is odd) is a square.
pub fn is_gen_fib_a(n: &BigInt, a: &BigInt) -> Result<MembershipVerdict> {
    require_positive("n", n)?;
    require_positive("a", a)?;
    let dn2 = (a * a + 4) * n * n;
    let plus = isqrt_exact(&(&dn2 + 4));
    let minus = isqrt_exact(&(&dn2 - 4));
    if plus.is_none() && minus.is_none() {
        return Ok(MembershipVerdict::non_member());
    }
    let index = regenerate_index(n, |k| gen_fib_a(a, k))
        .expect("square criterion holds only for terms of the sequence");
    let parity = Parity::of(index);
    let witness = match parity {
        Parity::Even => plus,
        Parity::Odd => minus,
    };
    Ok(MembershipVerdict {
        is_member: true,
        index: Some(index),
        parity: Some(parity),
        square_witness: witness,
    })
}

/// Is `n` a term `b_k` of `U_k(b, 1)`? Exactly when `(b^2 - 4) n^2 + 4` is a
/// square.
pub fn is_gen_fib_b(n: &BigInt, b: &BigInt) -> Result<MembershipVerdict> {
    require_positive("n", n)?;
    if *b < BigInt::from(4) {
        return Err(Error::InvalidParameter(format!("b must be >= 4, got {b}")));
    }
    let Some(witness) = isqrt_exact(&((b * b - 4) * n * n + 4)) else {
        return Ok(MembershipVerdict::non_member());
    };
    let index = regenerate_index(n, |k| gen_fib_b(b, k))
        .expect("square criterion holds only for terms of the sequence");
    Ok(MembershipVerdict {
        is_member: true,
        index: Some(index),
        parity: Some(Parity::of(index)),
        square_witness: Some(witness),
    })
}
