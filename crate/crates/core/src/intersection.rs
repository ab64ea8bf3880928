//! Common terms of two Lucas `V`-sequences, as the `x`-solutions of a pair
//! of `±4` Pell equations
//!
//! ```text
//! x^2 - d1 y^2 = s1 4
//! x^2 - d2 z^2 = s2 4
//! ```
//!
//! When `d1 d2` is a square the `x`-solutions form a single Lucas sequence
//! `V_k(P', Q')`, whose parameter `P'` is the first common term. Eigenvalues
//! are never formed: every quantity is an integer Lucas value.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::arith::{is_square, isqrt_exact};
use crate::error::{Error, Result};
use crate::lucas::{lucas_v, LucasParams};
use crate::pell::{PellProblem, PellSign, PellSolutions};
use crate::serde_big;

pub use crate::oracle::brute_force_common;

/// Default cap on `m + n` steps of [`minimal_trace_match`].
pub const DEFAULT_MATCH_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SystemFlavor {
    /// `V(P1, -1)` against `V(P2, -1)`; `d_i = P_i^2 + 4`, equal signs.
    PlusPlus,
    /// `V(P1, 1)` against `V(P2, 1)`; `d_i = P_i^2 - 4`, both `+4`.
    MinusMinus,
    /// `V(a, -1)` against `V(b, 1)`; `d1 = a^2 + 4`, `d2 = b^2 - 4`, both `+4`.
    Mixed,
    /// `d_i = P_i^2 + 4` with opposite signs; finitely many solutions.
    OppositeSigns,
}

impl SystemFlavor {
    /// Sign pairs `(s1, s2)` admitted by the flavor.
    pub fn sign_pairs(self) -> &'static [(PellSign, PellSign)] {
        use PellSign::{Minus, Plus};
        match self {
            SystemFlavor::PlusPlus => &[(Plus, Plus), (Minus, Minus)],
            SystemFlavor::MinusMinus | SystemFlavor::Mixed => &[(Plus, Plus)],
            SystemFlavor::OppositeSigns => &[(Plus, Minus), (Minus, Plus)],
        }
    }

    fn q1(self) -> i32 {
        match self {
            SystemFlavor::MinusMinus => 1,
            _ => -1,
        }
    }

    fn q2(self) -> i32 {
        match self {
            SystemFlavor::MinusMinus | SystemFlavor::Mixed => 1,
            _ => -1,
        }
    }
}

impl fmt::Display for SystemFlavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SystemFlavor::PlusPlus => "plus_plus",
            SystemFlavor::MinusMinus => "minus_minus",
            SystemFlavor::Mixed => "mixed",
            SystemFlavor::OppositeSigns => "opposite_signs",
        })
    }
}

impl FromStr for SystemFlavor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "++" | "plus_plus" | "plus-plus" => Ok(SystemFlavor::PlusPlus),
            "--" | "mm" | "minus_minus" | "minus-minus" => Ok(SystemFlavor::MinusMinus),
            "mixed" | "+-" => Ok(SystemFlavor::Mixed),
            "opposite" | "opposite_signs" | "opposite-signs" => Ok(SystemFlavor::OppositeSigns),
            _ => Err(Error::InvalidParameter(format!("unknown flavor {s:?}"))),
        }
    }
}

impl Serialize for SystemFlavor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A validated system of two Pell equations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PellSystem {
    pub flavor: SystemFlavor,
    #[serde(serialize_with = "serde_big::big")]
    pub p1: BigInt,
    #[serde(serialize_with = "serde_big::big")]
    pub p2: BigInt,
    #[serde(serialize_with = "serde_big::big")]
    pub d1: BigInt,
    #[serde(serialize_with = "serde_big::big")]
    pub d2: BigInt,
}

impl PellSystem {
    pub fn new(flavor: SystemFlavor, p1: impl Into<BigInt>, p2: impl Into<BigInt>) -> Result<Self> {
        let (p1, p2) = (p1.into(), p2.into());
        let need = |name: &str, p: &BigInt, min: i64| -> Result<()> {
            if *p < BigInt::from(min) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be at least {min} for {flavor}, got {p}"
                )));
            }
            Ok(())
        };
        match flavor {
            SystemFlavor::PlusPlus | SystemFlavor::OppositeSigns => {
                need("p1", &p1, 1)?;
                need("p2", &p2, 1)?;
            }
            SystemFlavor::MinusMinus => {
                need("p1", &p1, 4)?;
                need("p2", &p2, 4)?;
            }
            SystemFlavor::Mixed => {
                need("p1", &p1, 1)?;
                need("p2", &p2, 4)?;
            }
        }
        if flavor != SystemFlavor::Mixed && p1 == p2 {
            return Err(Error::InvalidParameter(format!(
                "p1 and p2 must differ for {flavor}"
            )));
        }
        let d = |p: &BigInt, q: i32| p * p - 4 * q;
        Ok(Self {
            d1: d(&p1, flavor.q1()),
            d2: d(&p2, flavor.q2()),
            flavor,
            p1,
            p2,
        })
    }

    pub fn params1(&self) -> LucasParams {
        LucasParams::new(self.p1.clone(), self.flavor.q1())
    }

    pub fn params2(&self) -> LucasParams {
        LucasParams::new(self.p2.clone(), self.flavor.q2())
    }

    /// Whether `(x, y, z)` solves the system with signs `(s1, s2)`.
    pub fn satisfied_by(&self, t: &Triple) -> bool {
        let x2 = &t.x * &t.x;
        &x2 - &self.d1 * &t.y * &t.y == BigInt::from(t.sign1.value())
            && &x2 - &self.d2 * &t.z * &t.z == BigInt::from(t.sign2.value())
            && self.flavor.sign_pairs().contains(&(t.sign1, t.sign2))
    }
}

impl fmt::Display for PellSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({}, {})", self.flavor, self.p1, self.p2)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Triple {
    #[serde(serialize_with = "serde_big::big")]
    pub x: BigInt,
    #[serde(serialize_with = "serde_big::big")]
    pub y: BigInt,
    #[serde(serialize_with = "serde_big::big")]
    pub z: BigInt,
    pub sign1: PellSign,
    pub sign2: PellSign,
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {}) signs ({}, {})",
            self.x, self.y, self.z, self.sign1, self.sign2
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SquareTest {
    Square,
    Nonsquare,
}

/// Exact test whether `d1 d2` is a perfect square.
pub fn square_product_test(system: &PellSystem) -> SquareTest {
    if is_square(&(&system.d1 * &system.d2)) {
        SquareTest::Square
    } else {
        SquareTest::Nonsquare
    }
}

/// Least `(m, n)` with `V_2m(P1, Q1) = V_2n(P2, Q2)`, i.e. equal traces of
/// the squared companion powers, found by merging the two increasing trace
/// sequences. For `plus_plus` the parities of `m` and `n` must agree; for
/// `mixed`, `m` must be even.
///
/// Returns `None` for the opposite-signs flavor, which has no such family.
pub fn minimal_trace_match(system: &PellSystem, cap: u64) -> Result<Option<(u64, u64)>> {
    if system.flavor == SystemFlavor::OppositeSigns {
        return Ok(None);
    }
    if square_product_test(system) == SquareTest::Nonsquare {
        return Ok(None);
    }
    let mut s1 = TraceSeq::new(&system.params1());
    let mut s2 = TraceSeq::new(&system.params2());
    let accept = |m: u64, n: u64| match system.flavor {
        SystemFlavor::PlusPlus => m % 2 == n % 2,
        SystemFlavor::Mixed => m.is_multiple_of(2),
        _ => true,
    };
    loop {
        if s1.index + s2.index > cap {
            return Err(Error::CapExceeded { cap });
        }
        match s1.value.cmp(&s2.value) {
            std::cmp::Ordering::Less => s1.advance(),
            std::cmp::Ordering::Greater => s2.advance(),
            std::cmp::Ordering::Equal => {
                if accept(s1.index, s2.index) {
                    return Ok(Some((s1.index, s2.index)));
                }
                s1.advance();
            }
        }
    }
}

/// `V_2k(P, Q)` for `k = 1, 2, ...`, itself the Lucas sequence
/// `V_k(P^2 - 2Q, Q^2)`, strictly increasing in the admissible domains.
struct TraceSeq {
    p: BigInt,
    q: BigInt,
    index: u64,
    prev: BigInt,
    value: BigInt,
}

impl TraceSeq {
    fn new(params: &LucasParams) -> Self {
        let p: BigInt = &params.p * &params.p - 2 * &params.q;
        let q = &params.q * &params.q;
        Self {
            prev: BigInt::from(2),
            value: p.clone(),
            p,
            q,
            index: 1,
        }
    }

    fn advance(&mut self) {
        let next = &self.p * &self.value - &self.q * &self.prev;
        self.prev = std::mem::replace(&mut self.value, next);
        self.index += 1;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    TrivialOnly,
    InfiniteFamily,
    FiniteOnly,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::TrivialOnly => "trivial_only",
            Verdict::InfiniteFamily => "infinite_family",
            Verdict::FiniteOnly => "finite_only",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntersectionResult {
    pub system: PellSystem,
    pub verdict: Verdict,
    pub minimal_pair: Option<(u64, u64)>,
    pub common_params: Option<LucasParams>,
    pub solutions: Vec<Triple>,
}

/// Options for [`intersect`].
#[derive(Debug, Clone)]
pub struct IntersectOptions {
    /// Cap for [`minimal_trace_match`].
    pub cap: u64,
    /// Mandatory `x` bound for the opposite-signs flavor; ignored otherwise.
    pub x_bound: Option<BigInt>,
}

impl Default for IntersectOptions {
    fn default() -> Self {
        Self {
            cap: DEFAULT_MATCH_CAP,
            x_bound: None,
        }
    }
}

fn trivial_triple() -> Triple {
    Triple {
        x: BigInt::from(2),
        y: BigInt::zero(),
        z: BigInt::zero(),
        sign1: PellSign::Plus,
        sign2: PellSign::Plus,
    }
}

/// Decides the system and lists its first `count` solutions (for the
/// opposite-signs flavor: every solution with `x <= x_bound`).
pub fn intersect(
    system: &PellSystem,
    count: usize,
    opts: &IntersectOptions,
) -> Result<IntersectionResult> {
    if system.flavor == SystemFlavor::OppositeSigns {
        let bound = opts.x_bound.as_ref().ok_or_else(|| {
            Error::InvalidParameter("opposite_signs needs an explicit x bound".into())
        })?;
        return Ok(IntersectionResult {
            system: system.clone(),
            verdict: Verdict::FiniteOnly,
            minimal_pair: None,
            common_params: None,
            solutions: opposite_sign_solutions(system, bound)?,
        });
    }
    let Some(pair) = minimal_trace_match(system, opts.cap)? else {
        return Ok(IntersectionResult {
            system: system.clone(),
            verdict: Verdict::TrivialOnly,
            minimal_pair: None,
            common_params: None,
            solutions: vec![trivial_triple()],
        });
    };
    let cursor = SolutionCursor::new(system, pair);
    let common = cursor.params.clone();
    let solutions = cursor.take(count).collect();
    Ok(IntersectionResult {
        system: system.clone(),
        verdict: Verdict::InfiniteFamily,
        minimal_pair: Some(pair),
        common_params: Some(common),
        solutions,
    })
}

/// Common Lucas parameters `(V_m(P1, Q1), Q1^m)` for the minimal pair.
pub fn common_params(system: &PellSystem, (m, n): (u64, u64)) -> LucasParams {
    let p = lucas_v(&system.params1(), m);
    let p_other = lucas_v(&system.params2(), n);
    assert_eq!(p, p_other, "V_m(P1) = V_n(P2) at the minimal pair");
    let q = if system.flavor.q1() == -1 && m % 2 == 1 {
        -1
    } else {
        1
    };
    let params = LucasParams::new(p, q);
    assert!(
        !is_square(&params.discriminant()),
        "common discriminant of an infinite family is not a square"
    );
    params
}

/// Lazy, single-consumer enumeration of an infinite family: `x_k = V_k(P', Q')`
/// with `y`, `z` recovered by exact square roots.
#[derive(Debug, Clone)]
pub struct SolutionCursor {
    system: PellSystem,
    params: LucasParams,
    prev: BigInt,
    cur: BigInt,
}

impl SolutionCursor {
    pub fn new(system: &PellSystem, pair: (u64, u64)) -> Self {
        let params = common_params(system, pair);
        // Holds (V_k, V_{k+1}); `next` emits V_k.
        Self {
            system: system.clone(),
            prev: BigInt::from(2),
            cur: params.p.clone(),
            params,
        }
    }

    pub fn params(&self) -> &LucasParams {
        &self.params
    }
}

impl Iterator for SolutionCursor {
    type Item = Triple;

    fn next(&mut self) -> Option<Triple> {
        let x = self.prev.clone();
        let next = &self.params.p * &self.cur - &self.params.q * &self.prev;
        self.prev = std::mem::replace(&mut self.cur, next);
        let triple = resolve_triple(&self.system, &x)
            .expect("every term of the common sequence solves the system");
        assert!(self.system.satisfied_by(&triple));
        Some(triple)
    }
}

/// `y` with `x^2 - d y^2 = 4 s`, if any.
fn pell_partner(x: &BigInt, d: &BigInt, sign: PellSign) -> Option<BigInt> {
    let num = x * x - sign.value();
    if num < BigInt::zero() || !(&num % d).is_zero() {
        return None;
    }
    isqrt_exact(&(num / d))
}

/// Tries the flavor's sign pairs in order and returns the first that fits.
fn resolve_triple(system: &PellSystem, x: &BigInt) -> Option<Triple> {
    system.flavor.sign_pairs().iter().find_map(|&(s1, s2)| {
        let y = pell_partner(x, &system.d1, s1)?;
        let z = pell_partner(x, &system.d2, s2)?;
        Some(Triple {
            x: x.clone(),
            y,
            z,
            sign1: s1,
            sign2: s2,
        })
    })
}

/// Walks the solutions of the first equation (both signs, plus the trivial
/// one) up to `x_bound` and keeps those solving the second equation with
/// the opposite sign.
fn opposite_sign_solutions(system: &PellSystem, x_bound: &BigInt) -> Result<Vec<Triple>> {
    let mut xs: Vec<(BigInt, PellSign)> = vec![(BigInt::from(2), PellSign::Plus)];
    for sign in [PellSign::Plus, PellSign::Minus] {
        let problem = PellProblem::new(system.d1.clone(), sign)?;
        let Ok(iter) = PellSolutions::new(&problem) else {
            continue;
        };
        xs.extend(iter.take_while(|s| s.u <= *x_bound).map(|s| (s.u, sign)));
    }
    xs.retain(|(x, _)| x <= x_bound);
    let mut out: Vec<Triple> = xs
        .into_iter()
        .filter_map(|(x, s1)| {
            let y = pell_partner(&x, &system.d1, s1)?;
            let z = pell_partner(&x, &system.d2, s1.flip())?;
            Some(Triple {
                x,
                y,
                z,
                sign1: s1,
                sign2: s1.flip(),
            })
        })
        .collect();
    out.sort_by(|a, b| a.x.cmp(&b.x));
    for t in &out {
        assert!(system.satisfied_by(t));
    }
    Ok(out)
}

impl IntersectionResult {
    pub fn xs(&self) -> Vec<BigInt> {
        self.solutions.iter().map(|t| t.x.clone()).collect()
    }
}
