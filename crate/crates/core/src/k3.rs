//! Lattice shadows of K3 automorphisms on Picard lattices `L_m(a)` and
//! `L(b)`, and the three-way correspondence between sequence terms, Pell
//! `y`-solutions and (lattice, isometry) pairs.
//!
//! A pair is represented by its lattice, the integer matrix of the induced
//! isometry and the sign by which the automorphism acts on the holomorphic
//! 2-form. Nothing geometric is constructed.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::arith::isqrt_exact;
use crate::error::{Error, Result};
use crate::factor::{smallest_divisor, SmallestDivisor};
use crate::lattice::{DiscAction, IsometryAction, Lattice2};
use crate::lucas::{gen_fib_a, gen_fib_b, lucas_v, LucasParams};
use crate::mat2::Mat2;
use crate::pell::{is_gen_fib_a, is_gen_fib_b, PellSign, PellSolution};
use crate::serde_big;

fn require_at_least(name: &str, value: &BigInt, min: i64) -> Result<()> {
    if *value < BigInt::from(min) {
        return Err(Error::InvalidParameter(format!(
            "{name} must be at least {min}, got {value}"
        )));
    }
    Ok(())
}

fn require_b(b: &BigInt) -> Result<()> {
    if *b < BigInt::from(4) {
        return Err(Error::InvalidParameter(format!(
            "b must be at least 4, got {b}; L(3) contains a vector of square -2 \
             and smaller b give definite or degenerate lattices"
        )));
    }
    Ok(())
}

/// Minimal `n >= 1` with `m | a_n`, found by running the recurrence mod `m`.
pub fn rank_of_apparition(m: &BigInt, a: &BigInt) -> Result<u64> {
    require_at_least("m", m, 2)?;
    require_at_least("a", a, 1)?;
    // The pair (a_j, a_{j+1}) mod m repeats within m^2 steps and the
    // sequence is purely periodic, so a zero appears by then.
    let cap = m * m + 2u32;
    let a = a.mod_floor(m);
    let (mut prev, mut cur) = (BigInt::zero(), BigInt::one());
    let mut n = 1u64;
    loop {
        if cur.is_zero() {
            return Ok(n);
        }
        if BigInt::from(n) > cap {
            return Err(Error::CapExceeded {
                cap: u64::try_from(&cap).unwrap_or(u64::MAX),
            });
        }
        let next = (&a * &cur + &prev).mod_floor(m);
        prev = cur;
        cur = next;
        n += 1;
    }
}

/// `A = [[1, 0], [a, -1]]`, an anti-symplectic involution of `L_m(a)`.
pub fn matrix_a(a: &BigInt) -> Mat2 {
    Mat2::new(BigInt::one(), BigInt::zero(), a.clone(), -BigInt::one())
}

/// `B = [[1, a], [0, -1]]`, an anti-symplectic involution of `L_m(a)`.
pub fn matrix_b(a: &BigInt) -> Mat2 {
    Mat2::new(BigInt::one(), a.clone(), BigInt::zero(), -BigInt::one())
}

/// `C = [[0, -1], [1, b]]`, the generator of `SO+(L(b))`.
pub fn matrix_c(b: &BigInt) -> Mat2 {
    Mat2::new(BigInt::zero(), -BigInt::one(), BigInt::one(), b.clone())
}

/// `D = [[1, b], [0, -1]]`, an involution of `L(b)` of determinant -1.
pub fn matrix_d(b: &BigInt) -> Mat2 {
    Mat2::new(BigInt::one(), b.clone(), BigInt::zero(), -BigInt::one())
}

/// Sign of `g^* omega = ±omega`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OmegaSign {
    Symplectic,
    AntiSymplectic,
}

impl OmegaSign {
    pub fn from_index(n: u64) -> Self {
        if n.is_multiple_of(2) {
            OmegaSign::Symplectic
        } else {
            OmegaSign::AntiSymplectic
        }
    }

    pub fn value(self) -> i32 {
        match self {
            OmegaSign::Symplectic => 1,
            OmegaSign::AntiSymplectic => -1,
        }
    }
}

impl fmt::Display for OmegaSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OmegaSign::Symplectic => "symplectic",
            OmegaSign::AntiSymplectic => "anti-symplectic",
        })
    }
}

impl Serialize for OmegaSign {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `(a^2 + 4) a_n^2 + 2 (-1)^n`.
pub fn trace_a(a: &BigInt, n: u64) -> BigInt {
    let an = gen_fib_a(a, n);
    let eps = OmegaSign::from_index(n).value();
    (a * a + 4u32) * &an * &an + 2 * eps
}

/// `(b^2 - 4) b_n^2 + 2`.
pub fn trace_b(b: &BigInt, n: u64) -> BigInt {
    let bn = gen_fib_b(b, n);
    (b * b - 4u32) * &bn * &bn + 2u32
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct K3CaseA {
    #[serde(serialize_with = "serde_big::big")]
    pub m: BigInt,
    #[serde(serialize_with = "serde_big::big")]
    pub a: BigInt,
    pub n: u64,
    pub lattice: Lattice2,
    pub action: IsometryAction,
    pub omega_sign: OmegaSign,
}

/// Pair data on `L_m(a)` with `g = (AB)^n`, for the rank of apparition `n`.
pub fn classify_case_a(m: &BigInt, a: &BigInt) -> Result<K3CaseA> {
    let n = rank_of_apparition(m, a)?;
    pair_case_a(m, a, n)
}

/// Pair data on `L_m(a)` with `g = (AB)^n` for any `n >= 1` with `m | a_n`.
pub fn pair_case_a(m: &BigInt, a: &BigInt, n: u64) -> Result<K3CaseA> {
    require_at_least("m", m, 2)?;
    require_at_least("a", a, 1)?;
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    let an = gen_fib_a(a, n);
    if !an.is_multiple_of(m) {
        return Err(Error::InvalidParameter(format!(
            "m = {m} does not divide a_{n} = {an}"
        )));
    }
    let ab = &matrix_a(a) * &matrix_b(a);
    let ma = Mat2::new(BigInt::zero(), BigInt::one(), BigInt::one(), a.clone());
    assert_eq!(ab, ma.pow(2), "AB = M_a^2");

    let lattice = Lattice2::l_m_a(m, a)?;
    let g = ab.pow(n);
    let action = IsometryAction::of(&lattice, g)?;
    assert_eq!(action.trace, trace_a(a, n), "trace of (AB)^n");
    Ok(K3CaseA {
        m: m.clone(),
        a: a.clone(),
        n,
        lattice,
        action,
        omega_sign: OmegaSign::from_index(n),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct K3CaseB {
    #[serde(serialize_with = "serde_big::big")]
    pub b: BigInt,
    pub n: u64,
    pub lattice: Lattice2,
    pub action: IsometryAction,
    pub omega_sign: OmegaSign,
}

/// Pair data on `L(b)` with `g = C^{2n}`.
pub fn classify_case_b(b: &BigInt, n: u64) -> Result<K3CaseB> {
    require_b(b)?;
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    let lattice = Lattice2::l_b(b)?;
    let g = matrix_c(b).pow(2 * n);
    let action = IsometryAction::of(&lattice, g)?;
    assert_eq!(action.trace, trace_b(b, n), "trace of C^2n");
    assert_eq!(action.disc_action, DiscAction::PlusId, "C^2n on A(L(b))");
    Ok(K3CaseB {
        b: b.clone(),
        n,
        lattice,
        action,
        omega_sign: OmegaSign::Symplectic,
    })
}

/// Which sequence the correspondence runs through.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Flavor {
    /// `a_n = U_n(a, -1)`, Pell equation `x^2 - (a^2+4) y^2 = ±4`.
    A(BigInt),
    /// `b_n = U_n(b, 1)`, Pell equation `x^2 - (b^2-4) y^2 = 4`.
    B(BigInt),
}

impl Flavor {
    fn validate(&self) -> Result<()> {
        match self {
            Flavor::A(a) => require_at_least("a", a, 1),
            Flavor::B(b) => require_b(b),
        }
    }

    pub fn pell_d(&self) -> BigInt {
        match self {
            Flavor::A(a) => a * a + 4u32,
            Flavor::B(b) => b * b - 4u32,
        }
    }

    pub fn term(&self, n: u64) -> BigInt {
        match self {
            Flavor::A(a) => gen_fib_a(a, n),
            Flavor::B(b) => gen_fib_b(b, n),
        }
    }

    pub fn omega_sign(&self, n: u64) -> OmegaSign {
        match self {
            Flavor::A(_) => OmegaSign::from_index(n),
            Flavor::B(_) => OmegaSign::Symplectic,
        }
    }

    pub fn trace(&self, n: u64) -> BigInt {
        match self {
            Flavor::A(a) => trace_a(a, n),
            Flavor::B(b) => trace_b(b, n),
        }
    }

    /// `V_n` of the underlying Lucas pair, the `x` partner of `y = term(n)`.
    fn pell_x(&self, n: u64) -> BigInt {
        match self {
            Flavor::A(a) => lucas_v(&LucasParams::new(a.clone(), -1), n),
            Flavor::B(b) => lucas_v(&LucasParams::new(b.clone(), 1), n),
        }
    }
}

impl Serialize for Flavor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(1))?;
        match self {
            Flavor::A(a) => map.serialize_entry("a", &a.to_string())?,
            Flavor::B(b) => map.serialize_entry("b", &b.to_string())?,
        }
        map.end()
    }
}

/// One of the three representations, used as the starting point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CorrespondenceInput {
    Term { flavor: Flavor, index: u64 },
    PellY { flavor: Flavor, y: BigInt },
    PairA { m: BigInt, a: BigInt, n: u64 },
    PairB { b: BigInt, n: u64 },
}

/// The pair leg: trace and omega sign, with the lattice and matrix when a
/// valid `m` exists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairLeg {
    /// `m` for `L_m(a)`; absent for `L(b)`, and absent when `a_n = 1`.
    #[serde(serialize_with = "serde_big::opt_big")]
    pub m: Option<BigInt>,
    /// False when `a_n` is composite with no prime factor below the trial
    /// limit; `m` is then `a_n` itself rather than its smallest divisor.
    pub m_is_smallest: bool,
    pub lattice: Option<Lattice2>,
    pub action: Option<IsometryAction>,
    #[serde(serialize_with = "serde_big::big")]
    pub trace: BigInt,
    pub omega_sign: OmegaSign,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Correspondence {
    pub flavor: Flavor,
    pub index: u64,
    #[serde(serialize_with = "serde_big::big")]
    pub term: BigInt,
    pub pell: PellSolution,
    pub pair: PairLeg,
}

/// Divisors `>= 2` of `n > 0` not exceeding `bound`, ascending. Every one
/// of them is an admissible `m` when `n = a_k`.
pub fn divisors_up_to(n: &BigInt, bound: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut d = BigInt::from(2);
    while d <= *bound && d <= *n {
        if n.is_multiple_of(&d) {
            out.push(d.clone());
        }
        d += 1u32;
    }
    out
}

/// Term leg to Pell leg: `y = term`, `x = V_n`.
pub fn term_to_pell(flavor: &Flavor, index: u64) -> Result<PellSolution> {
    flavor.validate()?;
    require_index(index)?;
    let y = flavor.term(index);
    let x = flavor.pell_x(index);
    let sign = match flavor {
        Flavor::A(_) => PellSign::from_parity(index),
        Flavor::B(_) => PellSign::Plus,
    };
    let sol = PellSolution { u: x, v: y, sign };
    assert!(sol.satisfies(&flavor.pell_d()), "V_n^2 - D U_n^2");
    Ok(sol)
}

/// Pell leg to term leg, via the membership criterion on `y`.
pub fn pell_to_index(flavor: &Flavor, y: &BigInt) -> Result<u64> {
    flavor.validate()?;
    if !y.is_positive() {
        return Err(Error::NotInCorrespondence(format!(
            "y = {y} is not a term with index at least 2"
        )));
    }
    let verdict = match flavor {
        Flavor::A(a) => is_gen_fib_a(y, a)?,
        Flavor::B(b) => is_gen_fib_b(y, b)?,
    };
    let index = match verdict.index {
        None => {
            return Err(Error::NotInCorrespondence(format!(
                "y = {y} fails the square criterion for D = {}",
                flavor.pell_d()
            )))
        }
        // a_1 = a_2 = 1 when a = 1; the index range starts at 2.
        Some(1) if matches!(flavor, Flavor::A(a) if a.is_one()) => 2,
        Some(k) => k,
    };
    if index < 2 {
        return Err(Error::NotInCorrespondence(format!(
            "y = {y} is the term of index {index}; indices start at 2"
        )));
    }
    Ok(index)
}

/// Term leg to pair leg. For `L_m(a)` the smallest divisor `>= 2` of `a_n`
/// is chosen as `m`.
pub fn term_to_pair(flavor: &Flavor, index: u64) -> Result<PairLeg> {
    flavor.validate()?;
    require_index(index)?;
    match flavor {
        Flavor::A(a) => {
            let (m, m_is_smallest) = match smallest_divisor(&gen_fib_a(a, index)) {
                SmallestDivisor::Exact(m) => (m, true),
                SmallestDivisor::Unknown(m) => (m, false),
                SmallestDivisor::None => {
                    return Ok(PairLeg {
                        m: None,
                        m_is_smallest: true,
                        lattice: None,
                        action: None,
                        trace: trace_a(a, index),
                        omega_sign: OmegaSign::from_index(index),
                    })
                }
            };
            let case = pair_case_a(&m, a, index)?;
            Ok(PairLeg {
                m: Some(m),
                m_is_smallest,
                lattice: Some(case.lattice),
                trace: case.action.trace.clone(),
                action: Some(case.action),
                omega_sign: case.omega_sign,
            })
        }
        Flavor::B(b) => {
            let case = classify_case_b(b, index)?;
            Ok(PairLeg {
                m: None,
                m_is_smallest: true,
                lattice: Some(case.lattice),
                trace: case.action.trace.clone(),
                action: Some(case.action),
                omega_sign: case.omega_sign,
            })
        }
    }
}

/// Pair leg to Pell `y`: `y^2 = (trace - 2 eps) / D`.
pub fn pair_to_pell_y(flavor: &Flavor, trace: &BigInt, omega: OmegaSign) -> Result<BigInt> {
    flavor.validate()?;
    let d = flavor.pell_d();
    let num = trace - 2 * omega.value();
    let bad = || {
        Error::NotInCorrespondence(format!(
            "trace {trace} with {omega} action does not come from a term"
        ))
    };
    if !num.is_multiple_of(&d) {
        return Err(bad());
    }
    isqrt_exact(&(num / d)).ok_or_else(bad)
}

fn require_index(index: u64) -> Result<()> {
    if index < 2 {
        return Err(Error::InvalidParameter(format!(
            "index must be at least 2, got {index}"
        )));
    }
    Ok(())
}

/// Starts from any one representation, builds the other two, and checks
/// that each leg maps back to the same index.
pub fn correspondence_roundtrip(input: &CorrespondenceInput) -> Result<Correspondence> {
    let (flavor, index) = match input {
        CorrespondenceInput::Term { flavor, index } => {
            flavor.validate()?;
            require_index(*index)?;
            (flavor.clone(), *index)
        }
        CorrespondenceInput::PellY { flavor, y } => (flavor.clone(), pell_to_index(flavor, y)?),
        CorrespondenceInput::PairA { m, a, n } => {
            require_index(*n)?;
            pair_case_a(m, a, *n)?;
            (Flavor::A(a.clone()), *n)
        }
        CorrespondenceInput::PairB { b, n } => {
            require_index(*n)?;
            (Flavor::B(b.clone()), *n)
        }
    };

    let term = flavor.term(index);
    let pell = term_to_pell(&flavor, index)?;
    let mut pair = term_to_pair(&flavor, index)?;
    if let CorrespondenceInput::PairA { m, a, n } = input {
        // Keep the caller's m rather than the default.
        let case = pair_case_a(m, a, *n)?;
        pair.m = Some(m.clone());
        pair.m_is_smallest = true;
        pair.lattice = Some(case.lattice);
        pair.action = Some(case.action);
    }

    assert_eq!(pell.v, term);
    assert_eq!(pell_to_index(&flavor, &pell.v)?, index);
    let y = pair_to_pell_y(&flavor, &pair.trace, pair.omega_sign)?;
    assert_eq!(y, term);
    assert_eq!(pair.omega_sign, flavor.omega_sign(index));

    Ok(Correspondence {
        flavor,
        index,
        term,
        pell,
        pair,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn rank_of_apparition_examples() {
        assert_eq!(rank_of_apparition(&big(2), &big(1)).unwrap(), 3);
        assert_eq!(rank_of_apparition(&big(4), &big(1)).unwrap(), 6);
        assert_eq!(rank_of_apparition(&big(3), &big(3)).unwrap(), 2);
        assert!(rank_of_apparition(&big(1), &big(1)).is_err());
    }

    #[test]
    fn rank_of_apparition_is_minimal() {
        for m in 2..=50i64 {
            for a in 1..=8i64 {
                let n = rank_of_apparition(&big(m), &big(a)).unwrap();
                assert!(gen_fib_a(&big(a), n).is_multiple_of(&big(m)));
                for j in 1..n {
                    assert!(!gen_fib_a(&big(a), j).is_multiple_of(&big(m)));
                }
            }
        }
    }

    #[test]
    fn case_a_examples() {
        let c = classify_case_a(&big(2), &big(1)).unwrap();
        assert_eq!(c.n, 3);
        assert_eq!(c.omega_sign, OmegaSign::AntiSymplectic);
        assert_eq!(c.action.trace, big(18));
        assert_eq!(c.action.g, Mat2::from_i64([[5, 8], [8, 13]]));
        assert!(c.action.preserves_cone);

        let c = classify_case_a(&big(3), &big(3)).unwrap();
        assert_eq!((c.n, c.omega_sign), (2, OmegaSign::Symplectic));
        assert_eq!(c.action.trace, big(119));

        for a in 1..=5 {
            let a = big(a);
            let ab = &matrix_a(&a) * &matrix_b(&a);
            let expect = Mat2::new(big(1), a.clone(), a.clone(), &a * &a + 1u32);
            assert_eq!(ab, expect);
        }
    }

    #[test]
    fn case_b_examples() {
        let c = classify_case_b(&big(4), 1).unwrap();
        assert_eq!(c.action.g, Mat2::from_i64([[-1, -4], [4, 15]]));
        assert_eq!(c.action.trace, big(14));
        assert_eq!(c.action.disc_action, DiscAction::PlusId);
        assert_eq!(classify_case_b(&big(5), 2).unwrap().action.trace, big(527));
        assert!(matches!(
            classify_case_b(&big(3), 1),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn involutions_are_isometries() {
        for a in 1..=6 {
            let l = Lattice2::l_m_a(&big(2), &big(a)).unwrap();
            assert!(l.is_isometry(&matrix_a(&big(a))));
            assert!(l.is_isometry(&matrix_b(&big(a))));
        }
        for b in 4..=9 {
            let l = Lattice2::l_b(&big(b)).unwrap();
            assert!(l.is_isometry(&matrix_c(&big(b))));
            assert!(l.is_isometry(&matrix_d(&big(b))));
        }
    }

    #[test]
    fn correspondence_examples() {
        let r = correspondence_roundtrip(&CorrespondenceInput::Term {
            flavor: Flavor::A(big(1)),
            index: 6,
        })
        .unwrap();
        assert_eq!(r.term, big(8));
        assert_eq!((r.pell.u.clone(), r.pell.sign), (big(18), PellSign::Plus));
        assert_eq!(r.pair.trace, big(322));
        assert_eq!(r.pair.m, Some(big(2)));

        let r = correspondence_roundtrip(&CorrespondenceInput::PellY {
            flavor: Flavor::B(big(4)),
            y: big(4),
        })
        .unwrap();
        assert_eq!(r.index, 2);
        assert_eq!(r.pell.u, big(14));
        assert_eq!(r.pair.trace, big(194));

        let r = correspondence_roundtrip(&CorrespondenceInput::PellY {
            flavor: Flavor::A(big(1)),
            y: big(1),
        })
        .unwrap();
        assert_eq!(r.index, 2);
        assert_eq!(r.pair.m, None);
    }

    #[test]
    fn correspondence_rejects() {
        let err = correspondence_roundtrip(&CorrespondenceInput::PellY {
            flavor: Flavor::A(big(1)),
            y: big(4),
        });
        assert!(matches!(err, Err(Error::NotInCorrespondence(_))));
        // y = 1 is b_1 only.
        let err = correspondence_roundtrip(&CorrespondenceInput::PellY {
            flavor: Flavor::B(big(5)),
            y: big(1),
        });
        assert!(matches!(err, Err(Error::NotInCorrespondence(_))));
        assert!(correspondence_roundtrip(&CorrespondenceInput::PairA {
            m: big(3),
            a: big(1),
            n: 3
        })
        .is_err());
    }

    #[test]
    fn legs_compose_to_identity() {
        for a in 1..=8 {
            let f = Flavor::A(big(a));
            for n in 2..=30 {
                let pell = term_to_pell(&f, n).unwrap();
                assert_eq!(pell_to_index(&f, &pell.v).unwrap(), n);
                let pair = term_to_pair(&f, n).unwrap();
                assert_eq!(
                    pair_to_pell_y(&f, &pair.trace, pair.omega_sign).unwrap(),
                    pell.v
                );
            }
        }
        for b in 4..=8 {
            let f = Flavor::B(big(b));
            for n in 2..=30 {
                let pell = term_to_pell(&f, n).unwrap();
                assert_eq!(pell_to_index(&f, &pell.v).unwrap(), n);
                let pair = term_to_pair(&f, n).unwrap();
                assert_eq!(
                    pair.action.as_ref().unwrap().disc_action,
                    DiscAction::PlusId
                );
            }
        }
    }
}
