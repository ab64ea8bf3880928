//! Even lattices of rank two, given by intersection matrices
//! `[[2a, b], [b, 2c]]`.
//!
//! For signature (1,1) the group `SO+(L)` is parametrized by solutions of
//! `u^2 - D v^2 = 4` with `D = b^2 - 4ac`:
//!
//! ```text
//! g(u, v) = [[(u - b v)/2, -c v], [a v, (u + b v)/2]]
//! ```
//!
//! Only integral `v` is used here. When `k = gcd(a, b, c) > 1` the group also
//! contains elements with `k v` integral but `v` fractional; those are not
//! produced by [`isometry_from_pell`] or [`so_plus_generator`].

pub mod forms;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::arith::is_square;
use crate::error::{Error, Result};
use crate::mat2::Mat2;
use crate::pell::{fundamentals, PellSign, PellSolution};
use crate::serde_big;
use forms::Form;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Signature {
    /// (1,1): indefinite.
    Hyperbolic,
    /// (2,0)
    PositiveDefinite,
    /// (0,2)
    NegativeDefinite,
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Signature::Hyperbolic => "(1,1)",
            Signature::PositiveDefinite => "(2,0)",
            Signature::NegativeDefinite => "(0,2)",
        })
    }
}

impl Serialize for Signature {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Rank-2 even lattice with intersection matrix `[[2a, b], [b, 2c]]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Lattice2 {
    #[serde(serialize_with = "serde_big::big")]
    a: BigInt,
    #[serde(serialize_with = "serde_big::big")]
    b: BigInt,
    #[serde(serialize_with = "serde_big::big")]
    c: BigInt,
}

/// Validates `4ac - b^2 != 0` and builds the lattice.
pub fn make_lattice(
    a: impl Into<BigInt>,
    b: impl Into<BigInt>,
    c: impl Into<BigInt>,
) -> Result<Lattice2> {
    Lattice2::new(a, b, c)
}

impl Lattice2 {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>) -> Result<Self> {
        let l = Self {
            a: a.into(),
            b: b.into(),
            c: c.into(),
        };
        if l.disc().is_zero() {
            return Err(Error::DegenerateLattice {
                a: l.a,
                b: l.b,
                c: l.c,
            });
        }
        Ok(l)
    }

    /// `L_m(a) = m [[2, a], [a, -2]]`.
    pub fn l_m_a(m: &BigInt, a: &BigInt) -> Result<Self> {
        Self::new(m.clone(), m * a, -m)
    }

    /// `L(b) = [[2, b], [b, 2]]`.
    pub fn l_b(b: &BigInt) -> Result<Self> {
        Self::new(1, b.clone(), 1)
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn c(&self) -> &BigInt {
        &self.c
    }

    pub fn gram(&self) -> Mat2 {
        Mat2::new(2 * &self.a, self.b.clone(), self.b.clone(), 2 * &self.c)
    }

    /// `det Q_L = 4ac - b^2`.
    pub fn disc(&self) -> BigInt {
        4 * &self.a * &self.c - &self.b * &self.b
    }

    /// `D = b^2 - 4ac = -disc`, the discriminant of the associated Pell equation.
    pub fn pell_d(&self) -> BigInt {
        -self.disc()
    }

    /// `k = gcd(a, b, c)`.
    pub fn k(&self) -> BigInt {
        self.a.gcd(&self.b).gcd(&self.c)
    }

    pub fn signature(&self) -> Signature {
        if self.pell_d().is_positive() {
            Signature::Hyperbolic
        } else if self.a.is_positive() {
            Signature::PositiveDefinite
        } else {
            Signature::NegativeDefinite
        }
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.signature() == Signature::Hyperbolic
    }

    /// `x^T Q y`.
    pub fn pairing(&self, x: (&BigInt, &BigInt), y: (&BigInt, &BigInt)) -> BigInt {
        let (qy0, qy1) = self.gram().apply(y);
        x.0 * qy0 + x.1 * qy1
    }

    pub fn norm(&self, x: (&BigInt, &BigInt)) -> BigInt {
        self.pairing(x, x)
    }

    /// `g^T Q g == Q`.
    pub fn is_isometry(&self, g: &Mat2) -> bool {
        let q = self.gram();
        &(&g.transpose() * &q) * g == q
    }

    fn form(&self) -> Form {
        Form::new(self.a.clone(), self.b.clone(), self.c.clone())
    }

    /// A fixed vector of positive norm; its component is taken as the positive
    /// cone. Only meaningful for signature (1,1).
    pub fn positive_vector(&self) -> (BigInt, BigInt) {
        if self.a.is_positive() {
            (BigInt::one(), BigInt::zero())
        } else if self.a.is_negative() {
            // f(-b, 2a) = -a D > 0.
            (-&self.b, 2 * &self.a)
        } else {
            let x = (self.c.abs() + 1u32) * self.b.signum();
            (x, BigInt::one())
        }
    }
}

impl fmt::Display for Lattice2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.gram())
    }
}

/// How an isometry acts on the discriminant group `A(L) = L*/L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DiscAction {
    PlusId,
    MinusId,
    Other,
}

impl fmt::Display for DiscAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DiscAction::PlusId => "+id",
            DiscAction::MinusId => "-id",
            DiscAction::Other => "other",
        })
    }
}

impl Serialize for DiscAction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// An isometry together with its invariants.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsometryAction {
    pub g: Mat2,
    pub det: i8,
    pub preserves_cone: bool,
    #[serde(serialize_with = "serde_big::big")]
    pub trace: BigInt,
    pub disc_action: DiscAction,
}

impl IsometryAction {
    /// Validates `g` and computes its invariants.
    pub fn of(lattice: &Lattice2, g: Mat2) -> Result<Self> {
        if !lattice.is_isometry(&g) {
            return Err(Error::NotIsometry);
        }
        let det = if g.det().is_one() { 1 } else { -1 };
        let preserves_cone = preserves_cone(lattice, &g);
        let disc_action = disc_action_unchecked(lattice, &g);
        Ok(Self {
            trace: g.trace(),
            g,
            det,
            preserves_cone,
            disc_action,
        })
    }
}

/// For signature (1,1): two positive vectors lie in the same cone component
/// iff their pairing is positive. Definite lattices have a connected
/// positive cone, so every isometry preserves it.
fn preserves_cone(lattice: &Lattice2, g: &Mat2) -> bool {
    if !lattice.is_hyperbolic() {
        return true;
    }
    let w = lattice.positive_vector();
    let gw = g.apply((&w.0, &w.1));
    lattice.pairing((&gw.0, &gw.1), (&w.0, &w.1)).is_positive()
}

/// `g(u, v) = [[(u - bv)/2, -cv], [av, (u + bv)/2]]` for a solution of
/// `u^2 - D v^2 = 4`.
pub fn isometry_from_pell(lattice: &Lattice2, sol: &PellSolution) -> Result<IsometryAction> {
    let d = lattice.pell_d();
    if sol.sign != PellSign::Plus || !sol.satisfies(&d) {
        return Err(Error::NotAPellSolution {
            u: sol.u.clone(),
            v: sol.v.clone(),
            d,
            expected: 4,
        });
    }
    let (a, b, c) = (&lattice.a, &lattice.b, &lattice.c);
    let bv = b * &sol.v;
    // u^2 = b^2 v^2 (mod 4) forces u = bv (mod 2).
    let lo = &sol.u - &bv;
    if lo.is_odd() {
        return Err(Error::Parity(lo));
    }
    let g = Mat2::new(lo / 2, -(c * &sol.v), a * &sol.v, (&sol.u + &bv) / 2);
    let action = IsometryAction::of(lattice, g)?;
    debug_assert_eq!(action.det, 1);
    Ok(action)
}

/// `g` acts as `eps * id` on `A(L)` iff `(g - eps I) Q^{-1}` is integral.
/// With `Q^{-1} = adj(Q) / det(Q)` this is a divisibility test.
pub fn disc_group_action(lattice: &Lattice2, g: &Mat2) -> Result<DiscAction> {
    if !lattice.is_isometry(g) {
        return Err(Error::NotIsometry);
    }
    Ok(disc_action_unchecked(lattice, g))
}

fn disc_action_unchecked(lattice: &Lattice2, g: &Mat2) -> DiscAction {
    let q = lattice.gram();
    let adj = q.adjugate();
    let det = q.det();
    let integral = |m: Mat2| {
        (&m * &adj)
            .entries()
            .into_iter()
            .all(|e| e.is_multiple_of(&det))
    };
    let id = Mat2::identity();
    if integral(g.sub(&id)) {
        DiscAction::PlusId
    } else if integral(g.add(&id)) {
        DiscAction::MinusId
    } else {
        DiscAction::Other
    }
}

/// Self-intersection searched for by [`find_roots`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootTarget {
    /// Nonzero isotropic vectors, `x^2 = 0`.
    Zero,
    /// Roots, `x^2 = -2`.
    MinusTwo,
}

/// Decides whether a nonzero `x` with `x^2 = 0` (resp. `-2`) exists and
/// returns one. `x^2 = 2 f(x)` for `f = a x^2 + b xy + c y^2`, so the
/// `-2` case asks whether `f` represents `-1`, answered by walking the cycle
/// of reduced forms.
pub fn find_roots(lattice: &Lattice2, target: RootTarget) -> Result<Option<(BigInt, BigInt)>> {
    if !lattice.is_hyperbolic() {
        return Err(Error::NotHyperbolic);
    }
    let f = lattice.form();
    match target {
        RootTarget::Zero => Ok(forms::isotropic_vector(&f)),
        RootTarget::MinusTwo => forms::represent_minus_one(&f),
    }
}

/// Generator of `SO+(L)` built from the fundamental solution of
/// `u^2 - D v^2 = 4`, or `None` when `D` is a square and the group is trivial.
pub fn so_plus_generator(lattice: &Lattice2) -> Result<Option<IsometryAction>> {
    if !lattice.is_hyperbolic() {
        return Err(Error::NotHyperbolic);
    }
    let d = lattice.pell_d();
    if is_square(&d) {
        return Ok(None);
    }
    let f = fundamentals(&d)?;
    isometry_from_pell(lattice, &f.plus).map(Some)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn make_lattice_examples() {
        let l = Lattice2::l_m_a(&big(2), &big(1)).unwrap();
        assert_eq!((l.a(), l.b(), l.c()), (&big(2), &big(2), &big(-2)));
        assert_eq!(l.pell_d(), big(20));
        assert_eq!(l.k(), big(2));
        assert_eq!(l.signature(), Signature::Hyperbolic);

        let l = Lattice2::l_b(&big(5)).unwrap();
        assert_eq!((l.pell_d(), l.k()), (big(21), big(1)));

        let l = make_lattice(1, 0, 1).unwrap();
        assert_eq!(l.pell_d(), big(-4));
        assert_eq!(l.signature(), Signature::PositiveDefinite);
        assert_eq!(
            make_lattice(-1, 1, -1).unwrap().signature(),
            Signature::NegativeDefinite
        );

        assert!(matches!(
            make_lattice(1, 2, 1),
            Err(Error::DegenerateLattice { .. })
        ));
    }

    #[test]
    fn isometry_from_pell_examples() {
        let l4 = Lattice2::l_b(&big(4)).unwrap();
        let act = isometry_from_pell(&l4, &PellSolution::new(4, 1, PellSign::Plus)).unwrap();
        assert_eq!(act.g, Mat2::from_i64([[0, -1], [1, 4]]));
        assert_eq!((act.trace.clone(), act.det), (big(4), 1));
        assert!(act.preserves_cone);

        let id = isometry_from_pell(&l4, &PellSolution::trivial()).unwrap();
        assert_eq!(id.g, Mat2::identity());

        let l = make_lattice(1, 1, -1).unwrap();
        let act = isometry_from_pell(&l, &PellSolution::new(3, 1, PellSign::Plus)).unwrap();
        assert_eq!(act.g, Mat2::from_i64([[1, 1], [1, 2]]));
        assert!(l.is_isometry(&act.g));
    }

    #[test]
    fn isometry_from_pell_rejects_bad_input() {
        let l = make_lattice(1, 1, -1).unwrap();
        assert!(matches!(
            isometry_from_pell(&l, &PellSolution::new(1, 1, PellSign::Minus)),
            Err(Error::NotAPellSolution { .. })
        ));
        assert!(matches!(
            isometry_from_pell(&l, &PellSolution::new(4, 1, PellSign::Plus)),
            Err(Error::NotAPellSolution { .. })
        ));
    }

    #[test]
    fn disc_action_examples() {
        let l4 = Lattice2::l_b(&big(4)).unwrap();
        let id = Mat2::identity();
        assert_eq!(disc_group_action(&l4, &id).unwrap(), DiscAction::PlusId);
        assert_eq!(disc_group_action(&l4, &-&id).unwrap(), DiscAction::MinusId);
        let c = Mat2::from_i64([[0, -1], [1, 4]]);
        assert_eq!(disc_group_action(&l4, &c).unwrap(), DiscAction::Other);
        assert_eq!(
            disc_group_action(&l4, &c.pow(2)).unwrap(),
            DiscAction::PlusId
        );
        assert!(matches!(
            disc_group_action(&l4, &Mat2::from_i64([[1, 1], [0, 1]])),
            Err(Error::NotIsometry)
        ));
    }

    #[test]
    fn find_roots_examples() {
        let l = Lattice2::l_m_a(&big(2), &big(1)).unwrap();
        assert_eq!(find_roots(&l, RootTarget::MinusTwo).unwrap(), None);
        assert_eq!(find_roots(&l, RootTarget::Zero).unwrap(), None);

        let l3 = Lattice2::l_b(&big(3)).unwrap();
        let (x, y) = find_roots(&l3, RootTarget::MinusTwo).unwrap().unwrap();
        assert_eq!(l3.norm((&x, &y)), big(-2));

        // b^2 - 4ac = 9
        let sq = make_lattice(1, 5, 4).unwrap();
        let (x, y) = find_roots(&sq, RootTarget::Zero).unwrap().unwrap();
        assert_eq!(sq.norm((&x, &y)), big(0));

        assert!(matches!(
            find_roots(&make_lattice(1, 0, 1).unwrap(), RootTarget::Zero),
            Err(Error::NotHyperbolic)
        ));
    }

    #[test]
    fn so_plus_generator_examples() {
        let g = so_plus_generator(&Lattice2::l_b(&big(4)).unwrap())
            .unwrap()
            .unwrap();
        assert_eq!(g.trace, big(4));
        // D = 16
        assert_eq!(
            so_plus_generator(&make_lattice(1, 6, 5).unwrap()).unwrap(),
            None
        );
        let g = so_plus_generator(&make_lattice(1, 1, -1).unwrap())
            .unwrap()
            .unwrap();
        assert_eq!(g.trace, big(3));
    }

    #[test]
    fn positive_vector_is_positive() {
        for a in -5..=5 {
            for b in -5..=5 {
                for c in -5..=5 {
                    let Ok(l) = make_lattice(a, b, c) else {
                        continue;
                    };
                    if l.is_hyperbolic() {
                        let w = l.positive_vector();
                        assert!(l.norm((&w.0, &w.1)).is_positive(), "{a} {b} {c}");
                    }
                }
            }
        }
    }
}
