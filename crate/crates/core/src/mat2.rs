//! Exact 2x2 integer matrices.

use std::fmt;
use std::ops::{Mul, Neg};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

/// A 2x2 matrix over the integers, row major: `[[e00, e01], [e10, e11]]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mat2 {
    pub e00: BigInt,
    pub e01: BigInt,
    pub e10: BigInt,
    pub e11: BigInt,
}

impl Mat2 {
    pub fn new(e00: BigInt, e01: BigInt, e10: BigInt, e11: BigInt) -> Self {
        Self { e00, e01, e10, e11 }
    }

    pub fn from_i64(rows: [[i64; 2]; 2]) -> Self {
        Self::new(
            rows[0][0].into(),
            rows[0][1].into(),
            rows[1][0].into(),
            rows[1][1].into(),
        )
    }

    pub fn identity() -> Self {
        Self::new(BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one())
    }

    pub fn scalar(s: &BigInt) -> Self {
        Self::new(s.clone(), BigInt::zero(), BigInt::zero(), s.clone())
    }

    pub fn trace(&self) -> BigInt {
        &self.e00 + &self.e11
    }

    pub fn det(&self) -> BigInt {
        &self.e00 * &self.e11 - &self.e01 * &self.e10
    }

    pub fn transpose(&self) -> Self {
        Self::new(
            self.e00.clone(),
            self.e10.clone(),
            self.e01.clone(),
            self.e11.clone(),
        )
    }

    /// Adjugate, so that `m * m.adjugate() == det(m) * I`.
    pub fn adjugate(&self) -> Self {
        Self::new(self.e11.clone(), -&self.e01, -&self.e10, self.e00.clone())
    }

    pub fn sub(&self, rhs: &Mat2) -> Self {
        Self::new(
            &self.e00 - &rhs.e00,
            &self.e01 - &rhs.e01,
            &self.e10 - &rhs.e10,
            &self.e11 - &rhs.e11,
        )
    }

    pub fn add(&self, rhs: &Mat2) -> Self {
        Self::new(
            &self.e00 + &rhs.e00,
            &self.e01 + &rhs.e01,
            &self.e10 + &rhs.e10,
            &self.e11 + &rhs.e11,
        )
    }

    pub fn apply(&self, v: (&BigInt, &BigInt)) -> (BigInt, BigInt) {
        (
            &self.e00 * v.0 + &self.e01 * v.1,
            &self.e10 * v.0 + &self.e11 * v.1,
        )
    }

    pub fn entries(&self) -> [&BigInt; 4] {
        [&self.e00, &self.e01, &self.e10, &self.e11]
    }

    /// `self^n` by square-and-multiply.
    pub fn pow(&self, mut n: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity();
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }
}

impl Mul for &Mat2 {
    type Output = Mat2;

    fn mul(self, rhs: &Mat2) -> Mat2 {
        Mat2::new(
            &self.e00 * &rhs.e00 + &self.e01 * &rhs.e10,
            &self.e00 * &rhs.e01 + &self.e01 * &rhs.e11,
            &self.e10 * &rhs.e00 + &self.e11 * &rhs.e10,
            &self.e10 * &rhs.e01 + &self.e11 * &rhs.e11,
        )
    }
}

impl Mul for Mat2 {
    type Output = Mat2;

    fn mul(self, rhs: Mat2) -> Mat2 {
        &self * &rhs
    }
}

impl Neg for &Mat2 {
    type Output = Mat2;

    fn neg(self) -> Mat2 {
        Mat2::new(-&self.e00, -&self.e01, -&self.e10, -&self.e11)
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.e00, self.e01, self.e10, self.e11
        )
    }
}

/// Serialized as nested rows of decimal strings.
impl Serialize for Mat2 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows = [
            [self.e00.to_string(), self.e01.to_string()],
            [self.e10.to_string(), self.e11.to_string()],
        ];
        rows.serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pow_matches_repeated_multiplication() {
        let m = Mat2::from_i64([[0, 1], [1, 3]]);
        let mut acc = Mat2::identity();
        for n in 0..40 {
            assert_eq!(m.pow(n), acc);
            acc = &acc * &m;
        }
    }

    #[test]
    fn adjugate_inverts_up_to_det() {
        let m = Mat2::from_i64([[2, 5], [5, 2]]);
        assert_eq!(&m * &m.adjugate(), Mat2::scalar(&m.det()));
    }
}
