//! Integral binary quadratic forms `a x^2 + b x y + c y^2` of positive
//! discriminant, and the question whether such a form takes the value `-1`.
//!
//! For non-square discriminant `D > 4`, a form represents `-1` exactly when
//! some reduced form in its cycle has first coefficient `-1`, so walking the
//! cycle once decides the question. Square discriminants factor over the
//! integers and are handled by divisor enumeration.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{isqrt_exact, isqrt_floor};
use crate::error::{Error, Result};
use crate::mat2::Mat2;

/// Hard limit on reduction and cycle steps.
pub const CYCLE_STEP_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Form {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

impl Form {
    pub fn new(a: BigInt, b: BigInt, c: BigInt) -> Self {
        Self { a, b, c }
    }

    pub fn discriminant(&self) -> BigInt {
        &self.b * &self.b - 4 * &self.a * &self.c
    }

    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        &self.a * x * x + &self.b * x * y + &self.c * y * y
    }

    /// `0 < b < sqrt(D)` and `sqrt(D) - b < 2|a| < sqrt(D) + b`, for
    /// non-square `D` with `root = floor(sqrt(D))`.
    fn is_reduced(&self, d: &BigInt, root: &BigInt) -> bool {
        if !self.b.is_positive() || self.b > *root {
            return false;
        }
        let t = 2 * self.a.abs();
        let upper_ok = {
            let diff: BigInt = &t - &self.b;
            !diff.is_positive() || &diff * &diff < *d
        };
        let sum = &t + &self.b;
        upper_ok && &sum * &sum > *d
    }

    /// One reduction step: `(a, b, c) -> (c, r, (r^2 - D) / 4c)` with
    /// `r = -b + 2cs`, realised by the substitution matrix `[[0, -1], [1, s]]`.
    fn rho(&self, d: &BigInt, root: &BigInt) -> (Form, Mat2) {
        let c_abs = self.c.abs();
        let modulus = 2 * &c_abs;
        let r = if &c_abs * &c_abs > *d {
            let r0 = (-&self.b).mod_floor(&modulus);
            if r0 > c_abs {
                r0 - &modulus
            } else {
                r0
            }
        } else {
            root - (root + &self.b).mod_floor(&modulus)
        };
        let s = (&r + &self.b) / (2 * &self.c);
        let next = Form::new(self.c.clone(), r.clone(), (&r * &r - d) / (4 * &self.c));
        let step = Mat2::new(BigInt::zero(), -BigInt::one(), BigInt::one(), s);
        (next, step)
    }
}

/// A vector `(x, y)` with `form(x, y) = -1`, or `None` if there is none.
pub fn represent_minus_one(form: &Form) -> Result<Option<(BigInt, BigInt)>> {
    let d = form.discriminant();
    if !d.is_positive() {
        return Err(Error::NotHyperbolic);
    }
    if let Some(s) = isqrt_exact(&d) {
        return Ok(represent_minus_one_split(form, &s));
    }
    represent_minus_one_cycle(form, &d)
}

fn represent_minus_one_cycle(form: &Form, d: &BigInt) -> Result<Option<(BigInt, BigInt)>> {
    let root = isqrt_floor(d);
    let minus_one = -BigInt::one();
    let mut current = form.clone();
    // Columns of `basis` are the images of the unit vectors, so the current
    // form is `form` evaluated on `basis * (x, y)`.
    let mut basis = Mat2::identity();

    let hit = |f: &Form, m: &Mat2| -> Option<(BigInt, BigInt)> {
        if f.a == minus_one {
            Some((m.e00.clone(), m.e10.clone()))
        } else if f.c == minus_one {
            Some((m.e01.clone(), m.e11.clone()))
        } else {
            None
        }
    };

    let mut steps = 0u64;
    while !current.is_reduced(d, &root) {
        if let Some(w) = hit(&current, &basis) {
            return Ok(Some(w));
        }
        let (next, step) = current.rho(d, &root);
        current = next;
        basis = &basis * &step;
        steps += 1;
        if steps > CYCLE_STEP_CAP {
            return Err(Error::CapExceeded {
                cap: CYCLE_STEP_CAP,
            });
        }
    }

    let start = current.clone();
    loop {
        if let Some(w) = hit(&current, &basis) {
            return Ok(Some(w));
        }
        let (next, step) = current.rho(d, &root);
        current = next;
        basis = &basis * &step;
        steps += 1;
        if current == start {
            return Ok(None);
        }
        if steps > CYCLE_STEP_CAP {
            return Err(Error::CapExceeded {
                cap: CYCLE_STEP_CAP,
            });
        }
    }
}

/// Square discriminant `D = s^2`, `s > 0`. With `a = 0` the form is
/// `y (b x + c y)`; otherwise `4a f = U W` for the integral linear forms
/// `U = 2a x + (b - s) y` and `W = 2a x + (b + s) y`.
fn represent_minus_one_split(form: &Form, s: &BigInt) -> Option<(BigInt, BigInt)> {
    let (a, b, c) = (&form.a, &form.b, &form.c);
    if a.is_zero() {
        // y = 1 and b x = -1 - c.
        let rhs = -(c + 1u32);
        return rhs.is_multiple_of(b).then(|| (rhs / b, BigInt::one()));
    }
    let target: BigInt = -4 * a;
    let n = target.abs();
    let mut i = BigInt::one();
    while &i * &i <= n {
        if n.is_multiple_of(&i) {
            let j = &n / &i;
            for base in [&i, &j] {
                for u in [base.clone(), -base] {
                    let w = &target / &u;
                    let y_num = &w - &u;
                    if !y_num.is_multiple_of(&(2 * s)) {
                        continue;
                    }
                    let y = y_num / (2 * s);
                    let x_num: BigInt = &u - (b - s) * &y;
                    if !x_num.is_multiple_of(&(2 * a)) {
                        continue;
                    }
                    let x = x_num / (2 * a);
                    debug_assert_eq!(form.eval(&x, &y), -BigInt::one());
                    return Some((x, y));
                }
            }
        }
        i += 1u32;
    }
    None
}

/// A nonzero isotropic vector when `D` is a perfect square.
pub fn isotropic_vector(form: &Form) -> Option<(BigInt, BigInt)> {
    let s = isqrt_exact(&form.discriminant())?;
    if form.a.is_zero() {
        return Some((BigInt::one(), BigInt::zero()));
    }
    let x = -&form.b + s;
    let y = 2 * &form.a;
    let g = x.gcd(&y);
    Some((x / &g, y / g))
}
