//! Exact field arithmetic.
//!
//! Every algorithm in the crate is generic over [`Field`]. Elements carry
//! whatever context they need (a modulus, a variable count) and the
//! associated [`Field::Ctx`] lets generic code build constants in the same
//! field without a sample element.

mod prime;
mod rational;
mod ratfunc;

use std::fmt::{Debug, Display};
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use rand::Rng;

use crate::error::{Error, Result};

pub use prime::{is_prime_u64, Fp, PrimeModulus};
pub use rational::Rational;
pub use ratfunc::{RatFuncCtx, RationalFunction};

/// An exact field. Arithmetic never rounds and `==` is decidable.
pub trait Field:
    Clone
    + PartialEq
    + Debug
    + Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
{
    /// Data identifying the field (modulus, variable count, ...).
    type Ctx: Clone + PartialEq + Debug + Send + Sync;

    fn ctx(&self) -> Self::Ctx;
    fn zero(ctx: &Self::Ctx) -> Self;
    fn one(ctx: &Self::Ctx) -> Self;
    fn from_i64(ctx: &Self::Ctx, n: i64) -> Self;
    fn is_zero(&self) -> bool;

    /// Number of elements, `None` when infinite.
    fn cardinality(ctx: &Self::Ctx) -> Option<u64>;

    fn inv(&self) -> Result<Self>;

    /// Rough storage size, counted in terms for polynomial-like fields.
    fn size_hint(&self) -> usize {
        1
    }

    fn is_one(&self) -> bool {
        *self == Self::one(&self.ctx())
    }

    /// `self += a * b`, the inner step of every elimination.
    fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        let mut t = a.clone();
        t *= b;
        *self += &t;
    }

    /// Integer power; negative exponents invert first.
    fn pow_i(&self, n: i64) -> Result<Self> {
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Self::one(&self.ctx());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc *= &sq;
            }
            e >>= 1;
            if e > 0 {
                let s = sq.clone();
                sq *= &s;
            }
        }
        Ok(acc)
    }
}

/// Fields whose elements have a canonical text form (`"3"`, `"-2/7"`).
pub trait TextScalar: Field {
    fn parse_in(ctx: &Self::Ctx, s: &str) -> Result<Self>;
}

/// Fields we can draw test and benchmark samples from.
pub trait RandomScalar: Field {
    fn random<R: Rng + ?Sized>(ctx: &Self::Ctx, rng: &mut R) -> Self;

    fn random_nonzero<R: Rng + ?Sized>(ctx: &Self::Ctx, rng: &mut R) -> Self {
        loop {
            let x = Self::random(ctx, rng);
            if !x.is_zero() {
                return x;
            }
        }
    }
}

/// Free-function form of [`Field::inv`].
pub fn invert<T: Field>(a: &T) -> Result<T> {
    a.inv()
}

/// Free-function form of [`Field::pow_i`].
pub fn scalar_pow<T: Field>(a: &T, n: i64) -> Result<T> {
    a.pow_i(n)
}

pub(crate) fn division_by_zero<T>() -> Result<T> {
    Err(Error::DivisionByZero)
}

/// Image of a rational number in `F_p`; fails when `p` divides the denominator.
pub fn rational_to_fp(q: &Rational, m: PrimeModulus) -> Result<Fp> {
    let den = Fp::from_bigint(q.denom(), m);
    Ok(Fp::from_bigint(q.numer(), m) * den.inv()?)
}
