use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use super::{division_by_zero, Field, RandomScalar, TextScalar};
use crate::error::{Error, Result};

/// Arbitrary-precision rationals, always in lowest terms with positive denominator.
pub type Rational = BigRational;

impl Field for BigRational {
    type Ctx = ();

    fn ctx(&self) {}

    fn zero(_: &()) -> Self {
        <BigRational as Zero>::zero()
    }

    fn one(_: &()) -> Self {
        <BigRational as One>::one()
    }

    fn from_i64(_: &(), n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn is_one(&self) -> bool {
        One::is_one(self)
    }

    fn cardinality(_: &()) -> Option<u64> {
        None
    }

    fn inv(&self) -> Result<Self> {
        if Zero::is_zero(self) {
            return division_by_zero();
        }
        Ok(self.recip())
    }
}

impl TextScalar for BigRational {
    fn parse_in(_: &(), s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((_, den)) = s.split_once('/') {
            if den.trim().parse::<BigInt>().map(|d| Zero::is_zero(&d)).unwrap_or(false) {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
        }
        s.parse::<BigRational>()
            .map_err(|_| Error::Parse(format!("not a rational: {s:?}")))
    }
}

/// Small integers in `[-3, 3]`; keeps sampled hypermatrices readable and
/// makes degenerate draws reasonably common.
impl RandomScalar for BigRational {
    fn random<R: Rng + ?Sized>(_: &(), rng: &mut R) -> Self {
        BigRational::from_integer(BigInt::from(rng.gen_range(-3i64..=3)))
    }
}
