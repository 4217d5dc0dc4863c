use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::Rng;

use super::{division_by_zero, Field, RandomScalar, TextScalar};
use crate::error::{Error, Result};

/// A validated prime modulus below 2^63.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeModulus(u64);

impl PrimeModulus {
    pub fn new(p: u64) -> Result<Self> {
        if p >= 1 << 63 || !is_prime_u64(p) {
            return Err(Error::InvalidModulus(p));
        }
        Ok(PrimeModulus(p))
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Element of the prime field F_p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    value: u64,
    modulus: PrimeModulus,
}

impl Fp {
    pub fn new(value: u64, modulus: PrimeModulus) -> Self {
        Fp {
            value: value % modulus.0,
            modulus,
        }
    }

    pub fn from_i128(value: i128, modulus: PrimeModulus) -> Self {
        let m = modulus.0 as i128;
        Fp {
            value: value.rem_euclid(m) as u64,
            modulus,
        }
    }

    pub fn from_bigint(value: &BigInt, modulus: PrimeModulus) -> Self {
        let r = value.mod_floor(&BigInt::from(modulus.0));
        Fp {
            value: r.to_u64().expect("reduced residue fits in u64"),
            modulus,
        }
    }

    /// Residue in `[0, p)`.
    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> PrimeModulus {
        self.modulus
    }

    #[inline]
    fn check(self, other: Fp) {
        assert_eq!(self.modulus, other.modulus, "mixed prime moduli");
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(mut self, rhs: Fp) -> Fp {
        self += &rhs;
        self
    }
}

impl Add<&Fp> for Fp {
    type Output = Fp;
    fn add(mut self, rhs: &Fp) -> Fp {
        self += rhs;
        self
    }
}

impl AddAssign<&Fp> for Fp {
    fn add_assign(&mut self, rhs: &Fp) {
        self.check(*rhs);
        let s = self.value + rhs.value;
        self.value = if s >= self.modulus.0 { s - self.modulus.0 } else { s };
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(mut self, rhs: Fp) -> Fp {
        self -= &rhs;
        self
    }
}

impl Sub<&Fp> for Fp {
    type Output = Fp;
    fn sub(mut self, rhs: &Fp) -> Fp {
        self -= rhs;
        self
    }
}

impl SubAssign<&Fp> for Fp {
    fn sub_assign(&mut self, rhs: &Fp) {
        self.check(*rhs);
        self.value = if self.value >= rhs.value {
            self.value - rhs.value
        } else {
            self.value + self.modulus.0 - rhs.value
        };
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(mut self, rhs: Fp) -> Fp {
        self *= &rhs;
        self
    }
}

impl Mul<&Fp> for Fp {
    type Output = Fp;
    fn mul(mut self, rhs: &Fp) -> Fp {
        self *= rhs;
        self
    }
}

impl MulAssign<&Fp> for Fp {
    fn mul_assign(&mut self, rhs: &Fp) {
        self.check(*rhs);
        self.value = mul_mod(self.value, rhs.value, self.modulus.0);
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp {
            value: if self.value == 0 { 0 } else { self.modulus.0 - self.value },
            modulus: self.modulus,
        }
    }
}

impl Field for Fp {
    type Ctx = PrimeModulus;

    fn ctx(&self) -> PrimeModulus {
        self.modulus
    }

    fn zero(ctx: &PrimeModulus) -> Self {
        Fp { value: 0, modulus: *ctx }
    }

    fn one(ctx: &PrimeModulus) -> Self {
        Fp { value: 1, modulus: *ctx }
    }

    fn from_i64(ctx: &PrimeModulus, n: i64) -> Self {
        Fp::from_i128(n as i128, *ctx)
    }

    fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn is_one(&self) -> bool {
        self.value == 1
    }

    fn cardinality(ctx: &PrimeModulus) -> Option<u64> {
        Some(ctx.0)
    }

    /// Extended Euclid on (value, p).
    fn inv(&self) -> Result<Self> {
        if self.value == 0 {
            return division_by_zero();
        }
        let (mut r0, mut r1) = (self.modulus.0 as i128, self.value as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Ok(Fp::from_i128(t0, self.modulus))
    }

    fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        self.check(*a);
        self.check(*b);
        let m = self.modulus.0 as u128;
        self.value = ((self.value as u128 + a.value as u128 * b.value as u128) % m) as u64;
    }
}

impl TextScalar for Fp {
    /// Accepts decimal integers (any sign) and `a/b` fractions.
    fn parse_in(ctx: &PrimeModulus, s: &str) -> Result<Self> {
        let s = s.trim();
        let parse_int = |t: &str| -> Result<Fp> {
            let n: BigInt = t
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("not an integer: {t:?}")))?;
            Ok(Fp::from_bigint(&n, *ctx))
        };
        match s.split_once('/') {
            None => parse_int(s),
            Some((num, den)) => {
                let d = parse_int(den)?;
                if d.is_zero() {
                    return Err(Error::Parse(format!("denominator vanishes mod p in {s:?}")));
                }
                Ok(parse_int(num)? * d.inv()?)
            }
        }
    }
}

impl RandomScalar for Fp {
    fn random<R: Rng + ?Sized>(ctx: &PrimeModulus, rng: &mut R) -> Self {
        Fp {
            value: rng.gen_range(0..ctx.0),
            modulus: *ctx,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f(p: u64, v: u64) -> Fp {
        Fp::new(v, PrimeModulus::new(p).unwrap())
    }

    #[test]
    fn invert_examples() {
        assert_eq!(f(7, 3).inv().unwrap(), f(7, 5));
        assert_eq!(f(2, 1).inv().unwrap(), f(2, 1));
        assert_eq!(f(7, 0).inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn pow_examples() {
        assert_eq!(f(7, 2).pow_i(3).unwrap(), f(7, 1));
        assert_eq!(f(7, 4).pow_i(0).unwrap(), f(7, 1));
        assert_eq!(f(7, 3).pow_i(-1).unwrap(), f(7, 5));
        assert_eq!(f(7, 0).pow_i(-2), Err(Error::DivisionByZero));
    }

    #[test]
    fn modulus_validation() {
        assert!(PrimeModulus::new(10007).is_ok());
        assert!(PrimeModulus::new(1).is_err());
        assert!(PrimeModulus::new(9).is_err());
        assert!(PrimeModulus::new(561).is_err());
        assert!(PrimeModulus::new((1 << 61) - 1).is_ok());
    }

    #[test]
    fn primality_matches_trial_division() {
        for n in 0..5000u64 {
            let trial = n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
            assert_eq!(is_prime_u64(n), trial, "n = {n}");
        }
    }

    #[test]
    fn parse_forms() {
        let m = PrimeModulus::new(7).unwrap();
        assert_eq!(Fp::parse_in(&m, "-1").unwrap(), f(7, 6));
        assert_eq!(Fp::parse_in(&m, "3/2").unwrap(), f(7, 5));
        assert!(Fp::parse_in(&m, "1/7").is_err());
        assert!(Fp::parse_in(&m, "x").is_err());
    }

    #[test]
    fn agrees_with_bigint_arithmetic() {
        let m = PrimeModulus::new(1_000_000_007).unwrap();
        let p = BigInt::from(m.get());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let a: i64 = rng.gen();
            let b: i64 = rng.gen();
            let (ba, bb) = (BigInt::from(a), BigInt::from(b));
            let (fa, fb) = (Fp::from_i64(&m, a), Fp::from_i64(&m, b));
            assert_eq!(fa + fb, Fp::from_bigint(&(&ba + &bb), m));
            assert_eq!(fa - fb, Fp::from_bigint(&(&ba - &bb), m));
            assert_eq!(fa * fb, Fp::from_bigint(&(&ba * &bb), m));
            assert_eq!(BigInt::from(fa.value()), ba.mod_floor(&p));
        }
    }
}
