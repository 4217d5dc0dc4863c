use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use super::{division_by_zero, Field};
use crate::error::Result;
use crate::poly::SparsePoly;

/// Field of fractions of `T[x_0, ..., x_{n-1}]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RatFuncCtx<T: Field> {
    pub nvars: usize,
    pub coeff: T::Ctx,
}

impl<T: Field> RatFuncCtx<T> {
    pub fn new(nvars: usize, coeff: T::Ctx) -> Self {
        RatFuncCtx { nvars, coeff }
    }
}

type Factors<T> = Vec<(SparsePoly<T>, u32)>;

/// Quotient of a polynomial by a product of powers of monic polynomials.
///
/// Denominators only ever arise by inverting a numerator, so the factor
/// list records exactly the polynomials that can cancel. Every operation
/// divides the new numerator by those factors while it can; when the
/// factors are irreducible this keeps the fraction in lowest terms without
/// any multivariate gcd. Variables dividing an inverted numerator are split
/// off as factors of their own.
#[derive(Debug, Clone)]
pub struct RationalFunction<T: Field> {
    num: SparsePoly<T>,
    den: Factors<T>,
}

fn expand<T: Field>(like: &SparsePoly<T>, factors: &[(SparsePoly<T>, u32)]) -> SparsePoly<T> {
    let mut out = SparsePoly::one(like.nvars(), like.coeff_ctx());
    for (f, e) in factors {
        for _ in 0..*e {
            out = &out * f;
        }
    }
    out
}

fn exponent_of<T: Field>(factors: &[(SparsePoly<T>, u32)], f: &SparsePoly<T>) -> u32 {
    factors.iter().find(|(g, _)| g == f).map_or(0, |(_, e)| *e)
}

fn same_factors<T: Field>(a: &[(SparsePoly<T>, u32)], b: &[(SparsePoly<T>, u32)]) -> bool {
    a.len() == b.len() && a.iter().all(|(f, e)| exponent_of(b, f) == *e)
}

/// Least common multiple of two factor lists, with the cofactors that lift
/// each side to it.
fn lcm<T: Field>(a: &[(SparsePoly<T>, u32)], b: &[(SparsePoly<T>, u32)]) -> (Factors<T>, Factors<T>, Factors<T>) {
    let mut l = a.to_vec();
    let mut lift_a = Vec::new();
    for (f, e) in b {
        match l.iter_mut().find(|(g, _)| g == f) {
            Some((_, le)) if *le >= *e => {}
            Some((_, le)) => {
                lift_a.push((f.clone(), *e - *le));
                *le = *e;
            }
            None => {
                lift_a.push((f.clone(), *e));
                l.push((f.clone(), *e));
            }
        }
    }
    let lift_b = l
        .iter()
        .filter_map(|(f, e)| {
            let d = *e - exponent_of(b, f);
            (d > 0).then(|| (f.clone(), d))
        })
        .collect();
    (l, lift_a, lift_b)
}

/// Divides `num` by the factors while they divide it.
fn cancel<T: Field>(num: &mut SparsePoly<T>, den: &mut Factors<T>) {
    if num.is_zero() {
        den.clear();
        return;
    }
    for (f, e) in den.iter_mut() {
        while *e > 0 {
            match num.div_exact(f) {
                Some(q) => {
                    *num = q;
                    *e -= 1;
                }
                None => break,
            }
        }
    }
    den.retain(|(_, e)| *e > 0);
}

impl<T: Field> RationalFunction<T> {
    pub fn from_poly(p: SparsePoly<T>) -> Self {
        RationalFunction { num: p, den: Vec::new() }
    }

    pub fn var(ctx: &RatFuncCtx<T>, i: usize) -> Self {
        Self::from_poly(SparsePoly::var(ctx.nvars, &ctx.coeff, i))
    }

    pub fn new(num: SparsePoly<T>, den: SparsePoly<T>) -> Result<Self> {
        assert_eq!(num.nvars(), den.nvars(), "variable count mismatch");
        Ok(Self::from_poly(num).product(&Self::from_poly(den).inv()?))
    }

    pub fn numerator(&self) -> &SparsePoly<T> {
        &self.num
    }

    /// The denominator, multiplied out; monic.
    pub fn denominator(&self) -> SparsePoly<T> {
        expand(&self.num, &self.den)
    }

    /// Total stored terms.
    pub fn size(&self) -> usize {
        self.num.len() + self.den.iter().map(|(f, _)| f.len()).sum::<usize>()
    }

    /// The polynomial this value equals, if it is one.
    pub fn to_polynomial(&self) -> Option<SparsePoly<T>> {
        if self.den.is_empty() {
            return Some(self.num.clone());
        }
        self.num.div_exact(&self.denominator())
    }

    /// Retries cancellation against every denominator factor.
    pub fn reduce(&mut self) {
        cancel(&mut self.num, &mut self.den);
    }

    pub fn reduced(mut self) -> Self {
        self.reduce();
        self
    }

    fn combine(&self, rhs: &Self, subtract: bool) -> Self {
        let op = |a: SparsePoly<T>, b: SparsePoly<T>| if subtract { &a - &b } else { &a + &b };
        let (mut num, mut den) = if same_factors(&self.den, &rhs.den) {
            (op(self.num.clone(), rhs.num.clone()), self.den.clone())
        } else {
            let (l, lift_a, lift_b) = lcm(&self.den, &rhs.den);
            let a = &self.num * &expand(&self.num, &lift_a);
            let b = &rhs.num * &expand(&rhs.num, &lift_b);
            (op(a, b), l)
        };
        cancel(&mut num, &mut den);
        RationalFunction { num, den }
    }

    fn product(&self, rhs: &Self) -> Self {
        if self.num.is_zero() || rhs.num.is_zero() {
            return Self::from_poly(SparsePoly::zero(self.num.nvars(), self.num.coeff_ctx()));
        }
        let (mut n1, mut d2) = (self.num.clone(), rhs.den.clone());
        let (mut n2, mut d1) = (rhs.num.clone(), self.den.clone());
        cancel(&mut n1, &mut d2);
        cancel(&mut n2, &mut d1);
        for (f, e) in d2 {
            match d1.iter_mut().find(|(g, _)| *g == f) {
                Some((_, de)) => *de += e,
                None => d1.push((f, e)),
            }
        }
        RationalFunction { num: &n1 * &n2, den: d1 }
    }
}

impl<T: Field> PartialEq for RationalFunction<T> {
    fn eq(&self, other: &Self) -> bool {
        if same_factors(&self.den, &other.den) {
            return self.num == other.num;
        }
        let (_, lift_a, lift_b) = lcm(&self.den, &other.den);
        &self.num * &expand(&self.num, &lift_a) == &other.num * &expand(&other.num, &lift_b)
    }
}

impl<T: Field> fmt::Display for RationalFunction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.denominator())
        }
    }
}

impl<T: Field> Add for RationalFunction<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.combine(&rhs, false)
    }
}

impl<T: Field> Add<&RationalFunction<T>> for RationalFunction<T> {
    type Output = Self;
    fn add(self, rhs: &Self) -> Self {
        self.combine(rhs, false)
    }
}

impl<T: Field> AddAssign<&RationalFunction<T>> for RationalFunction<T> {
    fn add_assign(&mut self, rhs: &Self) {
        *self = self.combine(rhs, false);
    }
}

impl<T: Field> Sub for RationalFunction<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.combine(&rhs, true)
    }
}

impl<T: Field> Sub<&RationalFunction<T>> for RationalFunction<T> {
    type Output = Self;
    fn sub(self, rhs: &Self) -> Self {
        self.combine(rhs, true)
    }
}

impl<T: Field> SubAssign<&RationalFunction<T>> for RationalFunction<T> {
    fn sub_assign(&mut self, rhs: &Self) {
        *self = self.combine(rhs, true);
    }
}

impl<T: Field> Mul for RationalFunction<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.product(&rhs)
    }
}

impl<T: Field> Mul<&RationalFunction<T>> for RationalFunction<T> {
    type Output = Self;
    fn mul(self, rhs: &Self) -> Self {
        self.product(rhs)
    }
}

impl<T: Field> MulAssign<&RationalFunction<T>> for RationalFunction<T> {
    fn mul_assign(&mut self, rhs: &Self) {
        *self = self.product(rhs);
    }
}

impl<T: Field> Neg for RationalFunction<T> {
    type Output = Self;
    fn neg(self) -> Self {
        RationalFunction {
            num: -&self.num,
            den: self.den,
        }
    }
}

impl<T: Field> Field for RationalFunction<T> {
    type Ctx = RatFuncCtx<T>;

    fn ctx(&self) -> RatFuncCtx<T> {
        RatFuncCtx::new(self.num.nvars(), self.num.coeff_ctx().clone())
    }

    fn zero(ctx: &RatFuncCtx<T>) -> Self {
        Self::from_poly(SparsePoly::zero(ctx.nvars, &ctx.coeff))
    }

    fn one(ctx: &RatFuncCtx<T>) -> Self {
        Self::from_poly(SparsePoly::one(ctx.nvars, &ctx.coeff))
    }

    fn from_i64(ctx: &RatFuncCtx<T>, n: i64) -> Self {
        Self::from_poly(SparsePoly::constant(ctx.nvars, T::from_i64(&ctx.coeff, n)))
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn is_one(&self) -> bool {
        self.den.is_empty() && self.num.is_one()
    }

    fn cardinality(_: &RatFuncCtx<T>) -> Option<u64> {
        None
    }

    fn inv(&self) -> Result<Self> {
        if self.num.is_zero() {
            return division_by_zero();
        }
        let (n, ctx) = (self.num.nvars(), self.num.coeff_ctx());
        let content = self.num.monomial_content();
        let rest = self.num.div_monomial(&content);
        let lc_inv = rest.leading_coeff().expect("nonzero").inv()?;
        let mut den: Factors<T> = (0..n)
            .filter(|&v| content.exponent(v) > 0)
            .map(|v| (SparsePoly::var(n, ctx, v), content.exponent(v) as u32))
            .collect();
        if !rest.is_constant() {
            den.push((rest.scale(&lc_inv), 1));
        }
        Ok(RationalFunction {
            num: expand(&self.num, &self.den).scale(&lc_inv),
            den,
        })
    }

    fn size_hint(&self) -> usize {
        self.size()
    }

    fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        let t = a.product(b);
        *self = self.combine(&t, false);
    }
}
