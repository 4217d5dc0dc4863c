use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::Monomial;
use crate::error::{Error, Result};
use crate::field::Field;

/// Sparse multivariate polynomial with terms kept in descending graded-lex order.
///
/// No stored coefficient is zero, so structural equality is value equality.
#[derive(Clone, Debug)]
pub struct SparsePoly<T: Field> {
    nvars: usize,
    ctx: T::Ctx,
    terms: Vec<(Monomial, T)>,
}

impl<T: Field> PartialEq for SparsePoly<T> {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.terms == other.terms
    }
}

impl<T: Field> SparsePoly<T> {
    pub fn zero(nvars: usize, ctx: &T::Ctx) -> Self {
        SparsePoly {
            nvars,
            ctx: ctx.clone(),
            terms: Vec::new(),
        }
    }

    pub fn one(nvars: usize, ctx: &T::Ctx) -> Self {
        Self::constant(nvars, T::one(ctx))
    }

    pub fn constant(nvars: usize, c: T) -> Self {
        let ctx = c.ctx();
        let terms = if c.is_zero() {
            Vec::new()
        } else {
            vec![(Monomial::one(nvars), c)]
        };
        SparsePoly { nvars, ctx, terms }
    }

    pub fn var(nvars: usize, ctx: &T::Ctx, i: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        SparsePoly {
            nvars,
            ctx: ctx.clone(),
            terms: vec![(Monomial::var(nvars, i, 1), T::one(ctx))],
        }
    }

    /// Builds a polynomial from arbitrary (possibly repeated, unordered) terms.
    pub fn from_terms<I>(nvars: usize, ctx: &T::Ctx, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, T)>,
    {
        let mut acc: HashMap<Monomial, T> = HashMap::new();
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars, "monomial has wrong variable count");
            match acc.entry(m) {
                Entry::Occupied(mut e) => *e.get_mut() += &c,
                Entry::Vacant(v) => {
                    v.insert(c);
                }
            }
        }
        Self::from_map(nvars, ctx, acc)
    }

    fn from_map(nvars: usize, ctx: &T::Ctx, acc: HashMap<Monomial, T>) -> Self {
        let mut terms: Vec<(Monomial, T)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        SparsePoly {
            nvars,
            ctx: ctx.clone(),
            terms,
        }
    }

    /// Wraps terms already sorted descending with nonzero coefficients.
    pub(crate) fn from_sorted_unchecked(nvars: usize, ctx: &T::Ctx, terms: Vec<(Monomial, T)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        debug_assert!(terms.iter().all(|(_, c)| !c.is_zero()));
        SparsePoly {
            nvars,
            ctx: ctx.clone(),
            terms,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn coeff_ctx(&self) -> &T::Ctx {
        &self.ctx
    }

    pub fn terms(&self) -> &[(Monomial, T)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, T)> {
        self.terms
    }

    /// Number of terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    /// The value of a constant polynomial.
    pub fn constant_value(&self) -> Option<T> {
        match self.terms.as_slice() {
            [] => Some(T::zero(&self.ctx)),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(self.terms.as_slice(), [(m, c)] if m.is_one() && c.is_one())
    }

    pub fn leading_term(&self) -> Option<&(Monomial, T)> {
        self.terms.first()
    }

    pub fn leading_coeff(&self) -> Option<&T> {
        self.terms.first().map(|(_, c)| c)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.first().map(|(m, _)| m.total_degree())
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.exponent(v) as u32).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((m, _)) => self.terms.iter().all(|(t, _)| t.total_degree() == m.total_degree()),
        }
    }

    pub fn uses_variable(&self, v: usize) -> bool {
        self.terms.iter().any(|(m, _)| m.exponent(v) > 0)
    }

    fn check_vars(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::VariableCountMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        Ok(self.merge(other, false))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        Ok(self.merge(other, true))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        Ok(self.mul_impl(other))
    }

    fn merge(&self, other: &Self, negate_other: bool) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    let c = if negate_other { -b[j].1.clone() } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate_other {
                        a[i].1.clone() - &b[j].1
                    } else {
                        a[i].1.clone() + &b[j].1
                    };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        for t in &b[j..] {
            let c = if negate_other { -t.1.clone() } else { t.1.clone() };
            out.push((t.0.clone(), c));
        }
        SparsePoly {
            nvars: self.nvars,
            ctx: self.ctx.clone(),
            terms: out,
        }
    }

    fn mul_impl(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.nvars, &self.ctx);
        }
        if other.terms.len() == 1 {
            let (m, c) = &other.terms[0];
            return self.mul_term(m, c);
        }
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            return other.mul_term(m, c);
        }
        let mut acc: HashMap<Monomial, T> = HashMap::with_capacity((self.len() * other.len()).min(1 << 20));
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                match acc.entry(ma.mul(mb)) {
                    Entry::Occupied(mut e) => e.get_mut().add_mul_assign(ca, cb),
                    Entry::Vacant(v) => {
                        v.insert(ca.clone() * cb);
                    }
                }
            }
        }
        Self::from_map(self.nvars, &self.ctx, acc)
    }

    /// Product with a single term; order is preserved.
    pub fn mul_term(&self, m: &Monomial, c: &T) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars, &self.ctx);
        }
        let terms = self
            .terms
            .iter()
            .map(|(t, d)| (t.mul(m), d.clone() * c))
            .collect();
        SparsePoly {
            nvars: self.nvars,
            ctx: self.ctx.clone(),
            terms,
        }
    }

    pub fn scale(&self, c: &T) -> Self {
        self.mul_term(&Monomial::one(self.nvars), c)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.nvars, &self.ctx);
        for _ in 0..n {
            acc = acc.mul_impl(self);
        }
        acc
    }

    /// Scales so the leading coefficient is one. Zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            None => self.clone(),
            Some(c) if c.is_one() => self.clone(),
            Some(c) => self.scale(&c.inv().expect("leading coefficient is nonzero")),
        }
    }

    /// Largest monomial dividing every term (one for the zero polynomial).
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.iter();
        match it.next() {
            None => Monomial::one(self.nvars),
            Some((m, _)) => it.fold(m.clone(), |g, (t, _)| g.gcd(t)),
        }
    }

    pub fn div_monomial(&self, m: &Monomial) -> Self {
        let terms = self.terms.iter().map(|(t, c)| (t.div(m), c.clone())).collect();
        SparsePoly {
            nvars: self.nvars,
            ctx: self.ctx.clone(),
            terms,
        }
    }

    /// Quotient `self / d` when `d` divides `self` exactly, otherwise `None`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        assert_eq!(self.nvars, d.nvars, "variable count mismatch");
        let (lm, lc) = d.leading_term()?;
        if self.is_zero() {
            return Some(self.clone());
        }
        let lc_inv = lc.inv().ok()?;
        if d.terms.len() == 1 {
            let mut terms = Vec::with_capacity(self.terms.len());
            for (m, c) in &self.terms {
                if !lm.divides(m) {
                    return None;
                }
                terms.push((m.div(lm), c.clone() * &lc_inv));
            }
            return Some(Self::from_sorted_unchecked(self.nvars, &self.ctx, terms));
        }
        // Degree bounds reject most non-divisors before any arithmetic.
        for v in 0..self.nvars {
            if d.degree_in(v) > self.degree_in(v) {
                return None;
            }
        }
        let mut rem: BTreeMap<Monomial, T> = self.terms.iter().cloned().collect();
        let mut quot = Vec::new();
        while let Some((m, c)) = rem.pop_last() {
            if !lm.divides(&m) {
                return None;
            }
            let qm = m.div(lm);
            let qc = c * &lc_inv;
            for (dm, dc) in &d.terms[1..] {
                let pm = qm.mul(dm);
                let prod = qc.clone() * dc;
                match rem.entry(pm) {
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        *e.get_mut() -= &prod;
                        if e.get().is_zero() {
                            e.remove();
                        }
                    }
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(-prod);
                    }
                }
            }
            quot.push((qm, qc));
        }
        Some(Self::from_sorted_unchecked(self.nvars, &self.ctx, quot))
    }

    /// Coefficients with respect to variable `v`: `self = sum_i out[i] * x_v^i`.
    pub fn coeffs_in(&self, v: usize) -> Vec<Self> {
        let deg = self.degree_in(v) as usize;
        let mut buckets: Vec<Vec<(Monomial, T)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            let e = m.exponent(v) as usize;
            let mut stripped = m.clone();
            stripped.set_exponent(v, 0);
            buckets[e].push((stripped, c.clone()));
        }
        // every term in a bucket loses the same power of x_v, so order is kept
        buckets
            .into_iter()
            .map(|ts| Self::from_sorted_unchecked(self.nvars, &self.ctx, ts))
            .collect()
    }

    /// Inverse of [`coeffs_in`](Self::coeffs_in).
    pub fn from_coeffs_in(nvars: usize, ctx: &T::Ctx, v: usize, coeffs: &[Self]) -> Self {
        let mut terms = Vec::new();
        for (e, c) in coeffs.iter().enumerate() {
            for (m, k) in &c.terms {
                debug_assert_eq!(m.exponent(v), 0);
                let mut mm = m.clone();
                mm.set_exponent(v, u8::try_from(e).expect("exponent overflow"));
                terms.push((mm, k.clone()));
            }
        }
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Self::from_sorted_unchecked(nvars, ctx, terms)
    }

    pub fn eval(&self, point: &[T]) -> T {
        self.eval_into(point, |c| c.clone())
    }

    /// Evaluates in another field after mapping each coefficient.
    pub fn eval_into<U: Field>(&self, point: &[U], map: impl Fn(&T) -> U) -> U {
        assert_eq!(point.len(), self.nvars, "point has wrong dimension");
        let zero_ctx = match point.first() {
            Some(p) => p.ctx(),
            None => {
                return self
                    .constant_value()
                    .map(|c| map(&c))
                    .expect("zero-variable polynomial is constant")
            }
        };
        let max_deg: Vec<u32> = (0..self.nvars).map(|v| self.degree_in(v)).collect();
        let powers: Vec<Vec<U>> = point
            .iter()
            .zip(&max_deg)
            .map(|(x, &d)| {
                let mut p = vec![U::one(&zero_ctx)];
                for i in 0..d as usize {
                    let next = p[i].clone() * x;
                    p.push(next);
                }
                p
            })
            .collect();
        let mut acc = U::zero(&zero_ctx);
        for (m, c) in &self.terms {
            let mut t = map(c);
            for (v, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t *= &powers[v][e as usize];
                }
            }
            acc += &t;
        }
        acc
    }

    pub fn map_coeffs<U: Field>(&self, ctx: &U::Ctx, map: impl Fn(&T) -> U) -> SparsePoly<U> {
        SparsePoly::from_terms(self.nvars, ctx, self.terms.iter().map(|(m, c)| (m.clone(), map(c))))
    }

    /// Renders with the given variable names, e.g. `-2·b_{32}^2·b_{10}`.
    pub fn to_text(&self, names: &[String]) -> String {
        assert_eq!(names.len(), self.nvars, "one name per variable");
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let cs = c.to_string();
            let (neg, mag) = match cs.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, cs),
            };
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors = Vec::new();
            if mag != "1" || m.is_one() {
                factors.push(mag);
            }
            // highest-index variable first, matching the term order
            for v in (0..self.nvars).rev() {
                match m.exponent(v) {
                    0 => {}
                    1 => factors.push(names[v].clone()),
                    e => factors.push(format!("{}^{}", names[v], e)),
                }
            }
            out.push_str(&factors.join("·"));
        }
        out
    }
}

impl<T: Field> fmt::Display for SparsePoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("x{i}")).collect();
        f.write_str(&self.to_text(&names))
    }
}

impl<'a, T: Field> Add<&'a SparsePoly<T>> for &'a SparsePoly<T> {
    type Output = SparsePoly<T>;
    fn add(self, rhs: &'a SparsePoly<T>) -> SparsePoly<T> {
        self.checked_add(rhs).expect("variable count mismatch")
    }
}

impl<'a, T: Field> Sub<&'a SparsePoly<T>> for &'a SparsePoly<T> {
    type Output = SparsePoly<T>;
    fn sub(self, rhs: &'a SparsePoly<T>) -> SparsePoly<T> {
        self.checked_sub(rhs).expect("variable count mismatch")
    }
}

impl<'a, T: Field> Mul<&'a SparsePoly<T>> for &'a SparsePoly<T> {
    type Output = SparsePoly<T>;
    fn mul(self, rhs: &'a SparsePoly<T>) -> SparsePoly<T> {
        self.checked_mul(rhs).expect("variable count mismatch")
    }
}

impl<T: Field> Neg for &SparsePoly<T> {
    type Output = SparsePoly<T>;
    fn neg(self) -> SparsePoly<T> {
        SparsePoly {
            nvars: self.nvars,
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}
