//! `2 x k x (k+1)` hypermatrices and the action of `GL_k x GL_{k+1}`.
//!
//! Entry `(s, r, c)` sits in slice `s`, row `r < k+1`, column `c < k`, so each
//! slice displays as a `(k+1) x k` matrix. A group element `(A, B)` sends
//! every slice `S` to `B * S * A^T`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Matrix;

#[derive(Debug, Clone, PartialEq)]
pub struct Hypermatrix<T: Field> {
    k: usize,
    ctx: T::Ctx,
    data: Vec<T>,
}

impl<T: Field> Hypermatrix<T> {
    pub fn zeros(ctx: &T::Ctx, k: usize) -> Self {
        assert!(k >= 1, "k must be positive");
        Hypermatrix {
            k,
            ctx: ctx.clone(),
            data: vec![T::zero(ctx); 2 * (k + 1) * k],
        }
    }

    /// The canonical nondegenerate hypermatrix: `[I; 0]` over `[0; I]`.
    pub fn identity(ctx: &T::Ctx, k: usize) -> Self {
        let mut m = Self::zeros(ctx, k);
        for i in 0..k {
            m.set(0, i, i, T::one(ctx));
            m.set(1, i + 1, i, T::one(ctx));
        }
        m
    }

    /// Builds from two `(k+1) x k` slices given row by row.
    pub fn from_slices(ctx: &T::Ctx, slices: [Vec<Vec<T>>; 2]) -> Result<Self> {
        let rows = slices[0].len();
        if rows < 2 {
            return Err(Error::DimensionMismatch(format!("slice has {rows} rows, need at least 2")));
        }
        let k = rows - 1;
        let mut data = Vec::with_capacity(2 * rows * k);
        for (s, slice) in slices.into_iter().enumerate() {
            if slice.len() != rows {
                return Err(Error::DimensionMismatch(format!(
                    "slice {s} has {} rows, expected {rows}",
                    slice.len()
                )));
            }
            for (r, row) in slice.into_iter().enumerate() {
                if row.len() != k {
                    return Err(Error::DimensionMismatch(format!(
                        "slice {s} row {r} has {} entries, expected {k}",
                        row.len()
                    )));
                }
                data.extend(row);
            }
        }
        Ok(Hypermatrix { k, ctx: ctx.clone(), data })
    }

    pub fn from_matrices(s0: &Matrix<T>, s1: &Matrix<T>) -> Result<Self> {
        Self::from_slices(s0.ctx(), [s0.to_rows(), s1.to_rows()])
    }

    pub fn from_fn(ctx: &T::Ctx, k: usize, mut f: impl FnMut(usize, usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(2 * (k + 1) * k);
        for s in 0..2 {
            for r in 0..=k {
                for c in 0..k {
                    data.push(f(s, r, c));
                }
            }
        }
        Hypermatrix { k, ctx: ctx.clone(), data }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn ctx(&self) -> &T::Ctx {
        &self.ctx
    }

    #[inline]
    fn idx(&self, s: usize, r: usize, c: usize) -> usize {
        (s * (self.k + 1) + r) * self.k + c
    }

    pub fn get(&self, s: usize, r: usize, c: usize) -> &T {
        &self.data[self.idx(s, r, c)]
    }

    pub fn set(&mut self, s: usize, r: usize, c: usize, v: T) {
        let i = self.idx(s, r, c);
        self.data[i] = v;
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    /// Slice `s` as a `(k+1) x k` matrix.
    pub fn slice(&self, s: usize) -> Matrix<T> {
        Matrix::from_fn(&self.ctx, self.k + 1, self.k, |r, c| self.get(s, r, c).clone())
    }

    pub fn slice_rows(&self, s: usize) -> Vec<Vec<T>> {
        self.slice(s).to_rows()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(&self.ctx, self.k)
    }

    // Unchecked primitives below return the number of scalar operations done.

    pub(crate) fn row_swap(&mut self, i: usize, j: usize) {
        let k = self.k;
        for s in 0..2 {
            for c in 0..k {
                let (a, b) = (self.idx(s, i, c), self.idx(s, j, c));
                self.data.swap(a, b);
            }
        }
    }

    pub(crate) fn col_swap(&mut self, i: usize, j: usize) {
        for s in 0..2 {
            for r in 0..=self.k {
                let (a, b) = (self.idx(s, r, i), self.idx(s, r, j));
                self.data.swap(a, b);
            }
        }
    }

    pub(crate) fn row_scale(&mut self, i: usize, f: &T) -> u64 {
        for s in 0..2 {
            for c in 0..self.k {
                let x = self.idx(s, i, c);
                self.data[x] *= f;
            }
        }
        2 * self.k as u64
    }

    pub(crate) fn col_scale(&mut self, i: usize, f: &T) -> u64 {
        for s in 0..2 {
            for r in 0..=self.k {
                let x = self.idx(s, r, i);
                self.data[x] *= f;
            }
        }
        2 * (self.k + 1) as u64
    }

    /// Row `i` += `f` * row `j` in both slices.
    pub(crate) fn row_addmul(&mut self, i: usize, j: usize, f: &T) -> u64 {
        for s in 0..2 {
            for c in 0..self.k {
                let src = self.data[self.idx(s, j, c)].clone();
                let x = self.idx(s, i, c);
                self.data[x].add_mul_assign(f, &src);
            }
        }
        4 * self.k as u64
    }

    /// Column `i` += `f` * column `j` in both slices.
    pub(crate) fn col_addmul(&mut self, i: usize, j: usize, f: &T) -> u64 {
        for s in 0..2 {
            for r in 0..=self.k {
                let src = self.data[self.idx(s, r, j)].clone();
                let x = self.idx(s, r, i);
                self.data[x].add_mul_assign(f, &src);
            }
        }
        4 * (self.k + 1) as u64
    }

    /// Applies one elementary operation to both slices.
    pub fn apply_op(&mut self, op: &OperationRecord<T>) -> Result<()> {
        op.validate(self.k)?;
        self.apply_op_unchecked(op);
        Ok(())
    }

    pub(crate) fn apply_op_unchecked(&mut self, op: &OperationRecord<T>) -> u64 {
        let (i, j) = (op.i, op.j);
        match (op.side, op.kind) {
            (Side::Row, OpKind::Swap) => {
                self.row_swap(i, j);
                0
            }
            (Side::Column, OpKind::Swap) => {
                self.col_swap(i, j);
                0
            }
            (Side::Row, OpKind::Scale) => self.row_scale(i, op.scalar()),
            (Side::Column, OpKind::Scale) => self.col_scale(i, op.scalar()),
            (Side::Row, OpKind::AddMul) => self.row_addmul(i, j, op.scalar()),
            (Side::Column, OpKind::AddMul) => self.col_addmul(i, j, op.scalar()),
        }
    }

    /// `c0 * S0^T + c1 * S1^T`, a `k x (k+1)` matrix.
    pub fn pencil(&self, c0: &T, c1: &T) -> Matrix<T> {
        Matrix::from_fn(&self.ctx, self.k, self.k + 1, |c, r| {
            let mut acc = T::zero(&self.ctx);
            acc.add_mul_assign(c0, self.get(0, r, c));
            acc.add_mul_assign(c1, self.get(1, r, c));
            acc
        })
    }

    /// `sum a[s][r][c] * u[s] * v[c] * w[r]`.
    pub fn multilinear_form(&self, u: &[T], v: &[T], w: &[T]) -> Result<T> {
        if u.len() != 2 || v.len() != self.k || w.len() != self.k + 1 {
            return Err(Error::DimensionMismatch(format!(
                "vectors of length {}, {}, {} for k = {}",
                u.len(),
                v.len(),
                w.len(),
                self.k
            )));
        }
        let mut acc = T::zero(&self.ctx);
        for (s, us) in u.iter().enumerate() {
            for (r, wr) in w.iter().enumerate() {
                let uw = us.clone() * wr;
                if uw.is_zero() {
                    continue;
                }
                for (c, vc) in v.iter().enumerate() {
                    let t = uw.clone() * vc;
                    acc.add_mul_assign(&t, self.get(s, r, c));
                }
            }
        }
        Ok(acc)
    }

    pub fn map<U: Field>(&self, ctx: &U::Ctx, f: impl Fn(&T) -> U) -> Hypermatrix<U> {
        Hypermatrix {
            k: self.k,
            ctx: ctx.clone(),
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl<T: Field> fmt::Display for Hypermatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in 0..2 {
            writeln!(f, "slice {s}:")?;
            write!(f, "{}", self.slice(s))?;
        }
        Ok(())
    }
}

pub fn identity_hypermatrix<T: Field>(ctx: &T::Ctx, k: usize) -> Hypermatrix<T> {
    Hypermatrix::identity(ctx, k)
}

pub fn pencil<T: Field>(m: &Hypermatrix<T>, c0: &T, c1: &T) -> Matrix<T> {
    m.pencil(c0, c1)
}

pub fn multilinear_form_eval<T: Field>(m: &Hypermatrix<T>, u: &[T], v: &[T], w: &[T]) -> Result<T> {
    m.multilinear_form(u, v, w)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Row,
    Column,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OpKind {
    Swap,
    Scale,
    AddMul,
}

/// One elementary operation on both slices at once.
///
/// `AddMul` means line `i` += `scalar` * line `j`; `Scale` multiplies line
/// `i` (with `j == i`); `Swap` exchanges lines `i` and `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperationRecord<T: Field> {
    pub side: Side,
    pub kind: OpKind,
    pub i: usize,
    pub j: usize,
    pub scalar: Option<T>,
}

impl<T: Field> OperationRecord<T> {
    pub fn swap(side: Side, i: usize, j: usize) -> Self {
        OperationRecord {
            side,
            kind: OpKind::Swap,
            i,
            j,
            scalar: None,
        }
    }

    pub fn scale(side: Side, i: usize, s: T) -> Self {
        OperationRecord {
            side,
            kind: OpKind::Scale,
            i,
            j: i,
            scalar: Some(s),
        }
    }

    pub fn addmul(side: Side, i: usize, j: usize, s: T) -> Self {
        OperationRecord {
            side,
            kind: OpKind::AddMul,
            i,
            j,
            scalar: Some(s),
        }
    }

    fn scalar(&self) -> &T {
        self.scalar.as_ref().expect("operation carries a scalar")
    }

    pub fn validate(&self, k: usize) -> Result<()> {
        let bound = match self.side {
            Side::Row => k + 1,
            Side::Column => k,
        };
        for idx in [self.i, self.j] {
            if idx >= bound {
                return Err(Error::IndexOutOfRange { index: idx, bound });
            }
        }
        match self.kind {
            OpKind::Swap => Ok(()),
            OpKind::Scale => match &self.scalar {
                None => Err(Error::InvalidOperation("scale without scalar".into())),
                Some(s) if s.is_zero() => Err(Error::ZeroScale),
                Some(_) if self.i != self.j => Err(Error::InvalidOperation("scale needs i == j".into())),
                Some(_) => Ok(()),
            },
            OpKind::AddMul => {
                if self.i == self.j {
                    Err(Error::InvalidOperation("addmul needs i != j".into()))
                } else if self.scalar.is_none() {
                    Err(Error::InvalidOperation("addmul without scalar".into()))
                } else {
                    Ok(())
                }
            }
        }
    }

    /// The matrix `E` with `E * X` performing this operation on the rows of `X`.
    pub fn elementary_matrix(&self, ctx: &T::Ctx, n: usize) -> Matrix<T> {
        let mut e = Matrix::identity(ctx, n);
        self.apply_to_rows(&mut e);
        e
    }

    pub(crate) fn apply_to_rows(&self, m: &mut Matrix<T>) {
        match self.kind {
            OpKind::Swap => m.swap_rows(self.i, self.j),
            OpKind::Scale => m.scale_row(self.i, self.scalar()),
            OpKind::AddMul => m.add_row_multiple(self.i, self.j, self.scalar()),
        }
    }

    /// Determinant of the elementary matrix.
    pub fn det(&self, ctx: &T::Ctx) -> T {
        match self.kind {
            OpKind::Swap if self.i != self.j => -T::one(ctx),
            OpKind::Swap | OpKind::AddMul => T::one(ctx),
            OpKind::Scale => self.scalar().clone(),
        }
    }

    /// The group element acting as this operation.
    pub fn group_element(&self, ctx: &T::Ctx, k: usize) -> GroupElement<T> {
        match self.side {
            Side::Row => GroupElement {
                a: Matrix::identity(ctx, k),
                b: self.elementary_matrix(ctx, k + 1),
            },
            // column i += s column j is S * E^T with E the row form
            Side::Column => GroupElement {
                a: self.elementary_matrix(ctx, k),
                b: Matrix::identity(ctx, k + 1),
            },
        }
    }
}

/// In-place elementary operation with validation.
pub fn elementary_op<T: Field>(m: &mut Hypermatrix<T>, op: &OperationRecord<T>) -> Result<()> {
    m.apply_op(op)
}

/// A pair `(A, B)` in `GL_k x GL_{k+1}`.
///
/// Equality with [`GroupElement::equivalent`] is taken modulo the scalar
/// pairs `(c I, c^-1 I)`, which act trivially.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement<T: Field> {
    a: Matrix<T>,
    b: Matrix<T>,
}

impl<T: Field> GroupElement<T> {
    pub fn new(a: Matrix<T>, b: Matrix<T>) -> Result<Self> {
        let k = a.rows();
        if k == 0 || !a.is_square() || b.rows() != k + 1 || !b.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "group element with A {}x{} and B {}x{}",
                a.rows(),
                a.cols(),
                b.rows(),
                b.cols()
            )));
        }
        if a.det()?.is_zero() || b.det()?.is_zero() {
            return Err(Error::NotInvertible);
        }
        Ok(GroupElement { a, b })
    }

    pub fn identity(ctx: &T::Ctx, k: usize) -> Self {
        GroupElement {
            a: Matrix::identity(ctx, k),
            b: Matrix::identity(ctx, k + 1),
        }
    }

    pub fn k(&self) -> usize {
        self.a.rows()
    }

    /// Column-side factor in `GL_k`.
    pub fn a(&self) -> &Matrix<T> {
        &self.a
    }

    /// Row-side factor in `GL_{k+1}`.
    pub fn b(&self) -> &Matrix<T> {
        &self.b
    }

    pub(crate) fn parts_mut(&mut self) -> (&mut Matrix<T>, &mut Matrix<T>) {
        (&mut self.a, &mut self.b)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        Ok(GroupElement {
            a: self.a.mul(&other.a)?,
            b: self.b.mul(&other.b)?,
        })
    }

    pub fn inverse(&self) -> Result<Self> {
        Ok(GroupElement {
            a: self.a.inverse()?,
            b: self.b.inverse()?,
        })
    }

    pub fn det_a(&self) -> T {
        self.a.det().expect("square")
    }

    pub fn det_b(&self) -> T {
        self.b.det().expect("square")
    }

    /// Representative with the first nonzero entry of `A` (row-major) equal to one.
    pub fn canonical(&self) -> Self {
        let lead = (0..self.k())
            .flat_map(|r| self.a.row(r).iter())
            .find(|x| !x.is_zero())
            .expect("invertible A has a nonzero entry")
            .clone();
        let inv = lead.inv().expect("nonzero");
        GroupElement {
            a: self.a.scale(&inv),
            b: self.b.scale(&lead),
        }
    }

    /// Equality in the quotient by the scalar pairs.
    pub fn equivalent(&self, other: &Self) -> bool {
        self.k() == other.k() && self.canonical() == other.canonical()
    }

    /// Whether `A = c I` and `B = c^-1 I` for some `c`.
    pub fn is_trivial(&self) -> bool {
        match (self.a.scalar_value(), self.b.scalar_value()) {
            (Some(ca), Some(cb)) => !ca.is_zero() && (ca * &cb).is_one(),
            _ => false,
        }
    }
}

/// `S -> B * S * A^T` on each slice.
pub fn apply_group<T: Field>(g: &GroupElement<T>, m: &Hypermatrix<T>) -> Result<Hypermatrix<T>> {
    if g.k() != m.k() {
        return Err(Error::DimensionMismatch(format!(
            "group element for k = {} applied to k = {}",
            g.k(),
            m.k()
        )));
    }
    let at = g.a.transpose();
    let s0 = g.b.mul(&m.slice(0))?.mul(&at)?;
    let s1 = g.b.mul(&m.slice(1))?.mul(&at)?;
    Hypermatrix::from_matrices(&s0, &s1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fp, PrimeModulus, RandomScalar, Rational};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(v: i64) -> Rational {
        Rational::from_i64(&(), v)
    }

    fn qrows(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect()
    }

    pub(crate) fn random_invertible(m: &PrimeModulus, n: usize, rng: &mut ChaCha8Rng) -> Matrix<Fp> {
        loop {
            let a = Matrix::from_fn(m, n, n, |_, _| Fp::random(m, rng));
            if !a.det().unwrap().is_zero() {
                return a;
            }
        }
    }

    fn random_group(m: &PrimeModulus, k: usize, rng: &mut ChaCha8Rng) -> GroupElement<Fp> {
        GroupElement::new(random_invertible(m, k, rng), random_invertible(m, k + 1, rng)).unwrap()
    }

    fn random_hm(m: &PrimeModulus, k: usize, rng: &mut ChaCha8Rng) -> Hypermatrix<Fp> {
        Hypermatrix::from_fn(m, k, |_, _, _| Fp::random(m, rng))
    }

    #[test]
    fn identity_shapes() {
        let i1 = Hypermatrix::<Rational>::identity(&(), 1);
        assert_eq!(i1.slice_rows(0), qrows(&[&[1], &[0]]));
        assert_eq!(i1.slice_rows(1), qrows(&[&[0], &[1]]));
        let i2 = Hypermatrix::<Rational>::identity(&(), 2);
        assert_eq!(i2.slice_rows(0), qrows(&[&[1, 0], &[0, 1], &[0, 0]]));
        assert_eq!(i2.slice_rows(1), qrows(&[&[0, 0], &[1, 0], &[0, 1]]));
        let i3 = Hypermatrix::<Rational>::identity(&(), 3);
        assert_eq!(i3.slice_rows(0), qrows(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]));
        assert_eq!(i3.slice_rows(1), qrows(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]));
        assert_eq!(i3.entries().len(), 24);
    }

    #[test]
    fn from_slices_rejects_bad_shapes() {
        assert!(Hypermatrix::<Rational>::from_slices(&(), [qrows(&[&[1], &[0]]), qrows(&[&[1]])]).is_err());
        assert!(Hypermatrix::<Rational>::from_slices(&(), [qrows(&[&[1, 0], &[0]]), qrows(&[&[1], &[0]])]).is_err());
        assert!(Hypermatrix::<Rational>::from_slices(&(), [qrows(&[&[1]]), qrows(&[&[1]])]).is_err());
    }

    #[test]
    fn diagonal_column_scaling() {
        let a = Matrix::from_rows(&(), qrows(&[&[2, 0], &[0, 1]])).unwrap();
        let g = GroupElement::new(a, Matrix::identity(&(), 3)).unwrap();
        let m = apply_group(&g, &Hypermatrix::identity(&(), 2)).unwrap();
        assert_eq!(m.slice_rows(0), qrows(&[&[2, 0], &[0, 1], &[0, 0]]));
        assert_eq!(m.slice_rows(1), qrows(&[&[0, 0], &[2, 0], &[0, 1]]));
    }

    #[test]
    fn row_swap_on_identity() {
        let mut m = Hypermatrix::<Rational>::identity(&(), 3);
        m.apply_op(&OperationRecord::swap(Side::Row, 0, 1)).unwrap();
        assert_eq!(m.slice_rows(0), qrows(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1], &[0, 0, 0]]));
        assert_eq!(m.slice_rows(1), qrows(&[&[1, 0, 0], &[0, 0, 0], &[0, 1, 0], &[0, 0, 1]]));
    }

    #[test]
    fn op_validation() {
        let mut m = Hypermatrix::<Rational>::identity(&(), 2);
        assert_eq!(
            m.apply_op(&OperationRecord::scale(Side::Row, 0, q(0))),
            Err(Error::ZeroScale)
        );
        assert_eq!(
            m.apply_op(&OperationRecord::swap(Side::Column, 0, 2)),
            Err(Error::IndexOutOfRange { index: 2, bound: 2 })
        );
        assert!(m.apply_op(&OperationRecord::swap(Side::Row, 0, 2)).is_ok());
        assert!(m.apply_op(&OperationRecord::addmul(Side::Row, 1, 1, q(2))).is_err());
    }

    #[test]
    fn scale_then_unscale() {
        let mut m = Hypermatrix::from_fn(&(), 3, |s, r, c| q((s * 7 + r * 3 + c) as i64 - 5));
        let orig = m.clone();
        m.apply_op(&OperationRecord::scale(Side::Row, 2, q(3))).unwrap();
        m.apply_op(&OperationRecord::scale(Side::Row, 2, q(3).inv().unwrap())).unwrap();
        assert_eq!(m, orig);
    }

    #[test]
    fn scalar_pairs_act_trivially() {
        let p = PrimeModulus::new(10007).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let k = rng.gen_range(1..6);
            let c = Fp::random_nonzero(&p, &mut rng);
            let g = GroupElement::new(Matrix::scalar(&p, k, &c), Matrix::scalar(&p, k + 1, &c.inv().unwrap())).unwrap();
            assert!(g.is_trivial());
            let m = random_hm(&p, k, &mut rng);
            assert_eq!(apply_group(&g, &m).unwrap(), m);
        }
    }

    #[test]
    fn action_is_a_homomorphism() {
        let p = PrimeModulus::new(10007).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            let k = rng.gen_range(1..6);
            let (g1, g2) = (random_group(&p, k, &mut rng), random_group(&p, k, &mut rng));
            let m = random_hm(&p, k, &mut rng);
            let lhs = apply_group(&g1, &apply_group(&g2, &m).unwrap()).unwrap();
            let rhs = apply_group(&g1.compose(&g2).unwrap(), &m).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn elementary_ops_match_their_matrices() {
        let p = PrimeModulus::new(101).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for k in 1..=5 {
            for side in [Side::Row, Side::Column] {
                for kind in [OpKind::Swap, OpKind::Scale, OpKind::AddMul] {
                    for _ in 0..10 {
                        let bound = if side == Side::Row { k + 1 } else { k };
                        if kind == OpKind::AddMul && bound == 1 {
                            continue;
                        }
                        let i = rng.gen_range(0..bound);
                        let j = loop {
                            let j = rng.gen_range(0..bound);
                            if kind != OpKind::AddMul || j != i {
                                break j;
                            }
                        };
                        let s = Fp::random_nonzero(&p, &mut rng);
                        let op = match kind {
                            OpKind::Swap => OperationRecord::swap(side, i, j),
                            OpKind::Scale => OperationRecord::scale(side, i, s),
                            OpKind::AddMul => OperationRecord::addmul(side, i, j, s),
                        };
                        let m = random_hm(&p, k, &mut rng);
                        let mut direct = m.clone();
                        direct.apply_op(&op).unwrap();
                        let g = op.group_element(&p, k);
                        assert_eq!(apply_group(&g, &m).unwrap(), direct, "{op:?}");
                        let det = if side == Side::Row { g.det_b() } else { g.det_a() };
                        assert_eq!(det, op.det(&p));
                    }
                }
            }
        }
    }

    #[test]
    fn multilinear_form_follows_the_action() {
        let p = PrimeModulus::new(10007).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let k = rng.gen_range(1..5);
            let m = random_hm(&p, k, &mut rng);
            let g = random_group(&p, k, &mut rng);
            let rv = |n: usize, rng: &mut ChaCha8Rng| (0..n).map(|_| Fp::random(&p, rng)).collect::<Vec<_>>();
            let (u, v, w) = (rv(2, &mut rng), rv(k, &mut rng), rv(k + 1, &mut rng));
            let lhs = apply_group(&g, &m).unwrap().multilinear_form(&u, &v, &w).unwrap();
            let v2 = g.a().transpose().mul_vec(&v).unwrap();
            let w2 = g.b().transpose().mul_vec(&w).unwrap();
            assert_eq!(lhs, m.multilinear_form(&u, &v2, &w2).unwrap());
            let zero = vec![Fp::from_i64(&p, 0); 2];
            assert!(m.multilinear_form(&zero, &v, &w).unwrap().is_zero());
        }
        let i1 = Hypermatrix::<Rational>::identity(&(), 1);
        assert_eq!(i1.multilinear_form(&[q(1), q(0)], &[q(1)], &[q(1), q(0)]).unwrap(), q(1));
        assert!(i1.multilinear_form(&[q(1)], &[q(1)], &[q(1), q(0)]).is_err());
    }

    #[test]
    fn pencil_orientation() {
        for k in 1..5 {
            let i = Hypermatrix::<Rational>::identity(&(), k);
            let p = i.pencil(&q(1), &q(0));
            assert_eq!((p.rows(), p.cols()), (k, k + 1));
            assert_eq!(p.rank(), k);
            for r in 0..k {
                for c in 0..=k {
                    assert_eq!(p[(r, c)], q((r == c) as i64));
                }
            }
        }
        let m = Hypermatrix::from_fn(&(), 3, |_, r, c| q((r * 3 + c) as i64));
        assert!(m.pencil(&q(1), &q(-1)).is_zero());
    }

    #[test]
    fn canonical_representative() {
        let p = PrimeModulus::new(10007).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let k = rng.gen_range(1..5);
            let g = random_group(&p, k, &mut rng);
            let c = g.canonical();
            assert_eq!(c.canonical(), c);
            let s = Fp::random_nonzero(&p, &mut rng);
            let h = GroupElement::new(g.a().scale(&s), g.b().scale(&s.inv().unwrap())).unwrap();
            assert!(h.equivalent(&g));
            assert!(g.compose(&g.inverse().unwrap()).unwrap().is_trivial());
        }
    }

    #[test]
    fn triviality_examples() {
        let g = GroupElement::new(Matrix::scalar(&(), 2, &q(3)), Matrix::scalar(&(), 3, &q(3).inv().unwrap())).unwrap();
        assert!(g.is_trivial());
        let h = GroupElement::new(Matrix::identity(&(), 2), Matrix::scalar(&(), 3, &q(2))).unwrap();
        assert!(!h.is_trivial());
        assert_eq!(
            GroupElement::<Rational>::new(Matrix::zeros(&(), 2, 2), Matrix::identity(&(), 3)),
            Err(Error::NotInvertible)
        );
        assert!(GroupElement::<Rational>::new(Matrix::identity(&(), 2), Matrix::identity(&(), 2)).is_err());
    }
}
