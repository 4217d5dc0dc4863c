//! Dense matrices over an exact field.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::field::Field;

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T: Field> {
    rows: usize,
    cols: usize,
    ctx: T::Ctx,
    data: Vec<T>,
}

impl<T: Field> Matrix<T> {
    pub fn zeros(ctx: &T::Ctx, rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            ctx: ctx.clone(),
            data: vec![T::zero(ctx); rows * cols],
        }
    }

    pub fn identity(ctx: &T::Ctx, n: usize) -> Self {
        let mut m = Self::zeros(ctx, n, n);
        for i in 0..n {
            m[(i, i)] = T::one(ctx);
        }
        m
    }

    pub fn scalar(ctx: &T::Ctx, n: usize, c: &T) -> Self {
        let mut m = Self::zeros(ctx, n, n);
        for i in 0..n {
            m[(i, i)] = c.clone();
        }
        m
    }

    pub fn from_rows(ctx: &T::Ctx, rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            ctx: ctx.clone(),
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(ctx: &T::Ctx, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix {
            rows,
            cols,
            ctx: ctx.clone(),
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn ctx(&self) -> &T::Ctx {
        &self.ctx
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(&self.ctx, self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn scale(&self, s: &T) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            ctx: self.ctx.clone(),
            data: self.data.iter().map(|x| x.clone() * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} + {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            ctx: self.ctx.clone(),
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.clone() + b).collect(),
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(&self.ctx, self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = &self[(i, l)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j].add_mul_assign(a, &other[(l, j)]);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!("{} columns, vector of {}", self.cols, v.len())));
        }
        Ok((0..self.rows)
            .map(|r| {
                let mut acc = T::zero(&self.ctx);
                for (a, x) in self.row(r).iter().zip(v) {
                    acc.add_mul_assign(a, x);
                }
                acc
            })
            .collect())
    }

    pub fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    pub fn scale_row(&mut self, i: usize, s: &T) {
        for x in &mut self.data[i * self.cols..(i + 1) * self.cols] {
            *x *= s;
        }
    }

    /// Row `i` += `s` * row `j`.
    pub fn add_row_multiple(&mut self, i: usize, j: usize, s: &T) {
        assert_ne!(i, j, "row added to itself");
        for c in 0..self.cols {
            let t = self.data[j * self.cols + c].clone();
            self.data[i * self.cols + c].add_mul_assign(s, &t);
        }
    }

    /// Row echelon form in place; returns pivot columns and the sign of the
    /// row permutation.
    fn echelon(&mut self) -> (Vec<usize>, bool) {
        let mut pivots = Vec::new();
        let mut odd = false;
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            if p != r {
                self.swap_rows(p, r);
                odd = !odd;
            }
            let inv = self[(r, c)].inv().expect("pivot is nonzero");
            for i in r + 1..self.rows {
                if self[(i, c)].is_zero() {
                    continue;
                }
                let f = -(self[(i, c)].clone() * &inv);
                self.add_row_multiple(i, r, &f);
            }
            pivots.push(c);
            r += 1;
        }
        (pivots, odd)
    }

    pub fn rank(&self) -> usize {
        self.clone().echelon().0.len()
    }

    pub fn det(&self) -> Result<T> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!("det of {}x{}", self.rows, self.cols)));
        }
        let mut m = self.clone();
        let (pivots, odd) = m.echelon();
        if pivots.len() < self.rows {
            return Ok(T::zero(&self.ctx));
        }
        let mut d = T::one(&self.ctx);
        for i in 0..self.rows {
            d *= &m[(i, i)];
        }
        Ok(if odd { -d } else { d })
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!("inverse of {}x{}", self.rows, self.cols)));
        }
        let n = self.rows;
        let mut aug = Self::from_fn(&self.ctx, n, 2 * n, |r, c| {
            if c < n {
                self[(r, c)].clone()
            } else if c - n == r {
                T::one(&self.ctx)
            } else {
                T::zero(&self.ctx)
            }
        });
        for c in 0..n {
            let p = (c..n).find(|&i| !aug[(i, c)].is_zero()).ok_or(Error::NotInvertible)?;
            aug.swap_rows(p, c);
            let inv = aug[(c, c)].inv()?;
            aug.scale_row(c, &inv);
            for i in 0..n {
                if i != c && !aug[(i, c)].is_zero() {
                    let f = -aug[(i, c)].clone();
                    aug.add_row_multiple(i, c, &f);
                }
            }
        }
        Ok(Self::from_fn(&self.ctx, n, n, |r, c| aug[(r, c + n)].clone()))
    }

    /// Basis of `{x : self * x = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<T>> {
        let mut m = self.clone();
        let (pivots, _) = m.echelon();
        // back-substitute to reduced form
        for (r, &c) in pivots.iter().enumerate().rev() {
            let inv = m[(r, c)].inv().expect("pivot is nonzero");
            m.scale_row(r, &inv);
            for i in 0..r {
                if !m[(i, c)].is_zero() {
                    let f = -m[(i, c)].clone();
                    m.add_row_multiple(i, r, &f);
                }
            }
        }
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![T::zero(&self.ctx); self.cols];
                v[f] = T::one(&self.ctx);
                for (r, &c) in pivots.iter().enumerate() {
                    v[c] = -m[(r, f)].clone();
                }
                v
            })
            .collect()
    }

    /// `Some(c)` when the matrix equals `c * I`.
    pub fn scalar_value(&self) -> Option<T> {
        if !self.is_square() || self.rows == 0 {
            return None;
        }
        let c = self[(0, 0)].clone();
        for r in 0..self.rows {
            for col in 0..self.cols {
                let ok = if r == col { self[(r, col)] == c } else { self[(r, col)].is_zero() };
                if !ok {
                    return None;
                }
            }
        }
        Some(c)
    }
}

impl<T: Field> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (r, c): (usize, usize)) -> &T {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl<T: Field> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut T {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl<T: Field> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fp, PrimeModulus, RandomScalar, Rational};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(
            &(),
            rows.iter()
                .map(|r| r.iter().map(|&v| Rational::from_i64(&(), v)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn identity_basics() {
        let i = Matrix::<Rational>::identity(&(), 4);
        assert!(i.det().unwrap().is_one());
        assert_eq!(i.rank(), 4);
        assert_eq!(i.inverse().unwrap(), i);
        assert!(i.nullspace().is_empty());
    }

    #[test]
    fn rank_of_padded_identity() {
        // [I_3 | 0]
        let m = Matrix::<Rational>::from_fn(&(), 3, 4, |r, c| Rational::from_i64(&(), (r == c) as i64));
        assert_eq!(m.rank(), 3);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(m.mul_vec(&ns[0]).unwrap().iter().all(|x| x.is_zero()));
    }

    #[test]
    fn small_determinants() {
        assert_eq!(q(&[&[1, 2], &[3, 4]]).det().unwrap(), Rational::from_i64(&(), -2));
        assert_eq!(q(&[&[0, 1], &[1, 0]]).det().unwrap(), Rational::from_i64(&(), -1));
        assert!(q(&[&[1, 2], &[2, 4]]).det().unwrap().is_zero());
        assert_eq!(q(&[&[1, 2], &[2, 4]]).inverse(), Err(Error::NotInvertible));
        assert!(q(&[&[1, 2, 3]]).det().is_err());
    }

    /// det is multiplicative and agrees with the inverse.
    #[test]
    fn random_products_over_fp() {
        let m = PrimeModulus::new(10007).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let n = rng.gen_range(1..7);
            let a = Matrix::from_fn(&m, n, n, |_, _| Fp::random(&m, &mut rng));
            let b = Matrix::from_fn(&m, n, n, |_, _| Fp::random(&m, &mut rng));
            let ab = a.mul(&b).unwrap();
            assert_eq!(ab.det().unwrap(), a.det().unwrap() * b.det().unwrap());
            if let Ok(inv) = a.inverse() {
                assert_eq!(a.mul(&inv).unwrap(), Matrix::identity(&m, n));
            } else {
                assert!(a.det().unwrap().is_zero());
            }
        }
    }

    #[test]
    fn nullspace_dimension() {
        let m = PrimeModulus::new(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let (r, c) = (rng.gen_range(1..5), rng.gen_range(1..6));
            let a = Matrix::from_fn(&m, r, c, |_, _| Fp::random(&m, &mut rng));
            let ns = a.nullspace();
            assert_eq!(ns.len() + a.rank(), c);
            for v in ns {
                assert!(a.mul_vec(&v).unwrap().iter().all(|x| x.is_zero()));
            }
        }
    }

    #[test]
    fn scalar_detection() {
        let m = Matrix::<Rational>::scalar(&(), 3, &Rational::from_i64(&(), 3));
        assert_eq!(m.scalar_value(), Some(Rational::from_i64(&(), 3)));
        assert_eq!(q(&[&[1, 1], &[0, 1]]).scalar_value(), None);
    }
}
