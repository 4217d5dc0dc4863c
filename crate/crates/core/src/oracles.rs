//! Checks that do not go through the reduction: the pencil criterion for
//! degeneracy, brute-force enumeration over small fields, and the closed
//! counting formula.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, Fp, PrimeModulus};
use crate::hypermatrix::{GroupElement, Hypermatrix};
use crate::linalg::Matrix;
use crate::poly::{binary_form_common_root, BinaryForm};
use crate::reduction::is_nondegenerate;

/// Default cap on the number of hypermatrices an enumeration may visit.
pub const DEFAULT_ENUMERATION_BUDGET: u128 = 1 << 24;

/// Largest `k` for which pencil minors use cofactor expansion.
const LAPLACE_MAX_K: usize = 6;

/// `[n]_q = 1 + q + ... + q^(n-1)`.
pub fn q_int(n: u32, q: u64) -> BigUint {
    let q = BigUint::from(q);
    let mut acc = BigUint::zero();
    let mut pow = BigUint::one();
    for _ in 0..n {
        acc += &pow;
        pow *= &q;
    }
    acc
}

/// `[n]!_q = [1]_q [2]_q ... [n]_q`.
pub fn q_factorial(n: u32, q: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * q_int(i, q))
}

/// `|GL_n(F_q)| = q^(n(n-1)/2) (q-1)^n [n]!_q`.
pub fn gl_order(n: u32, q: u64) -> BigUint {
    let qq = BigUint::from(q);
    qq.pow(n * n.saturating_sub(1) / 2) * BigUint::from(q - 1).pow(n) * q_factorial(n, q)
}

/// Number of nondegenerate `2 x k x (k+1)` hypermatrices over `F_q`:
/// `q^(k^2) (q-1)^(2k) [k]!_q [k+1]!_q`.
pub fn count_formula(k: u32, q: u64) -> BigUint {
    let qq = BigUint::from(q);
    qq.pow(k * k) * BigUint::from(q - 1).pow(2 * k) * q_factorial(k, q) * q_factorial(k + 1, q)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountMethod {
    /// Verdict of the reduction.
    Algorithm,
    /// Pencil minors.
    Oracle,
}

/// Hypermatrix number `index` in base-`q` enumeration order.
pub fn hypermatrix_at(k: usize, m: PrimeModulus, mut index: u128) -> Hypermatrix<Fp> {
    let q = m.get() as u128;
    Hypermatrix::from_fn(&m, k, |_, _, _| {
        let d = (index % q) as u64;
        index /= q;
        Fp::new(d, m)
    })
}

/// Number of states `count_enumerate` would visit.
pub fn enumeration_size(k: usize, q: u64) -> Option<u128> {
    let entries = u32::try_from(2 * (k + 1) * k).ok()?;
    (q as u128).checked_pow(entries)
}

/// Counts nondegenerate hypermatrices over `F_q` by visiting all of them.
pub fn count_enumerate(k: usize, q: u64, method: CountMethod, budget: u128) -> Result<BigUint> {
    if k == 0 {
        return Err(Error::Precondition("k must be positive".into()));
    }
    let m = PrimeModulus::new(q)?;
    let total = enumeration_size(k, q).unwrap_or(u128::MAX);
    if total > budget {
        return Err(Error::BudgetExceeded { required: total, budget });
    }
    const CHUNK: u128 = 1 << 12;
    let chunks = total.div_ceil(CHUNK);
    let count: u64 = (0..chunks as u64)
        .into_par_iter()
        .map(|c| {
            let start = c as u128 * CHUNK;
            let end = (start + CHUNK).min(total);
            (start..end)
                .filter(|&i| {
                    let h = hypermatrix_at(k, m, i);
                    match method {
                        CountMethod::Algorithm => is_nondegenerate(&h),
                        CountMethod::Oracle => !degenerate_pencil_oracle(&h),
                    }
                })
                .count() as u64
        })
        .sum();
    Ok(BigUint::from(count))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountReport {
    pub k: u32,
    pub q: u64,
    pub formula: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub enumerated: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub agree: Option<bool>,
}

impl CountReport {
    pub fn new(k: u32, q: u64, formula: &BigUint, enumerated: Option<&BigUint>) -> Self {
        CountReport {
            k,
            q,
            formula: formula.to_string(),
            enumerated: enumerated.map(|e| e.to_string()),
            agree: enumerated.map(|e| e == formula),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }
}

/// The `k+1` maximal minors of the pencil `x S0^T + y S1^T`; minor `i`
/// omits column `i`.
pub fn pencil_minors<T: Field>(m: &Hypermatrix<T>) -> Vec<BinaryForm<T>> {
    let k = m.k();
    let big_enough = T::cardinality(m.ctx()).is_none_or(|c| c > k as u64);
    if k <= LAPLACE_MAX_K || !big_enough {
        minors_by_expansion(m)
    } else {
        minors_by_interpolation(m)
    }
}

/// Cofactor expansion over subsets of columns, row by row.
fn minors_by_expansion<T: Field>(m: &Hypermatrix<T>) -> Vec<BinaryForm<T>> {
    let k = m.k();
    let ctx = m.ctx();
    let n = k + 1;
    // entry (row c, column r) of the pencil
    let entry = |c: usize, r: usize| BinaryForm::linear(m.get(0, r, c).clone(), m.get(1, r, c).clone());
    let mut dp: Vec<Option<BinaryForm<T>>> = vec![None; 1 << n];
    dp[0] = Some(BinaryForm::constant(T::one(ctx)));
    for mask in 1usize..(1 << n) {
        let size = mask.count_ones() as usize;
        if size > k {
            continue;
        }
        let row = size - 1;
        let mut acc: Option<BinaryForm<T>> = None;
        for (pos, col) in (0..n).filter(|c| mask & (1 << c) != 0).enumerate() {
            let sub = dp[mask & !(1 << col)].as_ref().expect("smaller masks come first");
            let mut term = entry(row, col).mul(sub);
            if (row + pos) % 2 == 1 {
                term = term.neg();
            }
            acc = Some(match acc {
                None => term,
                Some(a) => a.add(&term),
            });
        }
        dp[mask] = acc;
    }
    let full = (1usize << n) - 1;
    (0..n)
        .map(|i| dp[full & !(1 << i)].clone().expect("size-k mask"))
        .collect()
}

/// Evaluates the pencil at `(1, t)` for `k+1` values of `t` and interpolates.
fn minors_by_interpolation<T: Field>(m: &Hypermatrix<T>) -> Vec<BinaryForm<T>> {
    let k = m.k();
    let ctx = m.ctx();
    let ts: Vec<T> = (0..=k as i64).map(|t| T::from_i64(ctx, t)).collect();
    // values[i][t] = minor i at (1, t)
    let mut values = vec![Vec::with_capacity(k + 1); k + 1];
    for t in &ts {
        let p = m.pencil(&T::one(ctx), t);
        for (i, vals) in values.iter_mut().enumerate() {
            let sub = Matrix::from_fn(ctx, k, k, |r, c| p[(r, if c < i { c } else { c + 1 })].clone());
            vals.push(sub.det().expect("square"));
        }
    }
    values
        .into_iter()
        .map(|vals| BinaryForm::new(newton_interpolate(&ts, &vals)))
        .collect()
}

/// Coefficients (lowest degree first) of the polynomial through the points.
fn newton_interpolate<T: Field>(xs: &[T], ys: &[T]) -> Vec<T> {
    let n = xs.len();
    let ctx = xs[0].ctx();
    let mut dd = ys.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            let num = dd[i].clone() - &dd[i - 1];
            let den = xs[i].clone() - &xs[i - level];
            dd[i] = num * &den.inv().expect("distinct nodes");
        }
    }
    let mut coeffs = vec![T::zero(&ctx); n];
    for i in (0..n).rev() {
        // coeffs = coeffs * (x - xs[i]) + dd[i]
        let mut next = vec![T::zero(&ctx); n];
        for d in 0..n - 1 {
            let c = coeffs[d].clone();
            next[d + 1] += &c;
            next[d] -= &(c * &xs[i]);
        }
        next[0] += &dd[i];
        coeffs = next;
    }
    coeffs
}

/// Degenerate iff some nonzero combination of the slices loses rank over
/// the algebraic closure, i.e. the pencil minors share a projective root.
pub fn degenerate_pencil_oracle<T: Field>(m: &Hypermatrix<T>) -> bool {
    binary_form_common_root(&pencil_minors(m)).expect("k+1 >= 2 minors")
}

/// Basis of the pairs `(C, B)` with `B S = S C` on both slices of
/// `I_{k,k+1}`, listed as flat vectors `C` then `B` (row-major).
///
/// With `A = C^-T` these are exactly the stabilizer elements of the identity
/// hypermatrix, so every invertible solution must be a scalar pair.
pub fn stabilizer_basis(k: usize, m: PrimeModulus) -> Vec<Vec<Fp>> {
    stabilizer_basis_of(&Hypermatrix::<Fp>::identity(&m, k))
}

/// As [`stabilizer_basis`], for the slices of an arbitrary hypermatrix.
pub fn stabilizer_basis_of(h: &Hypermatrix<Fp>) -> Vec<Vec<Fp>> {
    let (k, m) = (h.k(), *h.ctx());
    let n_c = k * k;
    let n_b = (k + 1) * (k + 1);
    let mut rows: Vec<Vec<Fp>> = Vec::new();
    for s in 0..2 {
        let e = h.slice(s);
        for r in 0..=k {
            for c in 0..k {
                // (B E)[r][c] - (E C)[r][c] = 0
                let mut row = vec![Fp::new(0, m); n_c + n_b];
                for t in 0..=k {
                    row[n_c + r * (k + 1) + t] += &e[(t, c)];
                }
                for t in 0..k {
                    row[t * k + c] -= &e[(r, t)];
                }
                rows.push(row);
            }
        }
    }
    Matrix::from_rows(&m, rows).expect("rectangular").nullspace()
}

/// Turns a solution vector from [`stabilizer_basis`] into a group element.
pub fn stabilizer_element(k: usize, m: PrimeModulus, v: &[Fp]) -> Result<GroupElement<Fp>> {
    let n_c = k * k;
    let c = Matrix::from_fn(&m, k, k, |r, col| v[r * k + col]);
    let b = Matrix::from_fn(&m, k + 1, k + 1, |r, col| v[n_c + r * (k + 1) + col]);
    let a = c.inverse()?.transpose();
    GroupElement::new(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{RandomScalar, Rational};
    use crate::hypermatrix::apply_group;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn brute_gl(n: usize, q: u64) -> u64 {
        let m = PrimeModulus::new(q).unwrap();
        let total = q.pow((n * n) as u32);
        (0..total)
            .filter(|&idx| {
                let mut i = idx;
                let a = Matrix::from_fn(&m, n, n, |_, _| {
                    let d = i % q;
                    i /= q;
                    Fp::new(d, m)
                });
                !a.det().unwrap().is_zero()
            })
            .count() as u64
    }

    #[test]
    fn q_analogs() {
        assert_eq!(q_int(3, 2), BigUint::from(7u32));
        assert_eq!(q_int(0, 5), BigUint::zero());
        assert_eq!(q_factorial(3, 2), BigUint::from(21u32));
        assert_eq!(gl_order(2, 2), BigUint::from(6u32));
        for (n, q) in [(1, 2), (1, 3), (2, 2), (2, 3), (3, 2)] {
            assert_eq!(gl_order(n as u32, q), BigUint::from(brute_gl(n, q)), "n={n} q={q}");
        }
    }

    #[test]
    fn formula_values() {
        assert_eq!(count_formula(2, 2), BigUint::from(1008u32));
        assert_eq!(count_formula(2, 3), BigUint::from(269568u32));
        for (q, v) in [(2u64, 6u32), (3, 48), (5, 480), (7, 2016)] {
            assert_eq!(count_formula(1, q), BigUint::from(v));
        }
        for k in 1..5u32 {
            for q in [2u64, 3, 5] {
                assert_eq!(count_formula(k, q) * BigUint::from(q - 1), gl_order(k, q) * gl_order(k + 1, q));
            }
        }
    }

    #[test]
    fn small_enumerations() {
        for q in [2, 3] {
            for method in [CountMethod::Algorithm, CountMethod::Oracle] {
                assert_eq!(
                    count_enumerate(1, q, method, DEFAULT_ENUMERATION_BUDGET).unwrap(),
                    count_formula(1, q)
                );
            }
        }
        assert_eq!(
            count_enumerate(2, 2, CountMethod::Algorithm, DEFAULT_ENUMERATION_BUDGET).unwrap(),
            BigUint::from(1008u32)
        );
        assert!(matches!(
            count_enumerate(2, 3, CountMethod::Oracle, 1000),
            Err(Error::BudgetExceeded { required: 531441, budget: 1000 })
        ));
        assert!(count_enumerate(1, 4, CountMethod::Oracle, 1000).is_err());
    }

    #[test]
    fn report_json() {
        let r = CountReport::new(2, 3, &BigUint::from(269568u32), Some(&BigUint::from(269568u32)));
        assert_eq!(r.to_json(), r#"{"k":2,"q":3,"formula":"269568","enumerated":"269568","agree":true}"#);
        let back: CountReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        let f = CountReport::new(5, 101, &count_formula(5, 101), None);
        assert!(!f.to_json().contains("agree"));
    }

    #[test]
    fn identity_minors_are_monomials() {
        for k in 1..=4 {
            let minors = pencil_minors(&Hypermatrix::<Rational>::identity(&(), k));
            for (i, f) in minors.iter().enumerate() {
                // omitting column i leaves x^i y^(k-i) up to sign
                let nz: Vec<usize> = (0..=k).filter(|&d| !Field::is_zero(&f.coeffs()[d])).collect();
                assert_eq!(nz, vec![k - i]);
                let c = &f.coeffs()[k - i];
                assert!(Field::is_one(c) || Field::is_one(&-c.clone()));
            }
            assert!(!degenerate_pencil_oracle(&Hypermatrix::<Rational>::identity(&(), k)));
        }
    }

    #[test]
    fn equal_slices_are_degenerate() {
        let p = PrimeModulus::new(7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for k in 1..=4 {
            let s = Matrix::from_fn(&p, k + 1, k, |_, _| Fp::random(&p, &mut rng));
            let m = Hypermatrix::from_matrices(&s, &s).unwrap();
            assert!(degenerate_pencil_oracle(&m));
        }
    }

    #[test]
    fn interpolation_matches_expansion() {
        let p = PrimeModulus::new(10007).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for k in 1..=6 {
            let m = Hypermatrix::from_fn(&p, k, |_, _, _| Fp::random(&p, &mut rng));
            assert_eq!(minors_by_expansion(&m), minors_by_interpolation(&m));
        }
    }

    #[test]
    fn orbit_of_identity_is_nondegenerate() {
        let p = PrimeModulus::new(7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let inv = |n: usize, rng: &mut ChaCha8Rng| loop {
            let a = Matrix::from_fn(&p, n, n, |_, _| Fp::random(&p, rng));
            if !a.det().unwrap().is_zero() {
                return a;
            }
        };
        for _ in 0..200 {
            let k = rng.gen_range(1..=4);
            let g = GroupElement::new(inv(k, &mut rng), inv(k + 1, &mut rng)).unwrap();
            let m = apply_group(&g, &Hypermatrix::identity(&p, k)).unwrap();
            assert!(!degenerate_pencil_oracle(&m));
            let r = Hypermatrix::from_fn(&p, k, |_, _, _| Fp::random(&p, &mut rng));
            assert_eq!(
                degenerate_pencil_oracle(&r),
                degenerate_pencil_oracle(&apply_group(&g, &r).unwrap())
            );
        }
    }

    #[test]
    fn stabilizer_is_scalar() {
        let p = PrimeModulus::new(10007).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        for k in 1..=4 {
            let basis = stabilizer_basis(k, p);
            assert_eq!(basis.len(), 1, "stabilizer of the identity is one-dimensional");
            let c = Fp::random_nonzero(&p, &mut rng);
            let v: Vec<Fp> = basis[0].iter().map(|x| *x * c).collect();
            let g = stabilizer_element(k, p, &v).unwrap();
            let id = Hypermatrix::identity(&p, k);
            assert_eq!(apply_group(&g, &id).unwrap(), id);
            assert!(g.is_trivial());
        }
    }

    #[test]
    fn hypermatrix_indexing_covers_all_states() {
        let p = PrimeModulus::new(2).unwrap();
        let a = hypermatrix_at(1, p, 0);
        let b = hypermatrix_at(1, p, 15);
        assert!(a.entries().iter().all(|x| x.is_zero()));
        assert!(b.entries().iter().all(|x| x.is_one()));
    }
}
