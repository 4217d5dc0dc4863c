use crate::error::{Error, Result};
use crate::field::Field;

/// Homogeneous polynomial `sum_i c_i x^(d-i) y^i` of degree `d` in two variables.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryForm<T: Field> {
    coeffs: Vec<T>,
}

impl<T: Field> BinaryForm<T> {
    /// `coeffs[i]` multiplies `x^(d-i) y^i`; the degree is `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<T>) -> Self {
        assert!(!coeffs.is_empty(), "a form needs at least one coefficient");
        BinaryForm { coeffs }
    }

    /// The linear form `a x + b y`.
    pub fn linear(a: T, b: T) -> Self {
        BinaryForm { coeffs: vec![a, b] }
    }

    pub fn constant(c: T) -> Self {
        BinaryForm { coeffs: vec![c] }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let ctx = self.coeffs[0].ctx();
        let mut out = vec![T::zero(&ctx); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j].add_mul_assign(a, b);
            }
        }
        BinaryForm { coeffs: out }
    }

    /// Sum of two forms of the same degree.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree(), other.degree(), "forms of different degree");
        BinaryForm {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() + b)
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        BinaryForm {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn eval(&self, x: &T, y: &T) -> T {
        let d = self.degree();
        let ctx = x.ctx();
        let mut acc = T::zero(&ctx);
        for (i, c) in self.coeffs.iter().enumerate() {
            let t = c.clone() * &x.pow_i((d - i) as i64).expect("nonnegative power") * &y.pow_i(i as i64).expect("nonnegative power");
            acc += &t;
        }
        acc
    }

    /// Substitutes `x -> a x + b y`, `y -> c x + d y`.
    pub fn substitute(&self, a: &T, b: &T, c: &T, d: &T) -> Self {
        let deg = self.degree();
        let lx = BinaryForm::linear(a.clone(), b.clone());
        let ly = BinaryForm::linear(c.clone(), d.clone());
        let ctx = a.ctx();
        let mut acc = BinaryForm::new(vec![T::zero(&ctx); deg + 1]);
        for (i, coeff) in self.coeffs.iter().enumerate() {
            let mut term = BinaryForm::constant(coeff.clone());
            for _ in 0..deg - i {
                term = term.mul(&lx);
            }
            for _ in 0..i {
                term = term.mul(&ly);
            }
            acc = acc.add(&term);
        }
        acc
    }

    /// Dehomogenization at `y = 1`, lowest power of `x` first.
    fn affine(&self) -> Vec<T> {
        let mut u: Vec<T> = self.coeffs.iter().rev().cloned().collect();
        trim(&mut u);
        u
    }
}

fn trim<T: Field>(p: &mut Vec<T>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

/// Remainder of univariate division over a field (lowest degree first).
fn rem<T: Field>(a: &[T], b: &[T]) -> Vec<T> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead_inv = b[db].inv().expect("trimmed divisor has nonzero lead");
    while r.len() > db {
        let top = r.len() - 1;
        let q = r[top].clone() * &lead_inv;
        let shift = top - db;
        for (i, bc) in b.iter().enumerate() {
            let t = q.clone() * bc;
            r[i + shift] -= &t;
        }
        r.pop();
        trim(&mut r);
    }
    r
}

/// Euclidean gcd of univariate polynomials; degree of the result only matters.
fn univariate_gcd<T: Field>(mut a: Vec<T>, mut b: Vec<T>) -> Vec<T> {
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(&a, &b);
        a = b;
        b = r;
    }
    a
}

/// Whether the forms share a projective zero over the algebraic closure.
///
/// All-zero input counts as a common root. Otherwise the point (1:0) is a
/// common root exactly when every nonzero form has vanishing `x^d`
/// coefficient, and affine common roots (x:1) are detected by the degree of
/// the gcd of the dehomogenized forms.
pub fn binary_form_common_root<T: Field>(forms: &[BinaryForm<T>]) -> Result<bool> {
    if forms.is_empty() {
        return Err(Error::EmptyInput);
    }
    let nonzero: Vec<&BinaryForm<T>> = forms.iter().filter(|f| !f.is_zero()).collect();
    if nonzero.is_empty() {
        return Ok(true);
    }
    if nonzero.iter().all(|f| f.coeffs[0].is_zero()) {
        return Ok(true);
    }
    let mut g = nonzero[0].affine();
    for f in &nonzero[1..] {
        if g.len() <= 1 {
            break;
        }
        g = univariate_gcd(g, f.affine());
    }
    Ok(g.len() > 1)
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

    fn form(c: &[i64]) -> BinaryForm<Rational> {
        BinaryForm::new(c.iter().map(|&v| q(v)).collect())
    }

    #[test]
    fn spec_examples() {
        // [x*y, x^2]: common root (0:1)
        assert!(binary_form_common_root(&[form(&[0, 1, 0]), form(&[1, 0, 0])]).unwrap());
        // [x, y]: none
        assert!(!binary_form_common_root(&[form(&[1, 0]), form(&[0, 1])]).unwrap());
        assert_eq!(binary_form_common_root::<Rational>(&[]), Err(Error::EmptyInput));
    }

    #[test]
    fn root_at_infinity_and_zero_forms() {
        // y^2 and x*y share (1:0)
        assert!(binary_form_common_root(&[form(&[0, 0, 1]), form(&[0, 1, 0])]).unwrap());
        assert!(binary_form_common_root(&[form(&[0, 0]), form(&[0, 0])]).unwrap());
        // a zero form imposes nothing
        assert!(!binary_form_common_root(&[form(&[0, 0]), form(&[1, 1]), form(&[1, 2])]).unwrap());
        // (x+y)^2 and (x+y)(x-2y)
        assert!(binary_form_common_root(&[form(&[1, 2, 1]), form(&[1, -1, -2])]).unwrap());
    }

    #[test]
    fn irreducible_quadratic_roots_live_in_the_closure() {
        // x^2 + y^2 and (x^2 + y^2)(x - y) share roots only over an extension of Q
        let a = form(&[1, 0, 1]);
        let b = a.mul(&form(&[1, -1]));
        assert!(binary_form_common_root(&[a.clone(), b]).unwrap());
        assert!(!binary_form_common_root(&[a, form(&[1, 0, -1])]).unwrap());
    }

    #[test]
    fn invariant_under_invertible_substitution() {
        let m = PrimeModulus::new(13).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let (a, b, c, d) = loop {
                let t: [Fp; 4] = std::array::from_fn(|_| Fp::random(&m, &mut rng));
                if !(t[0] * t[3] - t[1] * t[2]).is_zero() {
                    break (t[0], t[1], t[2], t[3]);
                }
            };
            let deg = rng.gen_range(1..4);
            let forms: Vec<BinaryForm<Fp>> = (0..3)
                .map(|_| {
                    let base = BinaryForm::new((0..=deg).map(|_| Fp::random(&m, &mut rng)).collect());
                    if rng.gen_bool(0.5) {
                        // plant a shared linear factor
                        base.mul(&BinaryForm::linear(Fp::from_i64(&m, 2), Fp::from_i64(&m, 5)))
                    } else {
                        base.mul(&BinaryForm::linear(Fp::random(&m, &mut rng), Fp::random(&m, &mut rng)))
                    }
                })
                .collect();
            let moved: Vec<_> = forms.iter().map(|f| f.substitute(&a, &b, &c, &d)).collect();
            assert_eq!(
                binary_form_common_root(&forms).unwrap(),
                binary_form_common_root(&moved).unwrap()
            );
        }
    }
}
