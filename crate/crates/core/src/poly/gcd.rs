//! Multivariate gcd by recursive content/primitive-part decomposition with
//! subresultant remainder sequences in a chosen main variable.

use super::SparsePoly;
use crate::field::Field;

/// Coefficients in the main variable, lowest degree first, top nonzero.
type Dense<T> = Vec<SparsePoly<T>>;

/// Greatest common divisor, normalized to leading coefficient one in
/// graded-lex order. `gcd(0, 0) = 0`.
pub fn multivariate_gcd<T: Field>(a: &SparsePoly<T>, b: &SparsePoly<T>) -> SparsePoly<T> {
    assert_eq!(a.nvars(), b.nvars(), "variable count mismatch");
    gcd_inner(a, b).monic()
}

/// Gcd up to a unit factor.
fn gcd_inner<T: Field>(a: &SparsePoly<T>, b: &SparsePoly<T>) -> SparsePoly<T> {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    let (n, ctx) = (a.nvars(), a.coeff_ctx().clone());
    if a.is_constant() || b.is_constant() {
        return SparsePoly::one(n, &ctx);
    }

    let (ma, mb) = (a.monomial_content(), b.monomial_content());
    if !ma.is_one() || !mb.is_one() {
        let g = gcd_inner(&a.div_monomial(&ma), &b.div_monomial(&mb));
        return g.mul_term(&ma.gcd(&mb), &T::one(&ctx));
    }

    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    if large.div_exact(small).is_some() {
        return small.clone();
    }

    // A variable present in only one input cannot occur in the gcd, which
    // therefore divides every coefficient with respect to that variable.
    for v in 0..n {
        match (a.uses_variable(v), b.uses_variable(v)) {
            (true, false) => return gcd_with_coeffs(a, v, b),
            (false, true) => return gcd_with_coeffs(b, v, a),
            _ => {}
        }
    }

    let v = (0..n)
        .filter(|&v| a.uses_variable(v))
        .min_by_key(|&v| (a.degree_in(v).max(b.degree_in(v)), a.degree_in(v) + b.degree_in(v)))
        .expect("nonconstant polynomial uses a variable");

    let ca = a.coeffs_in(v);
    let cb = b.coeffs_in(v);
    let cont_a = content(&ca, n, &ctx);
    let cont_b = content(&cb, n, &ctx);
    let cont = gcd_inner(&cont_a, &cont_b);
    let pa = divide_all(&ca, &cont_a);
    let pb = divide_all(&cb, &cont_b);
    let g = subresultant_gcd(pa, pb, n, &ctx);
    let g = SparsePoly::from_coeffs_in(n, &ctx, v, &g);
    &g * &cont
}

/// gcd(p, q) where `p` depends on `v` and `q` does not.
fn gcd_with_coeffs<T: Field>(p: &SparsePoly<T>, v: usize, q: &SparsePoly<T>) -> SparsePoly<T> {
    let mut coeffs: Vec<SparsePoly<T>> = p.coeffs_in(v).into_iter().filter(|c| !c.is_zero()).collect();
    coeffs.sort_by_key(|c| c.len());
    let mut g = q.clone();
    for c in &coeffs {
        g = gcd_inner(&g, c);
        if g.is_constant() {
            return SparsePoly::one(p.nvars(), p.coeff_ctx());
        }
    }
    g
}

fn content<T: Field>(coeffs: &[SparsePoly<T>], n: usize, ctx: &T::Ctx) -> SparsePoly<T> {
    let mut sorted: Vec<&SparsePoly<T>> = coeffs.iter().filter(|c| !c.is_zero()).collect();
    sorted.sort_by_key(|c| c.len());
    let mut g = SparsePoly::zero(n, ctx);
    for c in sorted {
        g = gcd_inner(&g, c);
        if g.is_constant() {
            return SparsePoly::one(n, ctx);
        }
    }
    g
}

fn divide_all<T: Field>(coeffs: &[SparsePoly<T>], d: &SparsePoly<T>) -> Dense<T> {
    coeffs
        .iter()
        .map(|c| c.div_exact(d).expect("content divides every coefficient"))
        .collect()
}

fn degree<T: Field>(p: &Dense<T>) -> usize {
    p.len() - 1
}

fn trim<T: Field>(p: &mut Dense<T>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

/// Pseudo-remainder of `a` by `b` over the coefficient ring.
fn prem<T: Field>(a: &Dense<T>, b: &Dense<T>) -> Dense<T> {
    let db = degree(b);
    let lcb = b.last().expect("divisor is nonzero");
    let mut r = a.clone();
    let mut e = degree(a) as i64 - db as i64 + 1;
    while !r.is_empty() && degree(&r) >= db {
        let s = r.last().unwrap().clone();
        let shift = degree(&r) - db;
        for c in r.iter_mut() {
            *c = &*c * lcb;
        }
        for (i, bc) in b.iter().enumerate() {
            let t = &s * bc;
            r[i + shift] = &r[i + shift] - &t;
        }
        trim(&mut r);
        e -= 1;
    }
    if e > 0 && !r.is_empty() {
        let f = lcb.pow(e as u32);
        for c in r.iter_mut() {
            *c = &*c * &f;
        }
    }
    r
}

fn primitive<T: Field>(p: Dense<T>, n: usize, ctx: &T::Ctx) -> Dense<T> {
    let c = content(&p, n, ctx);
    if c.is_constant() {
        p
    } else {
        divide_all(&p, &c)
    }
}

/// Gcd of two primitive polynomials in the main variable.
fn subresultant_gcd<T: Field>(a: Dense<T>, b: Dense<T>, n: usize, ctx: &T::Ctx) -> Dense<T> {
    let (mut a, mut b) = if degree(&a) >= degree(&b) { (a, b) } else { (b, a) };
    let one = SparsePoly::one(n, ctx);
    let mut g = one.clone();
    let mut h = one.clone();
    loop {
        let delta = (degree(&a) - degree(&b)) as u32;
        let r = prem(&a, &b);
        if r.is_empty() {
            return primitive(b, n, ctx);
        }
        if degree(&r) == 0 {
            return vec![one];
        }
        let divisor = &g * &h.pow(delta);
        a = b;
        b = divide_all(&r, &divisor);
        g = a.last().unwrap().clone();
        h = match delta {
            0 => h,
            1 => g.clone(),
            d => g
                .pow(d)
                .div_exact(&h.pow(d - 1))
                .expect("subresultant scaling is exact"),
        };
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fp, PrimeModulus, RandomScalar, Rational};
    use crate::poly::Monomial;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type P = SparsePoly<Rational>;

    fn x(n: usize, i: usize) -> P {
        P::var(n, &(), i)
    }

    fn c(n: usize, v: i64) -> P {
        P::constant(n, Rational::from_i64(&(), v))
    }

    #[test]
    fn univariate_examples() {
        let xx = x(1, 0);
        let a = &(&xx * &xx) - &c(1, 1);
        let b = &(&(&xx * &xx) - &(&c(1, 2) * &xx)) + &c(1, 1);
        assert_eq!(multivariate_gcd(&a, &b), &xx - &c(1, 1));
    }

    #[test]
    fn coprime_variables() {
        assert!(multivariate_gcd(&x(2, 0), &x(2, 1)).is_one());
    }

    #[test]
    fn zero_cases() {
        let z = P::zero(2, &());
        assert!(multivariate_gcd(&z, &z).is_zero());
        let p = &(&c(2, 3) * &x(2, 0)) + &c(2, 6);
        assert_eq!(multivariate_gcd(&z, &p), p.monic());
    }

    fn random_poly<R: Rng>(rng: &mut R, n: usize, terms: usize, max_exp: u8) -> P {
        let ts = (0..terms).map(|_| {
            let e: Vec<u8> = (0..n).map(|_| rng.gen_range(0..=max_exp)).collect();
            let coeff = Rational::from_i64(&(), rng.gen_range(1..=5) * if rng.gen() { 1 } else { -1 });
            (Monomial::from_exponents(&e), coeff)
        });
        P::from_terms(n, &(), ts)
    }

    /// gcd(r*s, r*t) for random r, s, t: the result divides both inputs and
    /// is a multiple of r.
    #[test]
    fn structured_random_gcds() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let n = rng.gen_range(1..=4);
            let r_len = rng.gen_range(1..4);
            let r = random_poly(&mut rng, n, r_len, 2);
            let s_len = rng.gen_range(1..4);
            let s = random_poly(&mut rng, n, s_len, 2);
            let t_len = rng.gen_range(1..4);
            let t = random_poly(&mut rng, n, t_len, 2);
            if r.is_zero() || s.is_zero() || t.is_zero() {
                continue;
            }
            let (a, b) = (&r * &s, &r * &t);
            let g = multivariate_gcd(&a, &b);
            assert!(a.div_exact(&g).is_some(), "gcd must divide a");
            assert!(b.div_exact(&g).is_some(), "gcd must divide b");
            assert!(g.div_exact(&r).is_some(), "r must divide the gcd");
            assert!(g.leading_coeff().unwrap().is_one());
            // cofactors are coprime
            let (ca, cb) = (a.div_exact(&g).unwrap(), b.div_exact(&g).unwrap());
            assert!(multivariate_gcd(&ca, &cb).is_one());
        }
    }

    #[test]
    fn gcd_over_prime_field() {
        let m = PrimeModulus::new(101).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let n = 3;
            let mk = |rng: &mut ChaCha8Rng| {
                let ts: Vec<_> = (0..3)
                    .map(|_| {
                        let e: Vec<u8> = (0..n).map(|_| rng.gen_range(0..=2)).collect();
                        (Monomial::from_exponents(&e), Fp::random_nonzero(&m, rng))
                    })
                    .collect();
                SparsePoly::from_terms(n, &m, ts)
            };
            let (r, s, t) = (mk(&mut rng), mk(&mut rng), mk(&mut rng));
            if r.is_zero() || s.is_zero() || t.is_zero() {
                continue;
            }
            let g = multivariate_gcd(&(&r * &s), &(&r * &t));
            assert!(g.div_exact(&r).is_some());
            assert!((&r * &s).div_exact(&g).is_some());
        }
    }
}
