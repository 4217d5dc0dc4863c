//! Hyperdeterminant by reduction, numerically and over a field of rational
//! functions.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{rational_to_fp, Field, Fp, PrimeModulus, RandomScalar, RatFuncCtx, Rational, RationalFunction};
use crate::hypermatrix::Hypermatrix;
use crate::poly::io::grid_names;
use crate::poly::SparsePoly;
use crate::reduction::{canonicalize_with, ReductionOptions, Status};

/// Default cap on the summed term count of all entries during a symbolic run.
pub const DEFAULT_TERM_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct DetResult<T: Field> {
    pub value: T,
    pub degenerate: bool,
    /// Scalar multiplications and additions performed on hypermatrix entries.
    pub op_count: u64,
}

/// `Det(M)`, normalized so that `Det(I_{k,k+1}) = 1`; zero when degenerate.
pub fn hyperdeterminant<T: Field>(m: &Hypermatrix<T>) -> DetResult<T> {
    let out = canonicalize_with(m, ReductionOptions::verdict_only()).expect("no budget set");
    DetResult {
        value: out.hyperdet_value(),
        degenerate: !out.is_reduced(),
        op_count: out.op_count,
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SymbolicOptions {
    /// Fix slice 0 to `[I; 0]` and leave only slice 1 indeterminate.
    pub reduced: bool,
    pub term_budget: usize,
}

impl SymbolicOptions {
    pub fn new(reduced: bool) -> Self {
        SymbolicOptions {
            reduced,
            term_budget: DEFAULT_TERM_BUDGET,
        }
    }
}

/// Names of the indeterminates: `b_{rc}` for slice 1, preceded by `a_{rc}`
/// for slice 0 in the general case.
pub fn variable_names(k: usize, reduced: bool) -> Vec<String> {
    let mut names = Vec::new();
    if !reduced {
        names.extend(grid_names("a", k + 1, k));
    }
    names.extend(grid_names("b", k + 1, k));
    names
}

/// The hypermatrix of indeterminates over `F(vars)`.
pub fn generic_hypermatrix<T: Field>(k: usize, opts: &SymbolicOptions, coeff: &T::Ctx) -> Hypermatrix<RationalFunction<T>> {
    let n = (k + 1) * k;
    let nvars = if opts.reduced { n } else { 2 * n };
    let ctx = RatFuncCtx::<T>::new(nvars, coeff.clone());
    let offset = if opts.reduced { 0 } else { n };
    Hypermatrix::from_fn(&ctx, k, |s, r, c| {
        if s == 1 {
            RationalFunction::var(&ctx, offset + r * k + c)
        } else if opts.reduced {
            RationalFunction::from_i64(&ctx, (r == c) as i64)
        } else {
            RationalFunction::var(&ctx, r * k + c)
        }
    })
}

pub fn symbolic_hyperdet(k: usize, reduced: bool) -> Result<SparsePoly<Rational>> {
    symbolic_hyperdet_with(k, &SymbolicOptions::new(reduced))
}

/// The hyperdeterminant as a polynomial in the indeterminate entries.
pub fn symbolic_hyperdet_with(k: usize, opts: &SymbolicOptions) -> Result<SparsePoly<Rational>> {
    symbolic_hyperdet_over(k, opts, &())
}

/// Symbolic run with coefficients in any field.
pub fn symbolic_hyperdet_over<T: Field>(k: usize, opts: &SymbolicOptions, coeff: &T::Ctx) -> Result<SparsePoly<T>> {
    if k == 0 {
        return Err(Error::Precondition("k must be positive".into()));
    }
    let m = generic_hypermatrix::<T>(k, opts, coeff);
    let ropts = ReductionOptions {
        keep_log: false,
        track_group: false,
        size_budget: Some(opts.term_budget),
        forbid_swaps: true,
    };
    let out = canonicalize_with(&m, ropts)?;
    if let Status::Degenerate(r) = out.status {
        return Err(Error::Infeasible(format!("generic hypermatrix reported degenerate ({r})")));
    }
    let det = out.hyperdet_value().reduced();
    det.to_polynomial()
        .ok_or_else(|| Error::Infeasible("hyperdeterminant did not normalize to a polynomial".into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConsistencyReport {
    pub trials: usize,
    pub mismatches: usize,
}

/// Compares `poly` evaluated at random hypermatrices over `F_p` with the
/// numeric hyperdeterminant.
pub fn eval_consistency_check(
    poly: &SparsePoly<Rational>,
    k: usize,
    reduced: bool,
    trials: usize,
    modulus: PrimeModulus,
    seed: u64,
) -> Result<ConsistencyReport> {
    let n = (k + 1) * k;
    let nvars = if reduced { n } else { 2 * n };
    if poly.nvars() != nvars {
        return Err(Error::VariableCountMismatch {
            left: nvars,
            right: poly.nvars(),
        });
    }
    let as_fp = poly.map_coeffs(&modulus, |c| rational_to_fp(c, modulus).expect("coefficient denominators are units"));
    let mismatches = (0..trials)
        .into_par_iter()
        .filter(|&t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(t as u64));
            let point: Vec<Fp> = (0..nvars).map(|_| Fp::random(&modulus, &mut rng)).collect();
            !agrees_at(&as_fp, k, reduced, &point)
        })
        .count();
    Ok(ConsistencyReport { trials, mismatches })
}

/// Hypermatrix whose indeterminate entries take the values in `point`.
pub fn specialize(k: usize, reduced: bool, point: &[Fp], modulus: PrimeModulus) -> Hypermatrix<Fp> {
    let n = (k + 1) * k;
    let offset = if reduced { 0 } else { n };
    Hypermatrix::from_fn(&modulus, k, |s, r, c| {
        if s == 1 {
            point[offset + r * k + c]
        } else if reduced {
            Fp::from_i64(&modulus, (r == c) as i64)
        } else {
            point[r * k + c]
        }
    })
}

fn agrees_at(poly: &SparsePoly<Fp>, k: usize, reduced: bool, point: &[Fp]) -> bool {
    let m = specialize(k, reduced, point, poly.coeff_ctx().clone());
    poly.eval(point) == hyperdeterminant(&m).value
}
