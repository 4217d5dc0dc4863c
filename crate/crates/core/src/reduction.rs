//! Reduction of a hypermatrix to `I_{k,k+1}`.
//!
//! Row operations first bring slice 0 to `[I; 0]`; the double elimination
//! then clears slice 1 to the shifted identity while every column operation
//! is paired with a row operation that keeps slice 0 fixed.

use serde::{Deserialize, Serialize};

use crate::error::{DegenerateReason, Error, Result};
use crate::field::{Field, TextScalar};
use crate::hypermatrix::{apply_group, GroupElement, Hypermatrix, OpKind, OperationRecord, Side};
use crate::linalg::Matrix;

/// A factor `base^exp_a` of `det(A)` and `base^exp_b` of `det(B)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DetFactor<T: Field> {
    pub base: T,
    pub exp_a: i64,
    pub exp_b: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Reduced,
    Degenerate(DegenerateReason),
}

#[derive(Debug, Clone, Copy)]
pub struct ReductionOptions {
    pub keep_log: bool,
    pub track_group: bool,
    /// Abort with `Infeasible` when the summed size of all entries passes this.
    pub size_budget: Option<usize>,
    /// Refuse pivot swaps; generic entries never need them.
    pub forbid_swaps: bool,
}

impl Default for ReductionOptions {
    fn default() -> Self {
        ReductionOptions {
            keep_log: true,
            track_group: true,
            size_budget: None,
            forbid_swaps: false,
        }
    }
}

impl ReductionOptions {
    /// Only the verdict and determinant factors.
    pub fn verdict_only() -> Self {
        ReductionOptions {
            keep_log: false,
            track_group: false,
            size_budget: None,
            forbid_swaps: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ReductionOutcome<T: Field> {
    pub status: Status,
    pub k: usize,
    /// Operations in execution order (empty when logging is off).
    pub log: Vec<OperationRecord<T>>,
    pub factors: Vec<DetFactor<T>>,
    /// `(A, B)` with `apply_group((A, B), input)` equal to the result.
    pub group: Option<GroupElement<T>>,
    /// Hypermatrix after the last operation performed.
    pub result: Hypermatrix<T>,
    /// Scalar multiplications and additions spent on hypermatrix entries.
    pub op_count: u64,
}

impl<T: Field> ReductionOutcome<T> {
    pub fn is_reduced(&self) -> bool {
        self.status == Status::Reduced
    }

    pub fn degenerate_reason(&self) -> Option<DegenerateReason> {
        match self.status {
            Status::Degenerate(r) => Some(r),
            Status::Reduced => None,
        }
    }

    fn factor_product(&self, pick: impl Fn(&DetFactor<T>) -> i64) -> Option<T> {
        if !self.is_reduced() {
            return None;
        }
        let ctx = self.result.ctx();
        let mut acc = T::one(ctx);
        for f in &self.factors {
            acc *= &f.base.pow_i(pick(f)).expect("factors are nonzero");
        }
        Some(acc)
    }

    /// Determinant of the accumulated column-side matrix.
    pub fn det_a(&self) -> Option<T> {
        self.factor_product(|f| f.exp_a)
    }

    /// Determinant of the accumulated row-side matrix.
    pub fn det_b(&self) -> Option<T> {
        self.factor_product(|f| f.exp_b)
    }

    /// `det(A)^-(k+1) * det(B)^-k`, the hyperdeterminant of the input.
    pub fn hyperdet_value(&self) -> T {
        let ctx = self.result.ctx();
        if !self.is_reduced() {
            return T::zero(ctx);
        }
        let k = self.k as i64;
        let mut acc = T::one(ctx);
        for f in &self.factors {
            let e = -(k + 1) * f.exp_a - k * f.exp_b;
            if e != 0 {
                acc *= &f.base.pow_i(e).expect("factors are nonzero");
            }
        }
        acc
    }
}

struct Reducer<T: Field> {
    m: Hypermatrix<T>,
    opts: ReductionOptions,
    log: Vec<OperationRecord<T>>,
    factors: Vec<DetFactor<T>>,
    group: Option<GroupElement<T>>,
    ops: u64,
}

impl<T: Field> Reducer<T> {
    fn new(m: Hypermatrix<T>, opts: ReductionOptions) -> Self {
        let group = opts.track_group.then(|| GroupElement::identity(m.ctx(), m.k()));
        Reducer {
            m,
            opts,
            log: Vec::new(),
            factors: Vec::new(),
            group,
            ops: 0,
        }
    }

    fn x(&self, r: usize, c: usize) -> &T {
        self.m.get(1, r, c)
    }

    fn apply(&mut self, op: OperationRecord<T>) {
        self.ops += self.m.apply_op_unchecked(&op);
        if let Some(g) = &mut self.group {
            let (a, b) = g.parts_mut();
            match op.side {
                Side::Row => op.apply_to_rows(b),
                Side::Column => op.apply_to_rows(a),
            }
        }
        if self.opts.keep_log {
            self.log.push(op);
        }
    }

    fn factor(&mut self, base: T, exp_a: i64, exp_b: i64) {
        self.factors.push(DetFactor { base, exp_a, exp_b });
    }

    fn check_budget(&self) -> Result<()> {
        if let Some(budget) = self.opts.size_budget {
            let total: usize = self.m.entries().iter().map(|x| x.size_hint()).sum();
            if total > budget {
                return Err(Error::Infeasible(format!("{total} terms in flight exceed the budget of {budget}")));
            }
        }
        Ok(())
    }

    fn finish(self, status: Status) -> ReductionOutcome<T> {
        let reduced = status == Status::Reduced;
        ReductionOutcome {
            status,
            k: self.m.k(),
            log: self.log,
            factors: if reduced { self.factors } else { Vec::new() },
            group: if reduced { self.group } else { None },
            result: self.m,
            op_count: self.ops,
        }
    }

    /// Gauss-Jordan on slice 0 by row operations, first nonzero pivot.
    fn first_slice(&mut self) -> Result<std::result::Result<(), DegenerateReason>> {
        let k = self.m.k();
        let ctx = self.m.ctx().clone();
        for c in 0..k {
            let Some(p) = (c..=k).find(|&r| !self.m.get(0, r, c).is_zero()) else {
                return Ok(Err(DegenerateReason::FirstSliceRankDeficient { column: c }));
            };
            if p != c {
                if self.opts.forbid_swaps {
                    return Err(Error::Infeasible("symbolic pivot vanished in the first slice".into()));
                }
                self.apply(OperationRecord::swap(Side::Row, c, p));
                self.factor(-T::one(&ctx), 0, 1);
            }
            let piv = self.m.get(0, c, c).clone();
            if !piv.is_one() {
                self.apply(OperationRecord::scale(Side::Row, c, piv.inv()?));
                self.factor(piv, 0, -1);
            }
            for r in 0..=k {
                if r == c {
                    continue;
                }
                let e = self.m.get(0, r, c).clone();
                if !e.is_zero() {
                    self.apply(OperationRecord::addmul(Side::Row, r, c, -e));
                }
            }
            self.check_budget()?;
        }
        Ok(Ok(()))
    }

    /// The double elimination on slice 1, assuming slice 0 is `[I; 0]`.
    fn double(&mut self) -> Result<std::result::Result<(), DegenerateReason>> {
        let k = self.m.k();
        for j in (0..k).rev() {
            // make the diagonal entry nonzero
            if self.x(j + 1, j).is_zero() {
                let Some(l) = (0..j).find(|&l| !self.x(j + 1, l).is_zero()) else {
                    return Ok(Err(DegenerateReason::ZeroPivotRow { row: j + 1 }));
                };
                if self.opts.forbid_swaps {
                    return Err(Error::Infeasible("symbolic pivot vanished".into()));
                }
                let ctx = self.m.ctx().clone();
                self.apply(OperationRecord::swap(Side::Column, l, j));
                self.apply(OperationRecord::swap(Side::Row, l, j));
                self.factor(-T::one(&ctx), 1, 1);
            }

            // make it one
            let c = self.x(j + 1, j).clone();
            if !c.is_one() {
                let ci = c.inv()?;
                for r in j + 1..=k {
                    self.apply(OperationRecord::scale(Side::Row, r, ci.clone()));
                }
                for col in j + 1..k {
                    self.apply(OperationRecord::scale(Side::Column, col, c.clone()));
                }
                self.factor(c, (k - 1 - j) as i64, -((k - j) as i64));
            }

            // clear the rest of row j+1
            for l in 0..j {
                let c = self.x(j + 1, l).clone();
                if !c.is_zero() {
                    self.apply(OperationRecord::addmul(Side::Column, l, j, -c.clone()));
                    self.apply(OperationRecord::addmul(Side::Row, j, l, c));
                }
            }

            // clear the rest of the column, chasing fill-in down and right
            for m in j + 1..=k {
                for l in 0..m {
                    let c = self.x(l, m - 1).clone();
                    if c.is_zero() {
                        continue;
                    }
                    self.apply(OperationRecord::addmul(Side::Row, l, m, -c.clone()));
                    if m < k {
                        self.apply(OperationRecord::addmul(Side::Column, m, l, c));
                    }
                }
            }
            self.check_budget()?;
        }
        Ok(Ok(()))
    }
}

fn run<T: Field>(
    m: &Hypermatrix<T>,
    opts: ReductionOptions,
    first: bool,
) -> Result<ReductionOutcome<T>> {
    let mut r = Reducer::new(m.clone(), opts);
    if first {
        if let Err(reason) = r.first_slice()? {
            return Ok(r.finish(Status::Degenerate(reason)));
        }
    }
    match r.double()? {
        Ok(()) => Ok(r.finish(Status::Reduced)),
        Err(reason) => Ok(r.finish(Status::Degenerate(reason))),
    }
}

fn slice0_is_reduced<T: Field>(m: &Hypermatrix<T>) -> bool {
    let k = m.k();
    (0..=k).all(|r| (0..k).all(|c| if r == c { m.get(0, r, c).is_one() } else { m.get(0, r, c).is_zero() }))
}

/// Row-reduces slice 0 to `[I; 0]`. On success the outcome is `Reduced` in
/// the sense that this phase completed; `result` holds the partial form.
pub fn reduce_first_slice<T: Field>(m: &Hypermatrix<T>) -> ReductionOutcome<T> {
    let mut r = Reducer::new(m.clone(), ReductionOptions::default());
    match r.first_slice().expect("no budget set") {
        Ok(()) => r.finish(Status::Reduced),
        Err(reason) => r.finish(Status::Degenerate(reason)),
    }
}

/// The double elimination alone; slice 0 must already be `[I; 0]`.
pub fn double_gaussian<T: Field>(m: &Hypermatrix<T>) -> Result<ReductionOutcome<T>> {
    double_gaussian_with(m, ReductionOptions::default())
}

pub fn double_gaussian_with<T: Field>(m: &Hypermatrix<T>, opts: ReductionOptions) -> Result<ReductionOutcome<T>> {
    if !slice0_is_reduced(m) {
        return Err(Error::Precondition("slice 0 must be [I; 0]".into()));
    }
    run(m, opts, false)
}

/// Full reduction to `I_{k,k+1}` with log and group element.
pub fn canonicalize<T: Field>(m: &Hypermatrix<T>) -> ReductionOutcome<T> {
    run(m, ReductionOptions::default(), true).expect("no budget set")
}

pub fn canonicalize_with<T: Field>(m: &Hypermatrix<T>, opts: ReductionOptions) -> Result<ReductionOutcome<T>> {
    run(m, opts, true)
}

/// Whether the hypermatrix reduces, without keeping a log.
pub fn is_nondegenerate<T: Field>(m: &Hypermatrix<T>) -> bool {
    run(m, ReductionOptions::verdict_only(), true)
        .expect("no budget set")
        .is_reduced()
}

/// Applies a log to a copy of `m`.
pub fn replay<T: Field>(m: &Hypermatrix<T>, log: &[OperationRecord<T>]) -> Result<Hypermatrix<T>> {
    let mut out = m.clone();
    for op in log {
        out.apply_op(op)?;
    }
    Ok(out)
}

/// `g` with `apply_group(g, m1) == m2`, both inputs nondegenerate.
pub fn transporter<T: Field>(m1: &Hypermatrix<T>, m2: &Hypermatrix<T>) -> Result<GroupElement<T>> {
    if m1.k() != m2.k() || m1.ctx() != m2.ctx() {
        return Err(Error::DimensionMismatch("transporter needs equal k and field".into()));
    }
    let opts = ReductionOptions {
        keep_log: false,
        ..ReductionOptions::default()
    };
    let reduce = |m: &Hypermatrix<T>| -> Result<GroupElement<T>> {
        let out = run(m, opts, true)?;
        match out.status {
            Status::Reduced => Ok(out.group.expect("tracked")),
            Status::Degenerate(r) => Err(Error::Degenerate(r)),
        }
    };
    let g1 = reduce(m1)?;
    let g2 = reduce(m2)?;
    g2.inverse()?.compose(&g1)
}

/// Whether `g` lies in the scalar subgroup `{(c I, c^-1 I)}`.
pub fn is_trivial_in_g<T: Field>(g: &GroupElement<T>) -> bool {
    g.is_trivial()
}

/// Checks `apply_group(group, input) == result` for a reduced outcome.
pub fn verify_group<T: Field>(input: &Hypermatrix<T>, out: &ReductionOutcome<T>) -> Result<bool> {
    match &out.group {
        Some(g) => Ok(apply_group(g, input)? == out.result),
        None => Ok(false),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogRecordJson {
    pub side: Side,
    pub kind: OpKind,
    pub i: usize,
    pub j: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub scalar: Option<String>,
}

pub fn log_to_json<T: Field>(log: &[OperationRecord<T>]) -> String {
    let recs: Vec<LogRecordJson> = log
        .iter()
        .map(|op| LogRecordJson {
            side: op.side,
            kind: op.kind,
            i: op.i,
            j: op.j,
            scalar: op.scalar.as_ref().map(|s| s.to_string()),
        })
        .collect();
    serde_json::to_string(&recs).expect("plain data serializes")
}

pub fn log_from_json<T: TextScalar>(ctx: &T::Ctx, s: &str) -> Result<Vec<OperationRecord<T>>> {
    let recs: Vec<LogRecordJson> = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    recs.into_iter()
        .map(|r| {
            let scalar = r.scalar.as_deref().map(|s| T::parse_in(ctx, s)).transpose()?;
            if r.kind == OpKind::Swap && scalar.is_some() {
                return Err(Error::Parse("swap takes no scalar".into()));
            }
            Ok(OperationRecord {
                side: r.side,
                kind: r.kind,
                i: r.i,
                j: r.j,
                scalar,
            })
        })
        .collect()
}

/// Product of the determinants of the logged operations on one side.
pub fn log_det<T: Field>(ctx: &T::Ctx, log: &[OperationRecord<T>], side: Side) -> T {
    let mut d = T::one(ctx);
    for op in log.iter().filter(|op| op.side == side) {
        d *= &op.det(ctx);
    }
    d
}

/// Accumulated matrix of the logged operations on one side.
pub fn log_matrix<T: Field>(ctx: &T::Ctx, k: usize, log: &[OperationRecord<T>], side: Side) -> Matrix<T> {
    let n = if side == Side::Row { k + 1 } else { k };
    let mut m = Matrix::identity(ctx, n);
    for op in log.iter().filter(|op| op.side == side) {
        op.apply_to_rows(&mut m);
    }
    m
}
