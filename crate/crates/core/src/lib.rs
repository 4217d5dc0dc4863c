//! Hyperdeterminants of `2 x k x (k+1)` hypermatrices over exact fields.
//!
//! A hypermatrix is reduced to the canonical form `I_{k,k+1}` by row and
//! column operations acting on both slices at once; tracking the
//! determinants of those operations yields the hyperdeterminant. The same
//! reduction run over a field of rational functions produces the
//! hyperdeterminant as an explicit polynomial.
//!
//! All algorithms are generic over [`field::Field`]; the aliases below fix
//! the usual scalar choices.

pub mod error;
pub mod field;
pub mod hyperdet;
pub mod hypermatrix;
pub mod io;
pub mod linalg;
pub mod oracles;
pub mod poly;
pub mod reduction;

pub use error::{DegenerateReason, Error, Result};
pub use field::{Field, Fp, PrimeModulus, Rational, RationalFunction};
pub use hyperdet::{hyperdeterminant, symbolic_hyperdet, DetResult};
pub use hypermatrix::{apply_group, identity_hypermatrix, GroupElement, Hypermatrix};
pub use reduction::{canonicalize, transporter, ReductionOutcome};

/// Scalars of symbolic runs: rational functions with rational coefficients.
pub type SymbolicScalar = RationalFunction<Rational>;
pub type FpHypermatrix = Hypermatrix<Fp>;
pub type RationalHypermatrix = Hypermatrix<Rational>;
pub type SymbolicHypermatrix = Hypermatrix<SymbolicScalar>;
pub type FpMatrix = linalg::Matrix<Fp>;
pub type RationalMatrix = linalg::Matrix<Rational>;
