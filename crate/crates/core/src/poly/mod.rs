//! Sparse multivariate polynomials and binary forms.

mod binary_form;
mod gcd;
pub mod io;
mod monomial;
mod sparse;

pub use binary_form::{binary_form_common_root, BinaryForm};
pub use gcd::multivariate_gcd;
pub use monomial::Monomial;
pub use sparse::SparsePoly;
