//! Wedderburn decompositions of the rational group algebras `Q[SL2(q)]` and
//! `Q[PSL2(q)]`.
//!
//! [`decomposition::decompose`] evaluates the closed-form answer from `q`
//! alone. [`chartab`] rebuilds the same answer from exact character tables
//! and Schur indices, and [`groupsim`] checks the class data those tables
//! rest on by enumerating the groups outright.

pub mod chartab;
pub mod cyclotomic;
pub mod decomposition;
pub mod error;
pub mod fields;
pub mod groupsim;
pub mod numtheory;

pub use error::{Error, Result};

/// Exact rationals used as cyclotomic coefficients.
pub type Rational = num_rational::BigRational;

/// Exact elements of cyclotomic fields.
pub type Cyclotomic = cyclotomic::CyclotomicNumber<Rational>;
