//! Exact arithmetic over 𝔽_p and its rational function fields: sparse
//! multivariate polynomials, reduced fractions, formal derivations, p-th
//! roots, towers of purely inseparable extensions, and p-independence
//! certificates.

pub mod form;
pub mod gcd;
pub mod linalg;
pub mod poly;
pub mod prime;
pub mod ratfunc;
pub mod tower;

pub use form::Form;
pub use gcd::poly_gcd;
pub use linalg::{rank_over_field, solve};
pub use poly::MultiPoly;
pub use prime::PrimeField;
pub use ratfunc::{eval_poly_at, eval_ratfunc_at, RatFunc};
pub use tower::{
    checked_pow, FieldElement, FieldId, IndependenceCertificate, RebaseGen, TowerField,
    TowerRegistry,
};
