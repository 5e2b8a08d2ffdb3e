//! Exact symbolic computation of base-change invariants for q-Fermat
//! complete intersections over rational function fields of characteristic p.
//!
//! The crate builds chains of purely inseparable base changes step by step,
//! certifies every step with exact polynomial identities and p-independence
//! ranks, derives the invariants (ε, γ bounds, ℓ_F, m_F), and checks the
//! curve-level consequences (genus change, conic classification, genus-one
//! constraint tables). Everything is exact arithmetic over 𝔽_p; there are no
//! floats and no probabilistic tests.

pub mod curves;
pub mod error;
pub mod expr;
pub mod fermat;
pub mod field;
pub mod grid;
pub mod invariants;
pub mod job;
pub mod report;

pub use error::{Error, Result};
