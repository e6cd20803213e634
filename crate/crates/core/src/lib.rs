//! Exact invariants of the Frobenius eigenvalues of abelian varieties over
//! finite fields: Weil polynomial validation, splitting fields and Galois
//! groups, the enriched eigenvalue group with its realization kernel and
//! Frobenius rank, Lefschetz-motive decompositions of powers, and an exact
//! quadratic-form signature engine.

pub mod eig;
pub mod exactmath;
pub mod lefmot;
pub mod quadforms;
pub mod splitfield;
pub mod weil;

mod error;
mod options;

pub use error::Error;
pub use options::{Options, PRECISION_ENV};
