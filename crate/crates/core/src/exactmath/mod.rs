//! Exact and certified-numeric arithmetic used by every other module.

pub mod ball;
pub mod intmat;
pub mod lll;
pub mod poly;
pub mod ratmat;
pub mod recon;
pub mod roots;
pub mod sturm;

pub use ball::{ComplexBall, IntegerTest, RealBall};
pub use intmat::{hnf_rows, kernel_lattice, smith_normal_form, IntMatrix};
pub use lll::relation_candidates;
pub use poly::{IntPoly, QPoly};
pub use ratmat::RatMatrix;
pub use recon::rational_reconstruct;
pub use roots::isolate_roots;

/// Exact rationals.
pub type Rational = num_rational::BigRational;
