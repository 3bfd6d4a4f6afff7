//! Homogeneous polynomial eigenvalue problems and their condition numbers.
//!
//! The crate solves matrix polynomial eigenproblems `det(Σ α^k β^{d-k} A_k) = 0`
//! over the projective line (and a determinantal problem on a conic), evaluates
//! eigenvalue condition numbers in closed form and through a generic
//! structured engine, and estimates expected squared condition numbers by
//! seeded Monte Carlo.

pub mod condition;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod matpoly;
pub mod montecarlo;
pub mod point;
pub mod problems;
pub mod rng;
pub mod verification;

pub use error::{Error, Result};
pub use linalg::ComplexMatrix;
pub use matpoly::{EigenTriple, MatrixPolynomial, MoebiusMap};
pub use point::ProjectivePoint;
