//! Dense complex linear algebra: LU, complex Schur, null vectors.

mod lu;
mod matrix;
mod null;
mod schur;

pub use lu::{determinant, lu_solve, Lu};
pub use matrix::{complex_gaussian, dot, norm, normalize, ComplexMatrix};
pub use null::{
    inverse_iteration, null_vector, null_vector_scaled, sigma_min_estimate, Side, NULL_RESIDUAL_TOL,
};
pub use schur::{
    hessenberg, schur_eigenvalues, schur_with_cap, SchurDecomposition, DEFAULT_SIZE_CAP,
    MAX_SWEEPS_PER_EIGENVALUE,
};

pub use num_complex::Complex64;
