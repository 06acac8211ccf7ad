//! Dense real linear algebra sized for node dimensions and graphs of a few hundred nodes.
//!
//! General (nonsymmetric) eigenvalues go through the characteristic polynomial and
//! Aberth root finding, which is accurate up to roughly 12×12. Symmetric problems
//! use cyclic Jacobi at any size.

mod eigen;
mod hessenberg;
mod lyapunov;
mod matrix;
mod poly;
mod rank;
mod spectrum;

pub use eigen::{cluster_values, sym_eigen, sym_eigenvalues, SymEigen};
pub use hessenberg::{balance, hessenberg};
pub use lyapunov::{lyapunov_residual, solve_lyapunov};
pub use matrix::{inverse, solve_linear, Matrix, MatrixFile};
pub use poly::{
    abscissa_by_bisection, char_poly, eigenvalues, faddeev_leverrier, is_hurwitz, poly_roots,
    routh_hurwitz, spectral_abscissa, Polynomial,
};
pub use rank::{complex_rank_tol, rank_tol, DEFAULT_RANK_TOL};
pub use spectrum::{spectrum, LaplacianSpectrum, MULTIPLICITY_TOL};

pub use num_complex::Complex64;
