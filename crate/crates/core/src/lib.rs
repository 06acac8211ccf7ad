//! Synchronizability analysis and control for networks of identical nodes
//! coupled through a graph Laplacian.
//!
//! - [`graph`]: simple undirected graphs, complements, structural metrics.
//! - [`numerics`]: dense eigenvalues, characteristic polynomials, Hurwitz tests,
//!   Lyapunov equations, numerical rank.
//! - [`region`]: synchronized regions, the eigenvalue-placement criterion and
//!   master-stability estimates.
//! - [`design`]: rank-1 inner coupling with an unbounded synchronized region.
//! - [`netsim`]: RK4 simulation of the coupled network.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod cli;
pub mod design;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod netsim;
pub mod numerics;
pub mod ode;
pub mod region;

pub use error::{Error, Result};
pub use graph::Graph;
pub use numerics::{spectrum, LaplacianSpectrum, Matrix};
