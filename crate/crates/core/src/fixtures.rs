//! Reference networks and node models used throughout the tests, the CLI fixtures and the docs.

use crate::graph::Graph;
use crate::netsim::ChuaParams;
use crate::numerics::Matrix;

/// `K_{3,3}` with parts `{1, 5, 6}` and `{2, 3, 4}`.
pub fn k33() -> Graph {
    let edges: Vec<_> = [1, 5, 6]
        .iter()
        .flat_map(|&i| [2, 3, 4].map(|j| (i, j)))
        .collect();
    Graph::new(6, &edges).expect("valid edges")
}

/// Triangular prism: triangles `{1, 5, 6}` and `{2, 3, 4}` joined by the matching
/// `1-2`, `3-6`, `4-5`. Same degree sequence, average distance and betweenness as [`k33`].
pub fn prism() -> Graph {
    Graph::new(
        6,
        &[
            (1, 2),
            (1, 5),
            (1, 6),
            (2, 3),
            (2, 4),
            (3, 4),
            (3, 6),
            (4, 5),
            (5, 6),
        ],
    )
    .expect("valid edges")
}

/// Smooth Chua parameters with a locally stable origin.
pub fn chua_params() -> ChuaParams {
    ChuaParams {
        kappa: 1.0,
        alpha_c: -0.1,
        beta_c: -1.0,
        gamma_c: 1.0,
        a_c: 1.0,
        b_c: -25.0,
    }
}

/// Jacobian of the smooth Chua field at the origin for [`chua_params`].
pub fn chua_linearization() -> Matrix {
    Matrix::from_rows(&[[-2.4, -0.1, 0.0], [1.0, -1.0, 1.0], [0.0, 1.0, -1.0]])
}

/// Full-rank inner coupling whose synchronized region for [`chua_linearization`]
/// splits into two disjoint pieces.
pub fn split_region_coupling() -> Matrix {
    Matrix::from_rows(&[
        [0.8348, 9.6619, 2.6591],
        [0.1002, 0.0694, 0.1005],
        [-0.3254, -8.5837, -0.9042],
    ])
}

/// Reference rank-1 gain for input vector `e₃` on [`chua_linearization`].
pub fn reference_rank1_gain() -> [f64; 3] {
    [0.0708, -0.15590, 0.4296]
}
