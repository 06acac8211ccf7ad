use serde::Serialize;

use super::eigen::{cluster_values, sym_eigenvalues};
use crate::graph::Graph;

/// Relative width of an eigenvalue cluster, scaled by `max(1, λ_N)`.
pub const MULTIPLICITY_TOL: f64 = 1e-6;

/// Sorted Laplacian eigenvalues with the synchronizability indices λ₂, λ_N and `r = λ₂/λ_N`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LaplacianSpectrum {
    pub values: Vec<f64>,
    pub lambda2: f64,
    pub lambda_n: f64,
    pub ratio: f64,
}

impl LaplacianSpectrum {
    pub fn from_values(mut values: Vec<f64>) -> Self {
        values.sort_by(f64::total_cmp);
        let lambda_n = values.last().copied().unwrap_or(0.0);
        let lambda2 = values.get(1).copied().unwrap_or(0.0);
        let ratio = if lambda_n == 0.0 {
            0.0
        } else {
            lambda2 / lambda_n
        };
        LaplacianSpectrum {
            values,
            lambda2,
            lambda_n,
            ratio,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn cluster_tol(&self) -> f64 {
        MULTIPLICITY_TOL * self.lambda_n.max(1.0)
    }

    /// Number of eigenvalues within the cluster tolerance of `value`.
    pub fn multiplicity(&self, value: f64) -> usize {
        let tol = self.cluster_tol();
        self.values
            .iter()
            .filter(|v| (*v - value).abs() <= tol)
            .count()
    }

    /// Distinct eigenvalues with multiplicities.
    pub fn clusters(&self) -> Vec<(f64, usize)> {
        cluster_values(&self.values, self.cluster_tol())
    }
}

pub fn spectrum(g: &Graph) -> LaplacianSpectrum {
    let values = sym_eigenvalues(&g.laplacian()).expect("graph Laplacians are symmetric");
    LaplacianSpectrum::from_values(values)
}
