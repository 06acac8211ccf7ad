use super::matrix::{solve_linear, Matrix};
use crate::error::{Error, Result};

/// Solves `a P + P aᵀ = −q` through the Kronecker system
/// `(I ⊗ a + a ⊗ I) vec(P) = −vec(q)` (column-major `vec`).
///
/// Fails with [`Error::SingularSystem`] when two eigenvalues of `a` sum to (nearly) zero.
pub fn solve_lyapunov(a: &Matrix, q: &Matrix) -> Result<Matrix> {
    let n = a.ensure_square("a")?;
    if q.rows() != n || q.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "q is {}x{}, expected {n}x{n}",
            q.rows(),
            q.cols()
        )));
    }
    let dim = n * n;
    let mut kron = Matrix::zeros(dim, dim);
    // vec index of P[i][j] is j*n + i
    for j in 0..n {
        for i in 0..n {
            let row = j * n + i;
            // (a P)[i][j] = Σ_k a[i][k] P[k][j]
            for k in 0..n {
                kron[(row, j * n + k)] += a[(i, k)];
            }
            // (P aᵀ)[i][j] = Σ_k P[i][k] a[j][k]
            for k in 0..n {
                kron[(row, k * n + i)] += a[(j, k)];
            }
        }
    }
    let rhs: Vec<f64> = (0..dim).map(|idx| -q[(idx % n, idx / n)]).collect();
    let sol = solve_linear(&kron, &rhs)?;
    let mut p = Matrix::zeros(n, n);
    for j in 0..n {
        for i in 0..n {
            p[(i, j)] = sol[j * n + i];
        }
    }
    Ok(p.symmetrized())
}

/// `‖a P + P aᵀ + q‖_F`.
pub fn lyapunov_residual(a: &Matrix, p: &Matrix, q: &Matrix) -> f64 {
    let ap = a * p;
    let pat = p * &a.transpose();
    (&(&ap + &pat) + q).frobenius_norm()
}
