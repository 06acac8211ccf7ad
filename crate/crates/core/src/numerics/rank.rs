use num_complex::Complex64;

use super::matrix::Matrix;

pub const DEFAULT_RANK_TOL: f64 = 1e-9;

/// Numerical rank by Gaussian elimination with complete pivoting; pivots below
/// `tol·‖m‖_F` count as zero.
pub fn rank_tol(m: &Matrix, tol: f64) -> usize {
    let (rows, cols) = (m.rows(), m.cols());
    let threshold = tol * m.frobenius_norm();
    let mut a: Vec<Vec<f64>> = (0..rows).map(|i| m.row_slice(i).to_vec()).collect();
    let mut rank = 0;
    let mut col_perm: Vec<usize> = (0..cols).collect();
    while rank < rows.min(cols) {
        let mut best = (rank, rank, 0.0f64);
        for (i, row) in a.iter().enumerate().skip(rank) {
            for &j in &col_perm[rank..] {
                if row[j].abs() > best.2 {
                    best = (i, j, row[j].abs());
                }
            }
        }
        if best.2 <= threshold || best.2 == 0.0 {
            break;
        }
        a.swap(rank, best.0);
        let pos = col_perm.iter().position(|&c| c == best.1).unwrap();
        col_perm.swap(rank, pos);
        let pc = col_perm[rank];
        let pivot_row = a[rank].clone();
        for row in a.iter_mut().skip(rank + 1) {
            let factor = row[pc] / pivot_row[pc];
            if factor != 0.0 {
                for &j in &col_perm[rank..] {
                    row[j] -= factor * pivot_row[j];
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Rank of the complex matrix `re + i·im` through its real `2r × 2c` embedding
/// `[[re, −im], [im, re]]`, whose rank is twice the complex rank.
pub fn complex_rank_tol(entries: &[Vec<Complex64>], tol: f64) -> usize {
    let rows = entries.len();
    let cols = entries.first().map(Vec::len).unwrap_or(0);
    if rows == 0 || cols == 0 {
        return 0;
    }
    let mut real = Matrix::zeros(2 * rows, 2 * cols);
    for (i, row) in entries.iter().enumerate() {
        for (j, z) in row.iter().enumerate() {
            real[(i, j)] = z.re;
            real[(i, j + cols)] = -z.im;
            real[(i + rows, j)] = z.im;
            real[(i + rows, j + cols)] = z.re;
        }
    }
    rank_tol(&real, tol) / 2
}
