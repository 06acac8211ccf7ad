//! Similarity transforms used before forming characteristic polynomials.

use super::matrix::Matrix;

const RADIX: f64 = 2.0;

/// Parlett–Reinsch balancing: a diagonal similarity by powers of two that brings each
/// row and column to comparable norm. Eigenvalues are unchanged exactly.
pub fn balance(m: &Matrix) -> Matrix {
    let n = m.rows();
    let mut a = m.clone();
    let sq = RADIX * RADIX;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let (mut c, mut r) = (0.0, 0.0);
            for j in (0..n).filter(|&j| j != i) {
                c += a[(j, i)].abs();
                r += a[(i, j)].abs();
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let total = c + r;
            let mut g = r / RADIX;
            let mut f = 1.0;
            while c < g {
                f *= RADIX;
                c *= sq;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= sq;
            }
            if (c + r) / f < 0.95 * total {
                done = false;
                for j in 0..n {
                    a[(i, j)] /= f;
                    a[(j, i)] *= f;
                }
            }
        }
    }
    a
}

/// Upper Hessenberg form by Householder reflections (orthogonal similarity).
pub fn hessenberg(m: &Matrix) -> Matrix {
    let n = m.rows();
    let mut a = m.clone();
    for k in 0..n.saturating_sub(2) {
        let norm = (k + 1..n)
            .map(|i| a[(i, k)] * a[(i, k)])
            .sum::<f64>()
            .sqrt();
        if norm == 0.0 {
            continue;
        }
        let alpha = if a[(k + 1, k)] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (k + 1..n).map(|i| a[(i, k)]).collect();
        v[0] -= alpha;
        let vnorm_sq: f64 = v.iter().map(|x| x * x).sum();
        if vnorm_sq == 0.0 {
            continue;
        }
        // A ← (I − 2vvᵀ/vᵀv) A
        for j in 0..n {
            let dot: f64 = (0..v.len()).map(|t| v[t] * a[(k + 1 + t, j)]).sum();
            let s = 2.0 * dot / vnorm_sq;
            for t in 0..v.len() {
                a[(k + 1 + t, j)] -= s * v[t];
            }
        }
        // A ← A (I − 2vvᵀ/vᵀv)
        for i in 0..n {
            let dot: f64 = (0..v.len()).map(|t| a[(i, k + 1 + t)] * v[t]).sum();
            let s = 2.0 * dot / vnorm_sq;
            for t in 0..v.len() {
                a[(i, k + 1 + t)] -= s * v[t];
            }
        }
        for i in k + 2..n {
            a[(i, k)] = 0.0;
        }
    }
    a
}
