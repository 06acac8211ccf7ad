//! Rank-1 inner coupling design.
//!
//! Given node linearization `F`, build `H = b k` such that `F − σH` is Hurwitz for
//! every `σ ≥ 1`, together with a quadratic Lyapunov certificate
//! `F P + P Fᵀ − 2 b bᵀ ≺ 0`, `P ≻ 0`, `k = bᵀ P⁻¹`. Since `H P = b bᵀ`,
//! `(F − σH) P + P (F − σH)ᵀ = F P + P Fᵀ − 2σ b bᵀ ⪯ F P + P Fᵀ − 2 b bᵀ` for `σ ≥ 1`.
//!
//! Construction:
//! 1. `k₀`: Ackermann gain placing `F − b k₀` at `{−1, …, −n}` when `(F, b)` is
//!    controllable; `k₀ = 0` when `F` is already Hurwitz and `(F, b)` is not controllable.
//! 2. `P₀` solves `(F − b k₀) P₀ + P₀ (F − b k₀)ᵀ = −(q·I + 2 b bᵀ)`.
//! 3. `y = k₀ P₀`, `β = max(2, ‖y‖²/q + 1)`; Young's inequality gives
//!    `F P₀ + P₀ Fᵀ − β b bᵀ ≺ 0`.
//! 4. `P = (2/β) P₀`, `k = bᵀ P⁻¹`, `H = b k`.
//!
//! Pole placement is ill-conditioned when the controllability matrix is nearly singular: the
//! gain `k₀` explodes and the Lyapunov solve fails. For a controllable pair the design then
//! falls back to a shifted Gramian. With `α > 0` such that `F + αI` has all eigenvalues in
//! the open right half-plane, `W` solving `(F + αI) W + W (F + αI)ᵀ = 2 b bᵀ` is positive
//! definite and `F W + W Fᵀ − 2 b bᵀ = −2α W`, so `P = W` is a certificate with `β = 2`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{
    complex_rank_tol, eigenvalues, inverse, is_hurwitz, rank_tol, solve_lyapunov, sym_eigenvalues,
    Matrix, DEFAULT_RANK_TOL,
};

/// Eigenvalues with real part at or above `−UNSTABLE_TOL` count as unstable.
pub const UNSTABLE_TOL: f64 = 1e-9;
const ROOT_CLUSTER_TOL: f64 = 1e-5;
// Relative rank tolerance for [λI − F | b]; it has to absorb the error of a computed
// eigenvalue, which is well above machine precision for repeated roots.
const STRUCTURE_RANK_TOL: f64 = 1e-7;
const RANDOM_CANDIDATES: usize = 100;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DesignResult {
    pub b: Vec<f64>,
    pub k: Vec<f64>,
    pub p: Matrix,
    pub beta: f64,
    pub h: Matrix,
    /// Largest eigenvalue of `F P + P Fᵀ − 2 b bᵀ`; negative for a valid certificate.
    pub certificate_eig: f64,
    /// Pre-feedback gain used to shift `F` before the Lyapunov solve (zero for the Gramian route).
    pub k0: Vec<f64>,
    pub construction: Construction,
}

/// How the certificate `P` was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    PolePlacement,
    ShiftedGramian { alpha: f64 },
}

// Distinct eigenvalues; clusters of nearly equal roots are averaged, which is far more
// accurate than the individual members for repeated eigenvalues.
fn distinct_eigenvalues(f: &Matrix) -> Result<Vec<Complex64>> {
    let roots = eigenvalues(f)?;
    let scale = roots.iter().map(|z| z.norm()).fold(1.0f64, f64::max);
    let tol = ROOT_CLUSTER_TOL * scale;
    let mut clusters: Vec<Vec<Complex64>> = Vec::new();
    for z in roots {
        match clusters
            .iter_mut()
            .find(|c| c.iter().any(|w| (*w - z).norm() <= tol))
        {
            Some(c) => c.push(z),
            None => clusters.push(vec![z]),
        }
    }
    Ok(clusters
        .into_iter()
        .map(|c| c.iter().sum::<Complex64>() / c.len() as f64)
        .collect())
}

fn unstable_eigenvalues(f: &Matrix, tol: f64) -> Result<Vec<Complex64>> {
    Ok(distinct_eigenvalues(f)?
        .into_iter()
        .filter(|z| z.re >= -tol)
        .collect())
}

// [λI − F | extra] as complex rows.
fn shifted_block(f: &Matrix, lambda: Complex64, extra: Option<&[f64]>) -> Vec<Vec<Complex64>> {
    let n = f.rows();
    (0..n)
        .map(|i| {
            let mut row: Vec<Complex64> = (0..n)
                .map(|j| {
                    let d = if i == j {
                        lambda
                    } else {
                        Complex64::new(0.0, 0.0)
                    };
                    d - f[(i, j)]
                })
                .collect();
            if let Some(b) = extra {
                row.push(Complex64::new(b[i], 0.0));
            }
            row
        })
        .collect()
}

/// True iff every eigenvalue with `Re λ ≥ −tol` has geometric multiplicity one.
pub fn jordan_condition(f: &Matrix, tol: f64) -> Result<bool> {
    let n = f.ensure_square("F")?;
    for lambda in unstable_eigenvalues(f, tol)? {
        if complex_rank_tol(&shifted_block(f, lambda, None), STRUCTURE_RANK_TOL) != n - 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// PBH test: `rank [λI − F | b] = n` at every eigenvalue with `Re λ ≥ −tol`.
pub fn pbh_stabilizable(f: &Matrix, b: &[f64], tol: f64) -> Result<bool> {
    let n = f.ensure_square("F")?;
    if b.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "b has length {}, F is {n}x{n}",
            b.len()
        )));
    }
    // rank is invariant under scaling b, the tolerance is not
    let norm = b.iter().map(|v| v * v).sum::<f64>().sqrt();
    let unit: Vec<f64> = b
        .iter()
        .map(|v| if norm > 0.0 { v / norm } else { 0.0 })
        .collect();
    for lambda in unstable_eigenvalues(f, tol)? {
        if complex_rank_tol(&shifted_block(f, lambda, Some(&unit)), STRUCTURE_RANK_TOL) != n {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `[b, F b, …, F^{n−1} b]`.
pub fn controllability_matrix(f: &Matrix, b: &[f64]) -> Matrix {
    let n = f.rows();
    let mut cols = vec![b.to_vec()];
    for _ in 1..n {
        let next = f.mul_vec(cols.last().unwrap());
        cols.push(next);
    }
    let mut m = Matrix::zeros(n, n);
    for (j, col) in cols.iter().enumerate() {
        for i in 0..n {
            m[(i, j)] = col[i];
        }
    }
    m
}

pub fn is_controllable(f: &Matrix, b: &[f64]) -> bool {
    f.rows() == b.len() && rank_tol(&controllability_matrix(f, b), DEFAULT_RANK_TOL) == f.rows()
}

/// Ackermann's formula: `k = e_nᵀ C⁻¹ φ(F)` with `φ` the monic polynomial with the given real roots.
pub fn ackermann(f: &Matrix, b: &[f64], poles: &[f64]) -> Result<Vec<f64>> {
    let n = f.ensure_square("F")?;
    if poles.len() != n || b.len() != n {
        return Err(Error::DimensionMismatch(
            "need n poles and an n-vector b".into(),
        ));
    }
    if !is_controllable(f, b) {
        return Err(Error::NotControllable);
    }
    // φ(s) = Π (s − p) in descending coefficients
    let mut phi = vec![1.0];
    for &p in poles {
        let mut next = vec![0.0; phi.len() + 1];
        for (i, c) in phi.iter().enumerate() {
            next[i] += c;
            next[i + 1] -= p * c;
        }
        phi = next;
    }
    let mut phi_f = Matrix::zeros(n, n);
    for &c in &phi {
        phi_f = (&phi_f * f).shifted(c);
    }
    let c_inv = inverse(&controllability_matrix(f, b))?;
    let last_row = Matrix::row(c_inv.row_slice(n - 1));
    Ok((&last_row * &phi_f).data().to_vec())
}

/// Picks an input vector `b` for a rank-1 design: canonical vectors `e_n … e_1` first, then
/// seeded random unit vectors. When `F` is not Hurwitz the pair must also be controllable.
pub fn choose_b(f: &Matrix, seed: u64) -> Result<Vec<f64>> {
    let n = f.ensure_square("F")?;
    if !jordan_condition(f, UNSTABLE_TOL)? {
        return Err(Error::NotStabilizable);
    }
    let hurwitz = is_hurwitz(f, 0.0);
    let canonical = (0..n).rev().map(|i| {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        e
    });
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random = (0..RANDOM_CANDIDATES).map(move |_| {
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let norm = v
            .iter()
            .map(|x| x * x)
            .sum::<f64>()
            .sqrt()
            .max(f64::MIN_POSITIVE);
        v.into_iter().map(|x| x / norm).collect::<Vec<f64>>()
    });
    for b in canonical.chain(random) {
        if pbh_stabilizable(f, &b, UNSTABLE_TOL)? && (hurwitz || is_controllable(f, &b)) {
            return Ok(b);
        }
    }
    Err(Error::SearchExhausted)
}

pub fn design_rank1(f: &Matrix, b: &[f64], q_scale: f64) -> Result<DesignResult> {
    let n = f.ensure_square("F")?;
    if b.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "b has length {}, F is {n}x{n}",
            b.len()
        )));
    }
    if !(q_scale > 0.0 && q_scale.is_finite()) {
        return Err(Error::InvalidArgument("q_scale must be positive".into()));
    }
    if !pbh_stabilizable(f, b, UNSTABLE_TOL)? {
        return Err(Error::NotStabilizable);
    }
    let controllable = is_controllable(f, b);
    if !controllable && !is_hurwitz(f, 0.0) {
        return Err(Error::NotControllable);
    }
    match pole_placement_design(f, b, q_scale, controllable) {
        Ok(d) if d.certificate_eig < 0.0 => Ok(d),
        Ok(_) | Err(Error::SingularSystem) if controllable => shifted_gramian_design(f, b),
        other => other,
    }
}

fn pole_placement_design(
    f: &Matrix,
    b: &[f64],
    q_scale: f64,
    controllable: bool,
) -> Result<DesignResult> {
    let n = f.rows();
    let k0 = if controllable {
        let poles: Vec<f64> = (1..=n).map(|i| -(i as f64)).collect();
        ackermann(f, b, &poles)?
    } else {
        vec![0.0; n]
    };

    let closed = f - &Matrix::outer(b, &k0);
    let q = &Matrix::identity(n).scale(q_scale) + &Matrix::outer(b, b).scale(2.0);
    let p0 = solve_lyapunov(&closed, &q)?;
    let y = (&Matrix::row(&k0) * &p0).data().to_vec();
    let y_norm_sq: f64 = y.iter().map(|v| v * v).sum();
    let beta = f64::max(2.0, y_norm_sq / q_scale + 1.0);
    let p = p0.scale(2.0 / beta);
    finish(f, b, p, beta, k0, Construction::PolePlacement)
}

fn shifted_gramian_design(f: &Matrix, b: &[f64]) -> Result<DesignResult> {
    let n = f.rows();
    let alpha = eigenvalues(f)?.iter().map(|z| -z.re).fold(0.0, f64::max) + 1.0;
    // −(F + αI) is Hurwitz, so this is the controllability Gramian of the reversed system
    let w = solve_lyapunov(
        &f.shifted(alpha).scale(-1.0),
        &Matrix::outer(b, b).scale(2.0),
    )?;
    finish(
        f,
        b,
        w,
        2.0,
        vec![0.0; n],
        Construction::ShiftedGramian { alpha },
    )
}

fn finish(
    f: &Matrix,
    b: &[f64],
    p: Matrix,
    beta: f64,
    k0: Vec<f64>,
    construction: Construction,
) -> Result<DesignResult> {
    let p_inv = inverse(&p)?;
    let k = (&Matrix::row(b) * &p_inv).transpose().data().to_vec();
    let h = Matrix::outer(b, &k);
    let certificate_eig = certificate_eigenvalue(f, b, &p)?;
    Ok(DesignResult {
        b: b.to_vec(),
        k,
        p,
        beta,
        h,
        certificate_eig,
        k0,
        construction,
    })
}

/// Largest eigenvalue of `sym(F P + P Fᵀ − 2 b bᵀ)`.
pub fn certificate_eigenvalue(f: &Matrix, b: &[f64], p: &Matrix) -> Result<f64> {
    let fp = f * p;
    let m = &(&fp + &fp.transpose()) - &Matrix::outer(b, b).scale(2.0);
    let values = sym_eigenvalues(&m.symmetrized())?;
    Ok(values.last().copied().unwrap_or(f64::NEG_INFINITY))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub samples: Vec<(f64, bool)>,
    pub certificate_eig: Option<f64>,
    pub all_hurwitz: bool,
}

/// Checks `F − σH` at each sample and, given `(b, P)` with `H P = b bᵀ`, the certificate eigenvalue.
pub fn verify_design(
    f: &Matrix,
    h: &Matrix,
    sigma_samples: &[f64],
    factors: Option<(&[f64], &Matrix)>,
) -> Result<VerifyReport> {
    let n = f.ensure_square("F")?;
    if h.rows() != n || h.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "H is {}x{}, F is {n}x{n}",
            h.rows(),
            h.cols()
        )));
    }
    let samples: Vec<(f64, bool)> = sigma_samples
        .iter()
        .map(|&s| (s, is_hurwitz(&(f - &h.scale(s)), 0.0)))
        .collect();
    let certificate_eig = match factors {
        Some((b, p)) => Some(certificate_eigenvalue(f, b, p)?),
        None => None,
    };
    let all_hurwitz = samples.iter().all(|&(_, ok)| ok);
    Ok(VerifyReport {
        samples,
        certificate_eig,
        all_hurwitz,
    })
}
