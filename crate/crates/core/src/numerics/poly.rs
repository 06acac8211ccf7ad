//! Characteristic polynomials, polynomial roots and Hurwitz testing.

use num_complex::Complex64;

use super::hessenberg::{balance, hessenberg};
use super::matrix::Matrix;
use crate::error::{Error, Result};

const ROOT_MAX_ITER: usize = 2000;
const ROOT_RESIDUAL: f64 = 1e-8;
const ROUTH_PIVOT_EPS: f64 = 1e-14;
// Roots closer than this (relative to the largest modulus) are candidates for one multiple root.
const CLUSTER_RADIUS: f64 = 1e-2;
const MULTIPLE_ROOT_TOL: f64 = 1e-10;

/// Real polynomial with coefficients in descending powers: `c[0]·xⁿ + … + c[n]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial(pub Vec<f64>);

impl Polynomial {
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.0
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.0
            .iter()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Value and first derivative at `z` by Horner's scheme.
    fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for &c in &self.0 {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    /// `Σ |cᵢ|·|z|^(n−i)`, the magnitude scale of a Horner evaluation at `z`.
    fn eval_scale(&self, z: Complex64) -> f64 {
        let r = z.norm();
        self.0.iter().fold(0.0, |acc, &c| acc * r + c.abs())
    }

    pub fn derivative(&self) -> Polynomial {
        let n = self.degree();
        if n == 0 {
            return Polynomial(vec![0.0]);
        }
        Polynomial(
            self.0[..n]
                .iter()
                .enumerate()
                .map(|(i, c)| c * (n - i) as f64)
                .collect(),
        )
    }

    fn monic(&self) -> Polynomial {
        let lead = self.0[0];
        Polynomial(self.0.iter().map(|c| c / lead).collect())
    }
}

/// Monic characteristic polynomial `det(λI − m)`.
///
/// The matrix is balanced and reduced to Hessenberg form first; the coefficients then come
/// from La Budde's recurrence on the leading principal submatrices. This stays accurate for
/// matrices with a large, nearly low-rank part (e.g. `F − σH` at σ = 10⁶), where
/// [`faddeev_leverrier`] loses every digit of the low-order coefficients.
pub fn char_poly(m: &Matrix) -> Result<Polynomial> {
    m.ensure_square("matrix")?;
    let h = hessenberg(&balance(m));
    let n = h.rows();
    // polys[i] = det(λI − h[..i, ..i]), descending coefficients
    let mut polys: Vec<Vec<f64>> = vec![vec![1.0]];
    for i in 0..n {
        let mut p = polys[i].clone();
        p.push(0.0);
        for t in 1..p.len() {
            p[t] -= h[(i, i)] * polys[i][t - 1];
        }
        let mut sub = 1.0;
        for m in 1..=i {
            sub *= h[(i - m + 1, i - m)];
            let term = sub * h[(i - m, i)];
            if term == 0.0 {
                continue;
            }
            let q = &polys[i - m];
            let offset = p.len() - q.len();
            for (t, c) in q.iter().enumerate() {
                p[offset + t] -= term * c;
            }
        }
        polys.push(p);
    }
    Ok(Polynomial(polys.pop().unwrap()))
}

/// Characteristic polynomial by the Faddeev–LeVerrier recursion. Simple and exact in
/// rational arithmetic, but numerically unstable once `‖m‖` is large.
pub fn faddeev_leverrier(m: &Matrix) -> Result<Polynomial> {
    let n = m.ensure_square("matrix")?;
    let mut coeffs = vec![0.0; n + 1];
    coeffs[0] = 1.0;
    let mut aux = Matrix::zeros(n, n);
    for k in 1..=n {
        aux = (m * &aux).shifted(coeffs[k - 1]);
        coeffs[k] = -(m * &aux).trace() / k as f64;
    }
    Ok(Polynomial(coeffs))
}

/// All complex roots by Aberth–Ehrlich simultaneous iteration.
pub fn poly_roots(p: &Polynomial) -> Result<Vec<Complex64>> {
    if p.0.is_empty() || p.0[0] == 0.0 {
        return Err(Error::InvalidArgument(
            "leading coefficient must be nonzero".into(),
        ));
    }
    if p.degree() == 0 {
        return Err(Error::InvalidArgument("polynomial has degree 0".into()));
    }
    let p = p.monic();

    // Exact zero roots factor out first; Aberth converges slowly on them.
    let mut trimmed = p.0.clone();
    let mut zeros = 0;
    while trimmed.len() > 1 && *trimmed.last().unwrap() == 0.0 {
        trimmed.pop();
        zeros += 1;
    }
    let q = Polynomial(trimmed);
    let mut roots = vec![Complex64::new(0.0, 0.0); zeros];
    match q.degree() {
        0 => {}
        1 => roots.push(Complex64::new(-q.0[1], 0.0)),
        _ => {
            let mut found = aberth(&q)?;
            polish_multiple_roots(&q, &mut found);
            roots.extend(found);
        }
    }
    pair_conjugates(&mut roots);
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(roots)
}

fn aberth(p: &Polynomial) -> Result<Vec<Complex64>> {
    let n = p.degree();
    let center = -p.0[1] / n as f64;
    // Fujiwara bound on root moduli, shifted to the centroid.
    let radius = p.0[1..]
        .iter()
        .enumerate()
        .map(|(i, c)| (c.abs()).powf(1.0 / (i + 1) as f64))
        .fold(0.0f64, f64::max)
        .max(1e-3)
        * 2.0;
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            Complex64::new(center, 0.0) + Complex64::from_polar(radius, angle)
        })
        .collect();

    for _ in 0..ROOT_MAX_ITER {
        let mut done = true;
        for k in 0..n {
            let (val, der) = p.eval_with_derivative(z[k]);
            if val == Complex64::new(0.0, 0.0) {
                continue;
            }
            let ratio = val / der;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| {
                    let d = z[k] - z[j];
                    if d == Complex64::new(0.0, 0.0) {
                        Complex64::new(0.0, 0.0)
                    } else {
                        d.inv()
                    }
                })
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !step.re.is_finite() || !step.im.is_finite() {
                continue;
            }
            z[k] -= step;
            if step.norm() > 4.0 * f64::EPSILON * (1.0 + z[k].norm()) {
                done = false;
            }
        }
        if done {
            break;
        }
    }

    for &r in &z {
        let residual = p.eval(r).norm();
        if !(residual <= ROOT_RESIDUAL * p.eval_scale(r)) {
            return Err(Error::NoConvergence("aberth root iteration"));
        }
    }
    Ok(z)
}

// Simultaneous iteration resolves an m-fold root only to about ε^(1/m). Such a root is a
// simple root of p^(m−1), so each tight cluster of m roots is replaced by the Newton root of
// p^(m−1) near its mean, provided p, p′, …, p^(m−2) all vanish there too.
fn polish_multiple_roots(p: &Polynomial, roots: &mut [Complex64]) {
    let n = roots.len();
    let radius = CLUSTER_RADIUS * roots.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let mut assigned = vec![false; n];
    for i in 0..n {
        if assigned[i] {
            continue;
        }
        assigned[i] = true;
        let mut members = vec![i];
        let mut next = 0;
        while next < members.len() {
            let anchor = roots[members[next]];
            for j in 0..n {
                if !assigned[j] && (roots[j] - anchor).norm() <= radius {
                    assigned[j] = true;
                    members.push(j);
                }
            }
            next += 1;
        }
        let m = members.len();
        if m < 2 {
            continue;
        }
        let mut derivatives = vec![p.clone()];
        for _ in 1..m {
            let d = derivatives.last().unwrap().derivative();
            derivatives.push(d);
        }
        let mut z = members.iter().map(|&j| roots[j]).sum::<Complex64>() / m as f64;
        if z.im.abs() <= radius {
            z.im = 0.0;
        }
        let simple = &derivatives[m - 1];
        for _ in 0..100 {
            let (v, d) = simple.eval_with_derivative(z);
            if d.norm() == 0.0 {
                break;
            }
            let step = v / d;
            z -= step;
            if step.norm() <= 4.0 * f64::EPSILON * (1.0 + z.norm()) {
                break;
            }
        }
        let vanishes = derivatives[..m - 1].iter().all(|d| {
            d.eval(z).norm() <= MULTIPLE_ROOT_TOL * d.eval_scale(z).max(f64::MIN_POSITIVE)
        });
        if vanishes && z.re.is_finite() && z.im.is_finite() {
            for &j in &members {
                roots[j] = z;
            }
        }
    }
}

// Real-coefficient roots come in conjugate pairs; snap near-real roots onto the
// axis and make paired roots exact conjugates.
fn pair_conjugates(roots: &mut [Complex64]) {
    for r in roots.iter_mut() {
        if r.im.abs() <= 1e-12 * r.norm().max(1.0) {
            r.im = 0.0;
        }
    }
    let mut upper: Vec<usize> = (0..roots.len()).filter(|&i| roots[i].im > 0.0).collect();
    let mut lower: Vec<usize> = (0..roots.len()).filter(|&i| roots[i].im < 0.0).collect();
    if upper.len() != lower.len() {
        return;
    }
    upper.sort_by(|&a, &b| {
        roots[a]
            .re
            .total_cmp(&roots[b].re)
            .then(roots[a].im.total_cmp(&roots[b].im))
    });
    lower.sort_by(|&a, &b| {
        roots[a]
            .re
            .total_cmp(&roots[b].re)
            .then(roots[b].im.total_cmp(&roots[a].im))
    });
    for (&u, &l) in upper.iter().zip(&lower) {
        let avg = (roots[u] + roots[l].conj()) * 0.5;
        roots[u] = avg;
        roots[l] = avg.conj();
    }
}

/// Routh–Hurwitz test: true iff every root of `p` lies strictly in the open left half-plane.
/// A vanishing pivot counts as "not strictly Hurwitz". Each array entry carries the size of
/// the terms it was computed from; a pivot is zero when it is within rounding of that size.
pub fn routh_hurwitz(p: &Polynomial) -> bool {
    let n = p.degree();
    if p.0.is_empty() || p.0[0] == 0.0 {
        return false;
    }
    let p = p.monic();
    if n == 0 {
        return true;
    }
    let entry = |c: f64| (c, c.abs());
    let mut prev: Vec<(f64, f64)> = p.0.iter().step_by(2).map(|&c| entry(c)).collect();
    let mut cur: Vec<(f64, f64)> = p.0.iter().skip(1).step_by(2).map(|&c| entry(c)).collect();
    for _ in 0..n {
        let (pivot, pivot_mag) = cur.first().copied().unwrap_or((0.0, 0.0));
        if !(pivot > ROUTH_PIVOT_EPS * pivot_mag) {
            return false;
        }
        let width = prev.len().max(cur.len());
        let (head, head_mag) = prev[0];
        let ratio = head / pivot;
        let next: Vec<(f64, f64)> = (0..width.saturating_sub(1))
            .map(|j| {
                let (a, a_mag) = prev.get(j + 1).copied().unwrap_or((0.0, 0.0));
                let (b, b_mag) = cur.get(j + 1).copied().unwrap_or((0.0, 0.0));
                let mag = a_mag
                    + ratio.abs() * b_mag
                    + (head_mag / pivot + pivot_mag / pivot * ratio.abs()) * b.abs();
                (a - ratio * b, mag)
            })
            .collect();
        prev = cur;
        cur = next;
    }
    true
}

/// True iff every eigenvalue of `m` has real part `< −tol`.
pub fn is_hurwitz(m: &Matrix, tol: f64) -> bool {
    if !m.is_square() {
        return false;
    }
    match char_poly(&m.shifted(tol)) {
        Ok(p) => routh_hurwitz(&p),
        Err(_) => false,
    }
}

pub fn eigenvalues(m: &Matrix) -> Result<Vec<Complex64>> {
    poly_roots(&char_poly(m)?)
}

/// Largest real part over the eigenvalues of `m`.
pub fn spectral_abscissa(m: &Matrix) -> Result<f64> {
    let roots = eigenvalues(m)?;
    Ok(roots.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max))
}

/// Spectral abscissa located by bisection on `μ ↦ is_hurwitz(m − μI)`,
/// independent of the root finder.
pub fn abscissa_by_bisection(m: &Matrix, tol: f64) -> f64 {
    let n = m.rows();
    let gershgorin = (0..n)
        .map(|i| m.row_slice(i).iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0f64, f64::max);
    let (mut lo, mut hi) = (-gershgorin - 1.0, gershgorin + 1.0);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if is_hurwitz(&m.shifted(-mid), 0.0) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}
