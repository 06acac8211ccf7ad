//! Synchronized regions of an `(F, H)` pair and the eigenvalue-placement criterion.
//!
//! The region is stated in the nonnegative parameter `σ`: it is the set of
//! `σ ≥ 0` for which `F − σH` is Hurwitz. A network with Laplacian eigenvalues
//! `λ₂ … λ_N` and coupling strength `c` is locally synchronizing iff every
//! `c·λ_k` (`k ≥ 2`) lies in the region.
//!
//! Interval endpoints are always reported on the stable side of the located
//! boundary, so membership tests need no outward slack.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::netsim::NodeDynamics;
use crate::numerics::{is_hurwitz, spectral_abscissa, LaplacianSpectrum, Matrix};
use crate::ode::Rk4;

/// Shape of a scanned region.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RegionClass {
    Empty,
    SingleBounded,
    /// Stable at the scan ceiling; presumed to extend to infinity.
    UnboundedTail,
    DisconnectedUnion,
}

/// Closed interval `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegionSet {
    pub sigma_max: f64,
    pub intervals: Vec<Interval>,
    pub stable_at_max: bool,
    pub boundary_tol: f64,
    /// Hurwitz checks at `10·sigma_max` and `100·sigma_max`.
    pub tail_checks: Vec<(f64, bool)>,
    pub classification: RegionClass,
}

impl RegionSet {
    pub fn contains(&self, sigma: f64) -> bool {
        self.intervals.iter().any(|iv| iv.contains(sigma))
    }
}

/// Scan options; defaults follow `grid_step = 1e-3·sigma_max`, `boundary_tol = 1e-6`.
#[derive(Clone, Copy, Debug)]
pub struct ScanOptions {
    pub sigma_max: f64,
    pub grid_step: f64,
    pub boundary_tol: f64,
}

impl ScanOptions {
    pub fn new(sigma_max: f64) -> Self {
        ScanOptions {
            sigma_max,
            grid_step: 1e-3 * sigma_max,
            boundary_tol: 1e-6,
        }
    }
}

fn shifted_pencil(f: &Matrix, h: &Matrix, sigma: f64) -> Matrix {
    f - &h.scale(sigma)
}

fn stable_at(f: &Matrix, h: &Matrix, sigma: f64) -> bool {
    is_hurwitz(&shifted_pencil(f, h, sigma), 0.0)
}

fn check_pair(f: &Matrix, h: &Matrix) -> Result<()> {
    let n = f.ensure_square("F")?;
    if h.rows() != n || h.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "H is {}x{}, F is {n}x{n}",
            h.rows(),
            h.cols()
        )));
    }
    Ok(())
}

fn grid(sigma_max: f64, grid_step: f64) -> Vec<f64> {
    let count = (sigma_max / grid_step).ceil() as usize;
    (0..=count)
        .map(|i| (i as f64 * grid_step).min(sigma_max))
        .collect()
}

/// One row of the `sigma,hurwitz,abscissa` table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridSample {
    pub sigma: f64,
    pub hurwitz: bool,
    pub abscissa: f64,
}

/// Grid evaluation of `F − σH` used for the region CSV.
pub fn grid_samples(
    f: &Matrix,
    h: &Matrix,
    sigma_max: f64,
    grid_step: f64,
) -> Result<Vec<GridSample>> {
    check_pair(f, h)?;
    grid(sigma_max, grid_step)
        .into_iter()
        .map(|sigma| {
            let m = shifted_pencil(f, h, sigma);
            Ok(GridSample {
                sigma,
                hurwitz: is_hurwitz(&m, 0.0),
                abscissa: spectral_abscissa(&m)?,
            })
        })
        .collect()
}

// Shrinks [stable, unstable] (in either order) to width `tol`; returns the stable end.
fn refine_boundary(f: &Matrix, h: &Matrix, mut stable: f64, mut unstable: f64, tol: f64) -> f64 {
    while (unstable - stable).abs() > tol {
        let mid = 0.5 * (stable + unstable);
        if stable_at(f, h, mid) {
            stable = mid;
        } else {
            unstable = mid;
        }
    }
    stable
}

/// Computes `S ∩ [0, sigma_max]` with `S = {σ ≥ 0 : F − σH Hurwitz}` by grid detection
/// followed by bisection of each stability change.
pub fn region_scan(f: &Matrix, h: &Matrix, opts: ScanOptions) -> Result<RegionSet> {
    check_pair(f, h)?;
    let ScanOptions {
        sigma_max,
        grid_step,
        boundary_tol,
    } = opts;
    if !(sigma_max > 0.0 && sigma_max.is_finite()) {
        return Err(Error::InvalidArgument("sigma_max must be positive".into()));
    }
    if !(grid_step > 0.0) || !(boundary_tol > 0.0) {
        return Err(Error::InvalidArgument(
            "grid_step and boundary_tol must be positive".into(),
        ));
    }

    let points = grid(sigma_max, grid_step);
    let flags: Vec<bool> = points.iter().map(|&s| stable_at(f, h, s)).collect();

    let mut intervals = Vec::new();
    let mut open: Option<f64> = flags[0].then_some(0.0);
    for w in 1..points.len() {
        let (prev, cur) = (flags[w - 1], flags[w]);
        match (prev, cur) {
            (false, true) => {
                open = Some(refine_boundary(
                    f,
                    h,
                    points[w],
                    points[w - 1],
                    boundary_tol,
                ));
            }
            (true, false) => {
                let hi = refine_boundary(f, h, points[w - 1], points[w], boundary_tol);
                let lo = open.take().expect("stable run has a start");
                intervals.push(Interval { lo, hi });
            }
            _ => {}
        }
    }
    let stable_at_max = *flags.last().expect("grid is non-empty");
    if let Some(lo) = open {
        intervals.push(Interval { lo, hi: sigma_max });
    }
    let tail_checks = [10.0, 100.0]
        .iter()
        .map(|m| (m * sigma_max, stable_at(f, h, m * sigma_max)))
        .collect();

    let mut region = RegionSet {
        sigma_max,
        intervals,
        stable_at_max,
        boundary_tol,
        tail_checks,
        classification: RegionClass::Empty,
    };
    region.classification = classify(&region);
    Ok(region)
}

pub fn classify(region: &RegionSet) -> RegionClass {
    if region.intervals.is_empty() {
        RegionClass::Empty
    } else if region.stable_at_max {
        RegionClass::UnboundedTail
    } else if region.intervals.len() >= 2 {
        RegionClass::DisconnectedUnion
    } else {
        RegionClass::SingleBounded
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Placement {
    pub lambda: f64,
    pub sigma: f64,
    pub in_region: bool,
}

/// Placement of every scaled nonzero eigenvalue `c·λ_k`, `k = 2..N`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionReport {
    pub c: f64,
    pub placements: Vec<Placement>,
    pub verdict: bool,
}

pub fn check_criterion(
    spectrum: &LaplacianSpectrum,
    c: f64,
    region: &RegionSet,
) -> Result<CriterionReport> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "coupling strength {c} must be positive"
        )));
    }
    let needed = c * spectrum.lambda_n;
    if needed > region.sigma_max {
        return Err(Error::ScanTooShort {
            needed,
            sigma_max: region.sigma_max,
        });
    }
    let placements: Vec<Placement> = spectrum
        .values
        .iter()
        .skip(1)
        .map(|&lambda| {
            let sigma = c * lambda;
            Placement {
                lambda,
                sigma,
                in_region: region.contains(sigma),
            }
        })
        .collect();
    let verdict = placements.iter().all(|p| p.in_region);
    Ok(CriterionReport {
        c,
        placements,
        verdict,
    })
}

/// Coupling strengths `c > 0` placing every `c·λ_k` in the region, restricted to the scanned
/// range `c·λ_N ≤ sigma_max`. `truncated` flags an interval cut off by that restriction.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AdmissibleCouplings {
    pub intervals: Vec<Interval>,
    pub c_max_scanned: f64,
    pub truncated: bool,
}

pub fn admissible_couplings(
    spectrum: &LaplacianSpectrum,
    region: &RegionSet,
) -> Result<AdmissibleCouplings> {
    if !(spectrum.lambda2 > 0.0) {
        return Err(Error::Disconnected);
    }
    let c_max = region.sigma_max / spectrum.lambda_n;
    let mut acc = vec![Interval { lo: 0.0, hi: c_max }];
    for &lambda in spectrum.values.iter().skip(1) {
        let scaled: Vec<Interval> = region
            .intervals
            .iter()
            .map(|iv| Interval {
                lo: iv.lo / lambda,
                hi: iv.hi / lambda,
            })
            .collect();
        acc = intersect(&acc, &scaled);
        if acc.is_empty() {
            break;
        }
    }
    // c = 0 itself is excluded; a degenerate [0, 0] carries no admissible value.
    acc.retain(|iv| iv.hi > 0.0);
    let truncated = region.stable_at_max && acc.last().is_some_and(|iv| iv.hi >= c_max);
    Ok(AdmissibleCouplings {
        intervals: acc,
        c_max_scanned: c_max,
        truncated,
    })
}

fn intersect(a: &[Interval], b: &[Interval]) -> Vec<Interval> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        let lo = a[i].lo.max(b[j].lo);
        let hi = a[i].hi.min(b[j].hi);
        if lo <= hi {
            out.push(Interval { lo, hi });
        }
        if a[i].hi < b[j].hi {
            i += 1;
        } else {
            j += 1;
        }
    }
    out
}

/// Largest-Lyapunov-exponent estimate of the variational equation at one `σ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MsfEstimate {
    pub sigma: f64,
    pub l_max: f64,
    pub horizon: f64,
    pub renorm_interval: usize,
}

#[derive(Clone, Copy, Debug)]
pub struct MsfOptions {
    pub horizon: f64,
    pub step: f64,
    pub renorm_interval: usize,
}

impl Default for MsfOptions {
    fn default() -> Self {
        MsfOptions {
            horizon: 500.0,
            step: 1e-2,
            renorm_interval: 10,
        }
    }
}

/// Benettin estimate of the master stability function: co-integrates `ṡ = f(s)` and
/// `ω̇ = [Df(s) − σH] ω`, renormalizing `ω` every `renorm_interval` steps.
pub fn msf_lyapunov<D: NodeDynamics + ?Sized>(
    dynamics: &D,
    h: &Matrix,
    sigma: f64,
    s0: &[f64],
    opts: MsfOptions,
) -> Result<MsfEstimate> {
    let n = dynamics.dim();
    if h.rows() != n || h.cols() != n || s0.len() != n {
        return Err(Error::DimensionMismatch(format!("node dimension is {n}")));
    }
    if !(opts.horizon > 0.0) || !(opts.step > 0.0) || opts.renorm_interval == 0 {
        return Err(Error::InvalidArgument(
            "horizon, step and renorm_interval must be positive".into(),
        ));
    }
    let steps = (opts.horizon / opts.step).round().max(1.0) as usize;
    let horizon = steps as f64 * opts.step;

    // state layout: [s (n) | ω (n)]
    let mut y = vec![0.0; 2 * n];
    y[..n].copy_from_slice(s0);
    let init = 1.0 / (n as f64).sqrt();
    y[n..].iter_mut().for_each(|w| *w = init);

    let mut rk = Rk4::new(2 * n);
    let mut log_growth = 0.0;
    for k in 1..=steps {
        rk.step(
            |y, dy| {
                let (s, w) = y.split_at(n);
                let (ds, dw) = dy.split_at_mut(n);
                dynamics.field(s, ds);
                let jac = dynamics.jacobian(s);
                for r in 0..n {
                    dw[r] = (0..n)
                        .map(|c| (jac[(r, c)] - sigma * h[(r, c)]) * w[c])
                        .sum();
                }
            },
            &mut y,
            opts.step,
        );
        let s_norm = y[..n].iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(s_norm <= crate::netsim::BLOWUP_GUARD) {
            return Err(Error::BlowUp(k as f64 * opts.step));
        }
        if k % opts.renorm_interval == 0 || k == steps {
            let norm = y[n..].iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm == 0.0 || !norm.is_finite() {
                return Err(Error::BlowUp(k as f64 * opts.step));
            }
            log_growth += norm.ln();
            y[n..].iter_mut().for_each(|w| *w /= norm);
        }
    }
    Ok(MsfEstimate {
        sigma,
        l_max: log_growth / horizon,
        horizon,
        renorm_interval: opts.renorm_interval,
    })
}
