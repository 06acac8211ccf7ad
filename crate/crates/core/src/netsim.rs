//! Fixed-step simulation of diffusively coupled node networks
//! `ẋᵢ = f(xᵢ) − c Σⱼ Lᵢⱼ H xⱼ` and synchronization-error metrics.

use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::numerics::Matrix;
use crate::ode::Rk4;

/// States whose Euclidean norm exceeds this are treated as divergent.
pub const BLOWUP_GUARD: f64 = 1e6;
/// Seed for [`seeded_initial_states`] when none is given.
pub const DEFAULT_SEED: u64 = 3;

/// Smooth Chua circuit parameters.
///
/// Field names carry a `_c` suffix to keep them apart from the coupling-design
/// symbols; `kappa` is the time-scale factor.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChuaParams {
    pub kappa: f64,
    pub alpha_c: f64,
    pub beta_c: f64,
    pub gamma_c: f64,
    pub a_c: f64,
    pub b_c: f64,
}

impl ChuaParams {
    pub fn validate(&self) -> Result<()> {
        let all = [
            self.kappa,
            self.alpha_c,
            self.beta_c,
            self.gamma_c,
            self.a_c,
            self.b_c,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        if self.kappa == 0.0 {
            return Err(Error::InvalidArgument("kappa must be nonzero".into()));
        }
        Ok(())
    }
}

pub fn chua_field(p: &ChuaParams, x: &[f64; 3]) -> [f64; 3] {
    let ka = p.kappa * p.alpha_c;
    [
        -ka * x[0] + ka * x[1] - ka * (p.a_c * x[0].powi(3) + p.b_c * x[0]),
        p.kappa * (x[0] - x[1] + x[2]),
        -p.kappa * p.beta_c * x[1] - p.kappa * p.gamma_c * x[2],
    ]
}

pub fn chua_jacobian(p: &ChuaParams, x: &[f64; 3]) -> Matrix {
    let ka = p.kappa * p.alpha_c;
    let k = p.kappa;
    Matrix::from_rows(&[
        [-ka - ka * (3.0 * p.a_c * x[0] * x[0] + p.b_c), ka, 0.0],
        [k, -k, k],
        [0.0, -k * p.beta_c, -k * p.gamma_c],
    ])
}

/// Vector field of an individual node.
pub trait NodeDynamics {
    fn dim(&self) -> usize;
    fn field(&self, x: &[f64], out: &mut [f64]);
    fn jacobian(&self, x: &[f64]) -> Matrix;
}

/// Built-in node models.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dynamics {
    Chua(ChuaParams),
    /// `ẋ = A x`.
    Linear(Matrix),
}

impl Dynamics {
    pub fn validate(&self) -> Result<()> {
        match self {
            Dynamics::Chua(p) => p.validate(),
            Dynamics::Linear(a) => a.ensure_square("linear dynamics matrix").map(|_| ()),
        }
    }
}

impl NodeDynamics for Dynamics {
    fn dim(&self) -> usize {
        match self {
            Dynamics::Chua(_) => 3,
            Dynamics::Linear(a) => a.rows(),
        }
    }

    fn field(&self, x: &[f64], out: &mut [f64]) {
        match self {
            Dynamics::Chua(p) => out.copy_from_slice(&chua_field(p, &[x[0], x[1], x[2]])),
            Dynamics::Linear(a) => {
                for (i, o) in out.iter_mut().enumerate() {
                    *o = a.row_slice(i).iter().zip(x).map(|(m, v)| m * v).sum();
                }
            }
        }
    }

    fn jacobian(&self, x: &[f64]) -> Matrix {
        match self {
            Dynamics::Chua(p) => chua_jacobian(p, &[x[0], x[1], x[2]]),
            Dynamics::Linear(a) => a.clone(),
        }
    }
}

/// A network of identical nodes coupled through the graph Laplacian and inner matrix `H`.
#[derive(Clone, Debug)]
pub struct NetworkSystem {
    pub graph: Graph,
    pub c: f64,
    pub h: Matrix,
    pub dynamics: Dynamics,
}

impl NetworkSystem {
    pub fn new(graph: Graph, c: f64, h: Matrix, dynamics: Dynamics) -> Result<Self> {
        dynamics.validate()?;
        let n = dynamics.dim();
        if h.rows() != n || h.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "inner coupling is {}x{}, node dimension is {n}",
                h.rows(),
                h.cols()
            )));
        }
        if !(c.is_finite() && c >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "coupling strength {c} must be >= 0"
            )));
        }
        Ok(NetworkSystem {
            graph,
            c,
            h,
            dynamics,
        })
    }

    pub fn node_dim(&self) -> usize {
        self.dynamics.dim()
    }

    // Coupling written as Σ_{j~i} H (x_i − x_j) so that it vanishes exactly on the
    // synchronization manifold.
    fn rhs(&self, x: &[f64], dx: &mut [f64], diff: &mut [f64]) {
        let n = self.node_dim();
        for (i, nbrs) in self.graph.adjacency().iter().enumerate() {
            let xi = &x[i * n..(i + 1) * n];
            let out = &mut dx[i * n..(i + 1) * n];
            self.dynamics.field(xi, out);
            if self.c == 0.0 {
                continue;
            }
            diff.iter_mut().for_each(|d| *d = 0.0);
            for &j in nbrs {
                let xj = &x[j * n..(j + 1) * n];
                for k in 0..n {
                    diff[k] += xi[k] - xj[k];
                }
            }
            for r in 0..n {
                let coupling: f64 = self
                    .h
                    .row_slice(r)
                    .iter()
                    .zip(diff.iter())
                    .map(|(h, d)| h * d)
                    .sum();
                out[r] -= self.c * coupling;
            }
        }
    }
}

/// Sampled network states and the synchronization error at each sample.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub node_count: usize,
    pub node_dim: usize,
    pub times: Vec<f64>,
    /// One flattened `node_count × node_dim` state per sample.
    pub states: Vec<Vec<f64>>,
    pub sync_error: Vec<f64>,
    /// Time at which the blow-up guard tripped, if it did.
    pub blowup: Option<f64>,
}

impl Trajectory {
    pub fn node_state(&self, sample: usize, node: usize) -> &[f64] {
        &self.states[sample][node * self.node_dim..(node + 1) * self.node_dim]
    }

    pub fn final_time(&self) -> f64 {
        self.times.last().copied().unwrap_or(0.0)
    }

    pub fn final_sync_error(&self) -> f64 {
        self.sync_error.last().copied().unwrap_or(0.0)
    }

    /// Writes `t,x_1_1,…,x_N_n,sync_error` rows followed by a `# synchronized=…,blowup=…` summary.
    pub fn write_csv<W: Write>(&self, w: &mut W, synchronized: bool) -> io::Result<()> {
        write!(w, "t")?;
        for i in 1..=self.node_count {
            for k in 1..=self.node_dim {
                write!(w, ",x_{i}_{k}")?;
            }
        }
        writeln!(w, ",sync_error")?;
        for ((t, state), e) in self.times.iter().zip(&self.states).zip(&self.sync_error) {
            write!(w, "{t}")?;
            for v in state {
                write!(w, ",{v}")?;
            }
            writeln!(w, ",{e}")?;
        }
        match self.blowup {
            Some(t) => writeln!(
                w,
                "# synchronized={synchronized},blowup=true,blowup_time={t}"
            ),
            None => writeln!(w, "# synchronized={synchronized},blowup=false"),
        }
    }
}

/// `max_i ‖x_i − x̄‖₂` for one flattened network state.
pub fn sync_error(state: &[f64], node_count: usize, node_dim: usize) -> f64 {
    let mut mean = vec![0.0; node_dim];
    for i in 0..node_count {
        for k in 0..node_dim {
            mean[k] += state[i * node_dim + k];
        }
    }
    mean.iter_mut().for_each(|m| *m /= node_count as f64);
    (0..node_count)
        .map(|i| {
            (0..node_dim)
                .map(|k| (state[i * node_dim + k] - mean[k]).powi(2))
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max)
}

pub fn sync_error_series(traj: &Trajectory) -> Vec<f64> {
    traj.states
        .iter()
        .map(|s| sync_error(s, traj.node_count, traj.node_dim))
        .collect()
}

/// Finite-horizon synchronization test: no blow-up and `sync_error < eps` on every
/// sample in the final `window` time units.
pub fn is_synchronized(traj: &Trajectory, eps: f64, window: f64) -> bool {
    if traj.blowup.is_some() || traj.times.is_empty() {
        return false;
    }
    let start = traj.final_time() - window;
    traj.times
        .iter()
        .zip(&traj.sync_error)
        .filter(|(t, _)| **t >= start - 1e-12)
        .all(|(_, e)| *e < eps)
}

/// Uniform initial states in `[−amplitude, amplitude]` per component from a seeded ChaCha8 stream.
pub fn seeded_initial_states(
    node_count: usize,
    node_dim: usize,
    seed: u64,
    amplitude: f64,
) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..node_count)
        .map(|_| {
            (0..node_dim)
                .map(|_| rng.gen_range(-amplitude..=amplitude))
                .collect()
        })
        .collect()
}

/// Integrates the network with classic RK4 for `round(horizon/step)` steps, keeping every
/// `stride`-th state plus the last one. Divergence truncates the trajectory and sets `blowup`.
pub fn simulate(
    sys: &NetworkSystem,
    x0: &[Vec<f64>],
    step: f64,
    horizon: f64,
    stride: usize,
) -> Result<Trajectory> {
    if !(step > 0.0 && step.is_finite()) || !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::InvalidArgument(
            "step and horizon must be positive".into(),
        ));
    }
    if stride == 0 {
        return Err(Error::InvalidArgument("stride must be at least 1".into()));
    }
    let node_count = sys.graph.node_count();
    let n = sys.node_dim();
    if x0.len() != node_count || x0.iter().any(|x| x.len() != n) {
        return Err(Error::DimensionMismatch(format!(
            "initial state must be {node_count} x {n}"
        )));
    }
    let mut x: Vec<f64> = x0.iter().flatten().copied().collect();
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }

    let steps = (horizon / step).round() as usize;
    let mut rk = Rk4::new(x.len());
    let mut diff = vec![0.0; n];
    let mut traj = Trajectory {
        node_count,
        node_dim: n,
        times: Vec::new(),
        states: Vec::new(),
        sync_error: Vec::new(),
        blowup: None,
    };
    let record = |traj: &mut Trajectory, t: f64, x: &[f64]| {
        traj.times.push(t);
        traj.sync_error.push(sync_error(x, node_count, n));
        traj.states.push(x.to_vec());
    };
    record(&mut traj, 0.0, &x);

    for s in 1..=steps {
        rk.step(|y, dy| sys.rhs(y, dy, &mut diff), &mut x, step);
        let t = s as f64 * step;
        let diverged = x.chunks(n).any(|xi| {
            let norm = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
            !(norm <= BLOWUP_GUARD)
        });
        if diverged {
            traj.blowup = Some(t);
            break;
        }
        if s % stride == 0 || s == steps {
            record(&mut traj, t, &x);
        }
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn chua_field_values() {
        let p = fixtures::chua_params();
        assert_eq!(chua_field(&p, &[0.0; 3]), [0.0; 3]);
        let v = chua_field(&p, &[1.0, 0.0, 0.0]);
        assert!((v[0] + 2.3).abs() < 1e-14 && v[1] == 1.0 && v[2] == 0.0);
    }

    #[test]
    fn chua_jacobian_matches_finite_differences() {
        let p = fixtures::chua_params();
        let h = 1e-6;
        for x in [[0.0, 0.0, 0.0], [0.3, -0.2, 0.1]] {
            let jac = chua_jacobian(&p, &x);
            for col in 0..3 {
                let mut xp = x;
                let mut xm = x;
                xp[col] += h;
                xm[col] -= h;
                let (fp, fm) = (chua_field(&p, &xp), chua_field(&p, &xm));
                for row in 0..3 {
                    let fd = (fp[row] - fm[row]) / (2.0 * h);
                    assert!((fd - jac[(row, col)]).abs() < 1e-8);
                }
            }
        }
        assert!(
            (&chua_jacobian(&p, &[0.0; 3]) - &fixtures::chua_linearization()).max_abs() < 1e-15
        );
    }

    #[test]
    fn sync_error_metric() {
        assert_eq!(sync_error(&[1.0, 2.0, 1.0, 2.0], 2, 2), 0.0);
        let e = sync_error(&[3.0, 4.0, -3.0, -4.0], 2, 2);
        assert!((e - 5.0).abs() < 1e-15);
    }

    #[test]
    fn uncoupled_identical_nodes_stay_identical() {
        let g = Graph::new(2, &[(1, 2)]).unwrap();
        let sys = NetworkSystem::new(
            g,
            0.0,
            Matrix::identity(3),
            Dynamics::Chua(fixtures::chua_params()),
        )
        .unwrap();
        let x0 = vec![vec![0.2, -0.1, 0.3]; 2];
        let traj = simulate(&sys, &x0, 1e-2, 5.0, 10).unwrap();
        assert!(traj.sync_error.iter().all(|&e| e == 0.0));
        assert!(is_synchronized(&traj, 1e-10, 5.0));
        assert_eq!(traj.times.len(), 51);
        assert!((traj.final_time() - 5.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_inputs() {
        let g = fixtures::k33();
        let dynamics = Dynamics::Chua(fixtures::chua_params());
        assert!(matches!(
            NetworkSystem::new(g.clone(), 1.0, Matrix::identity(2), dynamics.clone()),
            Err(Error::DimensionMismatch(_))
        ));
        let sys = NetworkSystem::new(g, 1.0, Matrix::identity(3), dynamics).unwrap();
        assert!(simulate(&sys, &[vec![0.0; 3]], 1e-2, 1.0, 1).is_err());
        assert!(simulate(&sys, &vec![vec![0.0; 3]; 6], 0.0, 1.0, 1).is_err());
    }

    #[test]
    fn blowup_is_recorded_not_fatal() {
        let g = Graph::new(2, &[(1, 2)]).unwrap();
        let sys = NetworkSystem::new(
            g,
            0.0,
            Matrix::identity(1),
            Dynamics::Linear(Matrix::identity(1)),
        )
        .unwrap();
        let traj = simulate(&sys, &[vec![1.0], vec![2.0]], 0.01, 100.0, 1).unwrap();
        let t = traj.blowup.expect("exponential growth trips the guard");
        assert!(t > 13.0 && t < 15.0);
        assert!(!is_synchronized(&traj, 1.0, 1.0));
    }

    #[test]
    fn seeded_states_are_deterministic_and_bounded() {
        let a = seeded_initial_states(6, 3, 7, 0.5);
        assert_eq!(a, seeded_initial_states(6, 3, 7, 0.5));
        assert_ne!(a, seeded_initial_states(6, 3, 8, 0.5));
        assert!(a.iter().flatten().all(|v| v.abs() <= 0.5));
    }
}
