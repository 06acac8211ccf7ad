use thiserror::Error;

/// Errors produced by graph construction, numerics, region analysis, design and simulation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid edge ({0}, {1}) for a graph on {2} nodes")]
    InvalidEdge(usize, usize, usize),
    #[error("edge ({0}, {1}) already present")]
    DuplicateEdge(usize, usize),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("non-finite matrix entry")]
    NonFinite,
    #[error("iteration did not converge: {0}")]
    NoConvergence(&'static str),
    #[error("linear system is singular")]
    SingularSystem,
    #[error("scan ceiling {sigma_max} is below c*lambda_N = {needed}")]
    ScanTooShort { needed: f64, sigma_max: f64 },
    #[error("state norm exceeded blow-up guard at t = {0}")]
    BlowUp(f64),
    #[error("pair is not stabilizable by a rank-1 coupling")]
    NotStabilizable,
    #[error("pair (F, b) is not controllable")]
    NotControllable,
    #[error("no admissible input vector found among the candidates")]
    SearchExhausted,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
