//! C ABI over `netsync`.
//!
//! Objects are opaque heap handles created by `ns_*_new`/`ns_*_scan`/`ns_design_*` and released
//! with the matching `*_free`. Every fallible call returns an [`NsStatus`]; on failure the
//! thread-local message from [`ns_last_error_message`] says what went wrong. Panics never
//! cross the boundary.
//!
//! Matrices are passed as row-major `n×n` arrays of `double`. Graph nodes are 1-based.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use netsync::design::{choose_b, design_rank1, DesignResult};
use netsync::netsim::{is_synchronized, seeded_initial_states, simulate, Dynamics, NetworkSystem};
use netsync::region::{check_criterion, region_scan, RegionClass, RegionSet, ScanOptions};
use netsync::{fixtures, spectrum, Graph, Matrix};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidEdge = 3,
    DuplicateEdge = 4,
    Disconnected = 5,
    DimensionMismatch = 6,
    NonFinite = 7,
    NoConvergence = 8,
    Singular = 9,
    ScanTooShort = 10,
    NotStabilizable = 11,
    NotControllable = 12,
    SearchExhausted = 13,
    BufferTooSmall = 14,
    BlowUp = 15,
    Panic = 16,
}

/// Shape of a scanned synchronized region.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NsRegionClass {
    Empty = 0,
    SingleBounded = 1,
    UnboundedTail = 2,
    DisconnectedUnion = 3,
}

/// Undirected simple graph.
pub struct NsGraph(Graph);

/// Synchronized region of a pair (F, H).
pub struct NsRegion(RegionSet);

/// Rank-1 coupling design.
pub struct NsDesign(DesignResult);

#[derive(Debug, thiserror::Error)]
enum Failure {
    #[error(transparent)]
    Core(#[from] netsync::Error),
    #[error("null pointer for {0}")]
    Null(&'static str),
    #[error("buffer holds {got} values, {need} needed")]
    BufferTooSmall { need: usize, got: usize },
}

impl Failure {
    fn status(&self) -> NsStatus {
        use netsync::Error as E;
        match self {
            Failure::Null(_) => NsStatus::NullPointer,
            Failure::BufferTooSmall { .. } => NsStatus::BufferTooSmall,
            Failure::Core(e) => match e {
                E::InvalidEdge(..) => NsStatus::InvalidEdge,
                E::DuplicateEdge(..) => NsStatus::DuplicateEdge,
                E::Disconnected => NsStatus::Disconnected,
                E::NotSymmetric | E::DimensionMismatch(_) => NsStatus::DimensionMismatch,
                E::NonFinite => NsStatus::NonFinite,
                E::NoConvergence(_) => NsStatus::NoConvergence,
                E::SingularSystem => NsStatus::Singular,
                E::ScanTooShort { .. } => NsStatus::ScanTooShort,
                E::BlowUp(_) => NsStatus::BlowUp,
                E::NotStabilizable => NsStatus::NotStabilizable,
                E::NotControllable => NsStatus::NotControllable,
                E::SearchExhausted => NsStatus::SearchExhausted,
                E::InvalidArgument(_) => NsStatus::InvalidArgument,
            },
        }
    }
}

type FfiResult<T> = Result<T, Failure>;

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn guard(body: impl FnOnce() -> FfiResult<()>) -> NsStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_last_error("");
            NsStatus::Ok
        }
        Ok(Err(e)) => {
            set_last_error(&e.to_string());
            e.status()
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(&format!("panic: {msg}"));
            NsStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &'static str) -> FfiResult<&'a T> {
    p.as_ref().ok_or(Failure::Null(what))
}

unsafe fn out_ref<'a, T>(p: *mut T, what: &'static str) -> FfiResult<&'a mut T> {
    p.as_mut().ok_or(Failure::Null(what))
}

unsafe fn in_slice<'a, T>(p: *const T, len: usize, what: &'static str) -> FfiResult<&'a [T]> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn fill(dst: *mut f64, len: usize, src: &[f64]) -> FfiResult<()> {
    if src.len() > len {
        return Err(Failure::BufferTooSmall {
            need: src.len(),
            got: len,
        });
    }
    if src.is_empty() {
        return Ok(());
    }
    if dst.is_null() {
        return Err(Failure::Null("output buffer"));
    }
    std::slice::from_raw_parts_mut(dst, src.len()).copy_from_slice(src);
    Ok(())
}

unsafe fn square(data: *const f64, n: usize, what: &'static str) -> FfiResult<Matrix> {
    let len = n
        .checked_mul(n)
        .ok_or_else(|| netsync::Error::InvalidArgument(format!("{what} dimension {n}")))?;
    Ok(Matrix::new(n, n, in_slice(data, len, what)?.to_vec())?)
}

unsafe fn emit<T>(out: *mut *mut T, value: T) -> FfiResult<()> {
    *out_ref(out, "output handle")? = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn release<T>(p: *mut T) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Message for the last failed call on this thread; empty after a success. The pointer stays
/// valid until the next `ns_*` call on the same thread.
#[no_mangle]
pub extern "C" fn ns_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ns_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a graph on `n` nodes from `edge_count` pairs stored as `edges[2k], edges[2k+1]`.
///
/// # Safety
/// `edges` must hold `2 * edge_count` values and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ns_graph_new(
    n: usize,
    edges: *const usize,
    edge_count: usize,
    out: *mut *mut NsGraph,
) -> NsStatus {
    guard(|| {
        let len = edge_count
            .checked_mul(2)
            .ok_or_else(|| netsync::Error::InvalidArgument("edge count overflows".into()))?;
        let flat = in_slice(edges, len, "edges")?;
        let pairs: Vec<(usize, usize)> = flat.chunks_exact(2).map(|p| (p[0], p[1])).collect();
        emit(out, NsGraph(Graph::new(n, &pairs)?))
    })
}

/// # Safety
/// `graph` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn ns_graph_free(graph: *mut NsGraph) {
    release(graph)
}

/// Adds the edge `{i, j}` in place.
///
/// # Safety
/// `graph` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ns_graph_add_edge(graph: *mut NsGraph, i: usize, j: usize) -> NsStatus {
    guard(|| {
        let g = out_ref(graph, "graph")?;
        g.0 = g.0.add_edge(i, j)?;
        Ok(())
    })
}

/// # Safety
/// `graph` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ns_graph_node_count(graph: *const NsGraph, out: *mut usize) -> NsStatus {
    guard(|| {
        *out_ref(out, "out")? = deref(graph, "graph")?.0.node_count();
        Ok(())
    })
}

/// # Safety
/// `graph` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ns_graph_complement(
    graph: *const NsGraph,
    out: *mut *mut NsGraph,
) -> NsStatus {
    guard(|| emit(out, NsGraph(deref(graph, "graph")?.0.complement())))
}

/// # Safety
/// `graph` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ns_graph_component_count(
    graph: *const NsGraph,
    out: *mut usize,
) -> NsStatus {
    guard(|| {
        *out_ref(out, "out")? = deref(graph, "graph")?.0.connected_components().len();
        Ok(())
    })
}

/// Ascending Laplacian eigenvalues into `values[0..n]`, and optionally the eigenratio
/// λ₂/λ_N into `ratio`.
///
/// # Safety
/// `values` must hold `len` doubles; `ratio` may be null.
#[no_mangle]
pub unsafe extern "C" fn ns_graph_spectrum(
    graph: *const NsGraph,
    values: *mut f64,
    len: usize,
    ratio: *mut f64,
) -> NsStatus {
    guard(|| {
        let spec = spectrum(&deref(graph, "graph")?.0);
        fill(values, len, &spec.values)?;
        if let Some(r) = ratio.as_mut() {
            *r = spec.ratio;
        }
        Ok(())
    })
}

/// Node betweenness (ordered pairs, unnormalized) into `values[0..n]`.
///
/// # Safety
/// `values` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn ns_graph_betweenness(
    graph: *const NsGraph,
    values: *mut f64,
    len: usize,
) -> NsStatus {
    guard(|| fill(values, len, &deref(graph, "graph")?.0.betweenness()?))
}

/// Average shortest-path distance as the reduced fraction `num/den`.
///
/// # Safety
/// `num` and `den` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ns_graph_average_distance(
    graph: *const NsGraph,
    num: *mut u64,
    den: *mut u64,
) -> NsStatus {
    guard(|| {
        let d = deref(graph, "graph")?.0.average_distance()?;
        *out_ref(num, "num")? = *d.numer();
        *out_ref(den, "den")? = *d.denom();
        Ok(())
    })
}

/// Scans σ ∈ [0, sigma_max] for F − σH Hurwitz. Non-positive `grid_step` or `boundary_tol`
/// select the defaults (1e-3·sigma_max and 1e-6).
///
/// # Safety
/// `f` and `h` must hold `n*n` doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ns_region_scan(
    f: *const f64,
    h: *const f64,
    n: usize,
    sigma_max: f64,
    grid_step: f64,
    boundary_tol: f64,
    out: *mut *mut NsRegion,
) -> NsStatus {
    guard(|| {
        let (f, h) = (square(f, n, "F")?, square(h, n, "H")?);
        let mut opts = ScanOptions::new(sigma_max);
        if grid_step > 0.0 {
            opts.grid_step = grid_step;
        }
        if boundary_tol > 0.0 {
            opts.boundary_tol = boundary_tol;
        }
        emit(out, NsRegion(region_scan(&f, &h, opts)?))
    })
}

/// # Safety
/// `region` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn ns_region_free(region: *mut NsRegion) {
    release(region)
}

/// # Safety
/// `region` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ns_region_interval_count(
    region: *const NsRegion,
    out: *mut usize,
) -> NsStatus {
    guard(|| {
        *out_ref(out, "out")? = deref(region, "region")?.0.intervals.len();
        Ok(())
    })
}

/// Closed interval `index` (0-based, ascending) of the region.
///
/// # Safety
/// `region` must be a live handle; `lo` and `hi` writable.
#[no_mangle]
pub unsafe extern "C" fn ns_region_interval(
    region: *const NsRegion,
    index: usize,
    lo: *mut f64,
    hi: *mut f64,
) -> NsStatus {
    guard(|| {
        let r = &deref(region, "region")?.0;
        let iv = r.intervals.get(index).ok_or_else(|| {
            netsync::Error::InvalidArgument(format!("interval {index} of {}", r.intervals.len()))
        })?;
        *out_ref(lo, "lo")? = iv.lo;
        *out_ref(hi, "hi")? = iv.hi;
        Ok(())
    })
}

/// # Safety
/// `region` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ns_region_classification(
    region: *const NsRegion,
    out: *mut NsRegionClass,
) -> NsStatus {
    guard(|| {
        *out_ref(out, "out")? = match deref(region, "region")?.0.classification {
            RegionClass::Empty => NsRegionClass::Empty,
            RegionClass::SingleBounded => NsRegionClass::SingleBounded,
            RegionClass::UnboundedTail => NsRegionClass::UnboundedTail,
            RegionClass::DisconnectedUnion => NsRegionClass::DisconnectedUnion,
        };
        Ok(())
    })
}

/// Whether every c·λ_k (k ≥ 2) of the graph lies in the region.
///
/// # Safety
/// `graph` and `region` must be live handles and `verdict` writable.
#[no_mangle]
pub unsafe extern "C" fn ns_check_criterion(
    graph: *const NsGraph,
    c: f64,
    region: *const NsRegion,
    verdict: *mut bool,
) -> NsStatus {
    guard(|| {
        let spec = spectrum(&deref(graph, "graph")?.0);
        let report = check_criterion(&spec, c, &deref(region, "region")?.0)?;
        *out_ref(verdict, "verdict")? = report.verdict;
        Ok(())
    })
}

/// Designs H = b kᵀ for F. With `b` null an input vector is chosen from `seed`.
///
/// # Safety
/// `f` must hold `n*n` doubles, `b` null or `n` doubles, and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ns_design_rank1(
    f: *const f64,
    n: usize,
    b: *const f64,
    q_scale: f64,
    seed: u64,
    out: *mut *mut NsDesign,
) -> NsStatus {
    guard(|| {
        let f = square(f, n, "F")?;
        let b = if b.is_null() {
            choose_b(&f, seed)?
        } else {
            in_slice(b, n, "b")?.to_vec()
        };
        emit(out, NsDesign(design_rank1(&f, &b, q_scale)?))
    })
}

/// # Safety
/// `design` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn ns_design_free(design: *mut NsDesign) {
    release(design)
}

/// Row-major H into `out[0..n*n]`.
///
/// # Safety
/// `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn ns_design_h(
    design: *const NsDesign,
    out: *mut f64,
    len: usize,
) -> NsStatus {
    guard(|| fill(out, len, deref(design, "design")?.0.h.data()))
}

/// Gain k into `out[0..n]`.
///
/// # Safety
/// `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn ns_design_k(
    design: *const NsDesign,
    out: *mut f64,
    len: usize,
) -> NsStatus {
    guard(|| fill(out, len, &deref(design, "design")?.0.k))
}

/// Input vector b into `out[0..n]`.
///
/// # Safety
/// `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn ns_design_b(
    design: *const NsDesign,
    out: *mut f64,
    len: usize,
) -> NsStatus {
    guard(|| fill(out, len, &deref(design, "design")?.0.b))
}

/// Largest eigenvalue of the Lyapunov certificate; negative when the design is certified.
///
/// # Safety
/// `design` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ns_design_certificate(design: *const NsDesign, out: *mut f64) -> NsStatus {
    guard(|| {
        *out_ref(out, "out")? = deref(design, "design")?.0.certificate_eig;
        Ok(())
    })
}

/// Simulates Chua oscillators coupled through the graph with strength `c` and 3×3 inner
/// coupling `h`, from seeded initial states in [-0.5, 0.5]. Writes the final synchronization
/// error and whether the error stayed below `eps` over the final `window` time units.
/// Divergence is reported through `synchronized = false`, not as an error.
///
/// # Safety
/// `graph` must be a live handle, `h` must hold 9 doubles, and both outputs be writable.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn ns_simulate_chua(
    graph: *const NsGraph,
    c: f64,
    h: *const f64,
    seed: u64,
    step: f64,
    horizon: f64,
    eps: f64,
    window: f64,
    final_error: *mut f64,
    synchronized: *mut bool,
) -> NsStatus {
    guard(|| {
        let g = deref(graph, "graph")?.0.clone();
        let n = g.node_count();
        let sys = NetworkSystem::new(
            g,
            c,
            square(h, 3, "H")?,
            Dynamics::Chua(fixtures::chua_params()),
        )?;
        let traj = simulate(
            &sys,
            &seeded_initial_states(n, 3, seed, 0.5),
            step,
            horizon,
            1000,
        )?;
        *out_ref(final_error, "final_error")? = traj.final_sync_error();
        *out_ref(synchronized, "synchronized")? = is_synchronized(&traj, eps, window);
        Ok(())
    })
}
