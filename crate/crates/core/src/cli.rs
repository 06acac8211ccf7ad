//! Command-line front end.
//!
//! Exit codes: `0` success or true verdict, `1` false verdict, `2` invalid input.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::design::{choose_b, design_rank1, verify_design, Construction};
use crate::error::Error;
use crate::fixtures;
use crate::graph::Graph;
use crate::netsim::{
    is_synchronized, seeded_initial_states, simulate, Dynamics, NetworkSystem, DEFAULT_SEED,
};
use crate::numerics::{spectrum, LaplacianSpectrum, Matrix};
use crate::region::{
    admissible_couplings, check_criterion, grid_samples, region_scan, RegionSet, ScanOptions,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

const DEFAULT_VERIFY_SAMPLES: [f64; 5] = [1.0, 2.0, 10.0, 1e3, 1e6];

#[derive(Parser, Debug)]
#[command(
    name = "netsync",
    version,
    about = "Synchronizability analysis of coupled dynamical networks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Degree sequence, distances, clustering, betweenness and Laplacian spectrum of a graph
    Analyze(Options),
    /// Complement graph, its spectrum and the spectral duality residual
    Complement(Options),
    /// Spectrum after each added edge (`--add i,j`, repeatable)
    EdgeSweep(Options),
    /// Synchronized region of (F, H)
    Region(Options),
    /// Check c·λ_k ∈ S for a graph, coupling strength and (F, H)
    Check(Options),
    /// Design a rank-1 inner coupling H = b k for F
    Design(Options),
    /// Simulate the coupled network and test for synchronization
    Simulate(Options),
    /// Run the command named in a config file
    Run(Options),
}

/// Flags shared by every subcommand; unset values fall back to `--config`, then to defaults.
#[derive(Args, Debug, Default, Clone)]
pub struct Options {
    /// JSON config file whose fields mirror the flag names (snake_case)
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Directory for CSV/JSON artifacts
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Matrix file for the node linearization F
    #[arg(long = "f")]
    pub f: Option<PathBuf>,
    /// Matrix file for the inner coupling H
    #[arg(long = "h")]
    pub h: Option<PathBuf>,
    /// Matrix file (n×1) for the input vector b
    #[arg(long = "b")]
    pub b: Option<PathBuf>,
    /// JSON node dynamics, e.g. {"chua": {...}} or {"linear": {matrix}}
    #[arg(long)]
    pub dynamics: Option<PathBuf>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub sigma_max: Option<f64>,
    #[arg(long)]
    pub grid_step: Option<f64>,
    #[arg(long)]
    pub boundary_tol: Option<f64>,
    #[arg(long)]
    pub step: Option<f64>,
    #[arg(long)]
    pub horizon: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub window: Option<f64>,
    #[arg(long)]
    pub q_scale: Option<f64>,
    #[arg(long)]
    pub stride: Option<usize>,
    /// Edge to add, as `i,j` (1-based)
    #[arg(long = "add", value_parser = parse_edge)]
    pub add: Vec<(usize, usize)>,
}

fn parse_edge(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected i,j, got {s:?}"))?;
    let i = a.trim().parse().map_err(|e| format!("{e}"))?;
    let j = b.trim().parse().map_err(|e| format!("{e}"))?;
    Ok((i, j))
}

/// Fully merged run configuration. Also the schema of `--config` files.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<String>,
    pub graph: Option<PathBuf>,
    pub f: Option<PathBuf>,
    pub h: Option<PathBuf>,
    pub b: Option<PathBuf>,
    pub dynamics: Option<PathBuf>,
    pub c: Option<f64>,
    pub sigma_max: Option<f64>,
    pub grid_step: Option<f64>,
    pub boundary_tol: Option<f64>,
    pub step: Option<f64>,
    pub horizon: Option<f64>,
    pub seed: Option<u64>,
    pub eps: Option<f64>,
    pub window: Option<f64>,
    pub q_scale: Option<f64>,
    pub stride: Option<usize>,
    pub add_edges: Vec<[usize; 2]>,
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Io(std::io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<std::fmt::Error> for CliError {
    fn from(e: std::fmt::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses arguments, runs the command and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if code == EXIT_OK {
                write!(out, "{e}")
            } else {
                write!(err, "{e}")
            };
            return code;
        }
    };
    let (name, opts) = match cli.command {
        Command::Analyze(o) => ("analyze", o),
        Command::Complement(o) => ("complement", o),
        Command::EdgeSweep(o) => ("edge-sweep", o),
        Command::Region(o) => ("region", o),
        Command::Check(o) => ("check", o),
        Command::Design(o) => ("design", o),
        Command::Simulate(o) => ("simulate", o),
        Command::Run(o) => ("run", o),
    };
    let config = match merge_config(name, opts) {
        Ok(c) => c,
        Err(e) => return report_error(e, err),
    };
    match execute(&config, out) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_FALSE,
        Err(e) => report_error(e, err),
    }
}

fn report_error(e: CliError, err: &mut dyn Write) -> i32 {
    let msg = match e {
        CliError::Input(m) => m,
        CliError::Io(e) => e.to_string(),
    };
    let _ = writeln!(err, "error: {msg}");
    EXIT_INPUT
}

fn merge_config(name: &str, o: Options) -> CliResult<RunConfig> {
    let mut cfg = match &o.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
            let mut cfg = serde_json::from_str::<RunConfig>(&text)
                .map_err(|e| CliError::Input(format!("invalid config {}: {e}", path.display())))?;
            // paths inside a config file are relative to the file itself
            let base = path.parent().unwrap_or(Path::new(""));
            for field in [
                &mut cfg.graph,
                &mut cfg.f,
                &mut cfg.h,
                &mut cfg.b,
                &mut cfg.dynamics,
                &mut cfg.out_dir,
            ] {
                if let Some(p) = field.as_mut() {
                    if p.is_relative() {
                        *p = base.join(&*p);
                    }
                }
            }
            cfg
        }
        None => RunConfig::default(),
    };
    if name != "run" {
        cfg.command = Some(name.to_string());
    }
    macro_rules! overlay {
        ($($field:ident),*) => { $( if o.$field.is_some() { cfg.$field = o.$field; } )* };
    }
    overlay!(
        graph,
        f,
        h,
        b,
        dynamics,
        c,
        sigma_max,
        grid_step,
        boundary_tol,
        step,
        horizon,
        seed,
        eps,
        window,
        q_scale,
        stride
    );
    if o.out.is_some() {
        cfg.out_dir = o.out;
    }
    if !o.add.is_empty() {
        cfg.add_edges = o.add.iter().map(|&(i, j)| [i, j]).collect();
    }
    if cfg.command.is_none() {
        return Err(CliError::Input("config file must name a command".into()));
    }
    Ok(cfg)
}

/// Runs a merged configuration; `Ok(verdict)` maps to exit code 0/1.
pub fn execute(cfg: &RunConfig, out: &mut dyn Write) -> CliResult<bool> {
    match cfg.command.as_deref().unwrap_or_default() {
        "analyze" => cmd_analyze(cfg, out),
        "complement" => cmd_complement(cfg, out),
        "edge-sweep" => cmd_edge_sweep(cfg, out),
        "region" => cmd_region(cfg, out),
        "check" => cmd_check(cfg, out),
        "design" => cmd_design(cfg, out),
        "simulate" => cmd_simulate(cfg, out),
        other => Err(CliError::Input(format!("unknown command {other:?}"))),
    }
}

fn require<'a, T>(value: &'a Option<T>, flag: &str) -> CliResult<&'a T> {
    value
        .as_ref()
        .ok_or_else(|| CliError::Input(format!("missing --{flag}")))
}

fn positive(value: f64, name: &str) -> CliResult<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(CliError::Input(format!(
            "{name} must be positive, got {value}"
        )))
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("invalid file {}: {e}", path.display())))
}

pub fn load_graph(path: &Path) -> CliResult<Graph> {
    read_json(path)
}

pub fn load_matrix(path: &Path) -> CliResult<Matrix> {
    read_json(path)
}

fn out_file(cfg: &RunConfig, name: &str) -> CliResult<Option<PathBuf>> {
    match &cfg.out_dir {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            Ok(Some(dir.join(name)))
        }
        None => Ok(None),
    }
}

fn write_artifact(cfg: &RunConfig, name: &str, contents: &str) -> CliResult<()> {
    if let Some(path) = out_file(cfg, name)? {
        fs::write(path, contents)?;
    }
    Ok(())
}

fn fmt_values(values: &[f64]) -> String {
    let parts: Vec<String> = values.iter().map(|v| format!("{:.6}", clean(*v))).collect();
    format!("{{{}}}", parts.join(", "))
}

// Avoids printing "-0.000000" for round-off around zero.
fn clean(v: f64) -> f64 {
    if v.abs() < 5e-13 {
        0.0
    } else {
        v
    }
}

fn spectrum_csv(spec: &LaplacianSpectrum) -> String {
    let mut s = String::from("index,eigenvalue\n");
    for (i, v) in spec.values.iter().enumerate() {
        let _ = writeln!(s, "{},{}", i + 1, v);
    }
    s
}

fn cmd_analyze(cfg: &RunConfig, out: &mut dyn Write) -> CliResult<bool> {
    let g = load_graph(require(&cfg.graph, "graph")?)?;
    let n = g.node_count();
    let spec = spectrum(&g);
    let clustering = g.clustering();
    let complement_q = g.complement().connected_components().len();
    let top_multiplicity = spec.multiplicity(n as f64);

    let mut report = String::new();
    writeln!(report, "nodes: {n}  edges: {}", g.edge_count())?;
    writeln!(report, "degree sequence: {:?}", g.degree_sequence())?;
    let (avg, betweenness) = match (g.average_distance(), g.betweenness()) {
        (Ok(avg), Ok(b)) => (format!("{}/{}", avg.numer(), avg.denom()), Some(b)),
        _ => ("undefined (disconnected)".to_string(), None),
    };
    writeln!(report, "average distance: {avg}")?;
    writeln!(report, "mean clustering: {:.6}", clustering.mean)?;
    if let Some(b) = &betweenness {
        writeln!(report, "betweenness: {}", fmt_values(b))?;
    }
    writeln!(report, "spectrum: {}", fmt_values(&spec.values))?;
    writeln!(
        report,
        "lambda_2: {:.6}  lambda_N: {:.6}  r: {:.6}",
        spec.lambda2, spec.lambda_n, spec.ratio
    )?;
    writeln!(report, "complement components q: {complement_q}")?;
    if complement_q >= 2 {
        writeln!(
            report,
            "predicted: lambda_N = N = {n} with multiplicity q - 1 = {} (observed {top_multiplicity})",
            complement_q - 1
        )?;
    } else {
        writeln!(
            report,
            "predicted: lambda_N < N = {n} (complement connected; observed lambda_N = {:.6})",
            spec.lambda_n
        )?;
    }
    out.write_all(report.as_bytes())?;

    let mut summary = String::from("key,value\n");
    writeln!(summary, "nodes,{n}")?;
    writeln!(summary, "edges,{}", g.edge_count())?;
    writeln!(summary, "average_distance,{avg}")?;
    writeln!(summary, "mean_clustering,{}", clustering.mean)?;
    writeln!(summary, "lambda2,{}", spec.lambda2)?;
    writeln!(summary, "lambdaN,{}", spec.lambda_n)?;
    writeln!(summary, "ratio,{}", spec.ratio)?;
    writeln!(summary, "complement_components,{complement_q}")?;
    writeln!(summary, "multiplicity_of_N,{top_multiplicity}")?;
    write_artifact(cfg, "analyze.csv", &summary)?;
    write_artifact(cfg, "spectrum.csv", &spectrum_csv(&spec))?;

    let mut nodes = String::from("node,degree,clustering,betweenness\n");
    for v in 1..=n {
        let b = betweenness
            .as_ref()
            .map(|b| b[v - 1].to_string())
            .unwrap_or_default();
        writeln!(
            nodes,
            "{v},{},{},{b}",
            g.degree(v),
            clustering.per_node[v - 1]
        )?;
    }
    write_artifact(cfg, "nodes.csv", &nodes)?;
    Ok(true)
}

/// `max_i |λ_i(Gᶜ) − (N − λ_{N−i+2}(G))|` over `i = 2..N` (1-based).
pub fn duality_residual(g: &LaplacianSpectrum, gc: &LaplacianSpectrum) -> f64 {
    let n = g.values.len();
    (2..=n)
        .map(|i| (gc.values[i - 1] - (n as f64 - g.values[n - i + 1])).abs())
        .fold(0.0, f64::max)
}

fn cmd_complement(cfg: &RunConfig, out: &mut dyn Write) -> CliResult<bool> {
    let g = load_graph(require(&cfg.graph, "graph")?)?;
    let gc = g.complement();
    let n = g.node_count();
    let (spec, spec_c) = (spectrum(&g), spectrum(&gc));
    let q = gc.connected_components().len();
    let residual = duality_residual(&spec, &spec_c);

    let mut report = String::new();
    let edges: Vec<String> = gc.edges().map(|(i, j)| format!("{{{i},{j}}}")).collect();
    writeln!(
        report,
        "complement edges ({}): {}",
        gc.edge_count(),
        edges.join(" ")
    )?;
    writeln!(report, "complement components q: {q}")?;
    writeln!(report, "spectrum(G):   {}", fmt_values(&spec.values))?;
    writeln!(report, "spectrum(G^c): {}", fmt_values(&spec_c.values))?;
    writeln!(report, "duality residual: {residual:.3e}")?;
    if q >= 2 {
        writeln!(
            report,
            "lambda_N(G) = N = {n} with multiplicity {} (q - 1 = {})",
            spec.multiplicity(n as f64),
            q - 1
        )?;
    } else {
        writeln!(
            report,
            "complement connected: lambda_N(G) = {:.6} < N = {n}",
            spec.lambda_n
        )?;
    }
    out.write_all(report.as_bytes())?;

    write_artifact(
        cfg,
        "complement.json",
        &serde_json::to_string(&gc).expect("graph serializes"),
    )?;
    let mut csv = String::from("index,lambda_g,lambda_gc,dual_prediction\n");
    for i in 1..=n {
        let predicted = if i == 1 {
            0.0
        } else {
            n as f64 - spec.values[n - i + 1]
        };
        writeln!(
            csv,
            "{i},{},{},{predicted}",
            spec.values[i - 1],
            spec_c.values[i - 1]
        )?;
    }
    write_artifact(cfg, "complement.csv", &csv)?;
    Ok(true)
}

fn cmd_edge_sweep(cfg: &RunConfig, out: &mut dyn Write) -> CliResult<bool> {
    let mut g = load_graph(require(&cfg.graph, "graph")?)?;
    let n = g.node_count();
    let mut csv = String::from("step,edge");
    for i in 1..=n {
        write!(csv, ",lambda_{i}")?;
    }
    csv.push_str(",lambda2,lambdaN,r,monotone\n");

    let mut prev = spectrum(&g);
    let row =
        |csv: &mut String, step: usize, edge: &str, spec: &LaplacianSpectrum, monotone: bool| {
            let _ = write!(csv, "{step},{edge}");
            for v in &spec.values {
                let _ = write!(csv, ",{v}");
            }
            let _ = writeln!(
                csv,
                ",{},{},{},{monotone}",
                spec.lambda2, spec.lambda_n, spec.ratio
            );
        };
    row(&mut csv, 0, "", &prev, true);
    for (step, &[i, j]) in cfg.add_edges.iter().enumerate() {
        g = g.add_edge(i, j)?;
        let spec = spectrum(&g);
        let monotone = spec
            .values
            .iter()
            .zip(&prev.values)
            .all(|(a, b)| *a >= b - 1e-9);
        row(&mut csv, step + 1, &format!("{i}-{j}"), &spec, monotone);
        prev = spec;
    }
    out.write_all(csv.as_bytes())?;
    write_artifact(cfg, "edge_sweep.csv", &csv)?;
    Ok(true)
}

fn scan_options(cfg: &RunConfig, default_sigma_max: f64) -> CliResult<ScanOptions> {
    let sigma_max = positive(cfg.sigma_max.unwrap_or(default_sigma_max), "sigma_max")?;
    let mut opts = ScanOptions::new(sigma_max);
    if let Some(g) = cfg.grid_step {
        opts.grid_step = positive(g, "grid_step")?;
    }
    if let Some(t) = cfg.boundary_tol {
        opts.boundary_tol = positive(t, "boundary_tol")?;
    }
    Ok(opts)
}

fn region_artifacts(
    cfg: &RunConfig,
    f: &Matrix,
    h: &Matrix,
    region: &RegionSet,
    opts: &ScanOptions,
) -> CliResult<()> {
    if cfg.out_dir.is_none() {
        return Ok(());
    }
    let mut csv = String::from("sigma,hurwitz,abscissa\n");
    for s in grid_samples(f, h, opts.sigma_max, opts.grid_step)? {
        writeln!(csv, "{},{},{}", s.sigma, s.hurwitz, s.abscissa)?;
    }
    write_artifact(cfg, "region.csv", &csv)?;
    let mut iv = String::from("lo,hi\n");
    for i in &region.intervals {
        writeln!(iv, "{},{}", i.lo, i.hi)?;
    }
    write_artifact(cfg, "intervals.csv", &iv)
}

fn region_report(region: &RegionSet) -> CliResult<String> {
    let mut s = String::new();
    writeln!(
        s,
        "synchronized region on [0, {}] (sigma = c*lambda):",
        region.sigma_max
    )?;
    if region.intervals.is_empty() {
        writeln!(s, "  (empty)")?;
    }
    for iv in &region.intervals {
        writeln!(s, "  [{:.7}, {:.7}]", iv.lo, iv.hi)?;
    }
    writeln!(s, "stable at sigma_max: {}", region.stable_at_max)?;
    for (sigma, ok) in &region.tail_checks {
        writeln!(
            s,
            "  tail check sigma = {sigma}: {}",
            if *ok { "stable" } else { "unstable" }
        )?;
    }
    writeln!(s, "classification: {:?}", region.classification)?;
    Ok(s)
}

fn load_pair(cfg: &RunConfig) -> CliResult<(Matrix, Matrix)> {
    let f = load_matrix(require(&cfg.f, "f")?)?;
    let h = load_matrix(require(&cfg.h, "h")?)?;
    Ok((f, h))
}

fn cmd_region(cfg: &RunConfig, out: &mut dyn Write) -> CliResult<bool> {
    let (f, h) = load_pair(cfg)?;
    let opts = scan_options(cfg, 10.0)?;
    let region = region_scan(&f, &h, opts)?;
    out.write_all(region_report(&region)?.as_bytes())?;
    region_artifacts(cfg, &f, &h, &region, &opts)?;
    Ok(true)
}

fn cmd_check(cfg: &RunConfig, out: &mut dyn Write) -> CliResult<bool> {
    let g = load_graph(require(&cfg.graph, "graph")?)?;
    let (f, h) = load_pair(cfg)?;
    let c = positive(*require(&cfg.c, "c")?, "c")?;
    let spec = spectrum(&g);
    let opts = scan_options(cfg, 3.0 * c * spec.lambda_n)?;
    let region = region_scan(&f, &h, opts)?;
    let report = check_criterion(&spec, c, &region)?;

    let mut s = region_report(&region)?;
    writeln!(s, "coupling strength c = {c}")?;
    for (k, p) in report.placements.iter().enumerate() {
        writeln!(
            s,
            "  k={}: lambda={:.6} sigma={:.6} {}",
            k + 2,
            p.lambda,
            p.sigma,
            if p.in_region { "in S" } else { "NOT in S" }
        )?;
    }
    let admissible = admissible_couplings(&spec, &region).ok();
    if let Some(adm) = &admissible {
        let parts: Vec<String> = adm
            .intervals
            .iter()
            .map(|iv| format!("[{:.6}, {:.6}]", iv.lo, iv.hi))
            .collect();
        writeln!(
            s,
            "admissible c (scanned up to {:.6}{}): {}",
            adm.c_max_scanned,
            if adm.truncated {
                ", last interval truncated"
            } else {
                ""
            },
            if parts.is_empty() {
                "none".to_string()
            } else {
                parts.join(" U ")
            }
        )?;
    }
    writeln!(
        s,
        "verdict: {}",
        if report.verdict {
            "synchronizes"
        } else {
            "does not synchronize"
        }
    )?;
    out.write_all(s.as_bytes())?;

    region_artifacts(cfg, &f, &h, &region, &opts)?;
    let mut csv = String::from("k,lambda,sigma,in_region\n");
    for (k, p) in report.placements.iter().enumerate() {
        writeln!(csv, "{},{},{},{}", k + 2, p.lambda, p.sigma, p.in_region)?;
    }
    writeln!(csv, "# verdict={}", report.verdict)?;
    write_artifact(cfg, "criterion.csv", &csv)?;
    if let Some(adm) = admissible {
        let mut csv = String::from("c_lo,c_hi\n");
        for iv in &adm.intervals {
            writeln!(csv, "{},{}", iv.lo, iv.hi)?;
        }
        write_artifact(cfg, "admissible.csv", &csv)?;
    }
    Ok(report.verdict)
}

#[derive(Serialize)]
struct DesignReport<'a> {
    b: &'a [f64],
    k: &'a [f64],
    k0: &'a [f64],
    construction: Construction,
    beta: f64,
    p: &'a Matrix,
    certificate_eig: f64,
    verification: &'a [(f64, bool)],
    verified: bool,
}

fn cmd_design(cfg: &RunConfig, out: &mut dyn Write) -> CliResult<bool> {
    let f = load_matrix(require(&cfg.f, "f")?)?;
    let n = f.ensure_square("F")?;
    let b = match &cfg.b {
        Some(path) => {
            let b = load_matrix(path)?;
            if b.cols() != 1 || b.rows() != n {
                return Err(CliError::Input(format!("b must be a {n}x1 matrix")));
            }
            b.data().to_vec()
        }
        None => match choose_b(&f, cfg.seed.unwrap_or(0)) {
            Ok(b) => b,
            Err(e @ (Error::NotStabilizable | Error::SearchExhausted)) => {
                writeln!(out, "design infeasible: {e}")?;
                return Ok(false);
            }
            Err(e) => return Err(e.into()),
        },
    };
    let q_scale = positive(cfg.q_scale.unwrap_or(1.0), "q_scale")?;
    let design = match design_rank1(&f, &b, q_scale) {
        Ok(d) => d,
        Err(e @ (Error::NotStabilizable | Error::NotControllable)) => {
            writeln!(out, "design infeasible: {e}")?;
            return Ok(false);
        }
        Err(e) => return Err(e.into()),
    };
    let verify = verify_design(
        &f,
        &design.h,
        &DEFAULT_VERIFY_SAMPLES,
        Some((&design.b, &design.p)),
    )?;
    let verified = verify.all_hurwitz && design.certificate_eig < 0.0;

    let mut s = String::new();
    writeln!(s, "b = {}", fmt_values(&design.b))?;
    writeln!(s, "k = {}", fmt_values(&design.k))?;
    writeln!(s, "beta = {}", design.beta)?;
    writeln!(s, "certificate eigenvalue = {:.6e}", design.certificate_eig)?;
    for (sigma, ok) in &verify.samples {
        writeln!(
            s,
            "  F - {sigma}*H: {}",
            if *ok { "Hurwitz" } else { "NOT Hurwitz" }
        )?;
    }
    writeln!(
        s,
        "verdict: {}",
        if verified {
            "verified"
        } else {
            "verification failed"
        }
    )?;
    out.write_all(s.as_bytes())?;

    write_artifact(
        cfg,
        "H.json",
        &serde_json::to_string(&design.h).expect("matrix serializes"),
    )?;
    let report = DesignReport {
        b: &design.b,
        k: &design.k,
        k0: &design.k0,
        construction: design.construction,
        beta: design.beta,
        p: &design.p,
        certificate_eig: design.certificate_eig,
        verification: &verify.samples,
        verified,
    };
    write_artifact(
        cfg,
        "design.json",
        &serde_json::to_string_pretty(&report).expect("report serializes"),
    )?;
    Ok(verified)
}

fn cmd_simulate(cfg: &RunConfig, out: &mut dyn Write) -> CliResult<bool> {
    let g = load_graph(require(&cfg.graph, "graph")?)?;
    let h = load_matrix(require(&cfg.h, "h")?)?;
    let c = *require(&cfg.c, "c")?;
    let dynamics = match &cfg.dynamics {
        Some(path) => read_json::<Dynamics>(path)?,
        None => Dynamics::Chua(fixtures::chua_params()),
    };
    let step = positive(cfg.step.unwrap_or(1e-3), "step")?;
    let horizon = positive(cfg.horizon.unwrap_or(200.0), "horizon")?;
    let seed = cfg.seed.unwrap_or(DEFAULT_SEED);
    let eps = positive(cfg.eps.unwrap_or(1e-3), "eps")?;
    let window = positive(cfg.window.unwrap_or(20.0), "window")?;
    let stride = cfg.stride.unwrap_or(100).max(1);

    let n_nodes = g.node_count();
    let sys = NetworkSystem::new(g, c, h, dynamics)?;
    let x0 = seeded_initial_states(n_nodes, sys.node_dim(), seed, 0.5);
    let traj = simulate(&sys, &x0, step, horizon, stride)?;
    let synced = is_synchronized(&traj, eps, window);

    let mut s = String::new();
    writeln!(s, "seed: {seed}  step: {step}  horizon: {horizon}")?;
    writeln!(
        s,
        "final time: {:.6}  final sync error: {:.6e}",
        traj.final_time(),
        traj.final_sync_error()
    )?;
    match traj.blowup {
        Some(t) => writeln!(s, "blow-up at t = {t:.6}")?,
        None => writeln!(s, "blow-up: none")?,
    }
    writeln!(
        s,
        "verdict: {}",
        if synced {
            "synchronized"
        } else {
            "not synchronized"
        }
    )?;
    out.write_all(s.as_bytes())?;

    if let Some(path) = out_file(cfg, "trajectory.csv")? {
        let mut file = std::io::BufWriter::new(fs::File::create(path)?);
        traj.write_csv(&mut file, synced)?;
        file.flush()?;
    }
    Ok(synced)
}
