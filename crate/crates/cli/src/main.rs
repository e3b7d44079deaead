//! Command-line front end for the signless-MBO Max-Cut solver: experiment
//! runs with K/tau sweeps, the exact brute-force oracle, and graph
//! generation, all emitting plot-ready CSV.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.

// negated float comparisons below are NaN-rejecting on purpose
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fmt::Write as _;
use std::fs;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use maxcut_mbo::diffusion::{DiffusionError, DiffusionMethod};
use maxcut_mbo::generators::{self, GenError, GenFamily, GenSpec};
use maxcut_mbo::graph::{load_edge_list, Graph, GraphError, MergePolicy};
use maxcut_mbo::mbo::{
    default_spectral_k, multi_run_with, MboConfig, MboError, MboRunner, MultiRunSummary,
    DEFAULT_EULER_STEPS,
};
use maxcut_mbo::operators::OperatorKind;
use maxcut_mbo::oracle::{brute_force_maxcut, BRUTE_FORCE_CAP};
use maxcut_mbo::spectra::{signless_basis_auto, SpectraError, DEFAULT_DENSE_CAP};

const CSV_HEADER: &str =
    "graph,n,m,operator,solver,tau,K,M,seed,best,avg,least,iters,time_s,reason";

#[derive(Parser)]
#[command(
    name = "maxcut-mbo",
    version,
    about = "Max-Cut approximation by signless threshold dynamics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the MBO solver over random initial conditions and emit CSV rows.
    Run(RunArgs),
    /// Exact maximum cut by exhaustive enumeration (small graphs only).
    Oracle(OracleArgs),
    /// Write a generated graph as an edge-list file.
    Generate(GenerateArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum LaplacianArg {
    L0plus,
    L1plus,
    Lsplus,
}

impl LaplacianArg {
    fn kind(self) -> OperatorKind {
        match self {
            LaplacianArg::L0plus => OperatorKind::signless(0.0),
            LaplacianArg::L1plus => OperatorKind::signless(1.0),
            LaplacianArg::Lsplus => OperatorKind::SignlessSym,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SolverArg {
    Spectral,
    Euler,
    Implicit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MergeArg {
    Error,
    Sum,
    Max,
}

impl MergeArg {
    fn policy(self) -> MergePolicy {
        match self {
            MergeArg::Error => MergePolicy::Error,
            MergeArg::Sum => MergePolicy::Sum,
            MergeArg::Max => MergePolicy::Max,
        }
    }
}

#[derive(Args)]
struct RunArgs {
    /// Edge-list file to solve.
    #[arg(long, conflicts_with = "gen")]
    input: Option<PathBuf>,
    /// Generator spec, e.g. er:1000,0.01 or modular:2500,2,0.009,0.8.
    #[arg(long)]
    gen: Option<String>,
    /// Key-value manifest file; command-line flags override its entries.
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// Signless Laplacian driving the diffusion.
    #[arg(long, value_enum)]
    laplacian: Option<LaplacianArg>,
    /// Diffusion solver.
    #[arg(long, value_enum)]
    solver: Option<SolverArg>,
    /// Diffusion time; defaults to 20 (l1plus/lsplus) or 40/lambda_n (l0plus).
    #[arg(long)]
    tau: Option<f64>,
    /// Spectral truncation; defaults to floor(n/100) clamped to [1, n].
    #[arg(long = "K")]
    k: Option<usize>,
    /// Euler substeps.
    #[arg(long = "M")]
    m: Option<usize>,
    /// Stopping tolerance on the relative change of the iterate.
    #[arg(long)]
    eta: Option<f64>,
    /// Number of random initial conditions.
    #[arg(long)]
    runs: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Parameter sweep, e.g. K=5..100:5 or tau=5..50:5.
    #[arg(long)]
    sweep: Option<String>,
    /// Write the best run's energy trace as iteration,energy CSV.
    #[arg(long)]
    trace_out: Option<PathBuf>,
    /// Duplicate-edge handling when loading files.
    #[arg(long, value_enum)]
    merge_policy: Option<MergeArg>,
    /// Multiply generated/loaded edge weights by uniform draws from lo,hi.
    #[arg(long)]
    reweight: Option<String>,
    /// Append CSV rows to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Iteration cap per run.
    #[arg(long)]
    max_iters: Option<usize>,
}

#[derive(Args)]
struct OracleArgs {
    /// Edge-list file.
    #[arg(long)]
    input: PathBuf,
    /// Refuse graphs with more vertices than this (hard limit 24).
    #[arg(long, default_value_t = BRUTE_FORCE_CAP)]
    cap: usize,
    /// Write the optimal partition as "original_id side" lines.
    #[arg(long)]
    witness_out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = MergeArg::Error)]
    merge_policy: MergeArg,
}

#[derive(Args)]
struct GenerateArgs {
    /// Generator spec: er:N,P | modular:N,C,P,R | reweight:LO,HI.
    #[arg(long)]
    gen: String,
    /// Base graph for reweight:LO,HI specs.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output edge-list path.
    #[arg(long)]
    out: PathBuf,
    /// Additionally reweight the generated graph by uniform draws from lo,hi.
    #[arg(long)]
    reweight: Option<String>,
    /// Permit writing a graph with no edges.
    #[arg(long)]
    allow_empty: bool,
    #[arg(long, value_enum, default_value_t = MergeArg::Error)]
    merge_policy: MergeArg,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Data(String),
    Numerical(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::Numerical(m) => m,
        }
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<GenError> for CliError {
    fn from(e: GenError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<SpectraError> for CliError {
    fn from(e: SpectraError) -> Self {
        match e {
            SpectraError::NoConvergence { .. } | SpectraError::IterationLimit => {
                CliError::Numerical(e.to_string())
            }
            other => CliError::Data(other.to_string()),
        }
    }
}

impl From<DiffusionError> for CliError {
    fn from(e: DiffusionError) -> Self {
        match e {
            DiffusionError::BlowUp { .. } | DiffusionError::CgStagnation { .. } => {
                CliError::Numerical(e.to_string())
            }
            other => CliError::Data(other.to_string()),
        }
    }
}

impl From<MboError> for CliError {
    fn from(e: MboError) -> Self {
        let message = e.to_string();
        match e {
            MboError::Diffusion { source, .. } => match CliError::from(source) {
                CliError::Numerical(_) => CliError::Numerical(message),
                _ => CliError::Data(message),
            },
            MboError::Spectra(inner) => inner.into(),
            MboError::Graph(inner) => inner.into(),
            MboError::NotSignless(_) | MboError::InvalidParameter(_) => CliError::Usage(message),
            MboError::NonBinaryInitial => CliError::Data(message),
        }
    }
}

struct StderrLogger;

impl log::Log for StderrLogger {
    fn enabled(&self, metadata: &log::Metadata) -> bool {
        metadata.level() <= log::Level::Warn
    }

    fn log(&self, record: &log::Record) {
        if self.enabled(record.metadata()) {
            eprintln!("{}: {}", record.level(), record.args());
        }
    }

    fn flush(&self) {}
}

static LOGGER: StderrLogger = StderrLogger;

fn main() -> ExitCode {
    let _ = log::set_logger(&LOGGER).map(|()| log::set_max_level(log::LevelFilter::Warn));
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Oracle(args) => cmd_oracle(args),
        Command::Generate(args) => cmd_generate(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

/// Key-value manifest: one `key = value` (or `key value`) entry per line,
/// `#` comments. Recognized keys mirror the run flags.
#[derive(Default)]
struct Manifest {
    entries: Vec<(String, String)>,
}

impl Manifest {
    fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)?;
        let mut entries = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .or_else(|| line.split_once(char::is_whitespace))
                .ok_or_else(|| {
                    CliError::Data(format!("manifest line {}: expected key = value", idx + 1))
                })?;
            entries.push((key.trim().to_string(), value.trim().to_string()));
        }
        Ok(Self { entries })
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .rev()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    fn parse<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        match self.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse::<T>()
                .map(Some)
                .map_err(|_| CliError::Data(format!("manifest key '{key}': cannot parse '{raw}'"))),
        }
    }
}

struct ResolvedRun {
    source: InputSource,
    operator: OperatorKind,
    solver: SolverArg,
    tau: Option<f64>,
    k: Option<usize>,
    m: usize,
    eta: f64,
    runs: usize,
    seed: u64,
    sweep: Option<Sweep>,
    trace_out: Option<PathBuf>,
    merge: MergePolicy,
    reweight: Option<(f64, f64)>,
    out: Option<PathBuf>,
    max_iters: usize,
}

enum InputSource {
    File(PathBuf),
    Generated(GenSpec),
}

enum Sweep {
    K(Vec<usize>),
    Tau(Vec<f64>),
}

fn parse_lo_hi(raw: &str) -> Result<(f64, f64), CliError> {
    let (lo, hi) = raw
        .split_once(',')
        .ok_or_else(|| CliError::Usage(format!("expected lo,hi, got '{raw}'")))?;
    let lo: f64 = lo
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("bad reweight bound '{lo}'")))?;
    let hi: f64 = hi
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("bad reweight bound '{hi}'")))?;
    if !(lo >= 0.0 && hi >= lo && hi > 0.0) {
        return Err(CliError::Usage(format!(
            "reweight range needs 0 <= lo <= hi and hi > 0, got {lo},{hi}"
        )));
    }
    Ok((lo, hi))
}

fn parse_sweep(raw: &str) -> Result<Sweep, CliError> {
    let usage = || {
        CliError::Usage(format!(
            "sweep must look like K=5..100:5 or tau=5..50:5, got '{raw}'"
        ))
    };
    let (name, rest) = raw.split_once('=').ok_or_else(usage)?;
    let (range, step) = rest.split_once(':').ok_or_else(usage)?;
    let (start, end) = range.split_once("..").ok_or_else(usage)?;
    match name.trim() {
        "K" | "k" => {
            let start: usize = start.trim().parse().map_err(|_| usage())?;
            let end: usize = end.trim().parse().map_err(|_| usage())?;
            let step: usize = step.trim().parse().map_err(|_| usage())?;
            if step == 0 || end < start {
                return Err(usage());
            }
            Ok(Sweep::K((start..=end).step_by(step).collect()))
        }
        "tau" => {
            let start: f64 = start.trim().parse().map_err(|_| usage())?;
            let end: f64 = end.trim().parse().map_err(|_| usage())?;
            let step: f64 = step.trim().parse().map_err(|_| usage())?;
            if !(step > 0.0) || end < start || !(start > 0.0) {
                return Err(usage());
            }
            let mut values = Vec::new();
            let mut v = start;
            while v <= end + 1e-12 {
                values.push(v);
                v += step;
            }
            Ok(Sweep::Tau(values))
        }
        other => Err(CliError::Usage(format!(
            "unknown sweep parameter '{other}' (use K or tau)"
        ))),
    }
}

fn resolve_run(args: RunArgs) -> Result<ResolvedRun, CliError> {
    let manifest = match &args.manifest {
        Some(path) => Manifest::load(path)?,
        None => Manifest::default(),
    };

    let input: Option<PathBuf> = args
        .input
        .or_else(|| manifest.get("input").map(PathBuf::from));
    let gen_raw: Option<String> = args.gen.or_else(|| manifest.get("gen").map(str::to_string));
    let seed = match args.seed {
        Some(s) => s,
        None => manifest.parse::<u64>("seed")?.unwrap_or(0),
    };

    let source = match (input, gen_raw) {
        (Some(path), None) => InputSource::File(path),
        (None, Some(spec)) => {
            let family: GenFamily = spec
                .parse()
                .map_err(|e: GenError| CliError::Usage(e.to_string()))?;
            InputSource::Generated(GenSpec { family, seed })
        }
        (Some(_), Some(_)) => {
            return Err(CliError::Usage(
                "give exactly one of --input and --gen".into(),
            ))
        }
        (None, None) => {
            return Err(CliError::Usage(
                "an input source is required: --input FILE or --gen SPEC".into(),
            ))
        }
    };

    let laplacian = match args.laplacian {
        Some(l) => l,
        None => match manifest.get("laplacian") {
            Some("l0plus") => LaplacianArg::L0plus,
            Some("l1plus") => LaplacianArg::L1plus,
            Some("lsplus") => LaplacianArg::Lsplus,
            Some(other) => return Err(CliError::Data(format!("manifest laplacian '{other}'"))),
            None => LaplacianArg::L1plus,
        },
    };
    let solver = match args.solver {
        Some(s) => s,
        None => match manifest.get("solver") {
            Some("spectral") => SolverArg::Spectral,
            Some("euler") => SolverArg::Euler,
            Some("implicit") => SolverArg::Implicit,
            Some(other) => return Err(CliError::Data(format!("manifest solver '{other}'"))),
            None => SolverArg::Spectral,
        },
    };
    let merge = match args.merge_policy {
        Some(m) => m.policy(),
        None => match manifest.get("merge_policy") {
            Some("error") | None => MergePolicy::Error,
            Some("sum") => MergePolicy::Sum,
            Some("max") => MergePolicy::Max,
            Some(other) => return Err(CliError::Data(format!("manifest merge_policy '{other}'"))),
        },
    };
    let sweep = match args
        .sweep
        .or_else(|| manifest.get("sweep").map(str::to_string))
    {
        Some(raw) => Some(parse_sweep(&raw)?),
        None => None,
    };
    let reweight = match args
        .reweight
        .or_else(|| manifest.get("reweight").map(str::to_string))
    {
        Some(raw) => Some(parse_lo_hi(&raw)?),
        None => None,
    };

    Ok(ResolvedRun {
        source,
        operator: laplacian.kind(),
        solver,
        tau: match args.tau {
            Some(t) => Some(t),
            None => manifest.parse::<f64>("tau")?,
        },
        k: match args.k {
            Some(k) => Some(k),
            None => manifest.parse::<usize>("K")?,
        },
        m: match args.m {
            Some(m) => m,
            None => manifest.parse::<usize>("M")?.unwrap_or(DEFAULT_EULER_STEPS),
        },
        eta: match args.eta {
            Some(e) => e,
            None => manifest.parse::<f64>("eta")?.unwrap_or(1e-8),
        },
        runs: match args.runs {
            Some(r) => r,
            None => manifest.parse::<usize>("runs")?.unwrap_or(50),
        },
        seed,
        sweep,
        trace_out: args
            .trace_out
            .or_else(|| manifest.get("trace_out").map(PathBuf::from)),
        merge,
        reweight,
        out: args.out.or_else(|| manifest.get("out").map(PathBuf::from)),
        max_iters: match args.max_iters {
            Some(m) => m,
            None => manifest.parse::<usize>("max_iters")?.unwrap_or(300),
        },
    })
}

/// Load or generate, clean up isolated vertices, and name the graph.
fn materialize_graph(
    source: &InputSource,
    merge: MergePolicy,
    reweight: Option<(f64, f64)>,
    seed: u64,
) -> Result<(Graph<f64>, String), CliError> {
    let (raw, id): (Graph<f64>, String) = match source {
        InputSource::File(path) => {
            let file = fs::File::open(path)
                .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
            let loaded = load_edge_list(BufReader::new(file), merge)?;
            let id = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| path.display().to_string());
            (loaded.graph, id)
        }
        InputSource::Generated(spec) => {
            let graph = generators::generate(spec)?;
            (graph, spec.family.to_string().replace(',', ";"))
        }
    };
    let raw = match reweight {
        Some((lo, hi)) => generators::reweight(&raw, lo, hi, seed ^ 0x5745_4947_4854),
        None => raw,
    };
    let (graph, _kept) = raw.remove_isolated_nodes()?;
    Ok((graph, id))
}

fn solver_label(solver: SolverArg) -> &'static str {
    match solver {
        SolverArg::Spectral => "spectral",
        SolverArg::Euler => "euler",
        SolverArg::Implicit => "implicit",
    }
}

fn method_for(solver: SolverArg, k: usize, m: usize) -> DiffusionMethod {
    match solver {
        SolverArg::Spectral => DiffusionMethod::Spectral { k },
        SolverArg::Euler => DiffusionMethod::EulerExplicit { steps: m },
        SolverArg::Implicit => DiffusionMethod::EulerImplicit { steps: m },
    }
}

#[allow(clippy::too_many_arguments)]
fn format_row(
    graph_id: &str,
    graph: &Graph<f64>,
    operator: OperatorKind,
    solver: SolverArg,
    k: usize,
    m: usize,
    seed: u64,
    summary: &MultiRunSummary<f64>,
) -> String {
    assert!(summary.best >= summary.avg && summary.avg >= summary.least);
    let best_outcome = &summary.outcomes[summary.best_run];
    // only the parameter the solver actually uses is reported
    let (k, m) = match solver {
        SolverArg::Spectral => (k, 0),
        SolverArg::Euler | SolverArg::Implicit => (0, m),
    };
    let mut row = String::new();
    let _ = write!(
        row,
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{:.3},{}",
        graph_id,
        graph.vertex_count(),
        graph.edge_count(),
        operator.label(),
        solver_label(solver),
        summary.tau,
        k,
        m,
        seed,
        summary.best,
        summary.avg,
        summary.least,
        best_outcome.iterations,
        summary.wall_seconds,
        best_outcome.termination,
    );
    row
}

fn emit_rows(out: Option<&Path>, rows: &[String]) -> Result<(), CliError> {
    match out {
        None => {
            let stdout = io::stdout();
            let mut handle = stdout.lock();
            writeln!(handle, "{CSV_HEADER}")?;
            for row in rows {
                writeln!(handle, "{row}")?;
            }
        }
        Some(path) => {
            let fresh = fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
            let mut file = fs::OpenOptions::new()
                .create(true)
                .append(true)
                .open(path)?;
            if fresh {
                writeln!(file, "{CSV_HEADER}")?;
            }
            for row in rows {
                writeln!(file, "{row}")?;
            }
        }
    }
    Ok(())
}

fn cmd_run(args: RunArgs) -> Result<(), CliError> {
    let run = resolve_run(args)?;
    let (graph, graph_id) = materialize_graph(&run.source, run.merge, run.reweight, run.seed)?;
    let n = graph.vertex_count();
    let default_k = run.k.unwrap_or_else(|| default_spectral_k(n));

    let base_config = |method: DiffusionMethod| {
        let mut cfg = MboConfig::<f64>::new(run.operator, method);
        cfg.tau = run.tau;
        cfg.eta = run.eta;
        cfg.seed = run.seed;
        cfg.max_iterations = run.max_iters;
        cfg
    };

    let mut rows = Vec::new();
    let mut best_summary: Option<MultiRunSummary<f64>> = None;

    match &run.sweep {
        None => {
            let cfg = base_config(method_for(run.solver, default_k, run.m));
            let runner = MboRunner::new(&graph, cfg).map_err(CliError::from)?;
            let summary = multi_run_with(&runner, run.runs).map_err(CliError::from)?;
            rows.push(format_row(
                &graph_id,
                &graph,
                run.operator,
                run.solver,
                default_k,
                run.m,
                run.seed,
                &summary,
            ));
            best_summary = Some(summary);
        }
        Some(Sweep::K(values)) => {
            if run.solver != SolverArg::Spectral {
                return Err(CliError::Usage(
                    "a K sweep requires the spectral solver".into(),
                ));
            }
            let values: Vec<usize> = values.iter().map(|&k| k.min(n)).collect();
            let k_max = *values.iter().max().expect("sweep is non-empty");
            let shared =
                signless_basis_auto(&graph, run.operator, k_max, run.seed, DEFAULT_DENSE_CAP)?;
            for &k in &values {
                let cfg = base_config(DiffusionMethod::Spectral { k });
                let runner =
                    MboRunner::with_basis(&graph, cfg, shared.clone()).map_err(CliError::from)?;
                let summary = multi_run_with(&runner, run.runs).map_err(CliError::from)?;
                rows.push(format_row(
                    &graph_id,
                    &graph,
                    run.operator,
                    run.solver,
                    k,
                    run.m,
                    run.seed,
                    &summary,
                ));
                let better = best_summary
                    .as_ref()
                    .map(|b| summary.best > b.best)
                    .unwrap_or(true);
                if better {
                    best_summary = Some(summary);
                }
            }
        }
        Some(Sweep::Tau(values)) => {
            for &tau in values {
                let mut cfg = base_config(method_for(run.solver, default_k, run.m));
                cfg.tau = Some(tau);
                let runner = MboRunner::new(&graph, cfg).map_err(CliError::from)?;
                let summary = multi_run_with(&runner, run.runs).map_err(CliError::from)?;
                rows.push(format_row(
                    &graph_id,
                    &graph,
                    run.operator,
                    run.solver,
                    default_k,
                    run.m,
                    run.seed,
                    &summary,
                ));
                let better = best_summary
                    .as_ref()
                    .map(|b| summary.best > b.best)
                    .unwrap_or(true);
                if better {
                    best_summary = Some(summary);
                }
            }
        }
    }

    emit_rows(run.out.as_deref(), &rows)?;

    if let Some(path) = &run.trace_out {
        let summary = best_summary.expect("at least one row was produced");
        let mut text = String::from("iteration,energy\n");
        let _ = writeln!(text, "0,{}", summary.best_trace.initial_energy);
        for rec in &summary.best_trace.records {
            let _ = writeln!(text, "{},{}", rec.iteration, rec.energy);
        }
        fs::write(path, text)?;
    }
    Ok(())
}

fn cmd_oracle(args: OracleArgs) -> Result<(), CliError> {
    let cap = args.cap.min(BRUTE_FORCE_CAP);
    let file = fs::File::open(&args.input)
        .map_err(|e| CliError::Data(format!("{}: {e}", args.input.display())))?;
    let loaded = load_edge_list::<f64, _>(BufReader::new(file), args.merge_policy.policy())?;
    let (graph, kept) = loaded.graph.remove_isolated_nodes()?;
    if graph.vertex_count() > cap {
        return Err(CliError::Data(format!(
            "graph has {} vertices, above the cap {cap}",
            graph.vertex_count()
        )));
    }
    let result = brute_force_maxcut(&graph).map_err(|e| CliError::Data(e.to_string()))?;
    println!("optimum {}", result.optimum);
    println!("enumerated {}", result.enumerated);
    if let Some(path) = &args.witness_out {
        let mut text = String::new();
        for (dense, &old) in kept.iter().enumerate() {
            let side = if result.witness[dense] > 0.0 { 1 } else { -1 };
            let _ = writeln!(text, "{} {}", loaded.original_ids[old], side);
        }
        fs::write(path, text)?;
    }
    Ok(())
}

fn cmd_generate(args: GenerateArgs) -> Result<(), CliError> {
    let family: GenFamily = args
        .gen
        .parse()
        .map_err(|e: GenError| CliError::Usage(e.to_string()))?;

    let graph: Graph<f64> = match family {
        GenFamily::Reweight { lo, hi } => {
            let input = args.input.as_ref().ok_or_else(|| {
                CliError::Usage("reweight:LO,HI needs --input with a base graph".into())
            })?;
            let file = fs::File::open(input)
                .map_err(|e| CliError::Data(format!("{}: {e}", input.display())))?;
            let loaded =
                load_edge_list::<f64, _>(BufReader::new(file), args.merge_policy.policy())?;
            generators::reweight(&loaded.graph, lo, hi, args.seed)
        }
        _ => generators::generate(&GenSpec {
            family,
            seed: args.seed,
        })?,
    };

    let graph = match &args.reweight {
        Some(raw) => {
            let (lo, hi) = parse_lo_hi(raw)?;
            generators::reweight(&graph, lo, hi, args.seed ^ 0x5745_4947_4854)
        }
        None => graph,
    };

    if graph.edge_count() == 0 && !args.allow_empty {
        return Err(CliError::Data(
            "generated graph has no edges (pass --allow-empty to write it anyway)".into(),
        ));
    }

    let mut text = String::new();
    for (i, j, w) in graph.undirected_edges() {
        if w == 1.0 {
            let _ = writeln!(text, "{i} {j}");
        } else {
            let _ = writeln!(text, "{i} {j} {w}");
        }
    }
    fs::write(&args.out, text)?;
    Ok(())
}
