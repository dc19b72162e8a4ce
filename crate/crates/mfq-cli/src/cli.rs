//! Argument parsing and command dispatch for the `mfq` binary.
//!
//! Exit status contract: 0 on success, 1 on computational failure (a
//! numerical gate tripped, an ensemble exceeded its failure budget, IO
//! went wrong), 2 on usage errors (bad flags, bad config, invalid
//! parameter combinations).  `--help` and `--version` exit 0.

use std::ffi::OsString;
use std::fmt::Write as _;

use anyhow::{Context, Result};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use mfq_core::emulate::{
    cost_model, grover_select_diagonal, phase_estimation, sample_scale_register,
    CostTask, SampleMoment,
};
use mfq_core::isrm::{apply_isrm, IsrmParams};
use mfq_core::multifractal::{
    default_fit_window, ensemble_log_average, fit_tau, partition_with, Normalization,
    PartitionTable,
};
use mfq_core::wavelet::fwt_forward;
use mfq_core::{cascade_state, cascade_tau_analytic, CascadeParams, QuantumState};

use crate::config::{
    self, usage_err, Experiment, ExperimentConfig, FilterKind, UsageError,
};
use crate::experiments;
use crate::io;
use crate::report::{fmt_f64, ResultTable};
use crate::selftest;

#[derive(Parser, Debug)]
#[command(
    name = "mfq",
    version,
    about = "Multifractal quantum states: construction, wavelet analysis, emulation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Construct a state (or eigensystem) and write it to a binary file
    State(StateArgs),
    /// Fit multifractal exponents of a state, file, or eigenvector ensemble
    Analyze(AnalyzeArgs),
    /// Emulate one algorithm run and print its record
    Emulate(EmulateArgs),
    /// Print quantum-vs-classical operation counts for a measurement task
    Cost(CostArgs),
    /// Run a named batch experiment and write its CSV table
    Experiment(ExperimentArgs),
    /// Run the built-in end-to-end sanity suites
    Selftest(SelftestArgs),
}

#[derive(Args, Debug)]
struct StateArgs {
    /// What to build: cascade | uniform | basis | isrm-iterate | isrm-eigvecs
    #[arg(long)]
    kind: String,
    /// Qubit count (the state has 2^n amplitudes)
    #[arg(long)]
    n: usize,
    /// Cascade weight
    #[arg(long, default_value_t = 0.3)]
    p1: f64,
    /// Basis-state index (kind: basis)
    #[arg(long, default_value_t = 0)]
    index: usize,
    /// Map ratio numerator
    #[arg(long, default_value_t = 1)]
    n1: u64,
    /// Map ratio denominator
    #[arg(long, default_value_t = 3)]
    n2: u64,
    /// Master seed for map phases
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Which map realization to draw
    #[arg(long, default_value_t = 0)]
    realization: u64,
    /// Start column (kind: isrm-iterate)
    #[arg(long, default_value_t = 0)]
    column: usize,
    /// Map iterations (kind: isrm-iterate)
    #[arg(long, default_value_t = 1000)]
    t: u64,
    /// Output file; defaults to a name derived from the kind, placed in
    /// MFQ_OUTPUT_DIR when that is set
    #[arg(long)]
    output: Option<String>,
    /// Print a JSON summary to stdout instead of writing a file
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    /// cascade | uniform | basis, or a path to a .mfqs state /
    /// .mfqe eigensystem file (every eigenvector becomes an ensemble member)
    #[arg(long)]
    state: String,
    /// Qubit count for built-in kinds
    #[arg(long, default_value_t = 14)]
    n: usize,
    /// Cascade weight
    #[arg(long, default_value_t = 0.3)]
    p1: f64,
    /// Basis-state index (kind: basis)
    #[arg(long, default_value_t = 0)]
    index: usize,
    /// Moment orders, comma-separated
    #[arg(long, default_value = "2")]
    q: String,
    /// Wavelet filter: haar | daub4
    #[arg(long, default_value = "daub4")]
    filter: String,
    /// Fit window: default | lo..hi (inclusive levels)
    #[arg(long, default_value = "default")]
    window: String,
    /// Count the approximation slot in the coarsest band
    #[arg(long)]
    include_approx: bool,
    /// Print the table as JSON instead of text
    #[arg(long)]
    json: bool,
    /// Also write the table as CSV to this path
    #[arg(long)]
    csv: Option<String>,
}

#[derive(Args, Debug)]
struct EmulateArgs {
    /// grover | phase | sample
    #[arg(long, default_value = "grover")]
    algorithm: String,
    /// Qubit count
    #[arg(long, default_value_t = 6)]
    n: usize,
    /// Cascade weight (grover, sample)
    #[arg(long, default_value_t = 0.3)]
    p1: f64,
    /// Map ratio numerator (phase)
    #[arg(long, default_value_t = 1)]
    n1: u64,
    /// Map ratio denominator (phase)
    #[arg(long, default_value_t = 3)]
    n2: u64,
    /// Master seed
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Map realization (phase)
    #[arg(long, default_value_t = 0)]
    realization: u64,
    /// Which eigenvector to estimate (phase)
    #[arg(long, default_value_t = 0)]
    eigenvector: usize,
    /// Time-register qubits (phase)
    #[arg(long, default_value_t = 8)]
    n_time: usize,
    /// Measurement shots (sample)
    #[arg(long, default_value_t = 10000)]
    shots: u64,
    /// Moment order weighting the scale register: 2 | 4 (sample)
    #[arg(long, default_value_t = 2)]
    moment: u8,
    /// Wavelet filter: haar | daub4 (sample)
    #[arg(long, default_value = "daub4")]
    filter: String,
    /// Cap on reflection count (grover); default: the analytic optimum
    #[arg(long)]
    max_iterations: Option<u64>,
    /// Print the record as JSON
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct CostArgs {
    /// iterate_density | eigenvector_density | iterate_amplitude |
    /// eigenvector_amplitude | all
    #[arg(long, default_value = "all")]
    task: String,
    /// Qubit counts (comma list, inclusive ranges allowed: 10..20)
    #[arg(long, default_value = "10,12,14,16,18,20")]
    n: String,
    /// Map iterations for the iterate tasks
    #[arg(long, default_value_t = 100)]
    t: u64,
    /// Density measurement exponent
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// Amplitude measurement exponent
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    /// Print the table as JSON
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct ExperimentArgs {
    /// Experiment name, starting from its template defaults
    #[arg(long, conflicts_with = "config")]
    name: Option<String>,
    /// Configuration file (key = value lines; `experiment` is required)
    #[arg(long)]
    config: Option<String>,
    /// Override one key, e.g. --set n=6..10 (repeatable)
    #[arg(long = "set", value_name = "KEY=VALUE")]
    sets: Vec<String>,
    /// Output CSV path (overrides the config's `output`)
    #[arg(long)]
    output: Option<String>,
    /// Master seed (overrides the config's `seed`)
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads, 0 = one per CPU (overrides the config's `threads`)
    #[arg(long)]
    threads: Option<usize>,
    /// Print the table as JSON to stdout instead of writing the CSV
    #[arg(long)]
    json: bool,
    /// Print the resolved configuration and exit without running
    #[arg(long)]
    dry_run: bool,
}

#[derive(Args, Debug)]
struct SelftestArgs {
    /// Print the report as JSON
    #[arg(long)]
    json: bool,
}

/// Parses and runs one invocation; returns the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let status = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return status;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err:#}");
            if err.chain().any(|c| c.downcast_ref::<UsageError>().is_some()) {
                2
            } else {
                1
            }
        }
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::State(args) => state_cmd(args),
        Command::Analyze(args) => analyze_cmd(args),
        Command::Emulate(args) => emulate_cmd(args),
        Command::Cost(args) => cost_cmd(args),
        Command::Experiment(args) => experiment_cmd(args),
        Command::Selftest(args) => selftest_cmd(args),
    }
}

fn parse_filter(name: &str) -> Result<FilterKind> {
    FilterKind::from_name(name)
}

fn check_state_size(n: usize, cap: usize, what: &str) -> Result<()> {
    if n < 1 || n > cap {
        return Err(usage_err(format!("n = {n} is outside the {what} range 1..={cap}")));
    }
    Ok(())
}

/// Parameter validation at the argument boundary is a usage problem, not a
/// computational failure: rejected weights, ratios, or indices exit 2.
fn usage_check<T>(result: mfq_core::Result<T>) -> Result<T> {
    result.map_err(|e| usage_err(e.to_string()))
}

fn state_cmd(args: StateArgs) -> Result<()> {
    enum Built {
        State(QuantumState),
        System(mfq_core::EigenSystem),
    }
    let n = args.n;
    let built = match args.kind.as_str() {
        "cascade" => {
            check_state_size(n, 26, "cascade")?;
            Built::State(cascade_state(&usage_check(CascadeParams::new(n, args.p1))?)?)
        }
        "uniform" => {
            check_state_size(n, 26, "uniform")?;
            Built::State(QuantumState::uniform(n))
        }
        "basis" => {
            check_state_size(n, 26, "basis")?;
            if args.index >> n != 0 {
                return Err(usage_err(format!(
                    "index = {} does not fit in {n} qubits",
                    args.index
                )));
            }
            Built::State(QuantumState::basis(n, args.index)?)
        }
        "isrm-iterate" => {
            check_state_size(n, 20, "map-iteration")?;
            if args.column >> n != 0 {
                return Err(usage_err(format!(
                    "column = {} does not fit in {n} qubits",
                    args.column
                )));
            }
            let params =
                usage_check(IsrmParams::random(n, args.n1, args.n2, args.seed, args.realization))?;
            let start = QuantumState::basis(n, args.column)?;
            Built::State(apply_isrm(&start, &params, args.t)?)
        }
        "isrm-eigvecs" => {
            check_state_size(n, 12, "dense eigendecomposition")?;
            usage_check(IsrmParams::random(n, args.n1, args.n2, args.seed, args.realization))?;
            Built::System(mfq_core::isrm_eigensystem(
                n,
                args.n1,
                args.n2,
                args.seed,
                args.realization,
            )?)
        }
        other => {
            return Err(usage_err(format!(
                "unknown kind {other:?}; expected cascade, uniform, basis, \
                 isrm-iterate, or isrm-eigvecs"
            )))
        }
    };

    match built {
        Built::State(state) => {
            if args.json {
                if n > 12 {
                    return Err(usage_err(format!(
                        "n = {n} is too large to print as JSON; write a file instead"
                    )));
                }
                let amplitudes: Vec<[f64; 2]> =
                    state.amplitudes().iter().map(|a| [a.re, a.im]).collect();
                let value = serde_json::json!({
                    "kind": args.kind,
                    "qubits": state.qubits(),
                    "amplitudes": amplitudes,
                });
                println!("{}", serde_json::to_string(&value)?);
            } else {
                let default_name = format!("{}_n{n}.mfqs", args.kind.replace('-', "_"));
                let path = io::resolve_output(args.output.as_deref(), &default_name);
                io::write_state(&path, &state)?;
                println!("wrote {} ({} qubits, {} amplitudes)", path.display(), n, state.len());
            }
        }
        Built::System(system) => {
            if args.json {
                let value = serde_json::json!({
                    "kind": args.kind,
                    "qubits": n,
                    "dim": system.dim(),
                    "eigenphases": system.eigenphases(),
                });
                println!("{}", serde_json::to_string(&value)?);
            } else {
                let default_name = format!("isrm_eigvecs_n{n}.mfqe");
                let path = io::resolve_output(args.output.as_deref(), &default_name);
                io::write_eigensystem(&path, &system)?;
                println!(
                    "wrote {} ({} eigenpairs of a {}-dimensional map)",
                    path.display(),
                    system.dim(),
                    system.dim()
                );
            }
        }
    }
    Ok(())
}

/// What `analyze` is looking at: one state or an eigenvector ensemble.
struct AnalyzeInput {
    states: Vec<QuantumState>,
    description: String,
    /// Closed-form exponent source, when the input is a cascade.
    cascade_p1: Option<f64>,
}

fn analyze_input(args: &AnalyzeArgs) -> Result<AnalyzeInput> {
    match args.state.as_str() {
        "cascade" => {
            check_state_size(args.n, 26, "cascade")?;
            let psi = cascade_state(&usage_check(CascadeParams::new(args.n, args.p1))?)?;
            Ok(AnalyzeInput {
                states: vec![psi],
                description: format!("cascade n = {} p1 = {}", args.n, fmt_f64(args.p1)),
                cascade_p1: Some(args.p1),
            })
        }
        "uniform" => {
            check_state_size(args.n, 26, "uniform")?;
            Ok(AnalyzeInput {
                states: vec![QuantumState::uniform(args.n)],
                description: format!("uniform n = {}", args.n),
                cascade_p1: None,
            })
        }
        "basis" => {
            check_state_size(args.n, 26, "basis")?;
            Ok(AnalyzeInput {
                states: vec![usage_check(QuantumState::basis(args.n, args.index))?],
                description: format!("basis n = {} index = {}", args.n, args.index),
                cascade_p1: None,
            })
        }
        path if path.ends_with(".mfqe") => {
            let system = io::read_eigensystem(std::path::Path::new(path))?;
            let n = system.dim().trailing_zeros() as usize;
            let states: Result<Vec<QuantumState>> = (0..system.dim())
                .map(|k| Ok(QuantumState::new(n, system.eigenvector(k).to_vec())?))
                .collect();
            Ok(AnalyzeInput {
                states: states?,
                description: format!("{path} ({} eigenvectors)", system.dim()),
                cascade_p1: None,
            })
        }
        path => {
            let state = io::read_state(std::path::Path::new(path))?;
            Ok(AnalyzeInput {
                states: vec![state],
                description: path.to_string(),
                cascade_p1: None,
            })
        }
    }
}

fn analyze_cmd(args: AnalyzeArgs) -> Result<()> {
    let q_list = config::parse_f64_list(&args.q).map_err(usage_err)?;
    if q_list.is_empty() {
        return Err(usage_err("q must list at least one moment order"));
    }
    let filter_kind = parse_filter(&args.filter)?;
    let filter = filter_kind.build();
    let window_arg = config::parse_window(&args.window).map_err(usage_err)?;

    let input = analyze_input(&args)?;
    let n = input.states[0].qubits();
    let window = window_arg.unwrap_or_else(|| default_fit_window(n));
    if window.1 > n - 1 || window.0 + 2 > window.1 {
        return Err(usage_err(format!(
            "window {}..{} is not a usable level range for depth {n}",
            window.0, window.1
        )));
    }
    let count = input.states.len() as u64;

    let mut table = ResultTable::new("analyze", &["q"]);
    table.meta("version", env!("CARGO_PKG_VERSION"));
    table.meta("state", &input.description);
    table.meta("filter", filter_kind.name());
    table.meta("levels", format!("{}..{}", window.0, window.1));
    table.meta("states", count);

    let mut text = String::new();
    let _ = writeln!(text, "state: {} ({} qubits, N = {})", input.description, n, 1usize << n);
    let _ = writeln!(
        text,
        "filter: {}, levels {}..{}, {} state{}",
        filter_kind.name(),
        window.0,
        window.1,
        count,
        if count == 1 { "" } else { "s" }
    );

    for &q in &q_list {
        let mut fits: Vec<(&str, f64, f64)> = Vec::new();
        for (norm, statistic) in [
            (Normalization::Density, "tau_density"),
            (Normalization::Amplitude, "tau_amplitude"),
            (Normalization::Unnormalized, "tauprime"),
        ] {
            let tables: Result<Vec<PartitionTable>> = input
                .states
                .iter()
                .map(|s| Ok(partition_with(s, &filter, q, norm, args.include_approx)?))
                .collect();
            let average = ensemble_log_average(&tables?)?;
            let series = fit_tau(&average, q, window)?;
            fits.push((statistic, series.tau, series.stderr));
        }
        let _ = writeln!(text, "q = {}:", fmt_f64(q));
        for &(statistic, tau, stderr) in &fits {
            table.push(&[&q], statistic, tau, Some(stderr), count)?;
            let _ = writeln!(
                text,
                "  {statistic:<14} = {:>10.6} ± {:.6}",
                tau, stderr
            );
        }
        if let Some(p1) = input.cascade_p1 {
            let analytic = cascade_tau_analytic(q, p1);
            table.push(&[&q], "tau_analytic", analytic, None, 1)?;
            let _ = writeln!(text, "  {:<14} = {analytic:>10.6}", "tau_analytic");
        }
    }

    if args.json {
        println!("{}", serde_json::to_string_pretty(&table.to_json())?);
    } else {
        print!("{text}");
    }
    if let Some(csv) = &args.csv {
        let path = std::path::PathBuf::from(csv);
        io::write_text(&path, &table.to_csv())?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn emulate_cmd(args: EmulateArgs) -> Result<()> {
    match args.algorithm.as_str() {
        "grover" => {
            check_state_size(args.n, 8, "two-register emulation")?;
            let psi = cascade_state(&usage_check(CascadeParams::new(args.n, args.p1))?)?;
            let cap = args.max_iterations.unwrap_or(u64::MAX);
            let (_, run) = grover_select_diagonal(&psi, cap)?;
            if args.json {
                let value = serde_json::json!({
                    "algorithm": "grover",
                    "n": args.n,
                    "p1": args.p1,
                    "initial_weight": run.x,
                    "iterations": run.iterations,
                    "trace": run.success_probability,
                    "flagged": run.flagged,
                });
                println!("{}", serde_json::to_string(&value)?);
            } else {
                println!("initial diagonal weight x = {}", fmt_f64(run.x));
                for (k, &p) in run.success_probability.iter().enumerate() {
                    println!("after {k} reflections: diagonal probability = {p:.6}");
                }
                println!(
                    "selected at {} reflections; flagged = {}",
                    run.iterations, run.flagged
                );
            }
        }
        "phase" => {
            check_state_size(args.n, 12, "dense eigendecomposition")?;
            if args.n + args.n_time > 16 {
                return Err(usage_err(format!(
                    "n + n_time = {} exceeds the emulation cap of 16 qubits",
                    args.n + args.n_time
                )));
            }
            let params = usage_check(IsrmParams::random(
                args.n,
                args.n1,
                args.n2,
                args.seed,
                args.realization,
            ))?;
            let system = mfq_core::isrm_eigensystem(
                args.n,
                args.n1,
                args.n2,
                args.seed,
                args.realization,
            )?;
            if args.eigenvector >= system.dim() {
                return Err(usage_err(format!(
                    "eigenvector {} does not exist in a {}-dimensional map",
                    args.eigenvector,
                    system.dim()
                )));
            }
            let psi0 =
                QuantumState::new(args.n, system.eigenvector(args.eigenvector).to_vec())?;
            let result = phase_estimation(&params, &psi0, args.n_time)?;
            let bins = result.histogram.len();
            let target =
                system.eigenphases()[args.eigenvector].rem_euclid(std::f64::consts::TAU);
            if args.json {
                let value = serde_json::json!({
                    "algorithm": "phase",
                    "n": args.n,
                    "n_time": args.n_time,
                    "eigenvector": args.eigenvector,
                    "target_phase": target,
                    "peak_bin": result.peak_bin,
                    "peak_probability": result.peak_probability,
                    "estimated_phase": result.grid_phase(result.peak_bin),
                    "histogram": result.histogram,
                });
                println!("{}", serde_json::to_string(&value)?);
            } else {
                println!(
                    "map gamma = {}/{}, eigenvector {} of {}, target phase = {:.6}",
                    args.n1, args.n2, args.eigenvector, system.dim(), target
                );
                println!(
                    "time register: {} qubits ({} bins); target bin = {:.2}",
                    args.n_time,
                    bins,
                    target / std::f64::consts::TAU * bins as f64
                );
                println!(
                    "peak bin = {} (phase {:.6}), probability = {:.4}",
                    result.peak_bin,
                    result.grid_phase(result.peak_bin),
                    result.peak_probability
                );
            }
        }
        "sample" => {
            check_state_size(args.n, 22, "transform sampling")?;
            let moment = usage_check(SampleMoment::from_order(args.moment))?;
            let filter = parse_filter(&args.filter)?.build();
            let psi = cascade_state(&usage_check(CascadeParams::new(args.n, args.p1))?)?;
            let coeffs = fwt_forward(psi.amplitudes(), &filter)?;
            let histogram = sample_scale_register(&coeffs, moment, args.shots, args.seed)?;
            if args.json {
                let value = serde_json::json!({
                    "algorithm": "sample",
                    "n": args.n,
                    "p1": args.p1,
                    "moment": args.moment,
                    "shots": histogram.shots,
                    "scales": histogram.scales,
                    "probabilities": histogram.probabilities,
                    "frequencies": histogram.frequencies,
                    "counts": histogram.counts,
                });
                println!("{}", serde_json::to_string(&value)?);
            } else {
                println!(
                    "scale register of a cascade (n = {}, p1 = {}), |T|^{} weights, {} shots",
                    args.n,
                    fmt_f64(args.p1),
                    args.moment,
                    histogram.shots
                );
                for level in 0..histogram.scales.len() {
                    println!(
                        "level {level:>2} (a = 2^-{level:<2}): p = {:.6}  freq = {:.6}  ({} shots)",
                        histogram.probabilities[level],
                        histogram.frequencies[level],
                        histogram.counts[level]
                    );
                }
            }
        }
        other => {
            return Err(usage_err(format!(
                "unknown algorithm {other:?}; expected grover, phase, or sample"
            )))
        }
    }
    Ok(())
}

fn cost_cmd(args: CostArgs) -> Result<()> {
    let tasks: Vec<CostTask> = if args.task == "all" {
        CostTask::ALL.to_vec()
    } else {
        vec![CostTask::from_name(&args.task).ok_or_else(|| {
            let names: Vec<&str> = CostTask::ALL.iter().map(|t| t.name()).collect();
            usage_err(format!(
                "unknown task {:?}; expected all or one of: {}",
                args.task,
                names.join(", ")
            ))
        })?]
    };
    let sizes = config::parse_index_list(&args.n).map_err(usage_err)?;
    for &n in &sizes {
        if n > 64 {
            return Err(usage_err(format!("n = {n} exceeds the cost-model cap n ≤ 64")));
        }
    }
    if !(0.0..=1.0).contains(&args.alpha) {
        return Err(usage_err(format!("alpha = {} must lie in [0, 1]", args.alpha)));
    }
    if !args.beta.is_finite() {
        return Err(usage_err(format!("beta = {} must be finite", args.beta)));
    }
    if args.t == 0 {
        return Err(usage_err("t must be at least 1 map iteration"));
    }

    let mut reports = Vec::new();
    for &task in &tasks {
        let is_iterate =
            matches!(task, CostTask::IterateDensity | CostTask::IterateAmplitude);
        let uses_beta =
            matches!(task, CostTask::IterateAmplitude | CostTask::EigenvectorAmplitude);
        for &n in &sizes {
            reports.push(cost_model(
                n,
                is_iterate.then_some(args.t),
                args.alpha,
                uses_beta.then_some(args.beta),
                task,
            )?);
        }
    }

    if args.json {
        let rows: Vec<serde_json::Value> = reports
            .iter()
            .map(|r| {
                serde_json::json!({
                    "task": r.task.name(),
                    "n": r.n,
                    "t": r.t,
                    "alpha": r.alpha,
                    "beta": r.beta,
                    "quantum_count": r.quantum_count,
                    "classical_count": r.classical_count,
                    "log2_gain": r.log2_gain,
                })
            })
            .collect();
        println!("{}", serde_json::to_string_pretty(&rows)?);
    } else {
        println!(
            "{:<24} {:>3} {:>8} {:>12} {:>12} {:>10}",
            "task", "n", "t", "quantum", "classical", "log2 gain"
        );
        for r in &reports {
            println!(
                "{:<24} {:>3} {:>8} {:>12} {:>12} {:>10.2}",
                r.task.name(),
                r.n,
                r.t.map_or(String::from("-"), |t| t.to_string()),
                format!("{:.2e}", r.quantum_count),
                format!("{:.2e}", r.classical_count),
                r.log2_gain
            );
        }
    }
    Ok(())
}

fn experiment_cmd(args: ExperimentArgs) -> Result<()> {
    let mut cfg: ExperimentConfig = match (&args.config, &args.name) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading config {path}"))?;
            config::parse_config(&text)?
        }
        (None, Some(name)) => config::template(Experiment::from_name(name)?),
        (None, None) => {
            return Err(usage_err("give --name <experiment> or --config <file>"))
        }
    };
    for set in &args.sets {
        config::apply_set_arg(&mut cfg, set)?;
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(threads) = args.threads {
        cfg.threads = threads;
    }
    if let Some(output) = &args.output {
        cfg.output = Some(output.clone());
    }
    config::validate(&cfg)?;

    if args.dry_run {
        print!("{}", config::serialize_config(&cfg));
        return Ok(());
    }

    let table = experiments::run_experiment(&cfg)?;
    if args.json {
        println!("{}", serde_json::to_string_pretty(&table.to_json())?);
    } else {
        let path = io::resolve_output(
            cfg.output.as_deref(),
            &experiments::default_output_name(cfg.experiment),
        );
        io::write_text(&path, &table.to_csv())?;
        println!("wrote {} ({} rows)", path.display(), table.rows().len());
    }
    Ok(())
}

fn selftest_cmd(args: SelftestArgs) -> Result<()> {
    let report = if args.json {
        selftest::run_all(|_| {})
    } else {
        selftest::run_all(|line| println!("{line}"))
    };
    if args.json {
        let value = serde_json::json!({
            "passed": report.passed,
            "failed": report
                .failed
                .iter()
                .map(|(name, reason)| serde_json::json!({ "name": name, "reason": reason }))
                .collect::<Vec<_>>(),
        });
        println!("{}", serde_json::to_string_pretty(&value)?);
    }
    if report.failed.is_empty() {
        if !args.json {
            println!("all {} suites passed", report.passed.len());
        }
        Ok(())
    } else {
        anyhow::bail!(
            "{} of {} selftest suites failed",
            report.failed.len(),
            report.failed.len() + report.passed.len()
        )
    }
}
