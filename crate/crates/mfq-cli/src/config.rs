//! Flat `key = value` experiment configuration.
//!
//! A configuration file names an experiment and overrides its template
//! defaults:
//!
//! ```text
//! # lines starting with '#' are comments
//! experiment = fig7_tau2_eigvecs
//! n = 6..10            <- integer lists take commas and inclusive ranges
//! n2 = 3,5
//! ensemble_size = 512
//! seed = 7
//! ```
//!
//! Every key can also be set from the command line with `--set key=value`;
//! the same parser handles both.  [`serialize_config`] writes a complete
//! key set in a fixed order and [`parse_config`] reads it back to an
//! identical configuration, so a result file's config echo is sufficient to
//! re-run the experiment.
//!
//! Validation problems are reported as [`UsageError`] so the binary can
//! exit with the usage status (2) instead of the computational-failure
//! status (1).

use std::fmt;

use anyhow::Result;
use mfq_core::multifractal::default_fit_window;
use mfq_core::wavelet::WaveletFilter;

use crate::report::fmt_f64;

/// Marker for configuration and argument problems; the binary maps any
/// error chain containing one to exit status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// Builds a usage error (exit status 2).
pub fn usage_err(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(UsageError(msg.into()))
}

/// The named batch experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    /// Ensemble-averaged `log₂ Z(a, q)` per scale, density partition,
    /// eigenvectors of one map family.
    Fig2ZDensity,
    /// Same layout for the amplitude partition.
    Fig3ZAmplitude,
    /// Cascade `τ′₁` as a function of the construction weight, one curve
    /// per size.
    Fig4TauprimeCascade,
    /// Map-eigenvector `τ′_q` across moment orders for several map ratios.
    Fig5TauprimeVsQ,
    /// Cascade `τ₂` for both partition variants across weights and sizes.
    Fig6Tau2Cascade,
    /// Map-eigenvector `τ₂` for both partition variants across sizes.
    Fig7Tau2Eigvecs,
    /// `τ₂` of map iterates of basis columns (no eigendecomposition).
    Fig8Tau2Iterates,
    /// Map-eigenvector `τ′₁` as a function of the ratio denominator.
    Fig9TauprimeVsN2,
    /// Quantum-vs-classical operation counts for the measurement tasks.
    CostTable,
    /// End-to-end emulation trace: amplification, scale sampling, phase
    /// estimation.
    EmulationDemo,
}

impl Experiment {
    /// All experiments, in report order.
    pub const ALL: [Experiment; 10] = [
        Experiment::Fig2ZDensity,
        Experiment::Fig3ZAmplitude,
        Experiment::Fig4TauprimeCascade,
        Experiment::Fig5TauprimeVsQ,
        Experiment::Fig6Tau2Cascade,
        Experiment::Fig7Tau2Eigvecs,
        Experiment::Fig8Tau2Iterates,
        Experiment::Fig9TauprimeVsN2,
        Experiment::CostTable,
        Experiment::EmulationDemo,
    ];

    /// Stable name used in config files, CSV output, and the CLI.
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Fig2ZDensity => "fig2_zdensity",
            Experiment::Fig3ZAmplitude => "fig3_zamplitude",
            Experiment::Fig4TauprimeCascade => "fig4_tauprime_cascade",
            Experiment::Fig5TauprimeVsQ => "fig5_tauprime_vs_q",
            Experiment::Fig6Tau2Cascade => "fig6_tau2_cascade",
            Experiment::Fig7Tau2Eigvecs => "fig7_tau2_eigvecs",
            Experiment::Fig8Tau2Iterates => "fig8_tau2_iterates",
            Experiment::Fig9TauprimeVsN2 => "fig9_tauprime_vs_n2",
            Experiment::CostTable => "cost_table",
            Experiment::EmulationDemo => "emulation_demo",
        }
    }

    /// Inverse of [`Experiment::name`].
    pub fn from_name(name: &str) -> Result<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == name)
            .ok_or_else(|| {
                let names: Vec<&str> = Experiment::ALL.iter().map(|e| e.name()).collect();
                usage_err(format!(
                    "unknown experiment {name:?}; expected one of: {}",
                    names.join(", ")
                ))
            })
    }

    fn uses_eigenvectors(self) -> bool {
        matches!(
            self,
            Experiment::Fig2ZDensity
                | Experiment::Fig3ZAmplitude
                | Experiment::Fig5TauprimeVsQ
                | Experiment::Fig7Tau2Eigvecs
                | Experiment::Fig9TauprimeVsN2
        )
    }

    fn uses_cascade(self) -> bool {
        matches!(
            self,
            Experiment::Fig4TauprimeCascade
                | Experiment::Fig6Tau2Cascade
                | Experiment::EmulationDemo
        )
    }

    fn uses_map(self) -> bool {
        self.uses_eigenvectors()
            || matches!(self, Experiment::Fig8Tau2Iterates | Experiment::EmulationDemo)
    }

    /// The moment order some experiments hard-wire into their statistic
    /// names (`tau2_density`, `tauprime1`, …).
    fn fixed_q(self) -> Option<f64> {
        match self {
            Experiment::Fig4TauprimeCascade | Experiment::Fig9TauprimeVsN2 => Some(1.0),
            Experiment::Fig6Tau2Cascade
            | Experiment::Fig7Tau2Eigvecs
            | Experiment::Fig8Tau2Iterates => Some(2.0),
            _ => None,
        }
    }
}

/// Which conjugate-mirror filter drives the wavelet transforms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilterKind {
    /// Two-tap Haar filter.
    Haar,
    /// Four-tap Daubechies filter.
    Daub4,
}

impl FilterKind {
    /// Stable name used in config files and CLI flags.
    pub fn name(self) -> &'static str {
        match self {
            FilterKind::Haar => "haar",
            FilterKind::Daub4 => "daub4",
        }
    }

    /// Inverse of [`FilterKind::name`].
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "haar" => Ok(FilterKind::Haar),
            "daub4" => Ok(FilterKind::Daub4),
            other => Err(usage_err(format!(
                "unknown filter {other:?}; expected haar or daub4"
            ))),
        }
    }

    /// Builds the filter.
    pub fn build(self) -> WaveletFilter {
        match self {
            FilterKind::Haar => WaveletFilter::haar(),
            FilterKind::Daub4 => WaveletFilter::daubechies4(),
        }
    }
}

/// Complete experiment configuration.  Unused fields keep their template
/// defaults so that serialization always writes the full key set.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    /// Which experiment to run.
    pub experiment: Experiment,
    /// Qubit counts (state size `N = 2^n`).
    pub n: Vec<usize>,
    /// Map ratio numerator.
    pub n1: u64,
    /// Map ratio denominators to sweep.
    pub n2: Vec<u64>,
    /// Cascade weights to sweep.
    pub p1: Vec<f64>,
    /// Moment orders to sweep.
    pub q: Vec<f64>,
    /// Target number of states per experiment cell (per `(n, n2)` or
    /// `(n, p1)` combination) for ensemble experiments.
    pub ensemble_size: u64,
    /// How many vectors to take from each map realization; 0 means all
    /// available (eigenvector experiments only).
    pub vectors_per_realization: u64,
    /// Map iteration count (iterate experiments and the cost table).
    pub t: u64,
    /// Measurement shots (emulation demo).
    pub shots: u64,
    /// Time-register qubits (emulation demo).
    pub n_time: usize,
    /// Fit window as inclusive levels, or `None` for the per-experiment
    /// default.
    pub fit_window: Option<(usize, usize)>,
    /// Wavelet filter.
    pub filter: FilterKind,
    /// Density measurement exponent for the cost table.
    pub alpha: f64,
    /// Amplitude measurement exponent for the cost table.
    pub beta: f64,
    /// Master seed; every realization derives its own stream from it.
    pub seed: u64,
    /// Worker threads for ensemble execution; 0 means one per CPU.
    pub threads: usize,
    /// Output path for the CSV result (`None`: derived from the experiment
    /// name, see `io::resolve_output`).
    pub output: Option<String>,
}

/// Template (default) configuration for an experiment, sized so a default
/// run finishes on a desktop machine in at most a few minutes.
pub fn template(experiment: Experiment) -> ExperimentConfig {
    let mut cfg = ExperimentConfig {
        experiment,
        n: vec![10],
        n1: 1,
        n2: vec![3],
        p1: vec![0.3],
        q: vec![2.0],
        ensemble_size: 512,
        vectors_per_realization: 0,
        t: 1000,
        shots: 10_000,
        n_time: 8,
        fit_window: None,
        filter: FilterKind::Daub4,
        alpha: 1.0,
        beta: 1.0,
        seed: 7,
        threads: 0,
        output: None,
    };
    match experiment {
        Experiment::Fig2ZDensity | Experiment::Fig3ZAmplitude => {
            cfg.q = vec![2.0, 3.0, 4.0];
        }
        Experiment::Fig4TauprimeCascade => {
            cfg.n = vec![6, 8, 10, 12, 14, 16];
            cfg.p1 = vec![0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5];
            cfg.q = vec![1.0];
        }
        Experiment::Fig5TauprimeVsQ => {
            cfg.n = vec![9];
            cfg.n2 = vec![3, 5, 7, 11, 13];
            cfg.q = vec![
                -3.0, -2.5, -2.0, -1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0,
                3.5, 4.0,
            ];
        }
        Experiment::Fig6Tau2Cascade => {
            cfg.n = vec![8, 10, 12, 14, 16];
            cfg.p1 = vec![0.1, 0.2, 0.3, 0.4];
        }
        Experiment::Fig7Tau2Eigvecs => {
            cfg.n = vec![6, 7, 8, 9, 10];
            cfg.n2 = vec![3, 5];
        }
        Experiment::Fig8Tau2Iterates => {
            cfg.n = vec![6, 8, 10];
            cfg.n2 = vec![3, 5];
            cfg.ensemble_size = 128;
            cfg.vectors_per_realization = 16;
        }
        Experiment::Fig9TauprimeVsN2 => {
            cfg.n = vec![6, 7, 8, 9];
            cfg.n2 = vec![3, 5, 7, 9, 11, 13];
            cfg.q = vec![1.0];
        }
        Experiment::CostTable => {
            cfg.n = vec![10, 12, 14, 16, 18, 20];
            cfg.t = 100;
        }
        Experiment::EmulationDemo => {
            cfg.n = vec![6];
        }
    }
    cfg
}

/// Key order for serialization (and the set of recognized keys).
const KEYS: [&str; 18] = [
    "experiment",
    "n",
    "n1",
    "n2",
    "p1",
    "q",
    "ensemble_size",
    "vectors_per_realization",
    "t",
    "shots",
    "n_time",
    "fit_window",
    "filter",
    "alpha",
    "beta",
    "seed",
    "threads",
    "output",
];

/// Applies one `key = value` assignment.
pub fn apply_key(cfg: &mut ExperimentConfig, key: &str, value: &str) -> Result<()> {
    let fail = |what: &str| {
        usage_err(format!("invalid value {value:?} for key {key:?}: {what}"))
    };
    match key {
        "experiment" => cfg.experiment = Experiment::from_name(value)?,
        "n" => cfg.n = parse_index_list(value).map_err(|e| fail(&e))?,
        "n1" => cfg.n1 = value.parse().map_err(|_| fail("expected an integer"))?,
        "n2" => {
            let list = parse_index_list(value).map_err(|e| fail(&e))?;
            cfg.n2 = list.into_iter().map(|v| v as u64).collect();
        }
        "p1" => cfg.p1 = parse_f64_list(value).map_err(|e| fail(&e))?,
        "q" => cfg.q = parse_f64_list(value).map_err(|e| fail(&e))?,
        "ensemble_size" => {
            cfg.ensemble_size = value.parse().map_err(|_| fail("expected an integer"))?;
        }
        "vectors_per_realization" => {
            cfg.vectors_per_realization =
                value.parse().map_err(|_| fail("expected an integer"))?;
        }
        "t" => cfg.t = value.parse().map_err(|_| fail("expected an integer"))?,
        "shots" => cfg.shots = value.parse().map_err(|_| fail("expected an integer"))?,
        "n_time" => cfg.n_time = value.parse().map_err(|_| fail("expected an integer"))?,
        "fit_window" => cfg.fit_window = parse_window(value).map_err(|e| fail(&e))?,
        "filter" => cfg.filter = FilterKind::from_name(value)?,
        "alpha" => cfg.alpha = value.parse().map_err(|_| fail("expected a number"))?,
        "beta" => cfg.beta = value.parse().map_err(|_| fail("expected a number"))?,
        "seed" => cfg.seed = value.parse().map_err(|_| fail("expected an integer"))?,
        "threads" => cfg.threads = value.parse().map_err(|_| fail("expected an integer"))?,
        "output" => cfg.output = Some(value.to_string()),
        other => {
            return Err(usage_err(format!(
                "unknown config key {other:?}; expected one of: {}",
                KEYS.join(", ")
            )))
        }
    }
    Ok(())
}

/// Applies a `key=value` override argument (the `--set` flag).
pub fn apply_set_arg(cfg: &mut ExperimentConfig, arg: &str) -> Result<()> {
    let (key, value) = arg
        .split_once('=')
        .ok_or_else(|| usage_err(format!("override {arg:?} is not of the form key=value")))?;
    apply_key(cfg, key.trim(), value.trim())
}

/// Parses a config file: comment and blank lines are skipped, every other
/// line must be `key = value`.  The `experiment` key is required and
/// selects the template the remaining keys override.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let mut pairs: Vec<(&str, &str)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            usage_err(format!("line {}: expected `key = value`, got {line:?}", idx + 1))
        })?;
        let (key, value) = (key.trim(), value.trim());
        if pairs.iter().any(|(k, _)| *k == key) {
            return Err(usage_err(format!("line {}: duplicate key {key:?}", idx + 1)));
        }
        pairs.push((key, value));
    }
    let experiment = pairs
        .iter()
        .find(|(k, _)| *k == "experiment")
        .map(|(_, v)| Experiment::from_name(v))
        .transpose()?
        .ok_or_else(|| usage_err("config is missing the `experiment` key"))?;
    let mut cfg = template(experiment);
    for (key, value) in pairs {
        if key != "experiment" {
            apply_key(&mut cfg, key, value)?;
        }
    }
    Ok(cfg)
}

/// Writes the complete key set in fixed order; the output parses back to
/// an identical configuration.
pub fn serialize_config(cfg: &ExperimentConfig) -> String {
    let mut out = String::new();
    for (key, value) in config_pairs(cfg) {
        out.push_str(&format!("{key} = {value}\n"));
    }
    out
}

/// The `(key, value)` pairs of the serialized form, in order.  `output` is
/// omitted when unset.
pub fn config_pairs(cfg: &ExperimentConfig) -> Vec<(&'static str, String)> {
    let mut pairs = vec![
        ("experiment", cfg.experiment.name().to_string()),
        ("n", join_list(cfg.n.iter())),
        ("n1", cfg.n1.to_string()),
        ("n2", join_list(cfg.n2.iter())),
        ("p1", join_f64_list(&cfg.p1)),
        ("q", join_f64_list(&cfg.q)),
        ("ensemble_size", cfg.ensemble_size.to_string()),
        ("vectors_per_realization", cfg.vectors_per_realization.to_string()),
        ("t", cfg.t.to_string()),
        ("shots", cfg.shots.to_string()),
        ("n_time", cfg.n_time.to_string()),
        (
            "fit_window",
            match cfg.fit_window {
                None => "default".to_string(),
                Some((lo, hi)) => format!("{lo}..{hi}"),
            },
        ),
        ("filter", cfg.filter.name().to_string()),
        ("alpha", fmt_f64(cfg.alpha)),
        ("beta", fmt_f64(cfg.beta)),
        ("seed", cfg.seed.to_string()),
        ("threads", cfg.threads.to_string()),
    ];
    if let Some(output) = &cfg.output {
        pairs.push(("output", output.clone()));
    }
    pairs
}

fn join_list<T: ToString>(items: impl Iterator<Item = T>) -> String {
    items.map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

fn join_f64_list(items: &[f64]) -> String {
    items.iter().map(|&v| fmt_f64(v)).collect::<Vec<_>>().join(",")
}

/// Integer list grammar: comma-separated items, each a value or an
/// inclusive range `a..b`.
pub fn parse_index_list(value: &str) -> std::result::Result<Vec<usize>, String> {
    let mut out = Vec::new();
    for item in value.split(',') {
        let item = item.trim();
        if item.is_empty() {
            return Err("empty list item".to_string());
        }
        if let Some((lo, hi)) = item.split_once("..") {
            let lo: usize =
                lo.trim().parse().map_err(|_| format!("bad range start {lo:?}"))?;
            let hi: usize =
                hi.trim().parse().map_err(|_| format!("bad range end {hi:?}"))?;
            if lo > hi {
                return Err(format!("range {lo}..{hi} is reversed"));
            }
            if hi - lo > 4096 {
                return Err(format!("range {lo}..{hi} is implausibly wide"));
            }
            out.extend(lo..=hi);
        } else {
            out.push(item.parse().map_err(|_| format!("bad integer {item:?}"))?);
        }
    }
    if out.is_empty() {
        return Err("empty list".to_string());
    }
    Ok(out)
}

pub fn parse_f64_list(value: &str) -> std::result::Result<Vec<f64>, String> {
    let mut out = Vec::new();
    for item in value.split(',') {
        let item = item.trim();
        out.push(item.parse().map_err(|_| format!("bad number {item:?}"))?);
    }
    Ok(out)
}

/// Window grammar: `default` or inclusive `lo..hi` levels.
pub fn parse_window(value: &str) -> std::result::Result<Option<(usize, usize)>, String> {
    if value == "default" {
        return Ok(None);
    }
    let (lo, hi) = value
        .split_once("..")
        .ok_or_else(|| "expected `default` or `lo..hi`".to_string())?;
    let lo = lo.trim().parse().map_err(|_| format!("bad level {lo:?}"))?;
    let hi = hi.trim().parse().map_err(|_| format!("bad level {hi:?}"))?;
    Ok(Some((lo, hi)))
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl ExperimentConfig {
    /// The configured wavelet filter.
    pub fn build_filter(&self) -> WaveletFilter {
        self.filter.build()
    }

    /// Fit window for a depth-`n` table: the explicit window when set;
    /// otherwise `[1, n−2]` for the cross-size trend experiments (their
    /// curves compare sizes, so the window must grow with the transform
    /// rather than track a fixed interior band) and the standard interior
    /// default for everything else.
    pub fn window_for(&self, n: usize) -> (usize, usize) {
        if let Some(w) = self.fit_window {
            return w;
        }
        match self.experiment {
            Experiment::Fig4TauprimeCascade | Experiment::Fig9TauprimeVsN2
                if n >= 5 =>
            {
                (1, n - 2)
            }
            _ => default_fit_window(n),
        }
    }
}

/// Checks the configuration against the experiment's requirements and the
/// desk-scale resource caps.  Every failure is a [`UsageError`].
pub fn validate(cfg: &ExperimentConfig) -> Result<()> {
    let fail = |msg: String| -> Result<()> { Err(usage_err(msg)) };
    let experiment = cfg.experiment;

    if cfg.n.is_empty() {
        return fail("n must list at least one qubit count".into());
    }
    for &n in &cfg.n {
        if n < 2 {
            return fail(format!("n = {n} is too small; the transforms need n ≥ 2"));
        }
    }
    if cfg.threads > 1024 {
        return fail(format!("threads = {} is beyond any plausible machine", cfg.threads));
    }
    if cfg.ensemble_size == 0 {
        return fail("ensemble_size must be at least 1".into());
    }
    if cfg.ensemble_size > 1_000_000 {
        return fail(format!(
            "ensemble_size = {} is beyond the desk-scale cap of 1000000",
            cfg.ensemble_size
        ));
    }
    for &q in &cfg.q {
        if !q.is_finite() || q.abs() > 16.0 {
            return fail(format!("q = {q} is outside the supported range |q| ≤ 16"));
        }
    }
    if let Some(fixed) = experiment.fixed_q() {
        if cfg.q != [fixed] {
            return fail(format!(
                "{} fixes q = {fixed} (its statistics are named for that order)",
                experiment.name()
            ));
        }
    }
    if let Some((lo, hi)) = cfg.fit_window {
        if lo + 2 > hi {
            return fail(format!(
                "fit_window {lo}..{hi} holds fewer than 3 levels"
            ));
        }
        for &n in &cfg.n {
            if hi > n - 1 {
                return fail(format!(
                    "fit_window {lo}..{hi} exceeds the finest level {} of n = {n}",
                    n - 1
                ));
            }
        }
    }

    if experiment.uses_cascade() {
        if cfg.p1.is_empty() {
            return fail("p1 must list at least one cascade weight".into());
        }
        for &p in &cfg.p1 {
            if !(p > 0.0 && p < 1.0) {
                return fail(format!("p1 = {p} must lie strictly between 0 and 1"));
            }
        }
        let cap = 22;
        for &n in &cfg.n {
            if n > cap && experiment != Experiment::EmulationDemo {
                return fail(format!(
                    "n = {n} exceeds the desk-scale cascade cap n ≤ {cap}"
                ));
            }
        }
    }

    if experiment.uses_map() {
        if cfg.n2.is_empty() {
            return fail("n2 must list at least one ratio denominator".into());
        }
        if cfg.n1 == 0 {
            return fail("n1 must be at least 1".into());
        }
        for &n2 in &cfg.n2 {
            if n2 <= cfg.n1 {
                return fail(format!(
                    "n2 = {n2} must exceed n1 = {} (the ratio lies in (0, 1))",
                    cfg.n1
                ));
            }
            if gcd(cfg.n1, n2) != 1 {
                return fail(format!(
                    "n1/n2 = {}/{n2} is not in lowest terms",
                    cfg.n1
                ));
            }
            for &n in &cfg.n {
                if n < 64 && ((1u128 << n) * cfg.n1 as u128) % n2 as u128 == 0 {
                    return fail(format!(
                        "n1/n2 = {}/{n2} is singular at n = {n}: N·n1 is a multiple of n2",
                        cfg.n1
                    ));
                }
            }
        }
    }

    if experiment.uses_eigenvectors() {
        for &n in &cfg.n {
            if n > 12 {
                return fail(format!(
                    "n = {n} exceeds the dense eigendecomposition cap n ≤ 12"
                ));
            }
        }
    }

    match experiment {
        Experiment::Fig2ZDensity | Experiment::Fig3ZAmplitude => {
            if cfg.n.len() != 1 || cfg.n2.len() != 1 {
                return fail(format!(
                    "{} profiles a single map family: give exactly one n and one n2",
                    experiment.name()
                ));
            }
            if cfg.q.is_empty() {
                return fail("q must list at least one moment order".into());
            }
        }
        Experiment::Fig5TauprimeVsQ => {
            if cfg.n.len() != 1 {
                return fail("fig5_tauprime_vs_q sweeps q and n2 at a single n".into());
            }
            if cfg.q.is_empty() {
                return fail("q must list at least one moment order".into());
            }
        }
        Experiment::Fig8Tau2Iterates => {
            if cfg.t == 0 {
                return fail("t must be at least 1 map iteration".into());
            }
            if cfg.t > 1_000_000 {
                return fail(format!("t = {} exceeds the desk-scale cap 1000000", cfg.t));
            }
            if cfg.vectors_per_realization == 0 {
                return fail(
                    "vectors_per_realization must be ≥ 1 (columns are drawn per realization)"
                        .into(),
                );
            }
            for &n in &cfg.n {
                if n > 16 {
                    return fail(format!(
                        "n = {n} exceeds the desk-scale iteration cap n ≤ 16"
                    ));
                }
            }
        }
        Experiment::CostTable => {
            if !(0.0..=1.0).contains(&cfg.alpha) {
                return fail(format!("alpha = {} must lie in [0, 1]", cfg.alpha));
            }
            if !cfg.beta.is_finite() {
                return fail(format!("beta = {} must be finite", cfg.beta));
            }
            if cfg.t == 0 {
                return fail("t must be at least 1 map iteration".into());
            }
            for &n in &cfg.n {
                if n > 64 {
                    return fail(format!("n = {n} exceeds the cost-model cap n ≤ 64"));
                }
            }
        }
        Experiment::EmulationDemo => {
            if cfg.n.len() != 1 || cfg.p1.len() != 1 || cfg.n2.len() != 1 {
                return fail(
                    "emulation_demo runs one scenario: give exactly one n, p1, and n2"
                        .into(),
                );
            }
            let n = cfg.n[0];
            if n > 8 {
                return fail(format!(
                    "n = {n} exceeds the two-register emulation cap n ≤ 8"
                ));
            }
            if cfg.n_time == 0 {
                return fail("n_time must be at least 1 time-register qubit".into());
            }
            if n + cfg.n_time > 16 {
                return fail(format!(
                    "n + n_time = {} exceeds the emulation cap of 16 qubits",
                    n + cfg.n_time
                ));
            }
            if cfg.shots == 0 || cfg.shots > 1_000_000_000 {
                return fail(format!(
                    "shots = {} must lie in [1, 1000000000]",
                    cfg.shots
                ));
            }
        }
        _ => {}
    }
    Ok(())
}
