//! The named batch experiments behind `mfq experiment`.
//!
//! Each experiment sweeps a parameter grid, reduces per-state partition
//! tables to fitted scaling exponents, and emits one [`ResultTable`].
//! Naming follows the output statistics: `tau2_*` statistics are moment
//! order 2, `tauprime*` are the unnormalized-partition exponents.
//!
//! Determinism contract: realization `r` of a cell draws its randomness
//! from streams keyed by `(seed, r)`, ensembles are reduced in realization
//! order (see [`crate::ensemble`]), and tables render through the
//! byte-stable [`ResultTable`] writer — so a `(config, seed)` pair fixes
//! the output bytes regardless of the worker count.
//!
//! Fit windows: every experiment honors an explicit `fit_window` override;
//! by default the per-size interior window is used, except for the
//! cross-size trend experiments (`fig4_tauprime_cascade`,
//! `fig9_tauprime_vs_n2`) whose default window grows with the transform
//! depth (levels `1..=n−2`), since a fixed interior band would blend a
//! different fraction of each size's scaling range into the trend.

use std::collections::BTreeSet;

use anyhow::{Context, Result};
use rand_core::RngCore;

use mfq_core::emulate::{
    cost_model, grover_select_diagonal, phase_estimation, sample_scale_register,
    CostTask, SampleMoment,
};
use mfq_core::isrm::{apply_isrm, IsrmParams};
use mfq_core::multifractal::{
    ensemble_log_average, fit_tau, partition_with, Normalization, PartitionTable,
    ScalingSeries,
};
use mfq_core::rng::{self, tag};
use mfq_core::wavelet::fwt_forward;
use mfq_core::{cascade_state, cascade_tau_analytic, CascadeParams, QuantumState};

use crate::config::{config_pairs, Experiment, ExperimentConfig};
use crate::ensemble::run_indexed;
use crate::report::ResultTable;

/// Default file name for an experiment's CSV output.
pub fn default_output_name(experiment: Experiment) -> String {
    format!("{}.csv", experiment.name())
}

/// Runs a validated configuration to a result table.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ResultTable> {
    match cfg.experiment {
        Experiment::Fig2ZDensity => partition_profile(cfg, Normalization::Density),
        Experiment::Fig3ZAmplitude => partition_profile(cfg, Normalization::Amplitude),
        Experiment::Fig4TauprimeCascade => cascade_trend(cfg),
        Experiment::Fig5TauprimeVsQ => eigvec_moments(cfg),
        Experiment::Fig6Tau2Cascade => cascade_tau2(cfg),
        Experiment::Fig7Tau2Eigvecs => eigvec_tau2(cfg),
        Experiment::Fig8Tau2Iterates => iterate_tau2(cfg),
        Experiment::Fig9TauprimeVsN2 => eigvec_trend(cfg),
        Experiment::CostTable => cost_table(cfg),
        Experiment::EmulationDemo => emulation_demo(cfg),
    }
}

/// Starts a table with the standard metadata block: version, seed, fit
/// window, the full configuration echo, and (for fitting experiments) the
/// resolved level window per size.
fn base_table(cfg: &ExperimentConfig, param_names: &[&str]) -> ResultTable {
    let mut table = ResultTable::new(cfg.experiment.name(), param_names);
    table.meta("version", env!("CARGO_PKG_VERSION"));
    table.meta("seed", cfg.seed);
    table.meta(
        "fit_window",
        match cfg.fit_window {
            None => "default".to_string(),
            Some((lo, hi)) => format!("{lo}..{hi}"),
        },
    );
    for (key, value) in config_pairs(cfg) {
        table.meta(&format!("config.{key}"), value);
    }
    if !matches!(cfg.experiment, Experiment::CostTable | Experiment::EmulationDemo) {
        for &n in &BTreeSet::from_iter(cfg.n.iter().copied()) {
            let (lo, hi) = cfg.window_for(n);
            table.meta(&format!("levels_n{n}"), format!("{lo}..{hi}"));
        }
    }
    table
}

/// Evenly spaced eigenvector indices: an unbiased deterministic subset of
/// `0..total` when fewer vectors are requested than exist.
fn eigvec_indices(total: usize, take: usize) -> Vec<usize> {
    if take >= total {
        (0..total).collect()
    } else {
        (0..take).map(|i| i * total / take).collect()
    }
}

/// Per-vector partition tables over an eigenvector ensemble of one map
/// cell, one list per requested `(normalization, q)` statistic, flattened
/// in realization order.
struct CellTables {
    tables: Vec<Vec<PartitionTable>>,
    vectors: u64,
}

fn eigenvector_cell(
    cfg: &ExperimentConfig,
    n: usize,
    n2: u64,
    specs: &[(Normalization, f64)],
) -> Result<CellTables> {
    let dim = 1u64 << n;
    let per_realization = if cfg.vectors_per_realization == 0 {
        dim
    } else {
        cfg.vectors_per_realization.min(dim)
    };
    let realizations = cfg.ensemble_size.div_ceil(per_realization);
    let filter = cfg.build_filter();

    let outcome = run_indexed(cfg.threads, realizations, |r| {
        let system = mfq_core::isrm_eigensystem(n, cfg.n1, n2, cfg.seed, r)?;
        let indices = eigvec_indices(system.dim(), per_realization as usize);
        let mut per_spec: Vec<Vec<PartitionTable>> = vec![Vec::new(); specs.len()];
        for &k in &indices {
            let psi = QuantumState::new(n, system.eigenvector(k).to_vec())?;
            for (slot, &(norm, q)) in per_spec.iter_mut().zip(specs) {
                slot.push(partition_with(&psi, &filter, q, norm, false)?);
            }
        }
        Ok(per_spec)
    })
    .with_context(|| format!("eigenvector ensemble at n = {n}, n2 = {n2}"))?;

    let mut tables: Vec<Vec<PartitionTable>> = vec![Vec::new(); specs.len()];
    for per_spec in outcome.results {
        for (slot, from_realization) in tables.iter_mut().zip(per_spec) {
            slot.extend(from_realization);
        }
    }
    let vectors = tables.first().map_or(0, |t| t.len() as u64);
    Ok(CellTables { tables, vectors })
}

/// Log-averages one statistic's tables and fits the scaling exponent.
fn fit_cell(
    tables: &[PartitionTable],
    q: f64,
    window: (usize, usize),
) -> Result<ScalingSeries> {
    let average = ensemble_log_average(tables)?;
    Ok(fit_tau(&average, q, window)?)
}

/// `fig2_zdensity` / `fig3_zamplitude`: per-scale ensemble-averaged
/// `log₂ Z(a, q)` plus the fitted exponent, for one map family.
fn partition_profile(cfg: &ExperimentConfig, norm: Normalization) -> Result<ResultTable> {
    let mut table = base_table(cfg, &["q", "level", "log2_scale"]);
    let n = cfg.n[0];
    let n2 = cfg.n2[0];
    let specs: Vec<(Normalization, f64)> = cfg.q.iter().map(|&q| (norm, q)).collect();
    let cell = eigenvector_cell(cfg, n, n2, &specs)?;
    let window = cfg.window_for(n);

    for (&q, tables) in cfg.q.iter().zip(&cell.tables) {
        let average = ensemble_log_average(tables)?;
        for entry in average.entries() {
            if let Some(value) = entry.value {
                table.push(
                    // 0.0 − level keeps level 0 at positive zero ("0", not "-0").
                    &[&q, &entry.level, &(0.0 - entry.level as f64)],
                    "log2_z",
                    value.log2(),
                    entry.log2_stderr,
                    entry.count as u64,
                )?;
            }
        }
        let series = fit_tau(&average, q, window)?;
        table.push(&[&q, &"", &""], "tau", series.tau, Some(series.stderr), cell.vectors)?;
    }
    Ok(table)
}

/// `fig4_tauprime_cascade`: deterministic cascade `τ′₁` over weights, one
/// curve per size.
fn cascade_trend(cfg: &ExperimentConfig) -> Result<ResultTable> {
    let mut table = base_table(cfg, &["p1", "n"]);
    let filter = cfg.build_filter();
    for &p1 in &cfg.p1 {
        for &n in &cfg.n {
            let psi = cascade_state(&CascadeParams::new(n, p1)?)?;
            let partition =
                partition_with(&psi, &filter, 1.0, Normalization::Unnormalized, false)?;
            let series = fit_tau(&partition, 1.0, cfg.window_for(n))?;
            table.push(&[&p1, &n], "tauprime1", series.tau, Some(series.stderr), 1)?;
        }
    }
    Ok(table)
}

/// `fig5_tauprime_vs_q`: eigenvector `τ′_q` over moment orders for several
/// map ratios at one size.
fn eigvec_moments(cfg: &ExperimentConfig) -> Result<ResultTable> {
    let mut table = base_table(cfg, &["n2", "q"]);
    let n = cfg.n[0];
    let window = cfg.window_for(n);
    let specs: Vec<(Normalization, f64)> =
        cfg.q.iter().map(|&q| (Normalization::Unnormalized, q)).collect();
    for &n2 in &cfg.n2 {
        let cell = eigenvector_cell(cfg, n, n2, &specs)?;
        for (&q, tables) in cfg.q.iter().zip(&cell.tables) {
            let series = fit_cell(tables, q, window)?;
            table.push(
                &[&n2, &q],
                "tauprime",
                series.tau,
                Some(series.stderr),
                cell.vectors,
            )?;
        }
    }
    Ok(table)
}

/// `fig6_tau2_cascade`: cascade `τ₂` for both partition variants next to
/// the closed-form value.
fn cascade_tau2(cfg: &ExperimentConfig) -> Result<ResultTable> {
    let mut table = base_table(cfg, &["p1", "n"]);
    let filter = cfg.build_filter();
    for &p1 in &cfg.p1 {
        for &n in &cfg.n {
            let psi = cascade_state(&CascadeParams::new(n, p1)?)?;
            let window = cfg.window_for(n);
            for (norm, statistic) in [
                (Normalization::Density, "tau2_density"),
                (Normalization::Amplitude, "tau2_amplitude"),
            ] {
                let partition = partition_with(&psi, &filter, 2.0, norm, false)?;
                let series = fit_tau(&partition, 2.0, window)?;
                table.push(&[&p1, &n], statistic, series.tau, Some(series.stderr), 1)?;
            }
            table.push(
                &[&p1, &n],
                "tau2_analytic",
                cascade_tau_analytic(2.0, p1),
                None,
                1,
            )?;
        }
    }
    Ok(table)
}

/// `fig7_tau2_eigvecs`: eigenvector `τ₂`, both partition variants, across
/// sizes and map ratios.
fn eigvec_tau2(cfg: &ExperimentConfig) -> Result<ResultTable> {
    let mut table = base_table(cfg, &["n2", "n"]);
    let specs = [(Normalization::Density, 2.0), (Normalization::Amplitude, 2.0)];
    for &n2 in &cfg.n2 {
        for &n in &cfg.n {
            let cell = eigenvector_cell(cfg, n, n2, &specs)?;
            let window = cfg.window_for(n);
            for ((_, statistic), tables) in [
                (specs[0], "tau2_density"),
                (specs[1], "tau2_amplitude"),
            ]
            .iter()
            .zip(&cell.tables)
            {
                let series = fit_cell(tables, 2.0, window)?;
                table.push(
                    &[&n2, &n],
                    statistic,
                    series.tau,
                    Some(series.stderr),
                    cell.vectors,
                )?;
            }
        }
    }
    Ok(table)
}

/// `fig8_tau2_iterates`: `τ₂` of `t`-step map iterates of basis columns —
/// the no-eigendecomposition route.  Columns are drawn per realization
/// from the harness stream (with replacement; the modulus is a power of
/// two, so the draw is exactly uniform).
fn iterate_tau2(cfg: &ExperimentConfig) -> Result<ResultTable> {
    let mut table = base_table(cfg, &["n2", "n", "t"]);
    let filter = cfg.build_filter();
    let specs = [(Normalization::Density, 2.0), (Normalization::Amplitude, 2.0)];
    for &n2 in &cfg.n2 {
        for &n in &cfg.n {
            let realizations = cfg.ensemble_size.div_ceil(cfg.vectors_per_realization);
            let outcome = run_indexed(cfg.threads, realizations, |r| {
                let params = IsrmParams::random(n, cfg.n1, n2, cfg.seed, r)?;
                let mut stream = rng::stream(cfg.seed, tag::HARNESS, r);
                let mut per_spec: Vec<Vec<PartitionTable>> =
                    vec![Vec::new(); specs.len()];
                for _ in 0..cfg.vectors_per_realization {
                    let column = (stream.next_u64() % (1u64 << n)) as usize;
                    let start = QuantumState::basis(n, column)?;
                    let iterate = apply_isrm(&start, &params, cfg.t)?;
                    for (slot, &(norm, q)) in per_spec.iter_mut().zip(&specs) {
                        slot.push(partition_with(&iterate, &filter, q, norm, false)?);
                    }
                }
                Ok(per_spec)
            })
            .with_context(|| format!("iterate ensemble at n = {n}, n2 = {n2}"))?;

            let mut tables: Vec<Vec<PartitionTable>> = vec![Vec::new(); specs.len()];
            for per_spec in outcome.results {
                for (slot, from_realization) in tables.iter_mut().zip(per_spec) {
                    slot.extend(from_realization);
                }
            }
            let vectors = tables[0].len() as u64;
            let window = cfg.window_for(n);
            for (statistic, spec_tables) in
                ["tau2_density", "tau2_amplitude"].iter().zip(&tables)
            {
                let series = fit_cell(spec_tables, 2.0, window)?;
                table.push(
                    &[&n2, &n, &cfg.t],
                    statistic,
                    series.tau,
                    Some(series.stderr),
                    vectors,
                )?;
            }
        }
    }
    Ok(table)
}

/// `fig9_tauprime_vs_n2`: eigenvector `τ′₁` against the map ratio
/// denominator, one curve per size.
fn eigvec_trend(cfg: &ExperimentConfig) -> Result<ResultTable> {
    let mut table = base_table(cfg, &["n2", "n"]);
    let specs = [(Normalization::Unnormalized, 1.0)];
    for &n2 in &cfg.n2 {
        for &n in &cfg.n {
            let cell = eigenvector_cell(cfg, n, n2, &specs)?;
            let series = fit_cell(&cell.tables[0], 1.0, cfg.window_for(n))?;
            table.push(
                &[&n2, &n],
                "tauprime1",
                series.tau,
                Some(series.stderr),
                cell.vectors,
            )?;
        }
    }
    Ok(table)
}

/// `cost_table`: quantum-vs-classical operation counts for the four
/// measurement tasks.  Parameter cells are filled only where the formula
/// uses them (`t` for iterate tasks, `beta` for amplitude tasks).
fn cost_table(cfg: &ExperimentConfig) -> Result<ResultTable> {
    let mut table = base_table(cfg, &["task", "n", "t", "alpha", "beta"]);
    for task in CostTask::ALL {
        let is_iterate =
            matches!(task, CostTask::IterateDensity | CostTask::IterateAmplitude);
        let uses_beta =
            matches!(task, CostTask::IterateAmplitude | CostTask::EigenvectorAmplitude);
        for &n in &cfg.n {
            let report = cost_model(
                n,
                is_iterate.then_some(cfg.t),
                cfg.alpha,
                uses_beta.then_some(cfg.beta),
                task,
            )?;
            let t_cell = report.t.map_or(String::new(), |t| t.to_string());
            let beta_cell =
                report.beta.map_or(String::new(), crate::report::fmt_f64);
            let params: [&dyn ToString; 5] =
                [&task.name(), &n, &t_cell, &report.alpha, &beta_cell];
            table.push(&params, "quantum_count", report.quantum_count, None, 1)?;
            table.push(&params, "classical_count", report.classical_count, None, 1)?;
            table.push(&params, "log2_gain", report.log2_gain, None, 1)?;
        }
    }
    Ok(table)
}

/// `emulation_demo`: one end-to-end scenario — diagonal amplification of a
/// cascade state, scale-register sampling of its transform, then phase
/// estimation on a map eigenvector.
fn emulation_demo(cfg: &ExperimentConfig) -> Result<ResultTable> {
    let mut table = base_table(cfg, &["stage", "index"]);
    let n = cfg.n[0];
    let p1 = cfg.p1[0];
    let n2 = cfg.n2[0];
    let filter = cfg.build_filter();
    let no_index = "";

    // Stage 1: amplify the diagonal of ψ ⊗ ψ*, tracing the success
    // probability per reflection step.
    let psi = cascade_state(&CascadeParams::new(n, p1)?)?;
    let (selected, run) = grover_select_diagonal(&psi, u64::MAX)?;
    for (k, &p) in run.success_probability.iter().enumerate() {
        table.push(&[&"amplify", &k], "diagonal_probability", p, None, 1)?;
    }
    table.push(&[&"amplify", &no_index], "initial_weight", run.x, None, 1)?;
    table.push(
        &[&"amplify", &no_index],
        "iterations",
        run.iterations as f64,
        None,
        1,
    )?;
    table.push(
        &[&"amplify", &no_index],
        "flagged",
        if run.flagged { 1.0 } else { 0.0 },
        None,
        1,
    )?;

    // Stage 2: transform the post-selected density state and sample its
    // scale register.
    let coeffs = fwt_forward(selected.amplitudes(), &filter)?;
    let histogram =
        sample_scale_register(&coeffs, SampleMoment::Two, cfg.shots, cfg.seed)?;
    for level in 0..histogram.probabilities.len() {
        table.push(
            &[&"scale_sample", &level],
            "probability",
            histogram.probabilities[level],
            None,
            1,
        )?;
        table.push(
            &[&"scale_sample", &level],
            "frequency",
            histogram.frequencies[level],
            None,
            histogram.shots,
        )?;
    }

    // Stage 3: phase estimation of the map on one of its eigenvectors.
    let params = IsrmParams::random(n, cfg.n1, n2, cfg.seed, 0)?;
    let system = mfq_core::isrm_eigensystem(n, cfg.n1, n2, cfg.seed, 0)?;
    let psi0 = QuantumState::new(n, system.eigenvector(0).to_vec())?;
    let estimate = phase_estimation(&params, &psi0, cfg.n_time)?;
    for (bin, &p) in estimate.histogram.iter().enumerate() {
        table.push(&[&"phase", &bin], "probability", p, None, 1)?;
    }
    table.push(
        &[&"phase", &no_index],
        "peak_bin",
        estimate.peak_bin as f64,
        None,
        1,
    )?;
    table.push(
        &[&"phase", &no_index],
        "peak_probability",
        estimate.peak_probability,
        None,
        1,
    )?;
    table.push(
        &[&"phase", &no_index],
        "estimated_phase",
        estimate.grid_phase(estimate.peak_bin),
        None,
        1,
    )?;
    table.push(
        &[&"phase", &no_index],
        "target_phase",
        system.eigenphases()[0].rem_euclid(std::f64::consts::TAU),
        None,
        1,
    )?;
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::template;

    fn row_value(table: &ResultTable, params: &[&str], statistic: &str) -> f64 {
        table
            .rows()
            .iter()
            .find(|r| r.params == params && r.statistic == statistic)
            .unwrap_or_else(|| panic!("missing row {params:?} {statistic}"))
            .value
    }

    #[test]
    fn eigvec_index_subsets_are_even_and_complete() {
        assert_eq!(eigvec_indices(8, 8), (0..8).collect::<Vec<_>>());
        assert_eq!(eigvec_indices(8, 12), (0..8).collect::<Vec<_>>());
        assert_eq!(eigvec_indices(8, 4), vec![0, 2, 4, 6]);
        assert_eq!(eigvec_indices(10, 3), vec![0, 3, 6]);
        let spread = eigvec_indices(1024, 100);
        assert_eq!(spread.len(), 100);
        assert!(spread.windows(2).all(|w| w[0] < w[1]));
        assert!(*spread.last().unwrap() >= 1024 - 11);
    }

    #[test]
    fn cost_table_matches_closed_forms() {
        let mut cfg = template(Experiment::CostTable);
        cfg.n = vec![20];
        let table = run_experiment(&cfg).unwrap();
        // Iterate/density at n = 20, t = 100, α = 1: t·√N vs t·N.
        let params = ["iterate_density", "20", "100", "1", ""];
        assert_eq!(row_value(&table, &params, "quantum_count"), 102_400.0);
        assert_eq!(row_value(&table, &params, "classical_count"), 104_857_600.0);
        assert_eq!(row_value(&table, &params, "log2_gain"), 10.0);
        // Eigenvector/density: N^{1+α} vs N², no t column.
        let params = ["eigenvector_density", "20", "", "1", ""];
        assert_eq!(row_value(&table, &params, "log2_gain"), 0.0);
        // Amplitude tasks carry β and (for the iterate route) t.
        let params = ["iterate_amplitude", "20", "100", "1", "1"];
        assert_eq!(row_value(&table, &params, "quantum_count"), 102_400.0);
        assert_eq!(table.rows().len(), 4 * 3);
    }

    #[test]
    fn cascade_tau2_reports_both_variants_and_the_closed_form() {
        let mut cfg = template(Experiment::Fig6Tau2Cascade);
        cfg.n = vec![8];
        cfg.p1 = vec![0.3];
        let table = run_experiment(&cfg).unwrap();
        let analytic = row_value(&table, &["0.3", "8"], "tau2_analytic");
        assert!((analytic - cascade_tau_analytic(2.0, 0.3)).abs() < 1e-15);
        let density = row_value(&table, &["0.3", "8"], "tau2_density");
        let amplitude = row_value(&table, &["0.3", "8"], "tau2_amplitude");
        assert!((density - analytic).abs() < 0.2, "density fit {density} vs {analytic}");
        assert!(
            (amplitude - analytic).abs() < 0.2,
            "amplitude fit {amplitude} vs {analytic}"
        );
    }

    #[test]
    fn cascade_trend_emits_one_row_per_cell() {
        let mut cfg = template(Experiment::Fig4TauprimeCascade);
        cfg.n = vec![6, 8];
        cfg.p1 = vec![0.2, 0.3];
        let table = run_experiment(&cfg).unwrap();
        assert_eq!(table.rows().len(), 4);
        for row in table.rows() {
            assert_eq!(row.statistic, "tauprime1");
            assert!(row.value.is_finite());
            // A normalized state's unnormalized q = 1 partition decays with
            // scale, so the exponent is negative.
            assert!(row.value < 0.0, "τ′₁ = {} should be negative", row.value);
        }
    }

    #[test]
    fn eigenvector_trend_runs_a_small_cell() {
        let mut cfg = template(Experiment::Fig9TauprimeVsN2);
        cfg.n = vec![6];
        cfg.n2 = vec![3];
        cfg.ensemble_size = 64;
        let table = run_experiment(&cfg).unwrap();
        assert_eq!(table.rows().len(), 1);
        let row = &table.rows()[0];
        assert_eq!(row.params, ["3", "6"]);
        assert_eq!(row.count, 64, "one realization provides all 64 vectors");
        assert!(row.value < -0.8 && row.value > -1.6, "τ′₁ = {}", row.value);
    }

    #[test]
    fn iterate_ensemble_runs_without_eigendecomposition() {
        let mut cfg = template(Experiment::Fig8Tau2Iterates);
        cfg.n = vec![6];
        cfg.n2 = vec![3];
        cfg.t = 10;
        cfg.ensemble_size = 8;
        cfg.vectors_per_realization = 4;
        let table = run_experiment(&cfg).unwrap();
        let density = row_value(&table, &["3", "6", "10"], "tau2_density");
        let amplitude = row_value(&table, &["3", "6", "10"], "tau2_amplitude");
        assert!(density.is_finite() && amplitude.is_finite());
        assert_eq!(table.rows()[0].count, 8);
    }

    #[test]
    fn partition_profile_emits_levels_and_fit() {
        let mut cfg = template(Experiment::Fig2ZDensity);
        cfg.n = vec![6];
        cfg.q = vec![2.0];
        cfg.ensemble_size = 64;
        let table = run_experiment(&cfg).unwrap();
        let levels = table
            .rows()
            .iter()
            .filter(|r| r.statistic == "log2_z")
            .count();
        assert_eq!(levels, 6, "one usable row per detail level");
        let fit = table
            .rows()
            .iter()
            .find(|r| r.statistic == "tau")
            .expect("fit row");
        assert_eq!(fit.params, ["2", "", ""]);
        assert_eq!(fit.count, 64);
        // log₂ scale column is the negated level.
        let first = table.rows().iter().find(|r| r.statistic == "log2_z").unwrap();
        assert_eq!(first.params[1], "0");
        assert_eq!(first.params[2], "0");
        let finest = table.rows().iter().rfind(|r| r.statistic == "log2_z").unwrap();
        assert_eq!(finest.params[1], "5");
        assert_eq!(finest.params[2], "-5");
    }

    #[test]
    fn emulation_demo_stages_are_complete() {
        let mut cfg = template(Experiment::EmulationDemo);
        cfg.n = vec![4];
        cfg.shots = 1000;
        let table = run_experiment(&cfg).unwrap();
        let peak = row_value(&table, &["phase", ""], "peak_probability");
        assert!(peak > 0.3, "phase estimate peak {peak} too flat");
        let est = row_value(&table, &["phase", ""], "estimated_phase");
        let target = row_value(&table, &["phase", ""], "target_phase");
        let bins = 1usize << cfg.n_time;
        let wrap = |x: f64| {
            let d = (x).rem_euclid(std::f64::consts::TAU);
            d.min(std::f64::consts::TAU - d)
        };
        assert!(
            wrap(est - target) <= std::f64::consts::TAU / bins as f64,
            "estimate {est} further than one grid bin from {target}"
        );
        let flagged = row_value(&table, &["amplify", ""], "flagged");
        assert_eq!(flagged, 0.0, "cascade amplification should succeed");
        // Sampled frequencies are close to the exact distribution.
        let p3 = row_value(&table, &["scale_sample", "3"], "probability");
        let f3 = row_value(&table, &["scale_sample", "3"], "frequency");
        assert!((p3 - f3).abs() < 0.1, "probability {p3} vs frequency {f3}");
    }
}
