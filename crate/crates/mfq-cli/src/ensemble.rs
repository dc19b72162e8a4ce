//! Ordered parallel ensemble execution.
//!
//! Ensemble work is indexed: job `r` computes realization `r`, whose
//! randomness comes from a `(seed, tag, r)` stream, never from execution
//! order.  [`run_indexed`] farms the index range over a dedicated thread
//! pool and collects results **in index order**, so any later reduction is
//! a fixed-order fold and the output is byte-identical for every worker
//! count.
//!
//! Individual realizations may fail (a singular parameter draw, a
//! residual-gate rejection).  Failures are reported on stderr with their
//! indices and tolerated up to 1% of the ensemble; strictly more than 1%
//! aborts the run, since a systematically failing ensemble would otherwise
//! silently bias its statistics.

use anyhow::{bail, Result};
use rayon::prelude::*;

/// Successful results in index order plus the tolerated failures.
#[derive(Debug)]
pub struct EnsembleOutcome<T> {
    /// Results of the successful jobs, ordered by job index.
    pub results: Vec<T>,
    /// `(index, error)` of the failed jobs, ordered by job index.
    pub failures: Vec<(u64, mfq_core::Error)>,
}

/// Runs `f(0), …, f(jobs − 1)` on `threads` workers (0 = one per CPU) and
/// collects outcomes in index order.
///
/// Fails when more than 1% of the jobs fail (strictly: with
/// `failures · 100 > jobs`); otherwise the failures are logged to stderr
/// and returned alongside the results.
pub fn run_indexed<T: Send>(
    threads: usize,
    jobs: u64,
    f: impl Fn(u64) -> mfq_core::Result<T> + Sync,
) -> Result<EnsembleOutcome<T>> {
    if jobs == 0 {
        bail!("ensemble has no jobs to run");
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build()?;
    // An indexed parallel collect: element order matches the index range
    // regardless of completion order.
    let raw: Vec<mfq_core::Result<T>> =
        pool.install(|| (0..jobs).into_par_iter().map(&f).collect());

    let mut results = Vec::with_capacity(raw.len());
    let mut failures = Vec::new();
    for (index, outcome) in raw.into_iter().enumerate() {
        match outcome {
            Ok(value) => results.push(value),
            Err(error) => failures.push((index as u64, error)),
        }
    }

    for (index, error) in &failures {
        eprintln!("warning: realization {index} failed and was dropped: {error}");
    }
    if failures.len() as u64 * 100 > jobs {
        let mut indices: Vec<String> =
            failures.iter().take(16).map(|(i, _)| i.to_string()).collect();
        if failures.len() > 16 {
            indices.push("…".to_string());
        }
        bail!(
            "{} of {} realizations failed (more than 1%): indices {} — first error: {}",
            failures.len(),
            jobs,
            indices.join(", "),
            failures[0].1
        );
    }
    Ok(EnsembleOutcome { results, failures })
}
