//! Command-line harness around `mfq-core`.
//!
//! The library half of the `mfq` binary.  Everything the binary does is
//! reachable from here so that integration tests can drive the exact same
//! code paths without spawning processes:
//!
//! * [`config`] — flat `key = value` experiment configuration with
//!   per-experiment defaults, list/range value grammar, and a serializer
//!   whose output parses back to an identical configuration.
//! * [`report`] — result tables and their byte-deterministic CSV / JSON
//!   renderings.
//! * [`io`] — small binary file formats for states and eigensystems.
//! * [`ensemble`] — ordered parallel ensemble execution with a bounded
//!   failure budget.
//! * [`experiments`] — the named batch experiments (`fig2_zdensity` …
//!   `emulation_demo`).
//! * [`selftest`] — fast end-to-end sanity checks wired to `mfq selftest`.
//! * [`cli`] — argument parsing and command dispatch for the binary.

pub mod cli;
pub mod config;
pub mod ensemble;
pub mod experiments;
pub mod io;
pub mod report;
pub mod selftest;
