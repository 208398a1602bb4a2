//! Std companion of `robertson-core`: CSV and JSON output, parallel sweeps
//! and convergence studies, and the `robertson` command line.

pub mod cli;
pub mod format;
pub mod parallel;
pub mod report;
pub mod tables;
