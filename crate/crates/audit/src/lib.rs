//! Audit tool for Berezin number inequalities: config, sweeps, reports.

pub mod audit;
pub mod commands;
pub mod config;
mod error;
pub mod formats;

pub use audit::{run_audit, summarize, trial_seed, AuditReport, EntrySummary, TrialRow};
pub use config::AuditConfig;
pub use error::{AuditError, Result};

/// Process exit codes.
pub mod exit {
    pub const OK: u8 = 0;
    pub const FAILURES: u8 = 1;
    pub const ERROR: u8 = 2;
}
