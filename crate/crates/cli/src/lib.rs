//! Experiment harness around `ael-core`: TOML artifacts, subcommands and CSV reports.

pub mod artifacts;
pub mod commands;
pub mod config;
pub mod pipeline;
pub mod report;

/// Process exit codes.
pub mod exit {
    pub const PASS: i32 = 0;
    pub const ASSERTION_FAILED: i32 = 1;
    pub const CONFIG_OR_IO: i32 = 2;
}
