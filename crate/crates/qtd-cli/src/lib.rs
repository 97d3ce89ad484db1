//! Command-line orchestrator: configuration parsing, sweep execution, and
//! reproducible CSV/JSON artifact emission.

pub mod config;
pub mod log;
pub mod output;
pub mod runner;
