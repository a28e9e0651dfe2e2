//! Scenario runner for discord and entanglement dynamics of two coupled
//! qubits. Produces deterministic CSV tables, gnuplot scripts and a built-in
//! invariant self-test.

pub mod config;
pub mod error;
pub mod initial;
pub mod output;
pub mod scenarios;
pub mod selftest;

pub use config::{Initial, Method, Overrides, Range, Scenario, ScenarioConfig};
pub use error::{AppError, Result};
pub use output::Table;
pub use scenarios::run_scenario;
pub use selftest::{run_selftest, SelftestReport};
