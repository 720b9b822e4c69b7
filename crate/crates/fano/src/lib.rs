//! File I/O, report emission and text rendering for the superrigidity verifier.

pub mod input;
pub mod report;
pub mod text;

pub use input::{load, parse, to_canonical_json, InputError};
pub use report::{build_report, explain, export_equations, Report, ReportOverall, SCHEMA};

pub const TOOL_NAME: &str = env!("CARGO_PKG_NAME");
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
