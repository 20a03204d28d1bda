//! Shared run infrastructure: deterministic randomness, frame emission,
//! CSV and JSON report serialization.
//!
//! All functions here are stateless or write to caller-owned paths, so
//! they are safe to call from any thread.

mod csv;
mod frame;
mod report;
mod rng;

pub use csv::{csv_string, fmt_float, read_series_column, write_csv, CsvError};
pub use frame::{game_color, Frame, FrameError, LatticeShading, Pixels};
pub use report::{render_report, write_report, Report, FORMAT_VERSION};
pub use rng::{mix64, streams, value, value_u64, RngStream};
