//! Sweeps of the entanglement measures over `(x, z, p)`, event detection,
//! figure presets and the files the renderer reads.
//!
//! Sweeps run over descending x = r/(ct), so rows come out in time order.

pub mod config;
pub mod events;
pub mod measures;
pub mod oracle_check;
pub mod output;
pub mod presets;
pub mod sweep;

/// Density of the base log grid.
pub const BASE_PER_DECADE: usize = 200;
/// Density of the adaptive pass around events.
pub const REFINED_PER_DECADE: usize = 2000;

pub use config::{ConfigError, RunConfig, Spacing, XGrid};
pub use events::{detect_events, Event, Extremum, ExtremumKind, MeasureEvents};
pub use measures::{Measure, PointError, PointModel, PointValues};
pub use output::{read_series_csv, write_outputs, OutputError, CSV_HEADER};
pub use presets::figure_preset;
pub use sweep::{sweep, EntanglementSeries, Gap, Row, SweepError};
