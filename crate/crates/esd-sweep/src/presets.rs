//! Parameter sets of the eight reproduced figures.

use crate::config::{ConfigError, RunConfig, XGrid};
use crate::measures::Measure;
use crate::BASE_PER_DECADE;

/// Default x-range of every preset: six decades centred on the light cone.
pub const PRESET_X_MIN: f64 = 1e-3;
pub const PRESET_X_MAX: f64 = 1e3;

pub const FIGURE_IDS: std::ops::RangeInclusive<u32> = 1..=8;

pub fn figure_preset(id: u32) -> Result<RunConfig, ConfigError> {
    let (z, p, columns): (&[f64], &[f64], &[Measure]) = match id {
        1 => (&[2e6, 5e6, 2e7], &[0.98], &[Measure::AtomAtom]),
        2 => (&[2e7], &[0.97, 0.98, 0.99], &[Measure::AtomAtom]),
        3 => (&[2e6, 5e6, 2e7], &[0.98], &[Measure::AtomField]),
        4 => (&[5e6], &[0.98], &[Measure::AtomAtom, Measure::AtomField]),
        5 => (&[2e5, 5e5, 1e6], &[0.98], &[Measure::AtomRest]),
        6 => (&[2e6], &[0.5, 0.75, 0.98], &[Measure::AtomRest]),
        7 => (&[2e5, 5e5, 1e6], &[0.98], &[Measure::FieldRest]),
        8 => (&[2e5], &[0.98], &[Measure::FieldRest, Measure::AtomRest]),
        other => return Err(ConfigError::UnknownFigure(other)),
    };
    let grid = XGrid::per_decade(PRESET_X_MIN, PRESET_X_MAX, BASE_PER_DECADE);
    let mut cfg = RunConfig::new(&format!("fig{id}"), z.to_vec(), p.to_vec(), grid);
    cfg.columns = columns.to_vec();
    Ok(cfg)
}
