//! CSV per series and a JSON metadata document per run.
//!
//! Values are written with 17 significant digits, so a CSV read back gives
//! the same doubles. Nothing time-dependent goes into either file; re-runs
//! of one configuration are byte-identical.

use crate::config::RunConfig;
use crate::events::MeasureEvents;
use crate::measures::Measure;
use crate::sweep::{EntanglementSeries, Gap};
use esd_kernels::OVERLAP_NORMALIZATION;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use thiserror::Error;

pub const CSV_HEADER: &str = "x,tau,z,p,C_AB,N_AF,C_A_BF,C_F_AB,norm_defect";

#[derive(Debug, Error)]
pub enum OutputError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("{path}, line {line}: {reason}")]
    Format { path: PathBuf, line: usize, reason: String },
}

fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> OutputError + '_ {
    move |source| OutputError::Io { path: path.to_path_buf(), source }
}

pub fn csv_name(cfg: &RunConfig, s: &EntanglementSeries) -> String {
    format!("{}_z{:e}_p{}.csv", cfg.name, s.z, s.p)
}

fn number(out: &mut String, v: f64) {
    if v.is_nan() {
        out.push_str("NaN");
    } else {
        let _ = write!(out, "{v:.16e}");
    }
}

pub fn series_csv(s: &EntanglementSeries) -> String {
    let mut out = String::with_capacity(200 * (s.rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in &s.rows {
        let fields = [r.x, r.tau, r.z, r.p, r.values[0], r.values[1], r.values[2], r.values[3], r.norm_defect];
        for (k, v) in fields.iter().enumerate() {
            if k > 0 {
                out.push(',');
            }
            number(&mut out, *v);
        }
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct SeriesMeta<'a> {
    z: f64,
    p: f64,
    csv: String,
    rows: usize,
    gaps: &'a [Gap],
    events: &'a BTreeMap<Measure, MeasureEvents>,
}

#[derive(Serialize)]
struct RunMeta<'a> {
    name: &'a str,
    version: &'static str,
    overlap_normalization: f64,
    nu_max: f64,
    policy: String,
    channel: String,
    config: &'a RunConfig,
    series: Vec<SeriesMeta<'a>>,
}

pub fn metadata_json(cfg: &RunConfig, series: &[EntanglementSeries]) -> Result<String, serde_json::Error> {
    let meta = RunMeta {
        name: &cfg.name,
        version: env!("CARGO_PKG_VERSION"),
        overlap_normalization: OVERLAP_NORMALIZATION,
        nu_max: cfg.nu_max,
        policy: cfg.policy.to_string(),
        channel: cfg.channel.to_string(),
        config: cfg,
        series: series
            .iter()
            .map(|s| SeriesMeta {
                z: s.z,
                p: s.p,
                csv: csv_name(cfg, s),
                rows: s.rows.len(),
                gaps: &s.gaps,
                events: &s.events,
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&meta)?;
    text.push('\n');
    Ok(text)
}

/// Writes every CSV and the metadata into `cfg.output_dir`; returns the
/// paths written, metadata last.
pub fn write_outputs(series: &[EntanglementSeries], cfg: &RunConfig) -> Result<Vec<PathBuf>, OutputError> {
    let dir = &cfg.output_dir;
    std::fs::create_dir_all(dir).map_err(io_error(dir))?;
    let mut written = Vec::new();
    for s in series {
        let path = dir.join(csv_name(cfg, s));
        std::fs::write(&path, series_csv(s)).map_err(io_error(&path))?;
        written.push(path);
    }
    let path = dir.join(format!("{}.json", cfg.name));
    let text = metadata_json(cfg, series).map_err(|source| OutputError::Json { path: path.clone(), source })?;
    std::fs::write(&path, text).map_err(io_error(&path))?;
    written.push(path);
    Ok(written)
}

/// One CSV read back: z, p and the columns by name.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesTable {
    pub z: f64,
    pub p: f64,
    pub x: Vec<f64>,
    pub columns: BTreeMap<Measure, Vec<f64>>,
}

pub fn read_series_csv(path: &Path) -> Result<SeriesTable, OutputError> {
    let text = std::fs::read_to_string(path).map_err(io_error(path))?;
    parse_series_csv(&text, path)
}

pub fn parse_series_csv(text: &str, path: &Path) -> Result<SeriesTable, OutputError> {
    let bad = |line: usize, reason: String| OutputError::Format { path: path.to_path_buf(), line, reason };
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == CSV_HEADER => {}
        _ => return Err(bad(1, format!("expected header `{CSV_HEADER}`"))),
    }
    let mut table = SeriesTable { z: f64::NAN, p: f64::NAN, x: Vec::new(), columns: BTreeMap::new() };
    let mut previous = f64::INFINITY;
    for (k, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<f64> = line
            .split(',')
            .map(|f| f.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| bad(k + 1, e.to_string()))?;
        if fields.len() != 9 {
            return Err(bad(k + 1, format!("{} fields, expected 9", fields.len())));
        }
        if previous.is_infinite() {
            (table.z, table.p) = (fields[2], fields[3]);
        }
        if fields[0] >= previous {
            return Err(bad(k + 1, "x must descend".to_string()));
        }
        previous = fields[0];
        // gap rows carry no information
        if fields[4..8].iter().any(|v| v.is_nan()) {
            continue;
        }
        table.x.push(fields[0]);
        for m in Measure::ALL {
            table.columns.entry(m).or_default().push(fields[4 + m.index()]);
        }
    }
    if table.x.is_empty() {
        return Err(bad(1, "no data rows".to_string()));
    }
    Ok(table)
}
