//! Evaluation of every `(z, p)` series over the x-grid.
//!
//! Points are independent, so they run on a rayon pool and are collected in
//! grid order; nothing downstream depends on the number of workers.

use crate::config::{ConfigError, RunConfig};
use crate::events::{detect_events, grid_events, MeasureEvents};
use crate::measures::{Measure, PointError, PointModel, PointValues};
use crate::REFINED_PER_DECADE;
use esd_kernels::KernelOptions;
use esd_model::InitialWeights;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

/// Largest share of failed points a run tolerates.
pub const MAX_FAILED_FRACTION: f64 = 0.01;
/// Half-width, in decades, of the dense patch around a grid-level event.
pub const REFINE_HALF_WIDTH: f64 = 0.05;

#[derive(Debug, Error)]
pub enum SweepError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("cannot start worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
    #[error("{failed} of {total} points failed (first: {first})")]
    TooManyFailures { failed: usize, total: usize, first: String },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Row {
    pub x: f64,
    pub tau: f64,
    pub z: f64,
    pub p: f64,
    /// Indexed by [`Measure::index`]; NaN where the point failed.
    pub values: [f64; 4],
    pub norm_defect: f64,
}

impl Row {
    pub fn get(&self, m: Measure) -> f64 {
        self.values[m.index()]
    }

    pub fn is_gap(&self) -> bool {
        self.values.iter().any(|v| v.is_nan())
    }
}

/// A point whose kernels or measures failed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Gap {
    pub x: f64,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntanglementSeries {
    pub z: f64,
    pub p: f64,
    /// Descending x, gaps included as NaN rows.
    pub rows: Vec<Row>,
    pub gaps: Vec<Gap>,
    pub events: BTreeMap<Measure, MeasureEvents>,
}

impl EntanglementSeries {
    /// x and values of one measure over the rows that succeeded.
    pub fn column(&self, m: Measure) -> (Vec<f64>, Vec<f64>) {
        self.rows.iter().filter(|r| !r.is_gap()).map(|r| (r.x, r.get(m))).unzip()
    }

    pub fn events(&self, m: Measure) -> &MeasureEvents {
        &self.events[&m]
    }
}

pub fn point_model(cfg: &RunConfig) -> PointModel {
    PointModel {
        coupling: cfg.coupling(),
        cutoff: cfg.cutoff(),
        channel: cfg.channel,
        policy: cfg.policy,
        kernel: KernelOptions { light_cone_width: cfg.light_cone_width, ..KernelOptions::default() },
    }
}

type Outcome = Result<PointValues, PointError>;

fn row_of(z: f64, p: f64, x: f64, outcome: &Outcome) -> Row {
    let (values, norm_defect) = match outcome {
        Ok(v) => (v.values, v.norm_defect),
        Err(_) => ([f64::NAN; 4], f64::NAN),
    };
    Row { x, tau: z / x, z, p, values, norm_defect }
}

/// Runs the whole configuration: one series per `(z, p)`, z outermost.
pub fn sweep(cfg: &RunConfig) -> Result<Vec<EntanglementSeries>, SweepError> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cfg.parallelism.unwrap_or(0)).build()?;
    pool.install(|| run(cfg))
}

fn run(cfg: &RunConfig) -> Result<Vec<EntanglementSeries>, SweepError> {
    let xs = cfg.x_points()?;
    let model = point_model(cfg);
    let pairs: Vec<(f64, f64)> = cfg.z.iter().flat_map(|z| cfg.p.iter().map(move |p| (*z, *p))).collect();

    let mut series: Vec<EntanglementSeries> = pairs
        .par_iter()
        .map(|&(z, p)| {
            let w = InitialWeights::new(p).expect("validated weight");
            let outcomes: Vec<Outcome> = xs.par_iter().map(|x| model.evaluate(z, *x, &w)).collect();
            assemble(z, p, &xs, &outcomes)
        })
        .collect();

    if cfg.refine {
        let (lo, hi) = (cfg.x.min, cfg.x.max);
        series.par_iter_mut().for_each(|s| {
            let extra = refinement_points(s, cfg.light_cone_width, lo, hi);
            if extra.is_empty() {
                return;
            }
            let w = InitialWeights::new(s.p).expect("validated weight");
            let outcomes: Vec<Outcome> = extra.par_iter().map(|x| model.evaluate(s.z, *x, &w)).collect();
            merge(s, &extra, &outcomes);
        });
    }

    let total: usize = series.iter().map(|s| s.rows.len()).sum();
    let failed: usize = series.iter().map(|s| s.gaps.len()).sum();
    if failed as f64 > MAX_FAILED_FRACTION * total as f64 {
        let first = series.iter().flat_map(|s| &s.gaps).next().map(|g| format!("x = {}: {}", g.x, g.error));
        return Err(SweepError::TooManyFailures { failed, total, first: first.unwrap_or_default() });
    }

    series.par_iter_mut().for_each(|s| {
        let w = InitialWeights::new(s.p).expect("validated weight");
        let z = s.z;
        s.events = Measure::ALL
            .par_iter()
            .map(|&m| {
                let (xs, values) = s.column(m);
                let probe = |x: f64| model.evaluate(z, x, &w).ok().map(|v| v.get(m));
                (m, detect_events(z, &xs, &values, Some(probe)))
            })
            .collect();
    });
    Ok(series)
}

fn assemble(z: f64, p: f64, xs: &[f64], outcomes: &[Outcome]) -> EntanglementSeries {
    let mut s =
        EntanglementSeries { z, p, rows: Vec::with_capacity(xs.len()), gaps: Vec::new(), events: BTreeMap::new() };
    merge(&mut s, xs, outcomes);
    s
}

fn merge(s: &mut EntanglementSeries, xs: &[f64], outcomes: &[Outcome]) {
    for (x, outcome) in xs.iter().zip(outcomes) {
        s.rows.push(row_of(s.z, s.p, *x, outcome));
        if let Err(e) = outcome {
            s.gaps.push(Gap { x: *x, error: e.to_string() });
        }
    }
    s.rows.sort_by(|a, b| b.x.total_cmp(&a.x));
    s.gaps.sort_by(|a, b| b.x.total_cmp(&a.x));
}

/// Points of the dense log lattice around every grid-level event that are
/// not already on the grid.
fn refinement_points(s: &EntanglementSeries, width: f64, lo: f64, hi: f64) -> Vec<f64> {
    let mut centres = Vec::new();
    for m in Measure::ALL {
        let (xs, values) = s.column(m);
        centres.extend(grid_events(&values).indices().into_iter().map(|i| xs[i]));
    }
    let density = REFINED_PER_DECADE as f64;
    let mut ks: Vec<i64> = Vec::new();
    for c in centres {
        let d = c.log10();
        let first = ((d - REFINE_HALF_WIDTH) * density).ceil() as i64;
        let last = ((d + REFINE_HALF_WIDTH) * density).floor() as i64;
        ks.extend(first..=last);
    }
    ks.sort_unstable();
    ks.dedup();
    let existing: Vec<f64> = s.rows.iter().map(|r| r.x).collect();
    let mut out: Vec<f64> = ks
        .into_iter()
        .map(|k| 10f64.powf(k as f64 / density))
        .filter(|x| *x >= lo && *x <= hi && (x - 1.0).abs() >= width)
        .filter(|x| !existing.iter().any(|e| (e - x).abs() <= 1e-12 * x))
        .collect();
    out.reverse();
    out
}
