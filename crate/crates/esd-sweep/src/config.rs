//! Run configuration: a flat TOML document, validated into [`RunConfig`].
//!
//! ```toml
//! name = "run"
//! z = [2e6, 5e6]
//! p = [0.98]
//! x_min = 1e-3
//! x_max = 1e3
//! x_count = 1201
//! x_spacing = "log"     # or "linear"
//! dipole_ratio = 5e-3
//! nu_max = 100
//! channel = "avg"       # avg | dm0 | dm1
//! policy = "one-photon" # one-photon | second-order | full
//! output_dir = "out"
//! parallelism = 4
//! seed = 0
//! refine = true
//! light_cone_width = 1e-6
//! ```
//!
//! Only `z`, `p` and the x-grid bounds are required. `ESD_OUTPUT_DIR` and
//! `ESD_PARALLELISM` override the file.

use crate::measures::Measure;
use esd_kernels::LIGHT_CONE_WIDTH;
use esd_model::params::{DEFAULT_DIPOLE_RATIO, DEFAULT_NU_MAX};
use esd_model::{CouplingParams, Cutoff, DipoleChannel, InitialWeights, ParamError, TruncationPolicy};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use thiserror::Error;

pub const OUTPUT_DIR_VAR: &str = "ESD_OUTPUT_DIR";
pub const PARALLELISM_VAR: &str = "ESD_PARALLELISM";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot parse {path}: {source}")]
    Parse { path: PathBuf, source: Box<toml::de::Error> },
    #[error("{key}: {reason}")]
    Invalid { key: &'static str, reason: String },
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error("unknown figure {0}; presets are 1 to 8")]
    UnknownFigure(u32),
}

fn invalid(key: &'static str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Invalid { key, reason: reason.into() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Log,
}

/// Nominal x-grid before the light-cone band is cut out.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XGrid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl XGrid {
    /// Log grid over `[min, max]` with `per_decade` intervals per decade.
    pub fn per_decade(min: f64, max: f64, per_decade: usize) -> Self {
        let decades = (max / min).log10();
        let count = (decades * per_decade as f64).round() as usize + 1;
        Self { min, max, count, spacing: Spacing::Log }
    }

    fn validate(&self) -> Result<(), ConfigError> {
        if self.count == 0 {
            return Err(invalid("x_count", "must be at least 1"));
        }
        if !(self.min.is_finite() && self.max.is_finite() && self.min > 0.0) {
            return Err(invalid("x_min", format!("x-range [{}, {}] must be positive and finite", self.min, self.max)));
        }
        if self.max < self.min {
            return Err(invalid("x_max", format!("{} is below x_min = {}", self.max, self.min)));
        }
        if self.count == 1 && self.max != self.min {
            return Err(invalid("x_count", "a single point needs x_min = x_max"));
        }
        Ok(())
    }

    fn fill(spacing: Spacing, lo: f64, hi: f64, count: usize) -> Vec<f64> {
        if count == 1 {
            return vec![lo];
        }
        let last = (count - 1) as f64;
        let mut xs: Vec<f64> = match spacing {
            Spacing::Linear => (0..count).map(|k| lo + (hi - lo) * k as f64 / last).collect(),
            Spacing::Log => {
                let (a, b) = (lo.ln(), hi.ln());
                (0..count).map(|k| (a + (b - a) * k as f64 / last).exp()).collect()
            }
        };
        // neither formula is exact at the far end
        xs[0] = lo;
        xs[count - 1] = hi;
        xs
    }

    fn length(&self, lo: f64, hi: f64) -> f64 {
        match self.spacing {
            Spacing::Linear => hi - lo,
            Spacing::Log => (hi / lo).ln(),
        }
    }

    /// Grid points in descending order with the band `|x − 1| < width` split
    /// out: a grid straddling the band becomes two grids ending on its edges,
    /// sharing the point count in proportion to their lengths.
    pub fn points(&self, width: f64) -> Result<Vec<f64>, ConfigError> {
        self.validate()?;
        let (lo_edge, hi_edge) = band_edges(width);
        let mut xs = if self.min < lo_edge && self.max > hi_edge && self.count >= 4 {
            let below = self.length(self.min, lo_edge);
            let above = self.length(hi_edge, self.max);
            let n_below = ((self.count as f64 * below / (below + above)).round() as usize).clamp(2, self.count - 2);
            let mut xs = Self::fill(self.spacing, self.min, lo_edge, n_below);
            xs.extend(Self::fill(self.spacing, hi_edge, self.max, self.count - n_below));
            xs
        } else {
            Self::fill(self.spacing, self.min, self.max, self.count)
        };
        if let Some(x) = xs.iter().find(|x| (**x - 1.0).abs() < width) {
            return Err(invalid(
                "x_min",
                format!("grid point x = {x} lies inside the light-cone band of width {width:e}"),
            ));
        }
        xs.reverse();
        Ok(xs)
    }
}

/// Nearest doubles just outside `|x − 1| < width`.
pub fn band_edges(width: f64) -> (f64, f64) {
    let mut lo = 1.0 - width;
    while 1.0 - lo < width {
        lo = lo.next_down();
    }
    let mut hi = 1.0 + width;
    while hi - 1.0 < width {
        hi = hi.next_up();
    }
    (lo, hi)
}

/// Everything a sweep needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    /// Prefix of every output file.
    pub name: String,
    pub z: Vec<f64>,
    pub p: Vec<f64>,
    pub x: XGrid,
    pub dipole_ratio: f64,
    pub nu_max: f64,
    pub channel: DipoleChannel,
    pub policy: TruncationPolicy,
    pub output_dir: PathBuf,
    /// Worker threads; `None` leaves the choice to rayon.
    pub parallelism: Option<usize>,
    pub seed: u64,
    /// Second pass at 10× density around the events found on the base grid.
    pub refine: bool,
    pub light_cone_width: f64,
    /// Columns a figure plots; all four when empty.
    pub columns: Vec<Measure>,
}

impl RunConfig {
    /// Defaults for everything except the grids.
    pub fn new(name: &str, z: Vec<f64>, p: Vec<f64>, x: XGrid) -> Self {
        Self {
            name: name.to_string(),
            z,
            p,
            x,
            dipole_ratio: DEFAULT_DIPOLE_RATIO,
            nu_max: DEFAULT_NU_MAX,
            channel: DipoleChannel::Averaged,
            policy: TruncationPolicy::OnePhoton,
            output_dir: PathBuf::from("out"),
            parallelism: None,
            seed: 0,
            refine: true,
            light_cone_width: LIGHT_CONE_WIDTH,
            columns: Vec::new(),
        }
    }

    pub fn from_toml(text: &str, path: &Path) -> Result<Self, ConfigError> {
        let file: ConfigFile =
            toml::from_str(text).map_err(|e| ConfigError::Parse { path: path.to_path_buf(), source: Box::new(e) })?;
        let cfg = file.into_config()?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text =
            std::fs::read_to_string(path).map_err(|source| ConfigError::Read { path: path.to_path_buf(), source })?;
        Self::from_toml(&text, path)
    }

    /// Applies `ESD_OUTPUT_DIR` and `ESD_PARALLELISM` when set.
    pub fn apply_env(&mut self) -> Result<(), ConfigError> {
        self.apply_overrides(std::env::var(OUTPUT_DIR_VAR).ok(), std::env::var(PARALLELISM_VAR).ok())
    }

    pub fn apply_overrides(
        &mut self,
        output_dir: Option<String>,
        parallelism: Option<String>,
    ) -> Result<(), ConfigError> {
        if let Some(dir) = output_dir.filter(|d| !d.is_empty()) {
            self.output_dir = PathBuf::from(dir);
        }
        if let Some(n) = parallelism.filter(|n| !n.is_empty()) {
            let n: usize =
                n.trim().parse().map_err(|_| invalid("parallelism", format!("'{n}' is not a thread count")))?;
            if n == 0 {
                return Err(invalid("parallelism", "must be at least 1"));
            }
            self.parallelism = Some(n);
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.z.is_empty() {
            return Err(invalid("z", "needs at least one separation"));
        }
        if self.p.is_empty() {
            return Err(invalid("p", "needs at least one weight"));
        }
        if let Some(z) = self.z.iter().find(|z| !(z.is_finite() && **z > 0.0)) {
            return Err(invalid("z", format!("{z} is not a positive separation")));
        }
        for p in &self.p {
            InitialWeights::new(*p)?;
        }
        CouplingParams::new(self.dipole_ratio)?;
        Cutoff::new(self.nu_max)?;
        if !(self.light_cone_width > 0.0 && self.light_cone_width < 0.5) {
            return Err(invalid("light_cone_width", format!("{} is outside (0, 0.5)", self.light_cone_width)));
        }
        if self.parallelism == Some(0) {
            return Err(invalid("parallelism", "must be at least 1"));
        }
        if self.name.is_empty() || self.name.contains(['/', '\\']) {
            return Err(invalid("name", format!("'{}' is not a usable file prefix", self.name)));
        }
        self.x_points()?;
        Ok(())
    }

    pub fn x_points(&self) -> Result<Vec<f64>, ConfigError> {
        self.x.points(self.light_cone_width)
    }

    pub fn coupling(&self) -> CouplingParams {
        CouplingParams::new(self.dipole_ratio).expect("validated dipole ratio")
    }

    pub fn cutoff(&self) -> Cutoff {
        Cutoff::new(self.nu_max).expect("validated cutoff")
    }

    pub fn columns(&self) -> Vec<Measure> {
        if self.columns.is_empty() {
            Measure::ALL.to_vec()
        } else {
            self.columns.clone()
        }
    }
}

/// On-disk layout; every key is flat.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    name: Option<String>,
    z: Vec<f64>,
    p: Vec<f64>,
    x_min: f64,
    x_max: f64,
    x_count: Option<usize>,
    x_spacing: Option<Spacing>,
    dipole_ratio: Option<f64>,
    nu_max: Option<f64>,
    channel: Option<String>,
    policy: Option<String>,
    output_dir: Option<PathBuf>,
    parallelism: Option<usize>,
    seed: Option<u64>,
    refine: Option<bool>,
    light_cone_width: Option<f64>,
    columns: Option<Vec<String>>,
}

impl ConfigFile {
    fn into_config(self) -> Result<RunConfig, ConfigError> {
        let spacing = self.x_spacing.unwrap_or(Spacing::Log);
        let x = match self.x_count {
            Some(count) => XGrid { min: self.x_min, max: self.x_max, count, spacing },
            None if spacing == Spacing::Log && self.x_min > 0.0 && self.x_max > self.x_min => {
                XGrid::per_decade(self.x_min, self.x_max, crate::BASE_PER_DECADE)
            }
            None => return Err(invalid("x_count", "required unless the grid is logarithmic")),
        };
        let mut cfg = RunConfig::new(self.name.as_deref().unwrap_or("run"), self.z, self.p, x);
        if let Some(v) = self.dipole_ratio {
            cfg.dipole_ratio = v;
        }
        if let Some(v) = self.nu_max {
            cfg.nu_max = v;
        }
        if let Some(v) = self.channel {
            cfg.channel = v.parse()?;
        }
        if let Some(v) = self.policy {
            cfg.policy = v.parse()?;
        }
        if let Some(v) = self.output_dir {
            cfg.output_dir = v;
        }
        cfg.parallelism = self.parallelism;
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = self.refine {
            cfg.refine = v;
        }
        if let Some(v) = self.light_cone_width {
            cfg.light_cone_width = v;
        }
        if let Some(cols) = self.columns {
            cfg.columns = cols
                .iter()
                .map(|c| c.parse().map_err(|_| invalid("columns", format!("unknown column '{c}'"))))
                .collect::<Result<_, _>>()?;
        }
        Ok(cfg)
    }
}
