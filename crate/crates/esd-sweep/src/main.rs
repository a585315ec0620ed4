use clap::{Parser, Subcommand};
use esd_model::{DipoleChannel, TruncationPolicy};
use esd_sweep::config::{ConfigError, RunConfig};
use esd_sweep::events::{detect_events, interpolating_probe};
use esd_sweep::oracle_check::{oracle_check, CHECK_POINTS, CHECK_WEIGHTS, DEFAULT_TOLERANCE};
use esd_sweep::presets::figure_preset;
use esd_sweep::{read_series_csv, sweep, write_outputs, EntanglementSeries, Measure, SweepError};
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_IO: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

/// Entanglement sudden death and revival of two atoms in the vacuum.
#[derive(Parser)]
#[command(name = "esd", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a sweep described by a TOML file.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; wins over ESD_OUTPUT_DIR and the file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the preset of one figure.
    Figure {
        #[arg(value_parser = clap::value_parser!(u32).range(1..=8))]
        id: u32,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        nu_max: Option<f64>,
        /// avg, dm0 or dm1
        #[arg(long)]
        channel: Option<DipoleChannel>,
        /// one-photon, second-order or full
        #[arg(long)]
        policy: Option<TruncationPolicy>,
    },
    /// Compare the reduced states with the discrete-mode oracle.
    OracleCheck {
        /// Check at this interaction time instead of the default points.
        #[arg(long)]
        tau: Option<f64>,
        /// Largest relative deviation per entry.
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
    },
    /// Detect events in a CSV written by `simulate` or `figure`.
    Events { csv: PathBuf },
}

enum Failure {
    Config(String),
    Numerical(String),
    Io(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.to_string())
    }
}

impl From<SweepError> for Failure {
    fn from(e: SweepError) -> Self {
        match e {
            SweepError::Config(e) => Failure::Config(e.to_string()),
            other => Failure::Numerical(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Simulate { config, out } => {
            RunConfig::load(&config).map_err(Failure::from).and_then(|cfg| run(cfg, out))
        }
        Command::Figure { id, out, nu_max, channel, policy } => {
            figure_preset(id).map_err(Failure::from).and_then(|mut cfg| {
                if let Some(n) = nu_max {
                    cfg.nu_max = n;
                }
                if let Some(c) = channel {
                    cfg.channel = c;
                }
                if let Some(p) = policy {
                    cfg.policy = p;
                }
                run(cfg, out)
            })
        }
        Command::OracleCheck { tau, tol } => check(tau, tol),
        Command::Events { csv } => events(csv),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (code, msg) = match f {
                Failure::Config(m) => (EXIT_CONFIG, format!("invalid configuration: {m}")),
                Failure::Numerical(m) => (EXIT_NUMERICAL, format!("numerical failure: {m}")),
                Failure::Io(m) => (EXIT_IO, m),
            };
            eprintln!("esd: {msg}");
            ExitCode::from(code)
        }
    }
}

fn run(mut cfg: RunConfig, out: Option<PathBuf>) -> Result<(), Failure> {
    cfg.apply_env()?;
    if let Some(dir) = out {
        cfg.output_dir = dir;
    }
    cfg.validate()?;
    let series = sweep(&cfg)?;
    let written = write_outputs(&series, &cfg).map_err(|e| Failure::Io(e.to_string()))?;
    for s in &series {
        summarize(s, &cfg.columns());
    }
    for path in written {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn summarize(s: &EntanglementSeries, columns: &[Measure]) {
    println!("z = {:e}, p = {}: {} points, {} gaps", s.z, s.p, s.rows.len(), s.gaps.len());
    for m in columns {
        let e = s.events(*m);
        let mut line = format!("  {m}:");
        if let Some(d) = e.death {
            line += &format!(" death x = {:.6e} (τ = {:.4e})", d.x, d.tau);
        }
        if let Some(r) = e.revival {
            line += &format!(" revival x = {:.6e} (τ = {:.4e})", r.x, r.tau);
        }
        for x in &e.extrema {
            line += &format!(" {:?} {:.6e} at x = {:.6e}", x.kind, x.value, x.x);
        }
        if e.death.is_none() && e.extrema.is_empty() {
            line += " no events";
        }
        println!("{line}");
    }
}

fn check(tau: Option<f64>, tol: f64) -> Result<(), Failure> {
    if !(tol > 0.0) {
        return Err(Failure::Config(format!("--tol {tol} must be positive")));
    }
    let points: Vec<(f64, f64)> = match tau {
        Some(t) if t > 0.0 && t.is_finite() => CHECK_POINTS.iter().map(|(z, _)| (*z, z / t)).collect(),
        Some(t) => return Err(Failure::Config(format!("--tau {t} must be positive"))),
        None => CHECK_POINTS.to_vec(),
    };
    let results = oracle_check(&points, &CHECK_WEIGHTS, tol).map_err(|e| Failure::Numerical(e.to_string()))?;
    let mut failed = 0;
    for r in &results {
        let verdict = if r.passed { "ok  " } else { "FAIL" };
        failed += usize::from(!r.passed);
        println!(
            "{verdict} z = {:<5} x = {:<5} p = {:<4} ρ_{:<2} worst entry {:>2}: deviation {:.3e} (closed {:.6e}, oracle {:.6e})",
            r.z, r.x, r.p, r.state, r.entry, r.deviation, r.closed, r.oracle
        );
    }
    if failed > 0 {
        return Err(Failure::Numerical(format!("{failed} of {} states outside tolerance {tol}", results.len())));
    }
    Ok(())
}

fn events(csv: PathBuf) -> Result<(), Failure> {
    let table = read_series_csv(&csv).map_err(|e| Failure::Io(e.to_string()))?;
    let report: BTreeMap<Measure, _> = table
        .columns
        .iter()
        .map(|(m, values)| (*m, detect_events(table.z, &table.x, values, Some(interpolating_probe(&table.x, values)))))
        .collect();
    let text = serde_json::to_string_pretty(&report).map_err(|e| Failure::Io(e.to_string()))?;
    println!("{text}");
    Ok(())
}
