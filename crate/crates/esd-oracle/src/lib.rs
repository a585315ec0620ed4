//! Brute-force validation of the closed-form pipeline.
//!
//! The photon field is discretized into frequency nodes, propagation
//! directions and polarizations. Every time integral of second-order
//! perturbation theory is done numerically on a shared time grid, the
//! evolved state is kept as sector amplitudes and mode-summed inner
//! products, and the reduced density matrices are traced out from it.
//! Nothing here depends on the closed-form kernels.

pub mod evolve;
pub mod exchange;
pub mod grid;
pub mod time;
pub mod two_photon;

use thiserror::Error;

pub use evolve::{evolve, mode_sums, Atoms, EvolveOptions, GlobalState, ModeSums, Reduced, Sectors, Subsystem};
pub use exchange::{exchange_by_quadrature, ordered_correlation, propagator_by_quadrature, CorrelationJet, Transition};
pub use grid::{Dipole, ModeGrid};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("angular grid misses the spherical-wave kernel by {deviation:e} at ν = {nu} (tolerance {tolerance:e})")]
    Resolution { nu: f64, deviation: f64, tolerance: f64 },
    #[error("two-photon sector needs {needed} frequency nodes, budget is {limit}")]
    Budget { needed: usize, limit: usize },
    #[error("position-space correlation is singular on the light cone (x = {x})")]
    LightCone { x: f64 },
}
