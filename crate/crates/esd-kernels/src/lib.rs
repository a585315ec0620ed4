//! Second-order amplitudes for two atoms in the vacuum field: the
//! radiative corrections, the exchange amplitude built on the propagator
//! `I`, and the mode-summed photon overlaps.

pub mod angular;
pub mod exchange;
pub mod overlaps;
pub mod propagator;
pub mod radiative;
pub mod two_photon;

use angular::Orientation;
use esd_model::{AmplitudeSet, CouplingParams, Cutoff, DipoleChannel, EvalPoint, TruncationPolicy};
use esd_numerics::{QuadError, QuadOptions, SpecialError};
use thiserror::Error;

pub use exchange::exchange;
pub use overlaps::{single_photon_overlaps, SinglePhotonOverlaps, OVERLAP_NORMALIZATION};
pub use propagator::{propagator, Propagator, LIGHT_CONE_WIDTH};
pub use radiative::{norm_defect, radiative, NormDefect};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KernelError {
    #[error("x = {x} lies within {width:e} of the light cone")]
    LightCone { x: f64, width: f64 },
    #[error("{what} (distance {distance:e})")]
    Singular { what: &'static str, distance: f64 },
    #[error(transparent)]
    Special(#[from] SpecialError),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error("two-photon terms are not part of the {policy} policy")]
    Policy { policy: TruncationPolicy },
    #[error("two-photon quadrature needs {needed} nodes per axis, budget is {limit}")]
    Budget { needed: usize, limit: usize },
}

/// Numerical settings shared by all kernels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelOptions {
    pub light_cone_width: f64,
    pub quad: QuadOptions,
    pub two_photon_nodes: usize,
}

impl Default for KernelOptions {
    fn default() -> Self {
        Self {
            light_cone_width: LIGHT_CONE_WIDTH,
            quad: QuadOptions::default(),
            two_photon_nodes: two_photon::DEFAULT_NODE_BUDGET,
        }
    }
}

/// Two-photon Gram matrix for `channel`; refused unless `policy` keeps it.
pub fn two_photon_overlaps(
    point: &EvalPoint,
    coupling: &CouplingParams,
    cutoff: &Cutoff,
    channel: DipoleChannel,
    policy: TruncationPolicy,
    opts: &KernelOptions,
) -> Result<esd_model::TwoPhotonGram, KernelError> {
    two_photon::require_two_photon_policy(policy)?;
    let parts = Orientation::components(channel);
    let single = overlaps::overlaps_by_orientation(point, coupling, cutoff, parts, &opts.quad)?;
    let grams = two_photon::two_photon_by_orientation(point, coupling, cutoff, parts, &single, opts.two_photon_nodes)?;
    Ok(mean_gram(&grams))
}

fn mean_gram(grams: &[esd_model::TwoPhotonGram]) -> esd_model::TwoPhotonGram {
    if grams.len() == 1 {
        return grams[0];
    }
    let mut g = grams[0];
    for i in 0..4 {
        for j in 0..4 {
            g.gram[i][j] = (grams[0].gram[i][j] + grams[1].gram[i][j]) * 0.5;
        }
    }
    g
}

/// Every amplitude and overlap at one point.
pub fn amplitudes(
    point: &EvalPoint,
    coupling: &CouplingParams,
    cutoff: &Cutoff,
    channel: DipoleChannel,
    policy: TruncationPolicy,
    opts: &KernelOptions,
) -> Result<AmplitudeSet, KernelError> {
    let (a, a_prime) = radiative(point, coupling, cutoff)?;
    let b = exchange(point, coupling, channel, opts.light_cone_width)?;
    let parts = Orientation::components(channel);
    let single = overlaps::overlaps_by_orientation(point, coupling, cutoff, parts, &opts.quad)?;
    let o = overlaps::mean_overlaps(&single);
    let two_photon = if policy.keeps_two_photon() {
        let grams =
            two_photon::two_photon_by_orientation(point, coupling, cutoff, parts, &single, opts.two_photon_nodes)?;
        Some(mean_gram(&grams))
    } else {
        None
    };
    Ok(AmplitudeSet {
        self_energy_excited: a,
        self_energy_ground: a_prime,
        exchange_lowering: b,
        exchange_raising: b.conj(),
        emission_sq: o.emission_sq,
        counter_emission_sq: o.counter_emission_sq,
        mixed_cross: o.mixed_cross,
        emission_cross: o.emission_cross,
        counter_emission_cross: o.counter_emission_cross,
        mixed_local: o.mixed_local,
        two_photon,
    })
}
