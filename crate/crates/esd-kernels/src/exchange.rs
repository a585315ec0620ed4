//! Exchange amplitude between |EE0⟩ and |GG0⟩.

use crate::angular::Orientation;
use crate::propagator::{propagator, Propagator};
use crate::KernelError;
use esd_model::{CouplingParams, DipoleChannel, EvalPoint};
use esd_numerics::Complex64;
use std::f64::consts::PI;

/// `b` for one orientation from the propagator jet.
///
/// The tensor `−∇²δ_ij + ∇_i∇_j` acting on a radial function reduces to
/// `−2I′/r` along the separation and `−I″ − I′/r` across it.
pub fn exchange_from(prop: &Propagator, k: f64, orientation: Orientation) -> Complex64 {
    let radial = match orientation {
        Orientation::Longitudinal => -prop.first * 2.0,
        Orientation::Transverse => -prop.second - prop.first,
    };
    radial * (k / PI)
}

/// `b` (|EE0⟩ → |GG0⟩); the reverse amplitude is its conjugate.
pub fn exchange(
    point: &EvalPoint,
    coupling: &CouplingParams,
    channel: DipoleChannel,
    light_cone_width: f64,
) -> Result<Complex64, KernelError> {
    let prop = propagator(point, light_cone_width)?;
    let k = coupling.k_at(point);
    let parts = Orientation::components(channel);
    let sum: Complex64 = parts.iter().map(|o| exchange_from(&prop, k, *o)).sum();
    Ok(sum / parts.len() as f64)
}
