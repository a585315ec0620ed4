//! Angular kernels of the cross-atom mode sums.
//!
//! Averaging `e^{ik·r}` with the dipole pattern of a photon of frequency
//! `ν` gives `τ_∥(νz)` for dipoles along the separation and `τ_⊥(νz)` for
//! dipoles across it. Both tend to the same-atom value 2/3 at `νz → 0`.

use esd_model::DipoleChannel;
use esd_numerics::Complex64;

// below this the closed forms lose more than ~1e-12 to cancellation
const SERIES_LIMIT: f64 = 1e-2;

/// Dipoles along the separation axis: `2(sin w/w³ − cos w/w²)`.
pub fn longitudinal(w: f64) -> f64 {
    if w.abs() < SERIES_LIMIT {
        let w2 = w * w;
        2.0 / 3.0 - w2 / 15.0 + w2 * w2 / 420.0
    } else {
        2.0 * (w.sin() / (w * w * w) - w.cos() / (w * w))
    }
}

/// Dipoles across the separation axis: `sin w/w + cos w/w² − sin w/w³`.
pub fn transverse(w: f64) -> f64 {
    if w.abs() < SERIES_LIMIT {
        let w2 = w * w;
        2.0 / 3.0 - 2.0 * w2 / 15.0 + w2 * w2 / 140.0
    } else {
        let (s, c) = w.sin_cos();
        s / w + c / (w * w) - s / (w * w * w)
    }
}

/// One of the two geometric channels. `Averaged` is built by the callers
/// as the mean of two full evaluations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Longitudinal,
    Transverse,
}

impl Orientation {
    pub fn kernel(self, w: f64) -> f64 {
        match self {
            Self::Longitudinal => longitudinal(w),
            Self::Transverse => transverse(w),
        }
    }

    /// Complex polynomial `P(ν)` with `ν³ τ(νz) = Re[P(ν) e^{iνz}]`.
    pub fn wave_coefficient(self, nu: f64, z: f64) -> Complex64 {
        let (z2, z3) = (z * z, z * z * z);
        match self {
            Self::Longitudinal => Complex64::new(-2.0 * nu / z2, -2.0 / z3),
            Self::Transverse => Complex64::new(nu / z2, -nu * nu / z + 1.0 / z3),
        }
    }

    /// The channels whose mean makes up `channel`.
    pub fn components(channel: DipoleChannel) -> &'static [Orientation] {
        match channel {
            DipoleChannel::Longitudinal => &[Orientation::Longitudinal],
            DipoleChannel::Transverse => &[Orientation::Transverse],
            DipoleChannel::Averaged => &[Orientation::Longitudinal, Orientation::Transverse],
        }
    }
}
