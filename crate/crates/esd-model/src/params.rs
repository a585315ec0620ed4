//! Dimensionless evaluation points and physical parameters.
//!
//! Coordinates: `z = Ωr/c`, `x = r/(ct)`, interaction time `τ = Ωt = z/x`.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Fine-structure constant (CODATA 2018).
pub const FINE_STRUCTURE: f64 = 7.297_352_569_3e-3;

/// `Ω|d|/(ec)` used throughout the figures (1s → 2p hydrogen scale).
pub const DEFAULT_DIPOLE_RATIO: f64 = 5e-3;

pub const DEFAULT_NU_MAX: f64 = 100.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("{name} = {value} is invalid: {reason}")]
    Invalid { name: &'static str, value: f64, reason: &'static str },
    #[error("unknown {kind} '{given}'")]
    Unknown { kind: &'static str, given: String },
}

fn check(name: &'static str, value: f64, ok: bool, reason: &'static str) -> Result<(), ParamError> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(ParamError::Invalid { name, value, reason })
    }
}

/// One space-time evaluation point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalPoint {
    z: f64,
    x: f64,
}

impl EvalPoint {
    pub fn new(z: f64, x: f64) -> Result<Self, ParamError> {
        check("z", z, z > 0.0, "must be positive")?;
        check("x", x, x > 0.0, "must be positive")?;
        check("tau", z / x, z / x > 0.0, "must be positive and finite")?;
        Ok(Self { z, x })
    }

    /// Point with the same separation at interaction time `tau`.
    pub fn from_tau(z: f64, tau: f64) -> Result<Self, ParamError> {
        check("tau", tau, tau > 0.0, "must be positive")?;
        Self::new(z, z / tau)
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn tau(&self) -> f64 {
        self.z / self.x
    }

    /// Separation larger than the light travel distance (`x > 1`).
    pub fn is_spacelike(&self) -> bool {
        self.x > 1.0
    }
}

/// Atom-field coupling strength.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingParams {
    dipole_ratio: f64,
    fine_structure: f64,
}

impl CouplingParams {
    pub fn new(dipole_ratio: f64) -> Result<Self, ParamError> {
        check("dipole_ratio", dipole_ratio, dipole_ratio > 0.0, "must be positive")?;
        Ok(Self { dipole_ratio, fine_structure: FINE_STRUCTURE })
    }

    pub fn dipole_ratio(&self) -> f64 {
        self.dipole_ratio
    }

    pub fn fine_structure(&self) -> f64 {
        self.fine_structure
    }

    /// κ = α (Ω|d|/ec)²; every single-photon quantity is linear in κ.
    pub fn kappa(&self) -> f64 {
        self.fine_structure * self.dipole_ratio * self.dipole_ratio
    }

    /// K = α|d|²/(e²r²) = κ/z².
    pub fn k_at(&self, point: &EvalPoint) -> f64 {
        self.kappa() / (point.z() * point.z())
    }
}

impl Default for CouplingParams {
    fn default() -> Self {
        Self { dipole_ratio: DEFAULT_DIPOLE_RATIO, fine_structure: FINE_STRUCTURE }
    }
}

/// Ultraviolet frequency cutoff in units of the transition frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cutoff {
    nu_max: f64,
}

impl Cutoff {
    pub fn new(nu_max: f64) -> Result<Self, ParamError> {
        check("nu_max", nu_max, nu_max > 1.0, "must lie above the transition (> 1)")?;
        Ok(Self { nu_max })
    }

    pub fn nu_max(&self) -> f64 {
        self.nu_max
    }

    /// `z_max = ν_max z`.
    pub fn z_max(&self, point: &EvalPoint) -> f64 {
        self.nu_max * point.z()
    }
}

impl Default for Cutoff {
    fn default() -> Self {
        Self { nu_max: DEFAULT_NU_MAX }
    }
}

/// Dipole orientation relative to the separation axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DipoleChannel {
    /// Δm = 0: dipoles along the separation axis.
    Longitudinal,
    /// Δm = ±1, modelled as a real dipole perpendicular to the axis.
    Transverse,
    /// Equal-weight mean of the two.
    Averaged,
}

impl FromStr for DipoleChannel {
    type Err = ParamError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "dm0" | "longitudinal" => Ok(Self::Longitudinal),
            "dm1" | "transverse" => Ok(Self::Transverse),
            "avg" | "averaged" => Ok(Self::Averaged),
            _ => Err(ParamError::Unknown { kind: "dipole channel", given: s.to_string() }),
        }
    }
}

impl fmt::Display for DipoleChannel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Longitudinal => "dm0",
            Self::Transverse => "dm1",
            Self::Averaged => "avg",
        })
    }
}

/// Which powers of κ survive in the matrix entries and measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum TruncationPolicy {
    /// Exact products of the one-photon amplitudes, two-photon terms
    /// absent, closed-form partial-transpose eigenvalues.
    #[default]
    OnePhoton,
    /// Every entry expanded consistently to first order in κ.
    SecondOrder,
    /// Two-photon terms kept; negativity from a general eigensolver.
    Full,
}

impl TruncationPolicy {
    pub fn keeps_two_photon(&self) -> bool {
        matches!(self, Self::Full)
    }
}

impl FromStr for TruncationPolicy {
    type Err = ParamError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "one-photon" | "one_photon" => Ok(Self::OnePhoton),
            "second-order" | "second_order" => Ok(Self::SecondOrder),
            "full" => Ok(Self::Full),
            _ => Err(ParamError::Unknown { kind: "truncation policy", given: s.to_string() }),
        }
    }
}

impl fmt::Display for TruncationPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::OnePhoton => "one-photon",
            Self::SecondOrder => "second-order",
            Self::Full => "full",
        })
    }
}

/// Initial state √p |EE⟩ + √(1-p) |GG⟩.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitialWeights {
    p: f64,
}

impl InitialWeights {
    pub fn new(p: f64) -> Result<Self, ParamError> {
        check("p", p, (0.0..=1.0).contains(&p), "must lie in [0, 1]")?;
        Ok(Self { p })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Weight of |EE⟩.
    pub fn alpha(&self) -> f64 {
        self.p.sqrt()
    }

    /// Weight of |GG⟩.
    pub fn beta(&self) -> f64 {
        (1.0 - self.p).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tau_and_spacelike_flag_agree() {
        let p = EvalPoint::new(5.0, 2.0).unwrap();
        assert_eq!(p.tau(), 2.5);
        assert!(p.is_spacelike() && p.tau() < p.z());
        let q = EvalPoint::from_tau(50.0, 100.0).unwrap();
        assert_eq!(q.x(), 0.5);
        assert!(!q.is_spacelike());
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(EvalPoint::new(0.0, 1.0).is_err());
        assert!(EvalPoint::new(1.0, f64::NAN).is_err());
        assert!(Cutoff::new(1.0).is_err());
        assert!(InitialWeights::new(1.2).is_err());
        assert!(CouplingParams::new(-1.0).is_err());
        assert!("sideways".parse::<DipoleChannel>().is_err());
    }

    #[test]
    fn kappa_scales_with_dipole_squared() {
        let a = CouplingParams::new(5e-3).unwrap();
        let b = CouplingParams::new(1e-2).unwrap();
        assert!((b.kappa() / a.kappa() - 4.0).abs() < 1e-14);
        let pt = EvalPoint::new(10.0, 1.5).unwrap();
        assert!((a.k_at(&pt) - a.kappa() / 100.0).abs() < 1e-24);
    }

    #[test]
    fn weights_normalized() {
        let w = InitialWeights::new(0.98).unwrap();
        assert!((w.alpha().powi(2) + w.beta().powi(2) - 1.0).abs() < 1e-15);
    }
}
