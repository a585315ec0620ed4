//! Discrete photon modes: frequency nodes times propagation directions
//! times polarizations.

use crate::OracleError;
use esd_model::{Cutoff, DipoleChannel, EvalPoint};
use esd_numerics::quad::spherical_bessel_j;
use esd_numerics::{Complex64, GaussLegendre};
use std::f64::consts::PI;

const FREQUENCY_ORDER: usize = 10;
const MIN_FREQUENCY_PANELS: usize = 64;
const ANGULAR_ORDER: usize = 32;
/// Largest `νz` phase one angular panel resolves at level 0.
const ANGULAR_PHASE_PER_PANEL: f64 = 24.0;
/// Azimuths per direction; exact for the degree-2 trigonometric patterns.
const AZIMUTHS: usize = 4;
/// Required agreement of the angular sums with the spherical-wave kernels.
pub const COMPLETENESS_TOLERANCE: f64 = 1e-9;

/// Dipole direction of both atoms. The separation is along `ẑ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dipole {
    /// `d̂ = ẑ`.
    Along,
    /// `d̂ = x̂`.
    Across,
}

impl Dipole {
    pub fn for_channel(channel: DipoleChannel) -> &'static [Dipole] {
        match channel {
            DipoleChannel::Longitudinal => &[Dipole::Along],
            DipoleChannel::Transverse => &[Dipole::Across],
            DipoleChannel::Averaged => &[Dipole::Along, Dipole::Across],
        }
    }

    fn vector(self) -> [f64; 3] {
        match self {
            Dipole::Along => [0.0, 0.0, 1.0],
            Dipole::Across => [1.0, 0.0, 0.0],
        }
    }

    /// `Σ_φ Σ_ε |d̂·ε|² Δφ` for photons with polar cosine `c`, from explicit
    /// azimuth nodes and the two transverse polarizations.
    pub fn polarization_weight(self, c: f64) -> f64 {
        let d = self.vector();
        let s = (1.0 - c * c).max(0.0).sqrt();
        let dphi = 2.0 * PI / AZIMUTHS as f64;
        (0..AZIMUTHS)
            .map(|k| {
                let phi = dphi * k as f64;
                let (sp, cp) = phi.sin_cos();
                let e_theta = [c * cp, c * sp, -s];
                let e_phi = [-sp, cp, 0.0];
                let dot = |e: [f64; 3]| d[0] * e[0] + d[1] * e[1] + d[2] * e[2];
                (dot(e_theta).powi(2) + dot(e_phi).powi(2)) * dphi
            })
            .sum()
    }
}

/// Polar-cosine nodes with their polarization-summed weights.
#[derive(Debug, Clone)]
pub struct DirectionRule {
    panels: usize,
    weights: Vec<f64>,
}

impl DirectionRule {
    fn sums(&self, nu: f64, z: f64) -> DirectionSums {
        let gl = GaussLegendre::shared(ANGULAR_ORDER);
        let half = 1.0 / self.panels as f64;
        let rate = -nu * z;
        let offsets: Vec<Complex64> = gl.nodes().iter().map(|x| Complex64::from_polar(1.0, rate * half * x)).collect();
        let mut local = 0.0;
        let mut cross = Complex64::new(0.0, 0.0);
        for p in 0..self.panels {
            let centre = Complex64::from_polar(1.0, rate * (-1.0 + half * (2 * p + 1) as f64));
            let mut panel = Complex64::new(0.0, 0.0);
            for (j, off) in offsets.iter().enumerate() {
                let w = self.weights[p * ANGULAR_ORDER + j];
                local += w;
                panel += off * w;
            }
            cross += centre * panel;
        }
        DirectionSums { local, cross }
    }
}

/// Mode grid for one evaluation point and one dipole direction.
#[derive(Debug, Clone)]
pub struct ModeGrid {
    z: f64,
    dipole: Dipole,
    level: u32,
    frequencies: Vec<(f64, f64)>,
}

/// Angular sums at one frequency: `Σ_Ω pol² w` and `Σ_Ω pol² w e^{-iνz cos θ}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectionSums {
    pub local: f64,
    pub cross: Complex64,
}

impl ModeGrid {
    /// Frequencies on `(0, ν_max]` with one panel per period of the fastest
    /// oscillation `τ + z`; each `level` doubles every node count.
    pub fn new(point: &EvalPoint, cutoff: &Cutoff, dipole: Dipole, level: u32) -> Self {
        let nu_max = cutoff.nu_max();
        let periods = nu_max * (point.tau() + point.z()).max(1.0) / (2.0 * PI);
        let panels = (periods.ceil() as usize).max(MIN_FREQUENCY_PANELS) << level;
        let frequencies = GaussLegendre::shared(FREQUENCY_ORDER).composite_points(0.0, nu_max, panels);
        Self { z: point.z(), dipole, level, frequencies }
    }

    pub fn frequencies(&self) -> &[(f64, f64)] {
        &self.frequencies
    }

    pub fn dipole(&self) -> Dipole {
        self.dipole
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// Number of direction nodes used at frequency `nu`.
    pub fn directions_at(&self, nu: f64) -> usize {
        self.angular_panels(nu) * ANGULAR_ORDER
    }

    fn angular_panels(&self, nu: f64) -> usize {
        let phase = ANGULAR_PHASE_PER_PANEL / f64::from(1u32 << self.level);
        ((2.0 * nu * self.z / phase).ceil() as usize).max(1)
    }

    /// Sums over directions and polarizations at frequency `nu`, mode by mode.
    pub fn direction_sums(&self, nu: f64) -> DirectionSums {
        self.direction_rule(nu).sums(nu, self.z)
    }

    /// Direction nodes for `nu`, reusable for every frequency with the same
    /// panel count.
    pub fn direction_rule(&self, nu: f64) -> DirectionRule {
        let panels = self.angular_panels(nu);
        let gl = GaussLegendre::shared(ANGULAR_ORDER);
        let width = 2.0 / panels as f64;
        let mut weights = Vec::with_capacity(panels * ANGULAR_ORDER);
        for p in 0..panels {
            let centre = -1.0 + width * (p as f64 + 0.5);
            for (x, w) in gl.nodes().iter().zip(gl.weights()) {
                let c = centre + 0.5 * width * x;
                weights.push(0.5 * width * w * self.dipole.polarization_weight(c));
            }
        }
        DirectionRule { panels, weights }
    }

    /// Cached variant of [`direction_sums`](Self::direction_sums) for a
    /// sweep over increasing frequencies.
    pub fn direction_sums_cached(&self, nu: f64, cache: &mut Option<DirectionRule>) -> DirectionSums {
        let panels = self.angular_panels(nu);
        if cache.as_ref().map(|r| r.panels) != Some(panels) {
            *cache = Some(self.direction_rule(nu));
        }
        cache.as_ref().expect("rule just built").sums(nu, self.z)
    }

    /// Compares the angular sums with the spherical-wave forms at the
    /// largest `νz` on the grid and at `νz → 0`.
    pub fn check_completeness(&self) -> Result<(), OracleError> {
        let nu_max = self.frequencies.last().map(|f| f.0).unwrap_or(0.0);
        for nu in [nu_max * 1e-6, nu_max] {
            let sums = self.direction_sums(nu);
            let w = nu * self.z;
            let mut j = [0.0; 2];
            spherical_bessel_j(w, &mut j);
            let j1_over_w = if w.abs() < 1e-6 { 1.0 / 3.0 - w * w / 30.0 } else { j[1] / w };
            let kernel = match self.dipole {
                Dipole::Along => 2.0 * j1_over_w,
                Dipole::Across => j[0] - j1_over_w,
            };
            let expected = [(sums.local / (4.0 * PI), 2.0 / 3.0), (sums.cross.re / (4.0 * PI), kernel)];
            for (got, want) in expected {
                let deviation = (got - want).abs();
                if deviation > COMPLETENESS_TOLERANCE {
                    return Err(OracleError::Resolution { nu, deviation, tolerance: COMPLETENESS_TOLERANCE });
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polarization_weights_integrate_to_the_dipole_pattern() {
        for c in [-0.9, -0.2, 0.0, 0.4, 1.0] {
            let along = Dipole::Along.polarization_weight(c);
            let across = Dipole::Across.polarization_weight(c);
            assert!((along - 2.0 * PI * (1.0 - c * c)).abs() < 1e-13);
            assert!((across - PI * (1.0 + c * c)).abs() < 1e-13);
        }
    }

    #[test]
    fn default_grid_is_complete() {
        let p = EvalPoint::new(50.0, 0.5).unwrap();
        for d in [Dipole::Along, Dipole::Across] {
            ModeGrid::new(&p, &Cutoff::default(), d, 0).check_completeness().unwrap();
        }
    }
}
