//! Exchange amplitude from the position-space photon correlation.
//!
//! Summing `ν j₀(νz) e^{-iνs}` over all frequencies gives the correlation
//! `S(z, s) = 1/(z² − s² + i0)` for `s > 0`. The |EE0⟩ → |GG0⟩ amplitude
//! is then a time-ordered double integral of `e^{-i(t1+t2)} S(z, t1 − t2)`
//! acted on by the dipole tensor, which for a radial function is
//! `−(2/z)∂_z` along the separation and `−(∂_z² + ∂_z/z)` across it.

use crate::grid::Dipole;
use crate::OracleError;
use esd_model::{Complex64, CouplingParams, DipoleChannel, EvalPoint};
use esd_numerics::GaussLegendre;
use std::f64::consts::PI;

type C = Complex64;

const ORDER: usize = 32;
/// Closest approach to the light cone, relative to `z`.
const LIGHT_CONE_GUARD: f64 = 1e-6;
/// Relative step of the Richardson differences in `z`.
const STEP: f64 = 1e-3;

/// Direction of the two-atom transition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transition {
    /// |EE0⟩ → |GG0⟩, phase `e^{-i(t1+t2)}`.
    Lowering,
    /// |GG0⟩ → |EE0⟩, phase `e^{+i(t1+t2)}`.
    Raising,
}

impl Transition {
    fn sign(self) -> f64 {
        match self {
            Transition::Lowering => -1.0,
            Transition::Raising => 1.0,
        }
    }
}

/// `∫₀^τ dt1 ∫₀^{t1} dt2 e^{∓i(t1+t2)} S(z, t1 − t2)` with its first two `z` derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationJet {
    pub value: C,
    pub first: C,
    pub second: C,
}

/// Outside the light cone the correlation is smooth and the triangle is
/// integrated directly, with `∂_z` taken under the integral. Inside, the
/// pole at `s = z` is handled in the relative time `s` by principal value
/// plus residue and the derivatives come from Richardson differences.
pub fn ordered_correlation(point: &EvalPoint, transition: Transition) -> Result<CorrelationJet, OracleError> {
    let (z, tau) = (point.z(), point.tau());
    if (tau - z).abs() < LIGHT_CONE_GUARD * z {
        return Err(OracleError::LightCone { x: point.x() });
    }
    if tau < z {
        Ok(triangle(z, tau, transition))
    } else {
        let f = |zz: f64| relative_time(zz, tau, transition);
        let h = STEP * z.min(tau - z);
        let d1 = |h: f64| (f(z + h) - f(z - h)) / (2.0 * h);
        let d2 = |h: f64| (f(z + h) - f(z) * 2.0 + f(z - h)) / (h * h);
        Ok(CorrelationJet {
            value: f(z),
            first: (d1(0.5 * h) * 4.0 - d1(h)) / 3.0,
            second: (d2(0.5 * h) * 4.0 - d2(h)) / 3.0,
        })
    }
}

fn triangle(z: f64, tau: f64, transition: Transition) -> CorrelationJet {
    let gl = GaussLegendre::shared(ORDER);
    let panels = 4 + tau.ceil() as usize;
    let sign = transition.sign();
    let mut jet = [C::new(0.0, 0.0); 3];
    for (t1, w1) in gl.composite_points(0.0, tau, panels) {
        let inner = ((panels as f64 * t1 / tau).ceil() as usize).max(1);
        for (t2, w2) in gl.composite_points(0.0, t1, inner) {
            let s = t1 - t2;
            let d = z * z - s * s;
            let phase = C::from_polar(w1 * w2, sign * (t1 + t2));
            jet[0] += phase / d;
            jet[1] += phase * (-2.0 * z / (d * d));
            jet[2] += phase * (-2.0 / (d * d) + 8.0 * z * z / (d * d * d));
        }
    }
    CorrelationJet { value: jet[0], first: jet[1], second: jet[2] }
}

/// With `s = t1 − t2` the inner integral is `e^{∓iτ} sin(τ − s)`.
fn relative_time(z: f64, tau: f64, transition: Transition) -> C {
    let gl = GaussLegendre::shared(ORDER);
    let h = |s: f64| (tau - s).sin();
    let hz = h(z);
    let panels = |len: f64| 8 + (len / 2.0).ceil() as usize;
    // 1/(z² − s²) = [1/(z − s) + 1/(z + s)]/(2z)
    let far: f64 = gl.composite(0.0, tau, panels(tau), |s| h(s) / (z + s));
    let near: f64 = gl.composite(0.0, z, panels(z), |s| (h(s) - hz) / (z - s))
        + gl.composite(z, tau, panels(tau - z), |s| (h(s) - hz) / (z - s));
    let pv = (far + near + hz * (z.ln() - (tau - z).ln())) / (2.0 * z);
    let residue = -PI * hz / (2.0 * z);
    C::from_polar(1.0, transition.sign() * tau) * C::new(pv, residue)
}

/// The propagator `I = −2 ∫∫_{t1>t2} e^{-i(t1+t2)} S` in the normalization
/// used by the closed forms.
pub fn propagator_by_quadrature(point: &EvalPoint) -> Result<C, OracleError> {
    Ok(ordered_correlation(point, Transition::Lowering)?.value * -2.0)
}

/// Exchange amplitude with every frequency summed, so without a cutoff.
pub fn exchange_by_quadrature(
    point: &EvalPoint,
    coupling: &CouplingParams,
    channel: DipoleChannel,
    transition: Transition,
) -> Result<C, OracleError> {
    let jet = ordered_correlation(point, transition)?;
    let z = point.z();
    let dipoles = Dipole::for_channel(channel);
    let tensor: C = dipoles
        .iter()
        .map(|d| match d {
            Dipole::Along => -jet.first * (2.0 / z),
            Dipole::Across => -jet.second - jet.first / z,
        })
        .sum();
    Ok(tensor / dipoles.len() as f64 * (-2.0 * coupling.kappa() / PI))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_routes_agree_just_outside_the_light_cone() {
        // the triangle integral and the relative-time form describe the same
        // integral; compare them where both apply
        let (z, tau) = (3.0, 2.0);
        for t in [Transition::Lowering, Transition::Raising] {
            let a = triangle(z, tau, t).value;
            let gl = GaussLegendre::shared(ORDER);
            let inner: f64 = gl.composite(0.0, tau, 8, |s| (tau - s).sin() / (z * z - s * s));
            let b = C::from_polar(inner, t.sign() * tau);
            assert!((a - b).norm() < 1e-13 * b.norm(), "{a} vs {b}");
        }
    }
}
