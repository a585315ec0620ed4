//! Single-atom radiative corrections.

use crate::KernelError;
use esd_model::{CouplingParams, Cutoff, EvalPoint};
use esd_numerics::Complex64;
use std::f64::consts::PI;

/// Distance of `ν_max` from the resonance below which `a` is refused.
const RESONANT_CUTOFF_GUARD: f64 = 1e-12;

/// `(a, a′)` for the excited and ground initial states.
///
/// `a = (4iκτ/3)(ln|1 − ν_max| + iπ)`, `a′ = −(4iκτ/3) ln(1 + ν_max)`. The
/// logarithm of the negative argument `1 − ν_max` is taken on the principal
/// branch, which gives `Re a = −(4π/3)κτ < 0`.
pub fn radiative(
    point: &EvalPoint,
    coupling: &CouplingParams,
    cutoff: &Cutoff,
) -> Result<(Complex64, Complex64), KernelError> {
    let nu = cutoff.nu_max();
    let gap = (1.0 - nu).abs();
    if gap < RESONANT_CUTOFF_GUARD {
        return Err(KernelError::Singular { what: "radiative correction at ν_max = 1", distance: gap });
    }
    let scale = 4.0 * coupling.kappa() * point.tau() / 3.0;
    let a = Complex64::new(0.0, scale) * Complex64::new(gap.ln(), PI);
    let a_prime = Complex64::new(0.0, -scale * (1.0 + nu).ln());
    Ok((a, a_prime))
}

/// Second-order norm defects `|2Re a + 2|u|²|/(κτ)` and `|2Re a′ + 2|v|²|/(κτ)`.
///
/// Exact unitarity would make both vanish. The closed-form `a′` is purely
/// imaginary, so the ground-branch defect carries the whole `|v|²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormDefect {
    pub excited: f64,
    pub ground: f64,
}

pub fn norm_defect(
    a: Complex64,
    a_prime: Complex64,
    emission_sq: f64,
    counter_emission_sq: f64,
    kappa_tau: f64,
) -> NormDefect {
    NormDefect {
        excited: (2.0 * a.re + 2.0 * emission_sq).abs() / kappa_tau,
        ground: (2.0 * a_prime.re + 2.0 * counter_emission_sq).abs() / kappa_tau,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ground_correction_is_imaginary_and_excited_decays() {
        let p = EvalPoint::new(50.0, 0.5).unwrap();
        let (a, ap) = radiative(&p, &CouplingParams::default(), &Cutoff::default()).unwrap();
        assert_eq!(ap.re, 0.0);
        assert!(a.re < 0.0);
        let k = CouplingParams::default().kappa();
        assert!((a.re + 4.0 * PI * k * 100.0 / 3.0).abs() < 1e-18);
    }

    #[test]
    fn resonant_cutoff_refused() {
        let p = EvalPoint::new(50.0, 0.5).unwrap();
        let c = Cutoff::new(1.0 + 1e-13).unwrap();
        assert!(radiative(&p, &CouplingParams::default(), &c).is_err());
    }
}
