//! The two-atom propagator `I(z, τ)` and its radial derivatives.
//!
//! In closed form
//!
//! ```text
//! I = -i e^{-iτ}/(2z) [ -2cos τ D(z) + D(z+τ) + D(z-τ) ] + (π/z) e^{-iz} [τ > z]
//! D(w) = e^{-iw} Ei(iw) - e^{iw} Ei(-iw)
//! ```
//!
//! where the last term is the branch term picked up inside the light cone.
//! Written with `G(ζ) = e^ζ E1(ζ)` each `D` splits into `2πi sgn(w) cos w`
//! plus a smooth remainder `G(iw) - G(-iw)`. The oscillating pieces cancel
//! exactly outside the light cone and collapse to a single exponential
//! inside it, so only the smooth remainders are evaluated numerically. This
//! keeps full accuracy at `z ~ 10⁷`, where the individual `π`-sized terms
//! cancel down to `O(1/z)`.

use crate::KernelError;
use esd_model::EvalPoint;
use esd_numerics::{e1_scaled_imag, Complex64};
use std::f64::consts::PI;

/// Default half-width of the refused band around `x = 1`.
pub const LIGHT_CONE_WIDTH: f64 = 1e-6;

// beyond this |ζ| the asymptotic series of G reaches machine precision
const ASYMPTOTIC_RADIUS: f64 = 40.0;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// `I` together with `I1 = r ∂I/∂r` and `I2 = r² ∂²I/∂r²` at fixed time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Propagator {
    pub value: Complex64,
    pub first: Complex64,
    pub second: Complex64,
}

/// `(G, G′, G″)` at `ζ = i a` for real `a ≠ 0`.
fn scaled_e1_jet(a: f64) -> Result<[Complex64; 3], KernelError> {
    let zeta = Complex64::new(0.0, a);
    if a.abs() >= ASYMPTOTIC_RADIUS {
        // G ~ Σ (-1)^k k!/ζ^{k+1}; the derivatives shift the factorials
        let inv = zeta.inv();
        let mut out = [Complex64::new(0.0, 0.0); 3];
        for (d, slot) in out.iter_mut().enumerate() {
            let sign_d = if d % 2 == 0 { 1.0 } else { -1.0 };
            // k = 0 term: d! / ζ^{d+1}
            let mut term = inv.powu(d as u32 + 1) * factorial(d) * sign_d;
            let mut sum = term;
            for k in 1..80 {
                let next = -term * ((k + d) as f64) * inv;
                if next.norm() >= term.norm() {
                    break;
                }
                term = next;
                sum += term;
                if term.norm() < 1e-17 * sum.norm() {
                    break;
                }
            }
            *slot = sum;
        }
        return Ok(out);
    }
    let g = e1_scaled_imag(a)?;
    let g1 = g - zeta.inv();
    let g2 = g1 + zeta.inv() * zeta.inv();
    Ok([g, g1, g2])
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Smooth part of `D(w)` and its first two derivatives.
fn smooth_d(w: f64) -> Result<[Complex64; 3], KernelError> {
    let p = scaled_e1_jet(w)?;
    let m = scaled_e1_jet(-w)?;
    Ok([p[0] - m[0], I * (p[1] + m[1]), m[2] - p[2]])
}

fn check_light_cone(point: &EvalPoint, width: f64) -> Result<(), KernelError> {
    if (point.x() - 1.0).abs() < width {
        return Err(KernelError::LightCone { x: point.x(), width });
    }
    Ok(())
}

/// `I`, `I1`, `I2` at `point`, refusing `|x − 1| < light_cone_width`.
pub fn propagator(point: &EvalPoint, light_cone_width: f64) -> Result<Propagator, KernelError> {
    check_light_cone(point, light_cone_width)?;
    propagator_at(point.z(), point.tau())
}

/// Same at explicit `(z, τ)`, used for finite-difference cross checks.
pub fn propagator_at(z: f64, tau: f64) -> Result<Propagator, KernelError> {
    let coeffs = [-2.0 * tau.cos(), 1.0, 1.0];
    let args = [z, z + tau, z - tau];
    let mut b = [Complex64::new(0.0, 0.0); 3];
    for (c, w) in coeffs.iter().zip(args) {
        if w == 0.0 {
            return Err(KernelError::LightCone { x: 1.0, width: 0.0 });
        }
        let d = smooth_d(w)?;
        for k in 0..3 {
            b[k] += d[k] * *c;
        }
    }
    let pref = -I * Complex64::from_polar(0.5, -tau);
    let (iz, iz2, iz3) = (1.0 / z, 1.0 / (z * z), 1.0 / (z * z * z));
    let mut value = pref * b[0] * iz;
    let mut d1 = pref * (b[1] * iz - b[0] * iz2);
    let mut d2 = pref * (b[2] * iz - b[1] * (2.0 * iz2) + b[0] * (2.0 * iz3));
    if tau > z {
        // what survives of the oscillating pieces plus the branch term:
        // -(π/z) e^{-i(2τ - z)}
        let phase = Complex64::from_polar(1.0, -tau) * Complex64::from_polar(1.0, -(tau - z));
        value += -phase * (PI * iz);
        d1 += -phase * PI * (I * iz - iz2);
        d2 += -phase * PI * (-iz - I * (2.0 * iz2) + 2.0 * iz3);
    }
    Ok(Propagator { value, first: d1 * z, second: d2 * (z * z) })
}

/// The term added to the printed closed form for `x < 1`, `(π/z) e^{-iz}`.
pub fn branch_term(z: f64) -> Complex64 {
    Complex64::from_polar(PI / z, -z)
}

/// Richardson-extrapolated central differences of `I` in `z` at fixed `τ`,
/// returning `(I1, I2)`. Cross-check for the analytic derivatives.
pub fn propagator_derivatives_fd(point: &EvalPoint) -> Result<(Complex64, Complex64), KernelError> {
    let (z, tau) = (point.z(), point.tau());
    let h = 1e-3 * z.min((z - tau).abs()).min(1.0).max(1e-6 * z);
    let f = |dz: f64| propagator_at(z + dz, tau).map(|p| p.value);
    let (fm2, fm1, f0, fp1, fp2) = (f(-2.0 * h)?, f(-h)?, f(0.0)?, f(h)?, f(2.0 * h)?);
    let first = (fm2 - fp2 + (fp1 - fm1) * 8.0) / (12.0 * h);
    let second = (-fm2 - fp2 + (fp1 + fm1) * 16.0 - f0 * 30.0) / (12.0 * h * h);
    Ok((first * z, second * (z * z)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn asymptotic_and_continued_fraction_jets_agree() {
        for a in [40.0, 55.0, -40.0, -73.5] {
            let asym = scaled_e1_jet(a).unwrap();
            let g = e1_scaled_imag(a).unwrap();
            let zeta = Complex64::new(0.0, a);
            assert!((asym[0] - g).norm() < 1e-14 * g.norm(), "{a}");
            let g1 = g - zeta.inv();
            assert!((asym[1] - g1).norm() < 1e-11 * g1.norm(), "{a}");
        }
    }

    #[test]
    fn light_cone_refused() {
        let p = EvalPoint::new(5.0, 1.0 + 1e-7).unwrap();
        assert!(matches!(propagator(&p, LIGHT_CONE_WIDTH), Err(KernelError::LightCone { .. })));
        let q = EvalPoint::new(5.0, 1.0 + 1e-5).unwrap();
        assert!(propagator(&q, LIGHT_CONE_WIDTH).is_ok());
    }
}
