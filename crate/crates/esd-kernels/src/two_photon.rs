//! Two-photon amplitudes, needed only when the fourth-order terms are kept.
//!
//! Photon `k1` is emitted at `t1`, `k2` at `t2 > t1`. Emission by lowering
//! an atom carries `e^{i(ν−1)t}`, by raising it `e^{i(ν+1)t}`. Symmetrized
//! over the photon labels the time factors are
//!
//! ```text
//! double from |EE⟩:  T(ν1−1, ν2+1) + T(ν2−1, ν1+1)
//! double from |GG⟩:  T(ν1+1, ν2−1) + T(ν2+1, ν1−1)
//! pair from |EE⟩:    F(ν1−1) F(ν2−1)
//! pair from |GG⟩:    F(ν1+1) F(ν2+1)
//! ```
//!
//! with `T(a, b) = ∫∫_{t1<t2} e^{i a t1 + i b t2}`. Mode sums over both
//! photons give `W1 W2 (1 + R1 R2)` between amplitudes of the same kind
//! (both photons from one atom, or one from each) and `W1 W2 (R1 + R2)`
//! between different kinds. Pair-pair entries factorize into products of
//! single-photon overlaps; the rest need a two-dimensional quadrature,
//! which limits this path to moderate `τ ν_max`.

use crate::angular::Orientation;
use crate::overlaps::{window, SinglePhotonOverlaps, OVERLAP_NORMALIZATION};
use crate::KernelError;
use esd_model::{CouplingParams, Cutoff, EvalPoint, TruncationPolicy, TwoPhotonGram};
use esd_numerics::{Complex64, GaussLegendre};
use std::f64::consts::PI;

/// Largest number of quadrature nodes per frequency axis.
pub const DEFAULT_NODE_BUDGET: usize = 4096;

const PANEL_ORDER: usize = 8;
const MIN_PANELS: usize = 32;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// `∫₀^τ t^k e^{ibt} dt` for `k = 0..=K`.
fn moments<const K: usize>(b: f64, tau: f64) -> [Complex64; K] {
    let mut m = [Complex64::new(0.0, 0.0); K];
    let bt = b * tau;
    if bt.abs() <= 8.0 {
        for (k, slot) in m.iter_mut().enumerate() {
            // τ^{k+1} Σ_j (ibτ)^j / (j! (k+j+1))
            let mut term = Complex64::new(1.0, 0.0);
            let mut sum = Complex64::new(1.0 / (k + 1) as f64, 0.0);
            for j in 1..80 {
                term *= I * bt / j as f64;
                let add = term / (k + j + 1) as f64;
                sum += add;
                if add.norm() < 1e-17 * sum.norm() {
                    break;
                }
            }
            *slot = sum * tau.powi(k as i32 + 1);
        }
    } else {
        let e = Complex64::from_polar(1.0, bt);
        m[0] = window(b, tau);
        for k in 1..K {
            m[k] = (e * tau.powi(k as i32) - m[k - 1] * k as f64) / (I * b);
        }
    }
    m
}

/// Time-ordered double window `T(a, b)`.
pub fn ordered_window(a: f64, b: f64, tau: f64) -> Complex64 {
    if (a * tau).abs() > 1e-3 {
        return (window(a + b, tau) - window(b, tau)) / (I * a);
    }
    // Σ_n (ia)^n/(n+1)! ∫ t^{n+1} e^{ibt}
    let m = moments::<6>(b, tau);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut coef = Complex64::new(1.0, 0.0);
    for n in 0..5 {
        coef = if n == 0 { coef } else { coef * I * a / (n + 1) as f64 };
        sum += coef * m[n + 1];
    }
    sum
}

/// Two-photon Gram matrix per orientation.
pub fn two_photon_by_orientation(
    point: &EvalPoint,
    coupling: &CouplingParams,
    cutoff: &Cutoff,
    orientations: &[Orientation],
    single: &[SinglePhotonOverlaps],
    node_budget: usize,
) -> Result<Vec<TwoPhotonGram>, KernelError> {
    let (z, tau, nu_max) = (point.z(), point.tau(), cutoff.nu_max());
    let fastest = (tau + z).max(1.0);
    let panels = ((nu_max * fastest / (2.0 * PI)).ceil() as usize).max(MIN_PANELS);
    let n = panels * PANEL_ORDER;
    if n > node_budget {
        return Err(KernelError::Budget { needed: n, limit: node_budget });
    }
    let nodes = GaussLegendre::shared(PANEL_ORDER).composite_points(0.0, nu_max, panels);
    let w: Vec<f64> = nodes.iter().map(|(nu, wt)| wt * OVERLAP_NORMALIZATION * nu * nu * nu).collect();
    let f_lo: Vec<Complex64> = nodes.iter().map(|(nu, _)| window(nu - 1.0, tau)).collect();
    let f_hi: Vec<Complex64> = nodes.iter().map(|(nu, _)| window(nu + 1.0, tau)).collect();
    let r: Vec<Vec<f64>> =
        orientations.iter().map(|o| nodes.iter().map(|(nu, _)| 1.5 * o.kernel(nu * z)).collect()).collect();

    // accumulated entries involving the double-emission amplitudes:
    // [ff, ff′, fg, fg′, f′f′, f′g, f′g′] per orientation
    let mut acc = vec![[Complex64::new(0.0, 0.0); 7]; orientations.len()];
    for i in 0..n {
        let nu1 = nodes[i].0;
        for j in 0..n {
            let nu2 = nodes[j].0;
            let ww = w[i] * w[j];
            let both = window(nu1 + nu2, tau);
            let t_ab = |a: f64, b: f64, fb: Complex64| {
                if (a * tau).abs() > 1e-3 {
                    (both - fb) / (I * a)
                } else {
                    ordered_window(a, b, tau)
                }
            };
            let f = t_ab(nu1 - 1.0, nu2 + 1.0, f_hi[j]) + t_ab(nu2 - 1.0, nu1 + 1.0, f_hi[i]);
            let fp = t_ab(nu1 + 1.0, nu2 - 1.0, f_lo[j]) + t_ab(nu2 + 1.0, nu1 - 1.0, f_lo[i]);
            let g = f_lo[i] * f_lo[j];
            let gp = f_hi[i] * f_hi[j];
            let (fc, fpc) = (f.conj(), fp.conj());
            let prods = [f * fc, f * fpc, f * g.conj(), f * gp.conj(), fp * fpc, fp * g.conj(), fp * gp.conj()];
            for (o, slot) in acc.iter_mut().enumerate() {
                let (r1, r2) = (r[o][i], r[o][j]);
                let same = ww * (1.0 + r1 * r2);
                let mixed = ww * (r1 + r2);
                let factors = [same, same, mixed, mixed, same, mixed, mixed];
                for k in 0..7 {
                    slot[k] += prods[k] * factors[k];
                }
            }
        }
    }

    let k2 = coupling.kappa() * coupling.kappa();
    Ok(acc
        .iter()
        .zip(single)
        .map(|(a, s)| {
            let a = a.map(|v| v * k2);
            let mut g = TwoPhotonGram::zero();
            let set = |g: &mut TwoPhotonGram, i: usize, j: usize, v: Complex64| {
                g.gram[i][j] = v;
                g.gram[j][i] = v.conj();
            };
            set(&mut g, 0, 0, Complex64::new(a[0].re, 0.0));
            set(&mut g, 0, 1, a[1]);
            set(&mut g, 0, 2, a[2]);
            set(&mut g, 0, 3, a[3]);
            set(&mut g, 1, 1, Complex64::new(a[4].re, 0.0));
            set(&mut g, 1, 2, a[5]);
            set(&mut g, 1, 3, a[6]);
            // pair-pair entries from single-photon sums
            let pair = s.emission_sq * s.emission_sq + s.emission_cross.norm_sqr();
            let pair_ground = s.counter_emission_sq * s.counter_emission_sq + s.counter_emission_cross.norm_sqr();
            let pair_mixed = s.mixed_local * s.mixed_local + s.mixed_cross * s.mixed_cross;
            set(&mut g, 2, 2, Complex64::new(pair, 0.0));
            set(&mut g, 2, 3, pair_mixed);
            set(&mut g, 3, 3, Complex64::new(pair_ground, 0.0));
            g
        })
        .collect())
}

/// Refuses every policy except the one that keeps two-photon terms.
pub fn require_two_photon_policy(policy: TruncationPolicy) -> Result<(), KernelError> {
    if policy.keeps_two_photon() {
        Ok(())
    } else {
        Err(KernelError::Policy { policy })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ordered_by_quadrature(a: f64, b: f64, tau: f64) -> Complex64 {
        // inner integral in closed form, outer one by Gauss-Legendre
        let gl = GaussLegendre::shared(32);
        gl.composite(0.0, tau, 64, |t2| window(a, t2) * Complex64::from_polar(1.0, b * t2))
    }

    #[test]
    fn ordered_window_against_quadrature() {
        for (a, b, tau) in [(0.7, 2.1, 5.0), (1e-7, 3.0, 4.0), (-2.0, 1e-9, 3.0), (2e-5, -1.5, 20.0), (0.0, 0.0, 2.0)] {
            let want = ordered_by_quadrature(a, b, tau);
            let got = ordered_window(a, b, tau);
            assert!((got - want).norm() < 1e-10 * want.norm(), "{a} {b} {tau}: {got} vs {want}");
        }
    }

    #[test]
    fn symmetrized_pair_is_a_product() {
        let (a, b, tau) = (0.4, -1.3, 6.0);
        let sum = ordered_window(a, b, tau) + ordered_window(b, a, tau);
        let want = window(a, tau) * window(b, tau);
        assert!((sum - want).norm() < 1e-12 * want.norm());
    }
}
