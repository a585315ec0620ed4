//! Mode-summed single-photon overlaps.
//!
//! Every overlap is a frequency integral
//!
//! ```text
//! ∫₀^{ν_max} W(ν) R(ν) T(ν) dν,   W(ν) = c₀ κ ν³
//! ```
//!
//! with `R = 1` for same-atom sums, `R = (3/2) τ_ch(νz)` across atoms, and a
//! time factor `T` built from the window `F(y; τ) = (e^{iyτ} − 1)/(iy)`:
//! `|F(ν−1)|²` for emission, `|F(ν+1)|²` for counter-rotating emission and
//! `F(ν−1) F(ν+1)*` for the mixed overlaps.
//!
//! When the integrand has few oscillations over `[0, ν_max]` it is summed
//! directly with one Gauss-Legendre panel per period. Otherwise the range is
//! split: a window around the resonance `ν = 1` is still summed per period
//! on the stable product form, and outside it `T` and `R` are expanded into
//! exponentials `g(ν) e^{iων}` with smooth `g`, each integrated by adaptive
//! Filon quadrature. The second route is what makes `τ ~ 10⁷` tractable.
//!
//! Both routes integrate over the detuning `u = ν − 1`: near resonance the
//! window panels are narrower than the spacing of doubles around `ν = 1`.

use crate::angular::Orientation;
use crate::KernelError;
use esd_model::{CouplingParams, Cutoff, DipoleChannel, EvalPoint};
use esd_numerics::quad::oscillatory;
use esd_numerics::{Complex64, GaussLegendre, QuadOptions};
use std::f64::consts::PI;

/// `c₀` in `W(ν) = c₀ κ ν³`; matched to the discrete-mode sums once and frozen.
pub const OVERLAP_NORMALIZATION: f64 = 2.0 / (3.0 * PI);

/// Above this many oscillation periods the split route is taken.
pub const DIRECT_PERIOD_LIMIT: f64 = 20_000.0;

const PANEL_ORDER: usize = 16;
const MIN_PANELS: usize = 64;
/// Half-width of the resonance window in units of the fastest period.
const WINDOW_PERIODS: f64 = 100.0;
/// Below this separation the cross kernel is kept in product form.
const SMALL_SEPARATION: f64 = 1.0;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Which window product enters the integrand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeFactor {
    Emission,
    CounterEmission,
    Mixed,
}

const TIME_FACTORS: [TimeFactor; 3] = [TimeFactor::Emission, TimeFactor::CounterEmission, TimeFactor::Mixed];

/// The six overlaps for one channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SinglePhotonOverlaps {
    pub emission_sq: f64,
    pub counter_emission_sq: f64,
    pub mixed_local: Complex64,
    pub emission_cross: Complex64,
    pub counter_emission_cross: Complex64,
    pub mixed_cross: Complex64,
}

/// `F(y; τ)` in a form that stays accurate as `yτ → 0`.
pub fn window(y: f64, tau: f64) -> Complex64 {
    let h = 0.5 * y * tau;
    let sinc = if h.abs() < 1e-4 { 1.0 - h * h / 6.0 } else { h.sin() / h };
    Complex64::from_polar(tau * sinc, h)
}

/// `T` at detuning `u = ν − 1`.
fn time_product(tf: TimeFactor, u: f64, tau: f64) -> Complex64 {
    match tf {
        TimeFactor::Emission => Complex64::new(window(u, tau).norm_sqr(), 0.0),
        TimeFactor::CounterEmission => Complex64::new(window(u + 2.0, tau).norm_sqr(), 0.0),
        TimeFactor::Mixed => window(u, tau) * window(u + 2.0, tau).conj(),
    }
}

/// `T(u)` as three exponentials `c(u) e^{iωu}`, `ω ∈ {0, τ, −τ}`.
fn time_waves(tf: TimeFactor, tau: f64) -> [(f64, Box<dyn Fn(f64) -> Complex64>); 3] {
    let one = Complex64::new(1.0, 0.0);
    let e2m = Complex64::from_polar(1.0, -2.0 * tau);
    let e2p = Complex64::from_polar(1.0, 2.0 * tau);
    match tf {
        TimeFactor::Emission => [
            (0.0, Box::new(|u: f64| Complex64::new(2.0 / (u * u), 0.0))),
            (tau, Box::new(move |u: f64| -one / (u * u))),
            (-tau, Box::new(move |u: f64| -one / (u * u))),
        ],
        TimeFactor::CounterEmission => [
            (0.0, Box::new(|u: f64| Complex64::new(2.0 / (u + 2.0).powi(2), 0.0))),
            (tau, Box::new(move |u: f64| -e2p / (u + 2.0).powi(2))),
            (-tau, Box::new(move |u: f64| -e2m / (u + 2.0).powi(2))),
        ],
        TimeFactor::Mixed => [
            (0.0, Box::new(move |u: f64| (e2m + 1.0) / (u * (u + 2.0)))),
            (tau, Box::new(move |u: f64| -one / (u * (u + 2.0)))),
            (-tau, Box::new(move |u: f64| -e2m / (u * (u + 2.0)))),
        ],
    }
}

/// Spatial part of the integrand without the `c₀κ` prefactor.
#[derive(Debug, Clone, Copy)]
enum Spatial {
    Local,
    Cross(Orientation),
}

impl Spatial {
    fn value(self, nu: f64, z: f64) -> f64 {
        let n3 = nu * nu * nu;
        match self {
            Spatial::Local => n3,
            Spatial::Cross(o) => 1.5 * n3 * o.kernel(nu * z),
        }
    }

    fn waves(self, z: f64) -> Vec<(f64, Box<dyn Fn(f64) -> Complex64>)> {
        match self {
            Spatial::Local => vec![(0.0, Box::new(|nu: f64| Complex64::new(nu * nu * nu, 0.0)))],
            Spatial::Cross(o) if z < SMALL_SEPARATION => {
                vec![(0.0, Box::new(move |nu: f64| Complex64::new(1.5 * nu * nu * nu * o.kernel(nu * z), 0.0)))]
            }
            Spatial::Cross(o) => vec![
                (z, Box::new(move |nu: f64| o.wave_coefficient(nu, z) * 0.75)),
                (-z, Box::new(move |nu: f64| o.wave_coefficient(nu, z).conj() * 0.75)),
            ],
        }
    }
}

struct Plan {
    tau: f64,
    z: f64,
    nu_max: f64,
    fastest: f64,
    spatial: Vec<Spatial>,
}

impl Plan {
    fn len(&self) -> usize {
        3 * self.spatial.len()
    }

    fn integrand(&self, u: f64, out: &mut [Complex64]) {
        let t = TIME_FACTORS.map(|tf| time_product(tf, u, self.tau));
        for (s, sp) in self.spatial.iter().enumerate() {
            let k = sp.value(1.0 + u, self.z);
            for (j, tv) in t.iter().enumerate() {
                out[3 * s + j] = tv * k;
            }
        }
    }

    /// One Gauss-Legendre panel per period of the fastest oscillation, over
    /// a detuning range.
    fn per_period(&self, lo: f64, hi: f64, min_panels: usize) -> Vec<Complex64> {
        let periods = (hi - lo) * self.fastest / (2.0 * PI);
        let panels = (periods.ceil() as usize).max(min_panels);
        let gl = GaussLegendre::shared(PANEL_ORDER);
        let mut acc = vec![ZERO; self.len()];
        let mut buf = vec![ZERO; self.len()];
        let h = (hi - lo) / panels as f64;
        for p in 0..panels {
            let a = lo + h * p as f64;
            let c = a + 0.5 * h;
            for (s, w) in gl.nodes().iter().zip(gl.weights()) {
                self.integrand(c + 0.5 * h * s, &mut buf);
                let wt = 0.5 * h * w;
                for (a, b) in acc.iter_mut().zip(&buf) {
                    *a += b * wt;
                }
            }
        }
        acc
    }

    fn split(&self, opts: &QuadOptions) -> Result<Vec<Complex64>, KernelError> {
        let delta = (WINDOW_PERIODS * 2.0 * PI / self.fastest).min(0.5);
        let top = self.nu_max - 1.0;
        let win_hi = delta.min(top);
        let mut acc = self.per_period(-delta, win_hi, 8);

        let mut left = vec![-delta];
        let mut step = delta;
        while 2.0 * step < 1.0 {
            step *= 2.0;
            left.push(-step);
        }
        left.push(-1.0);
        left.reverse();
        let mut right = vec![win_hi];
        let mut step = delta;
        while 2.0 * step < top {
            step *= 2.0;
            right.push(step);
        }
        if *right.last().unwrap() < top {
            right.push(top);
        }

        for (s, sp) in self.spatial.iter().enumerate() {
            let kernel = sp.waves(self.z);
            for (j, tf) in TIME_FACTORS.iter().enumerate() {
                let time = time_waves(*tf, self.tau);
                for (wk, gk) in &kernel {
                    // e^{iω_k ν} = e^{iω_k} e^{iω_k u}
                    let shift = Complex64::from_polar(1.0, *wk);
                    for (wt, gt) in &time {
                        let g = |u: f64| gk(1.0 + u) * gt(u);
                        for bp in [&left, &right] {
                            if bp.len() >= 2 {
                                acc[3 * s + j] += shift * oscillatory(g, wk + wt, bp, opts)?;
                            }
                        }
                    }
                }
            }
        }
        Ok(acc)
    }
}

/// Same-atom overlaps followed by cross-atom overlaps per orientation,
/// each triple ordered as emission, counter-emission, mixed. Without the
/// `c₀κ` prefactor.
fn integrate(
    point: &EvalPoint,
    cutoff: &Cutoff,
    orientations: &[Orientation],
    opts: &QuadOptions,
) -> Result<Vec<Complex64>, KernelError> {
    let (z, tau, nu_max) = (point.z(), point.tau(), cutoff.nu_max());
    let mut spatial = vec![Spatial::Local];
    spatial.extend(orientations.iter().map(|o| Spatial::Cross(*o)));
    let fastest = tau + if orientations.is_empty() { 0.0 } else { z };
    let plan = Plan { tau, z, nu_max, fastest: fastest.max(1.0), spatial };
    let periods = nu_max * plan.fastest / (2.0 * PI);
    if periods <= DIRECT_PERIOD_LIMIT {
        Ok(plan.per_period(-1.0, nu_max - 1.0, MIN_PANELS))
    } else {
        plan.split(opts)
    }
}

/// Overlaps for the explicit route choice; exposed so tests can compare the
/// direct and split quadratures on the same point.
pub fn overlaps_with_route(
    point: &EvalPoint,
    coupling: &CouplingParams,
    cutoff: &Cutoff,
    orientation: Orientation,
    split: bool,
    opts: &QuadOptions,
) -> Result<SinglePhotonOverlaps, KernelError> {
    let (z, tau, nu_max) = (point.z(), point.tau(), cutoff.nu_max());
    let spatial = vec![Spatial::Local, Spatial::Cross(orientation)];
    let plan = Plan { tau, z, nu_max, fastest: (tau + z).max(1.0), spatial };
    let raw = if split { plan.split(opts)? } else { plan.per_period(-1.0, nu_max - 1.0, MIN_PANELS) };
    Ok(assemble(&raw, 0, OVERLAP_NORMALIZATION * coupling.kappa()))
}

fn assemble(raw: &[Complex64], cross: usize, scale: f64) -> SinglePhotonOverlaps {
    let c = 3 * (cross + 1);
    SinglePhotonOverlaps {
        emission_sq: raw[0].re * scale,
        counter_emission_sq: raw[1].re * scale,
        mixed_local: raw[2] * scale,
        emission_cross: Complex64::new(raw[c].re * scale, 0.0),
        counter_emission_cross: Complex64::new(raw[c + 1].re * scale, 0.0),
        mixed_cross: raw[c + 2] * scale,
    }
}

/// Per-orientation overlaps; the same-atom entries are shared.
pub fn overlaps_by_orientation(
    point: &EvalPoint,
    coupling: &CouplingParams,
    cutoff: &Cutoff,
    orientations: &[Orientation],
    opts: &QuadOptions,
) -> Result<Vec<SinglePhotonOverlaps>, KernelError> {
    let raw = integrate(point, cutoff, orientations, opts)?;
    let scale = OVERLAP_NORMALIZATION * coupling.kappa();
    Ok((0..orientations.len()).map(|k| assemble(&raw, k, scale)).collect())
}

/// The six single-photon overlaps for `channel`.
pub fn single_photon_overlaps(
    point: &EvalPoint,
    coupling: &CouplingParams,
    cutoff: &Cutoff,
    channel: DipoleChannel,
    opts: &QuadOptions,
) -> Result<SinglePhotonOverlaps, KernelError> {
    let parts = overlaps_by_orientation(point, coupling, cutoff, Orientation::components(channel), opts)?;
    Ok(mean_overlaps(&parts))
}

pub(crate) fn mean_overlaps(parts: &[SinglePhotonOverlaps]) -> SinglePhotonOverlaps {
    if parts.len() == 1 {
        return parts[0];
    }
    let (a, b) = (&parts[0], &parts[1]);
    let h = |x: Complex64, y: Complex64| (x + y) * 0.5;
    SinglePhotonOverlaps {
        emission_sq: 0.5 * (a.emission_sq + b.emission_sq),
        counter_emission_sq: 0.5 * (a.counter_emission_sq + b.counter_emission_sq),
        mixed_local: h(a.mixed_local, b.mixed_local),
        emission_cross: h(a.emission_cross, b.emission_cross),
        counter_emission_cross: h(a.counter_emission_cross, b.counter_emission_cross),
        mixed_cross: h(a.mixed_cross, b.mixed_cross),
    }
}
