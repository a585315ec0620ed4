//! Second-order amplitudes and mode-summed overlaps of the evolved state.
//!
//! Starting from |EE0⟩ the state acquires a vacuum correction
//! `self_energy_excited`, an exchange term towards |GG0⟩, one-photon
//! emission amplitudes `u_A`, `u_B` and two-photon amplitudes. Starting
//! from |GG0⟩ the analogous counter-rotating quantities appear. Photon
//! amplitudes only enter the reduced states through mode sums, which is
//! what this module stores.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Index into [`TwoPhotonGram`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwoPhotonChannel {
    /// One atom emits twice, starting from |EE⟩ (usually written f).
    DoubleFromExcited = 0,
    /// One atom emits twice, starting from |GG⟩ (f′).
    DoubleFromGround = 1,
    /// Each atom emits once, |EE⟩ → |GG⟩ + 2 photons (g).
    PairFromExcited = 2,
    /// Each atom emits once, |GG⟩ → |EE⟩ + 2 photons (g′).
    PairFromGround = 3,
}

/// Gram matrix `Σ_pairs A_i A_j*` of the four two-photon amplitudes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoPhotonGram {
    pub gram: [[Complex64; 4]; 4],
}

impl TwoPhotonGram {
    pub fn zero() -> Self {
        Self { gram: [[Complex64::new(0.0, 0.0); 4]; 4] }
    }

    pub fn get(&self, i: TwoPhotonChannel, j: TwoPhotonChannel) -> Complex64 {
        self.gram[i as usize][j as usize]
    }

    /// `Σ |c_i A_i|²`-type quadratic form `Σ_ij c_i c_j* G_ij`.
    pub fn quadratic(&self, lhs: &[(TwoPhotonChannel, f64)], rhs: &[(TwoPhotonChannel, f64)]) -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        for (i, ci) in lhs {
            for (j, cj) in rhs {
                s += self.get(*i, *j) * (ci * cj);
            }
        }
        s
    }

    pub fn double_sq(&self) -> f64 {
        self.get(TwoPhotonChannel::DoubleFromExcited, TwoPhotonChannel::DoubleFromExcited).re
    }

    pub fn double_ground_sq(&self) -> f64 {
        self.get(TwoPhotonChannel::DoubleFromGround, TwoPhotonChannel::DoubleFromGround).re
    }

    pub fn pair_sq(&self) -> f64 {
        self.get(TwoPhotonChannel::PairFromExcited, TwoPhotonChannel::PairFromExcited).re
    }

    pub fn pair_ground_sq(&self) -> f64 {
        self.get(TwoPhotonChannel::PairFromGround, TwoPhotonChannel::PairFromGround).re
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = *self;
        for row in out.gram.iter_mut() {
            for v in row.iter_mut() {
                *v *= factor;
            }
        }
        out
    }
}

/// Every scalar the reduced density matrices need.
///
/// Usual symbols, for orientation: `self_energy_excited` = a,
/// `self_energy_ground` = a′, `exchange_lowering` = b,
/// `exchange_raising` = b′, `emission_sq` = |u|², `counter_emission_sq` = |v|²,
/// `mixed_cross` = l, `emission_cross` = u_B u_A*, `counter_emission_cross` =
/// v_A v_B*, `mixed_local` = u v*.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeSet {
    pub self_energy_excited: Complex64,
    pub self_energy_ground: Complex64,
    /// |EE0⟩ → |GG0⟩.
    pub exchange_lowering: Complex64,
    /// |GG0⟩ → |EE0⟩; the complex conjugate of the lowering amplitude.
    pub exchange_raising: Complex64,
    /// Σ_k |u_A(k)|² = Σ_k |u_B(k)|².
    pub emission_sq: f64,
    /// Σ_k |v_A(k)|² = Σ_k |v_B(k)|².
    pub counter_emission_sq: f64,
    /// Σ_k u_B(k) v_A(k)* (= Σ_k u_A v_B*).
    pub mixed_cross: Complex64,
    /// Σ_k u_B(k) u_A(k)*.
    pub emission_cross: Complex64,
    /// Σ_k v_A(k) v_B(k)*.
    pub counter_emission_cross: Complex64,
    /// Σ_k u_A(k) v_A(k)* (= Σ_k u_B v_B*).
    pub mixed_local: Complex64,
    pub two_photon: Option<TwoPhotonGram>,
}

impl AmplitudeSet {
    /// Zero interaction time: nothing has happened yet.
    pub fn zero() -> Self {
        let z = Complex64::new(0.0, 0.0);
        Self {
            self_energy_excited: z,
            self_energy_ground: z,
            exchange_lowering: z,
            exchange_raising: z,
            emission_sq: 0.0,
            counter_emission_sq: 0.0,
            mixed_cross: z,
            emission_cross: z,
            counter_emission_cross: z,
            mixed_local: z,
            two_photon: None,
        }
    }

    /// Largest relative violation of the Cauchy-Schwarz bounds over the
    /// photon-mode sum (0 when all hold).
    pub fn cauchy_schwarz_excess(&self) -> f64 {
        let u2 = self.emission_sq;
        let v2 = self.counter_emission_sq;
        let checks = [
            (self.mixed_cross.norm_sqr(), u2 * v2),
            (self.mixed_local.norm_sqr(), u2 * v2),
            (self.emission_cross.norm_sqr(), u2 * u2),
            (self.counter_emission_cross.norm_sqr(), v2 * v2),
        ];
        checks
            .iter()
            .map(|(lhs, rhs)| {
                let scale = rhs.max(f64::MIN_POSITIVE);
                ((lhs - rhs) / scale).max(0.0)
            })
            .fold(0.0, f64::max)
    }

    /// Entry-wise mean, used for channel averaging.
    pub fn mean(a: &Self, b: &Self) -> Self {
        let h = |x: Complex64, y: Complex64| (x + y) * 0.5;
        Self {
            self_energy_excited: h(a.self_energy_excited, b.self_energy_excited),
            self_energy_ground: h(a.self_energy_ground, b.self_energy_ground),
            exchange_lowering: h(a.exchange_lowering, b.exchange_lowering),
            exchange_raising: h(a.exchange_raising, b.exchange_raising),
            emission_sq: 0.5 * (a.emission_sq + b.emission_sq),
            counter_emission_sq: 0.5 * (a.counter_emission_sq + b.counter_emission_sq),
            mixed_cross: h(a.mixed_cross, b.mixed_cross),
            emission_cross: h(a.emission_cross, b.emission_cross),
            counter_emission_cross: h(a.counter_emission_cross, b.counter_emission_cross),
            mixed_local: h(a.mixed_local, b.mixed_local),
            two_photon: match (&a.two_photon, &b.two_photon) {
                (Some(x), Some(y)) => {
                    let mut g = TwoPhotonGram::zero();
                    for i in 0..4 {
                        for j in 0..4 {
                            g.gram[i][j] = h(x.gram[i][j], y.gram[i][j]);
                        }
                    }
                    Some(g)
                }
                _ => None,
            },
        }
    }
}
