//! Reduced density matrices assembled from an [`AmplitudeSet`].
//!
//! Entries are stored unnormalized together with their trace, so measures
//! divide by the norm exactly where the closed forms do.
//!
//! The atom-field state uses a three-level photon factor (0, 1, 2 photons).
//! Each photon-number level stands for the normalized photon state of the
//! branch it appears in, so a coherence between two levels is the product
//! of the branch amplitudes' norms (and phases for the vacuum level).

use crate::amplitudes::{AmplitudeSet, TwoPhotonChannel as Tp};
use crate::params::{InitialWeights, TruncationPolicy};
use nalgebra::{Matrix2, Matrix3, Matrix4, SMatrix};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub type Matrix6 = SMatrix<Complex64, 6, 6>;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Two-atom X-state in the basis {EE, EG, GE, GG}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XState {
    pub rho11: f64,
    pub rho22: f64,
    pub rho33: f64,
    pub rho44: f64,
    pub rho14: Complex64,
    pub rho23: Complex64,
    pub norm: f64,
}

impl XState {
    pub fn with_norm(rho11: f64, rho22: f64, rho33: f64, rho44: f64, rho14: Complex64, rho23: Complex64) -> Self {
        Self { rho11, rho22, rho33, rho44, rho14, rho23, norm: rho11 + rho22 + rho33 + rho44 }
    }

    /// Normalized 4×4 density matrix.
    pub fn to_matrix(&self) -> Matrix4<Complex64> {
        let n = self.norm;
        let mut m = Matrix4::from_element(ZERO);
        m[(0, 0)] = re(self.rho11 / n);
        m[(1, 1)] = re(self.rho22 / n);
        m[(2, 2)] = re(self.rho33 / n);
        m[(3, 3)] = re(self.rho44 / n);
        m[(0, 3)] = self.rho14 / n;
        m[(3, 0)] = self.rho14.conj() / n;
        m[(1, 2)] = self.rho23 / n;
        m[(2, 1)] = self.rho23.conj() / n;
        m
    }
}

/// Atom ⊗ photon-number state in the basis {E0, E1, E2, G0, G1, G2}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitQutritState {
    /// ρ′11 … ρ′66.
    pub diag: [f64; 6],
    pub c13: Complex64,
    pub c15: Complex64,
    pub c24: Complex64,
    pub c26: Complex64,
    pub c35: Complex64,
    pub c46: Complex64,
    pub norm: f64,
}

impl QubitQutritState {
    /// Unnormalized 6×6 matrix (Hermitian by construction).
    pub fn raw_matrix(&self) -> Matrix6 {
        let mut m = Matrix6::from_element(ZERO);
        for (k, d) in self.diag.iter().enumerate() {
            m[(k, k)] = re(*d);
        }
        for (i, j, v) in
            [(0, 2, self.c13), (0, 4, self.c15), (1, 3, self.c24), (1, 5, self.c26), (2, 4, self.c35), (3, 5, self.c46)]
        {
            m[(i, j)] = v;
            m[(j, i)] = v.conj();
        }
        m
    }

    pub fn to_matrix(&self) -> Matrix6 {
        self.raw_matrix() / re(self.norm)
    }
}

/// Single-atom state; diagonal because the initial state is an X-state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitState {
    pub excited: f64,
    pub ground: f64,
    pub norm: f64,
}

impl QubitState {
    pub fn to_matrix(&self) -> Matrix2<Complex64> {
        Matrix2::new(re(self.excited / self.norm), ZERO, ZERO, re(self.ground / self.norm))
    }
}

/// Photon-number state of the field; only 0 ↔ 2 photons are coherent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QutritState {
    pub vacuum: f64,
    pub one: f64,
    pub two: f64,
    pub vacuum_two: Complex64,
    pub norm: f64,
}

impl QutritState {
    pub fn to_matrix(&self) -> Matrix3<Complex64> {
        let n = self.norm;
        let mut m = Matrix3::from_element(ZERO);
        m[(0, 0)] = re(self.vacuum / n);
        m[(1, 1)] = re(self.one / n);
        m[(2, 2)] = re(self.two / n);
        m[(0, 2)] = self.vacuum_two / n;
        m[(2, 0)] = self.vacuum_two.conj() / n;
        m
    }
}

/// Amplitudes of the vacuum sector and the branch norms of the photon sectors.
#[derive(Debug, Clone, Copy)]
struct Sectors {
    /// ⟨EE0|ψ⟩ and ⟨GG0|ψ⟩, possibly truncated.
    ee: Complex64,
    gg: Complex64,
    /// |⟨EE0|ψ⟩|², |⟨GG0|ψ⟩|² consistent with the policy.
    ee_sq: f64,
    gg_sq: f64,
    /// ⟨EE0|ψ⟩⟨GG0|ψ⟩*.
    ee_gg: Complex64,
    /// One-photon weight with atoms in EG (equal to GE).
    one: f64,
    /// One-photon coherence EG ↔ GE.
    one_swap: Complex64,
    /// Two-photon weights with atoms in EE and in GG and their coherence.
    two_ee: f64,
    two_gg: f64,
    two_ee_gg: Complex64,
}

fn sectors(amps: &AmplitudeSet, w: &InitialWeights, policy: TruncationPolicy) -> Sectors {
    let (p, q) = (w.p(), 1.0 - w.p());
    let (al, be) = (w.alpha(), w.beta());
    let a = amps.self_energy_excited;
    let ap = amps.self_energy_ground;
    let b = amps.exchange_lowering;
    let bp = amps.exchange_raising;
    let one_c = re(1.0);

    let ee_full = (one_c + a) * al + bp * be;
    let gg_full = b * al + (one_c + ap) * be;
    let (ee_sq, gg_sq, ee_gg) = match policy {
        TruncationPolicy::SecondOrder => (
            p * (1.0 + 2.0 * a.re) + 2.0 * al * be * bp.re,
            q * (1.0 + 2.0 * ap.re) + 2.0 * al * be * b.re,
            (one_c + a + ap.conj()) * (al * be) + b.conj() * p + bp * q,
        ),
        _ => (ee_full.norm_sqr(), gg_full.norm_sqr(), ee_full * gg_full.conj()),
    };

    let one = p * amps.emission_sq + q * amps.counter_emission_sq + 2.0 * al * be * amps.mixed_cross.re;
    let one_swap = amps.emission_cross * p + amps.counter_emission_cross * q + re(2.0 * al * be * amps.mixed_local.re);

    let (two_ee, two_gg, two_ee_gg) = match (&amps.two_photon, policy.keeps_two_photon()) {
        (Some(g), true) => {
            let ee2 = [(Tp::DoubleFromExcited, al), (Tp::PairFromGround, be)];
            let gg2 = [(Tp::PairFromExcited, al), (Tp::DoubleFromGround, be)];
            (g.quadratic(&ee2, &ee2).re, g.quadratic(&gg2, &gg2).re, g.quadratic(&ee2, &gg2))
        }
        _ => (0.0, 0.0, ZERO),
    };

    Sectors { ee: ee_full, gg: gg_full, ee_sq, gg_sq, ee_gg, one, one_swap, two_ee, two_gg, two_ee_gg }
}

/// Two-atom state after tracing out the field.
pub fn build_rho_ab(amps: &AmplitudeSet, w: &InitialWeights, policy: TruncationPolicy) -> XState {
    let s = sectors(amps, w, policy);
    XState::with_norm(s.ee_sq + s.two_ee, s.one, s.one, s.gg_sq + s.two_gg, s.ee_gg + s.two_ee_gg, s.one_swap)
}

/// One atom together with the photon-number content of the field.
pub fn build_rho_af(amps: &AmplitudeSet, w: &InitialWeights, policy: TruncationPolicy) -> QubitQutritState {
    let s = sectors(amps, w, policy);
    let one_n = s.one.max(0.0).sqrt();
    let two_ee_n = s.two_ee.max(0.0).sqrt();
    let two_gg_n = s.two_gg.max(0.0).sqrt();
    // vacuum amplitude phases survive in coherences with the vacuum level;
    // under second order the modulus follows the truncated weight
    let (ee, gg) = match policy {
        TruncationPolicy::SecondOrder => {
            (with_modulus(s.ee, s.ee_sq.max(0.0).sqrt()), with_modulus(s.gg, s.gg_sq.max(0.0).sqrt()))
        }
        _ => (s.ee, s.gg),
    };
    let diag = [s.ee_sq, s.one, s.two_ee, s.gg_sq, s.one, s.two_gg];
    QubitQutritState {
        diag,
        c13: ee * two_ee_n,
        c15: ee * one_n,
        c24: gg.conj() * one_n,
        c26: re(one_n * two_gg_n),
        c35: re(two_ee_n * one_n),
        c46: gg * two_gg_n,
        // summed in the order of the two-atom trace so that N′ = N bit for bit
        norm: (diag[0] + diag[2]) + diag[1] + diag[4] + (diag[3] + diag[5]),
    }
}

fn with_modulus(z: Complex64, m: f64) -> Complex64 {
    let n = z.norm();
    if n > 0.0 {
        z * (m / n)
    } else {
        re(m)
    }
}

/// One atom alone.
pub fn build_rho_a(amps: &AmplitudeSet, w: &InitialWeights, policy: TruncationPolicy) -> QubitState {
    let af = build_rho_af(amps, w, policy);
    reduce_af_to_atom(&af)
}

/// The field alone.
pub fn build_rho_f(amps: &AmplitudeSet, w: &InitialWeights, policy: TruncationPolicy) -> QutritState {
    let af = build_rho_af(amps, w, policy);
    reduce_af_to_field(&af)
}

/// Trace of the atom-field state over the photon-number factor.
pub fn reduce_af_to_atom(af: &QubitQutritState) -> QubitState {
    let d = af.diag;
    let excited = d[0] + d[1] + d[2];
    let ground = d[3] + d[4] + d[5];
    QubitState { excited, ground, norm: excited + ground }
}

/// Trace of the atom-field state over the atom.
pub fn reduce_af_to_field(af: &QubitQutritState) -> QutritState {
    let d = af.diag;
    let vacuum = d[0] + d[3];
    let one = d[1] + d[4];
    let two = d[2] + d[5];
    QutritState { vacuum, one, two, vacuum_two: af.c13 + af.c46, norm: vacuum + one + two }
}

/// Trace of the two-atom state over atom B.
pub fn reduce_ab_to_atom(ab: &XState) -> QubitState {
    let excited = ab.rho11 + ab.rho22;
    let ground = ab.rho33 + ab.rho44;
    QubitState { excited, ground, norm: excited + ground }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_time_is_the_initial_state() {
        let w = InitialWeights::new(0.98).unwrap();
        let ab = build_rho_ab(&AmplitudeSet::zero(), &w, TruncationPolicy::OnePhoton);
        assert!((ab.rho11 - 0.98).abs() < 1e-15);
        assert!((ab.rho44 - 0.02).abs() < 1e-15);
        assert!((ab.rho14.re - (0.98f64 * 0.02).sqrt()).abs() < 1e-15);
        assert_eq!(ab.rho22, 0.0);
        assert!((ab.norm - 1.0).abs() < 1e-15);

        let a = build_rho_a(&AmplitudeSet::zero(), &w, TruncationPolicy::OnePhoton);
        assert!((a.excited - 0.98).abs() < 1e-15 && (a.ground - 0.02).abs() < 1e-15);
        let f = build_rho_f(&AmplitudeSet::zero(), &w, TruncationPolicy::OnePhoton);
        assert_eq!((f.one, f.two), (0.0, 0.0));
        assert!((f.vacuum - 1.0).abs() < 1e-15);
    }

    #[test]
    fn separable_at_p_one() {
        let w = InitialWeights::new(1.0).unwrap();
        let ab = build_rho_ab(&AmplitudeSet::zero(), &w, TruncationPolicy::SecondOrder);
        assert_eq!((ab.rho11, ab.rho44), (1.0, 0.0));
        assert_eq!(ab.rho14, ZERO);
    }
}
