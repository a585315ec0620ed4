//! Second-order evolution on the discrete mode grid and the partial traces.
//!
//! Interaction picture with the transition frequency set to 1. A mode
//! `k = (ν, direction, polarization)` couples to atom `j` with
//! `g_j(k)* = √C(ν) (d̂·ε) e^{-ik·r_j}`, `C(ν) = κν³Δν/(4π²)` times the
//! direction weight, atom A at the origin and atom B at `z ẑ`. Photon
//! amplitudes only enter the reduced states through inner products over
//! the modes, and those factor into a frequency sum of time integrals
//! times angular sums, which is how they are accumulated here.

use crate::grid::{Dipole, DirectionRule, ModeGrid};
use crate::time::{elementary_window, max_rate, TimeGrid};
use crate::two_photon::{two_photon_gram, TwoPhotonGram};
use crate::OracleError;
use esd_model::{
    reduce_af_to_atom, reduce_af_to_field, Complex64, CouplingParams, Cutoff, DipoleChannel, EvalPoint, InitialWeights,
    QubitQutritState, QubitState, QutritState, XState,
};
use rayon::prelude::*;
use std::f64::consts::PI;

type C = Complex64;

const ZERO: C = C { re: 0.0, im: 0.0 };
/// Frequency nodes per parallel work unit; fixed so that the summation
/// order does not depend on the number of workers.
const CHUNK: usize = 256;

/// Which atoms couple to the field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Atoms {
    Both,
    /// Atom B decoupled: the single-atom problem.
    OnlyA,
}

impl Atoms {
    pub(crate) fn couplings(self) -> (f64, f64) {
        match self {
            Atoms::Both => (1.0, 1.0),
            Atoms::OnlyA => (1.0, 0.0),
        }
    }
}

/// Photon-number sectors kept in the evolved state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sectors {
    OnePhoton,
    UpToTwoPhotons,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolveOptions {
    /// Grid refinement; each level doubles every node count.
    pub level: u32,
    pub atoms: Atoms,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        Self { level: 0, atoms: Atoms::Both }
    }
}

/// Second-order amplitudes and one-photon inner products summed over modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeSums {
    pub u_a_sq: f64,
    pub u_b_sq: f64,
    pub v_a_sq: f64,
    pub v_b_sq: f64,
    /// `Σ u_B u_A*`.
    pub ub_ua: C,
    /// `Σ v_A v_B*`.
    pub va_vb: C,
    /// `Σ u_A v_A*`.
    pub ua_va: C,
    /// `Σ u_B v_B*`.
    pub ub_vb: C,
    /// `Σ u_B v_A*`.
    pub ub_va: C,
    /// `Σ u_A v_B*`.
    pub ua_vb: C,
    /// |EE0⟩ → |EE0⟩ after mass renormalization.
    pub stay_excited: C,
    /// |GG0⟩ → |GG0⟩ after mass renormalization.
    pub stay_ground: C,
    /// |EE0⟩ → |GG0⟩.
    pub lowering: C,
    /// |GG0⟩ → |EE0⟩.
    pub raising: C,
    pub two_photon: Option<TwoPhotonGram>,
}

impl ModeSums {
    fn zero() -> Self {
        Self {
            u_a_sq: 0.0,
            u_b_sq: 0.0,
            v_a_sq: 0.0,
            v_b_sq: 0.0,
            ub_ua: ZERO,
            va_vb: ZERO,
            ua_va: ZERO,
            ub_vb: ZERO,
            ub_va: ZERO,
            ua_vb: ZERO,
            stay_excited: ZERO,
            stay_ground: ZERO,
            lowering: ZERO,
            raising: ZERO,
            two_photon: None,
        }
    }

    fn add(&mut self, o: &Self) {
        self.u_a_sq += o.u_a_sq;
        self.u_b_sq += o.u_b_sq;
        self.v_a_sq += o.v_a_sq;
        self.v_b_sq += o.v_b_sq;
        self.ub_ua += o.ub_ua;
        self.va_vb += o.va_vb;
        self.ua_va += o.ua_va;
        self.ub_vb += o.ub_vb;
        self.ub_va += o.ub_va;
        self.ua_vb += o.ua_vb;
        self.stay_excited += o.stay_excited;
        self.stay_ground += o.stay_ground;
        self.lowering += o.lowering;
        self.raising += o.raising;
    }

    /// Mean over dipole orientations; every field is linear in the mode sum.
    pub fn mean(parts: &[ModeSums]) -> Self {
        let mut out = Self::zero();
        for p in parts {
            out.add(p);
        }
        let n = parts.len() as f64;
        let s = |v: &mut C| *v /= n;
        out.u_a_sq /= n;
        out.u_b_sq /= n;
        out.v_a_sq /= n;
        out.v_b_sq /= n;
        for v in [
            &mut out.ub_ua,
            &mut out.va_vb,
            &mut out.ua_va,
            &mut out.ub_vb,
            &mut out.ub_va,
            &mut out.ua_vb,
            &mut out.stay_excited,
            &mut out.stay_ground,
            &mut out.lowering,
            &mut out.raising,
        ] {
            s(v);
        }
        out.two_photon = if parts.iter().all(|p| p.two_photon.is_some()) && !parts.is_empty() {
            let mut g = [[ZERO; 4]; 4];
            for p in parts {
                let pg = p.two_photon.expect("checked above");
                for i in 0..4 {
                    for j in 0..4 {
                        g[i][j] += pg[i][j] / n;
                    }
                }
            }
            Some(g)
        } else {
            None
        };
        out
    }
}

/// Frequency-independent time profiles `F(y; τ − s)` of the inner window.
struct Profiles {
    grid: TimeGrid,
    same: Vec<C>,
    down: Vec<C>,
    up: Vec<C>,
}

impl Profiles {
    fn new(tau: f64, nu_max: f64, level: u32) -> Self {
        let grid = TimeGrid::new(tau, max_rate(nu_max), level);
        let at = |y: f64| grid.nodes().iter().map(|s| elementary_window(y, tau - s)).collect::<Vec<_>>();
        let (same, down, up) = (at(0.0), at(-2.0), at(2.0));
        Self { grid, same, down, up }
    }
}

/// Mode sums for one dipole orientation.
pub fn mode_sums(
    point: &EvalPoint,
    coupling: &CouplingParams,
    cutoff: &Cutoff,
    dipole: Dipole,
    sectors: Sectors,
    opts: &EvolveOptions,
) -> Result<ModeSums, OracleError> {
    let grid = ModeGrid::new(point, cutoff, dipole, opts.level);
    grid.check_completeness()?;
    let tau = point.tau();
    let profiles = Profiles::new(tau, cutoff.nu_max(), opts.level);
    let scale = coupling.kappa() / (4.0 * PI * PI);
    let (ga, gb) = opts.atoms.couplings();
    let atoms = ga + gb;

    let partials: Vec<ModeSums> = grid
        .frequencies()
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut cache: Option<DirectionRule> = None;
            let mut acc = ModeSums::zero();
            let t = &profiles.grid;
            for &(nu, dnu) in chunk {
                let dirs = grid.direction_sums_cached(nu, &mut cache);
                let (local, cross) = (dirs.local, dirs.cross);
                let base = scale * dnu;
                let c = base * nu * nu * nu;
                let lo = t.window(nu - 1.0);
                let hi = t.window(nu + 1.0);
                let (lo2, hi2, mixed) = (lo.norm_sqr(), hi.norm_sqr(), lo * hi.conj());

                acc.u_a_sq += ga * c * local * lo2;
                acc.u_b_sq += gb * c * local * lo2;
                acc.v_a_sq += ga * c * local * hi2;
                acc.v_b_sq += gb * c * local * hi2;
                acc.ub_ua += cross * (ga * gb * c * lo2);
                acc.va_vb += cross.conj() * (ga * gb * c * hi2);
                acc.ua_va += mixed * (ga * c * local);
                acc.ub_vb += mixed * (gb * c * local);
                acc.ub_va += cross * mixed * (ga * gb * c);
                acc.ua_vb += cross.conj() * mixed * (ga * gb * c);

                // emission then reabsorption by the same atom; the counterterm
                // removes the polynomial part of ν³/(ν ∓ 1), i.e. the mass shift
                let stay = t.transform(1.0 - nu, &profiles.same);
                let stay_g = t.transform(-(nu + 1.0), &profiles.same);
                let shift = C::new(0.0, atoms * tau * base * local);
                acc.stay_excited += -stay * (atoms * c * local) - shift * (nu * nu + nu + 1.0);
                acc.stay_ground += -stay_g * (atoms * c * local) - shift * (nu * nu - nu + 1.0);

                // emitted by one atom, absorbed by the other, either order
                let both = (cross + cross.conj()) * (ga * gb * c);
                acc.lowering += -both * t.transform(-(nu + 1.0), &profiles.down);
                acc.raising += -both * t.transform(1.0 - nu, &profiles.up);
            }
            acc
        })
        .collect();

    let mut sums = ModeSums::zero();
    for p in &partials {
        sums.add(p);
    }
    if sectors == Sectors::UpToTwoPhotons {
        sums.two_photon = Some(two_photon_gram(point, coupling, &grid, opts)?);
    }
    Ok(sums)
}

/// Two-photon sector of the evolved state: branch norms and their overlap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPhotonSector {
    /// `‖ψ_EE,2‖²`.
    pub ee_sq: f64,
    /// `‖ψ_GG,2‖²`.
    pub gg_sq: f64,
    /// `⟨ψ_GG,2|ψ_EE,2⟩`.
    pub ee_gg: C,
}

/// The evolved state as vacuum amplitudes plus Gram data of the photon
/// branches `|EG⟩⊗ψ_EG`, `|GE⟩⊗ψ_GE` (and two-photon branches).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlobalState {
    pub ee: C,
    pub gg: C,
    pub eg_sq: f64,
    pub ge_sq: f64,
    /// `⟨ψ_GE|ψ_EG⟩`.
    pub eg_ge: C,
    pub two_photon: Option<TwoPhotonSector>,
}

/// Target of a partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    AB,
    AF,
    A,
    F,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Reduced {
    AB(XState),
    AF(QubitQutritState),
    A(QubitState),
    F(QutritState),
}

impl GlobalState {
    /// `|ψ⟩ = α|EE0⟩ + β|GG0⟩` evolved with the given mode sums.
    pub fn assemble(s: &ModeSums, w: &InitialWeights) -> Self {
        let (al, be) = (w.alpha(), w.beta());
        let (p, q) = (al * al, be * be);
        let one = C::new(1.0, 0.0);
        let ee = (one + s.stay_excited) * al + s.raising * be;
        let gg = s.lowering * al + (one + s.stay_ground) * be;
        // ψ_EG = α u_B + β v_A, ψ_GE = α u_A + β v_B
        let eg_sq = p * s.u_b_sq + q * s.v_a_sq + 2.0 * al * be * s.ub_va.re;
        let ge_sq = p * s.u_a_sq + q * s.v_b_sq + 2.0 * al * be * s.ua_vb.re;
        let eg_ge = s.ub_ua * p + s.va_vb * q + (s.ub_vb + s.ua_va.conj()) * (al * be);
        let two_photon = s.two_photon.map(|g| {
            // ψ_EE,2 = α f + β g′, ψ_GG,2 = α g + β f′
            let form = |x: [(usize, f64); 2], y: [(usize, f64); 2]| {
                let mut acc = ZERO;
                for (i, ci) in x {
                    for (j, cj) in y {
                        acc += g[i][j] * (ci * cj);
                    }
                }
                acc
            };
            let ee2 = [(0, al), (3, be)];
            let gg2 = [(2, al), (1, be)];
            TwoPhotonSector { ee_sq: form(ee2, ee2).re, gg_sq: form(gg2, gg2).re, ee_gg: form(ee2, gg2) }
        });
        Self { ee, gg, eg_sq, ge_sq, eg_ge, two_photon }
    }

    pub fn norm(&self) -> f64 {
        let two = self.two_photon.map(|t| t.ee_sq + t.gg_sq).unwrap_or(0.0);
        self.ee.norm_sqr() + self.gg.norm_sqr() + self.eg_sq + self.ge_sq + two
    }

    /// Deviation of the norm from 1, a fourth-order quantity.
    pub fn norm_defect(&self) -> f64 {
        (self.norm() - 1.0).abs()
    }

    pub fn reduce(&self, subsystem: Subsystem) -> Reduced {
        match subsystem {
            Subsystem::AB => Reduced::AB(self.atoms()),
            Subsystem::AF => Reduced::AF(self.atom_field()),
            Subsystem::A => Reduced::A(reduce_af_to_atom(&self.atom_field())),
            Subsystem::F => Reduced::F(reduce_af_to_field(&self.atom_field())),
        }
    }

    /// Trace over the field.
    pub fn atoms(&self) -> XState {
        let t = self.two_photon.unwrap_or(TwoPhotonSector { ee_sq: 0.0, gg_sq: 0.0, ee_gg: ZERO });
        XState::with_norm(
            self.ee.norm_sqr() + t.ee_sq,
            self.eg_sq,
            self.ge_sq,
            self.gg.norm_sqr() + t.gg_sq,
            self.ee * self.gg.conj() + t.ee_gg,
            self.eg_ge,
        )
    }

    /// Trace over atom B; the qutrit level n stands for the normalized
    /// n-photon state of whichever branch carries it.
    pub fn atom_field(&self) -> QubitQutritState {
        let t = self.two_photon.unwrap_or(TwoPhotonSector { ee_sq: 0.0, gg_sq: 0.0, ee_gg: ZERO });
        let n = |x: f64| x.max(0.0).sqrt();
        let (eg, ge, ee2, gg2) = (n(self.eg_sq), n(self.ge_sq), n(t.ee_sq), n(t.gg_sq));
        // basis E0, E1, E2, G0, G1, G2 for atom A; B is E in E0, E2, G1 and G in the rest
        let diag = [self.ee.norm_sqr(), self.eg_sq, t.ee_sq, self.gg.norm_sqr(), self.ge_sq, t.gg_sq];
        QubitQutritState {
            diag,
            c13: self.ee * ee2,
            c15: self.ee * ge,
            c24: self.gg.conj() * eg,
            c26: C::new(eg * gg2, 0.0),
            c35: C::new(ee2 * ge, 0.0),
            c46: self.gg * gg2,
            norm: diag.iter().sum(),
        }
    }
}

/// Evolves `√p|EE0⟩ + √(1−p)|GG0⟩` to the point; the averaged channel
/// averages the mode sums of both dipole orientations.
pub fn evolve(
    point: &EvalPoint,
    coupling: &CouplingParams,
    cutoff: &Cutoff,
    channel: DipoleChannel,
    w: &InitialWeights,
    sectors: Sectors,
    opts: &EvolveOptions,
) -> Result<GlobalState, OracleError> {
    let parts = Dipole::for_channel(channel)
        .iter()
        .map(|d| mode_sums(point, coupling, cutoff, *d, sectors, opts))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GlobalState::assemble(&ModeSums::mean(&parts), w))
}
