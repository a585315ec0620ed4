//! Closed-form pipeline against the discrete-mode oracle, entry by entry.

use crate::measures::{PointError, PointModel};
use esd_kernels::KernelOptions;
use esd_model::{
    build_rho_a, build_rho_ab, build_rho_af, build_rho_f, Complex64, CouplingParams, Cutoff, DipoleChannel, EvalPoint,
    InitialWeights, ParamError, TruncationPolicy,
};
use esd_oracle::{mode_sums, Dipole, EvolveOptions, GlobalState, ModeSums, OracleError, Reduced, Sectors, Subsystem};
use rayon::prelude::*;
use thiserror::Error;

/// `(z, x)` of the default comparison points: inside, outside and near the
/// light cone.
pub const CHECK_POINTS: [(f64, f64); 3] = [(50.0, 0.5), (5.0, 2.0), (100.0, 0.9)];
pub const CHECK_WEIGHTS: [f64; 2] = [0.5, 0.98];
pub const DEFAULT_TOLERANCE: f64 = 0.01;
/// Entries below this are compared absolutely.
pub const ABSOLUTE_FLOOR: f64 = 1e-18;

#[derive(Debug, Error)]
pub enum CheckError {
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Point(#[from] PointError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// Worst entry of one reduced state at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct EntryCheck {
    pub z: f64,
    pub x: f64,
    pub p: f64,
    pub state: &'static str,
    pub entry: usize,
    pub closed: Complex64,
    pub oracle: Complex64,
    /// Relative deviation, or absolute when the oracle entry is below the floor.
    pub deviation: f64,
    pub passed: bool,
}

fn deviation(closed: Complex64, oracle: Complex64) -> f64 {
    let diff = (closed - oracle).norm();
    if oracle.norm() < ABSOLUTE_FLOOR {
        diff
    } else {
        diff / oracle.norm()
    }
}

fn within(closed: Complex64, oracle: Complex64, tol: f64) -> bool {
    let d = deviation(closed, oracle);
    if oracle.norm() < ABSOLUTE_FLOOR {
        d <= ABSOLUTE_FLOOR
    } else {
        d <= tol
    }
}

fn entries(r: Reduced) -> Vec<Complex64> {
    match r {
        Reduced::AB(s) => s.to_matrix().iter().copied().collect(),
        Reduced::AF(s) => s.to_matrix().iter().copied().collect(),
        Reduced::A(s) => s.to_matrix().iter().copied().collect(),
        Reduced::F(s) => s.to_matrix().iter().copied().collect(),
    }
}

/// Compares ρ_AB, ρ_AF, ρ_A and ρ_F at each point and weight; one result
/// per state, holding its worst entry.
pub fn oracle_check(points: &[(f64, f64)], weights: &[f64], tol: f64) -> Result<Vec<EntryCheck>, CheckError> {
    let coupling = CouplingParams::default();
    let cutoff = Cutoff::default();
    let policy = TruncationPolicy::OnePhoton;
    let channel = DipoleChannel::Averaged;
    let model = PointModel { coupling, cutoff, channel, policy, kernel: KernelOptions::default() };
    let weights: Vec<InitialWeights> = weights.iter().map(|p| InitialWeights::new(*p)).collect::<Result<_, _>>()?;

    let per_point: Vec<Vec<EntryCheck>> = points
        .par_iter()
        .map(|&(z, x)| -> Result<Vec<EntryCheck>, CheckError> {
            let point = EvalPoint::new(z, x)?;
            let parts = Dipole::for_channel(channel)
                .iter()
                .map(|d| mode_sums(&point, &coupling, &cutoff, *d, Sectors::OnePhoton, &EvolveOptions::default()))
                .collect::<Result<Vec<_>, _>>()?;
            let sums = ModeSums::mean(&parts);
            let amps = model.amplitudes(z, x)?;
            let mut out = Vec::new();
            for w in &weights {
                let oracle = GlobalState::assemble(&sums, w);
                let closed = [
                    ("AB", Reduced::AB(build_rho_ab(&amps, w, policy))),
                    ("AF", Reduced::AF(build_rho_af(&amps, w, policy))),
                    ("A", Reduced::A(build_rho_a(&amps, w, policy))),
                    ("F", Reduced::F(build_rho_f(&amps, w, policy))),
                ];
                let subsystems = [Subsystem::AB, Subsystem::AF, Subsystem::A, Subsystem::F];
                for ((state, closed), sub) in closed.into_iter().zip(subsystems) {
                    let worst = entries(closed)
                        .into_iter()
                        .zip(entries(oracle.reduce(sub)))
                        .enumerate()
                        .map(|(k, (c, o))| (k, c, o, deviation(c, o), within(c, o, tol)))
                        // a failing entry outranks any passing one
                        .max_by(|a, b| (!a.4).cmp(&!b.4).then(a.3.total_cmp(&b.3)))
                        .expect("nonempty state");
                    out.push(EntryCheck {
                        z,
                        x,
                        p: w.p(),
                        state,
                        entry: worst.0,
                        closed: worst.1,
                        oracle: worst.2,
                        deviation: worst.3,
                        passed: worst.4,
                    });
                }
            }
            Ok(out)
        })
        .collect::<Result<_, _>>()?;
    Ok(per_point.into_iter().flatten().collect())
}
