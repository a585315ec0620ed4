//! Concurrence, negativity and I-concurrence.
//!
//! Each measure has a closed-form path for the structured states built in
//! [`crate::builders`] and a general path on dense matrices used as oracle.

use crate::amplitudes::AmplitudeSet;
use crate::builders::{Matrix6, QubitQutritState, QubitState, QutritState, XState};
use crate::params::TruncationPolicy;
use nalgebra::{DMatrix, Matrix4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Round-off guard for square roots and `max(·, 0)` branches.
pub const CLAMP: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureValue {
    pub value: f64,
    pub method: Method,
}

impl MeasureValue {
    fn closed(value: f64) -> Self {
        Self { value, method: Method::ClosedForm }
    }

    fn oracle(value: f64) -> Self {
        Self { value, method: Method::Oracle }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeasureError {
    #[error("state is not positive semidefinite: eigenvalue {min_eigenvalue:e} below -{tol:e}")]
    NotPositive { min_eigenvalue: f64, tol: f64 },
    #[error("unsupported bipartition {rows}x{cols} for a {dim}-dimensional matrix")]
    Dimension { rows: usize, cols: usize, dim: usize },
}

fn clamp_sqrt(x: f64) -> f64 {
    if x < 0.0 && x > -CLAMP {
        0.0
    } else {
        x.max(0.0).sqrt()
    }
}

fn clamp_pos(x: f64) -> f64 {
    if x <= CLAMP {
        0.0
    } else {
        x
    }
}

/// Closed-form X-state concurrence, choosing the branch whose
/// anti-diagonal dominates.
pub fn concurrence_x(s: &XState) -> MeasureValue {
    let inner = clamp_sqrt(s.rho22 * s.rho33);
    let outer = clamp_sqrt(s.rho11 * s.rho44);
    let c23 = s.rho23.norm();
    let c14 = s.rho14.norm();
    let raw = if inner + c23 >= outer + c14 { 2.0 * (c23 - outer) / s.norm } else { 2.0 * (c14 - inner) / s.norm };
    MeasureValue::closed(clamp_pos(raw))
}

fn hermitian_eigenvalues(m: DMatrix<Complex64>) -> Vec<f64> {
    let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    ev
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue<const D: usize>(m: &nalgebra::SMatrix<Complex64, D, D>) -> f64 {
    let d = DMatrix::from_iterator(D, D, m.iter().copied());
    *hermitian_eigenvalues(d).last().expect("nonempty matrix")
}

/// Fails when `m` has an eigenvalue below `-tol`.
pub fn check_positive<const D: usize>(m: &nalgebra::SMatrix<Complex64, D, D>, tol: f64) -> Result<(), MeasureError> {
    let min_eigenvalue = min_eigenvalue(m);
    if min_eigenvalue < -tol {
        Err(MeasureError::NotPositive { min_eigenvalue, tol })
    } else {
        Ok(())
    }
}

/// Truncation-induced negativity budget for a state evolved for time `tau`.
///
/// Rough scale only: the radiative amplitudes carry a ln ν_max factor that
/// this ignores. Prefer [`truncation_budget`] when the amplitudes are known.
pub fn psd_budget(kappa: f64, tau: f64) -> f64 {
    (10.0 * (kappa * tau).powi(2)).max(1e-12)
}

/// Negativity allowed in a second-order state built from `amps`, whose
/// unnormalized trace is `norm`.
///
/// The second-order builders drop products of two radiative amplitudes.
/// Those dropped terms sit in at most two diagonal and two off-diagonal
/// entries, each bounded by S² with S the sum of the radiative moduli, so by
/// Weyl's inequality no eigenvalue of the unnormalized matrix moves by more
/// than 2S². Dividing by the trace scales the bound with it.
pub fn truncation_budget(amps: &AmplitudeSet, norm: f64) -> f64 {
    let s = amps.self_energy_excited.norm()
        + amps.self_energy_ground.norm()
        + amps.exchange_lowering.norm()
        + amps.exchange_raising.norm();
    if norm > 0.0 {
        (2.0 * s * s / norm).max(1e-12)
    } else {
        f64::INFINITY
    }
}

/// Wootters concurrence of a general two-qubit state.
pub fn concurrence_wootters(rho: &Matrix4<Complex64>, tol: f64) -> Result<MeasureValue, MeasureError> {
    check_positive(rho, tol)?;
    let d = DMatrix::from_iterator(4, 4, rho.iter().copied());
    let eig = d.clone().symmetric_eigen();
    let mut sqrt_diag = DMatrix::<Complex64>::zeros(4, 4);
    for k in 0..4 {
        sqrt_diag[(k, k)] = Complex64::new(eig.eigenvalues[k].max(0.0).sqrt(), 0.0);
    }
    let root = &eig.eigenvectors * sqrt_diag * eig.eigenvectors.adjoint();
    // σy ⊗ σy is real with entries ±1 on the anti-diagonal
    let flip = DMatrix::from_fn(4, 4, |i, j| {
        if i + j == 3 {
            Complex64::new(if i == 0 || i == 3 { -1.0 } else { 1.0 }, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let tilde = &flip * d.map(|c| c.conj()) * &flip;
    let r = &root * tilde * &root;
    let r = (&r + r.adjoint()) * Complex64::new(0.5, 0.0);
    let l: Vec<f64> = hermitian_eigenvalues(r).into_iter().map(clamp_sqrt).collect();
    Ok(MeasureValue::oracle(clamp_pos(l[0] - l[1] - l[2] - l[3])))
}

/// Negativity of the atom-field state.
///
/// Under the one-photon and second-order policies the partial transpose splits
/// into two 2×2 blocks plus a diagonal, giving the closed-form eigenvalues
/// below. The `Full` policy keeps photon-pair coherences that couple the
/// blocks, so it goes through the general eigensolver.
pub fn negativity_af(s: &QubitQutritState, policy: TruncationPolicy) -> Result<MeasureValue, MeasureError> {
    if policy == TruncationPolicy::Full {
        return negativity_generic_af(s);
    }
    let n = s.norm;
    let d = s.diag;
    // ρ′55 equals ρ′22, so ρ′22 is used in both pairs
    let pair = |p: f64, q: f64, c: f64| {
        let root = ((p - q).powi(2) + 4.0 * c * c).sqrt();
        (0.5 * (p + q + root) / n, 0.5 * (p + q - root) / n)
    };
    let (_, lam_minus) = pair(d[0], d[1], s.c24.norm());
    let (_, lamp_minus) = pair(d[3], d[1], s.c15.norm());
    let neg = lam_minus.min(0.0) + lamp_minus.min(0.0);
    Ok(MeasureValue::closed(clamp_pos(-neg)))
}

fn negativity_generic_af(s: &QubitQutritState) -> Result<MeasureValue, MeasureError> {
    let m: Matrix6 = s.to_matrix();
    negativity_generic(&DMatrix::from_iterator(6, 6, m.iter().copied()), 2, 3)
}

/// Negativity by partial transpose on the second factor.
pub fn negativity_generic(rho: &DMatrix<Complex64>, d1: usize, d2: usize) -> Result<MeasureValue, MeasureError> {
    let dim = rho.nrows();
    if d1 * d2 != dim || rho.ncols() != dim || !(d1 == 2 && (d2 == 2 || d2 == 3)) {
        return Err(MeasureError::Dimension { rows: d1, cols: d2, dim });
    }
    let pt = DMatrix::from_fn(dim, dim, |i, j| {
        let (a, m) = (i / d2, i % d2);
        let (b, n) = (j / d2, j % d2);
        rho[(a * d2 + n, b * d2 + m)]
    });
    let neg: f64 = hermitian_eigenvalues(pt).into_iter().filter(|v| *v < 0.0).sum();
    Ok(MeasureValue::oracle(clamp_pos(-neg)))
}

/// A reduced state whose purity is known in closed form.
pub trait Purity {
    /// `Tr ρ²` of the normalized state.
    fn purity(&self) -> f64;
}

impl Purity for QubitState {
    fn purity(&self) -> f64 {
        (self.excited.powi(2) + self.ground.powi(2)) / self.norm.powi(2)
    }
}

impl Purity for QutritState {
    fn purity(&self) -> f64 {
        let sum = self.vacuum.powi(2) + self.one.powi(2) + self.two.powi(2) + 2.0 * self.vacuum_two.norm_sqr();
        sum / self.norm.powi(2)
    }
}

/// `√(2(1 − Tr ρ²))` of a reduced state.
pub fn i_concurrence<S: Purity>(s: &S) -> MeasureValue {
    MeasureValue::closed(clamp_sqrt(2.0 * (1.0 - s.purity())))
}
