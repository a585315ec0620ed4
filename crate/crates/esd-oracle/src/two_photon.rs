//! Two-photon sector by a double sum over the discrete modes.
//!
//! With photons `k1`, `k2` the amplitudes are
//! `f = −Σ_j G_j(k1)G_j(k2)[T(ν1−1, ν2+1) + T(ν2−1, ν1+1)]` (one atom emits
//! twice, from |EE⟩), `g = −[G_A(k1)G_B(k2) + G_A(k2)G_B(k1)]F(ν1−1)F(ν2−1)`
//! (each atom once, |EE⟩ → |GG⟩), and `f′`, `g′` from |GG⟩ with `ν ∓ 1`
//! exchanged. The Gram matrix is `½ Σ_{k1,k2} A_x A_y*`.

use crate::evolve::EvolveOptions;
use crate::grid::ModeGrid;
use crate::time::{elementary_window, TimeGrid};
use crate::OracleError;
use esd_model::{Complex64, CouplingParams, EvalPoint};
use rayon::prelude::*;
use std::f64::consts::PI;

type C = Complex64;

/// Gram matrix in the order f, f′, g, g′.
pub type TwoPhotonGram = [[C; 4]; 4];

/// Largest frequency grid the double sum accepts.
pub const FREQUENCY_BUDGET: usize = 2000;

/// `M[i][j] = T(ν_i + shift, ν_j − shift)`, the ordered integral with the
/// earlier time carrying `ν_i + shift`, as a product of time-sampled factors.
fn ordered_matrix(t: &TimeGrid, nus: &[f64], shift: f64) -> Vec<C> {
    let outer: Vec<Vec<C>> = nus
        .iter()
        .map(|nu| t.nodes().iter().zip(t.weights()).map(|(s, w)| C::from_polar(*w, (nu - shift) * s)).collect())
        .collect();
    nus.par_iter()
        .flat_map_iter(|nu_i| {
            let inner: Vec<C> = t.nodes().iter().map(|s| elementary_window(nu_i + shift, *s)).collect();
            outer.iter().map(move |row| inner.iter().zip(row).map(|(a, b)| a * b).sum::<C>()).collect::<Vec<_>>()
        })
        .collect()
}

/// Atom assignments `(atom of k1, atom of k2, coupling product)`.
type Assignments = Vec<(usize, usize, f64)>;

pub fn two_photon_gram(
    point: &EvalPoint,
    coupling: &CouplingParams,
    grid: &ModeGrid,
    opts: &EvolveOptions,
) -> Result<TwoPhotonGram, OracleError> {
    let freqs = grid.frequencies();
    if freqs.len() > FREQUENCY_BUDGET {
        return Err(OracleError::Budget { needed: freqs.len(), limit: FREQUENCY_BUDGET });
    }
    let tau = point.tau();
    let nus: Vec<f64> = freqs.iter().map(|f| f.0).collect();
    let nu_max = nus.iter().cloned().fold(0.0, f64::max);
    let t = TimeGrid::new(tau, 2.0 * nu_max + 2.0, opts.level);

    let scale = coupling.kappa() / (4.0 * PI * PI);
    let weight: Vec<f64> = freqs.iter().map(|(nu, w)| scale * nu * nu * nu * w).collect();
    // P[j][j′] = Σ_directions pol² e^{-ik·(r_j − r_j′)}, A = 0, B = 1
    let angular: Vec<[[C; 2]; 2]> = nus
        .iter()
        .map(|nu| {
            let d = grid.direction_sums(*nu);
            let l = C::new(d.local, 0.0);
            [[l, d.cross.conj()], [d.cross, l]]
        })
        .collect();
    let lo: Vec<C> = nus.iter().map(|nu| t.window(nu - 1.0)).collect();
    let hi: Vec<C> = nus.iter().map(|nu| t.window(nu + 1.0)).collect();
    // T(ν_i − 1, ν_j + 1) and T(ν_i + 1, ν_j − 1)
    let down = ordered_matrix(&t, &nus, -1.0);
    let up = ordered_matrix(&t, &nus, 1.0);

    let (ga, gb) = opts.atoms.couplings();
    let same: Assignments = vec![(0, 0, ga * ga), (1, 1, gb * gb)];
    let split: Assignments = vec![(0, 1, ga * gb), (1, 0, ga * gb)];
    // f, f′ put both photons on one atom, g, g′ one on each
    let kind = [0, 0, 1, 1];

    let n = nus.len();
    let rows: Vec<TwoPhotonGram> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut g = [[C::new(0.0, 0.0); 4]; 4];
            for j in 0..n {
                let amp = [
                    -(down[i * n + j] + down[j * n + i]),
                    -(up[i * n + j] + up[j * n + i]),
                    -(lo[i] * lo[j]),
                    -(hi[i] * hi[j]),
                ];
                let (pi, pj) = (&angular[i], &angular[j]);
                let geo = |x: &Assignments, y: &Assignments| {
                    let mut s = C::new(0.0, 0.0);
                    for (a1, a2, wa) in x {
                        for (b1, b2, wb) in y {
                            s += pi[*a1][*b1] * pj[*a2][*b2] * (wa * wb);
                        }
                    }
                    s
                };
                let geos = [[geo(&same, &same), geo(&same, &split)], [geo(&split, &same), geo(&split, &split)]];
                let w = 0.5 * weight[i] * weight[j];
                for x in 0..4 {
                    for y in 0..4 {
                        let gxy = geos[kind[x]][kind[y]];
                        g[x][y] += amp[x] * amp[y].conj() * gxy * w;
                    }
                }
            }
            g
        })
        .collect();

    let mut gram = [[C::new(0.0, 0.0); 4]; 4];
    for r in &rows {
        for x in 0..4 {
            for y in 0..4 {
                gram[x][y] += r[x][y];
            }
        }
    }
    Ok(gram)
}
