//! Time integrals done numerically on a shared composite Gauss-Legendre grid.

use esd_numerics::{Complex64, GaussLegendre};

const ORDER: usize = 32;
/// Largest phase a single panel has to resolve at level 0.
const PHASE_PER_PANEL: f64 = 24.0;
// resynchronise the stepped panel phasor this often
const RESYNC: usize = 32;

/// Composite rule on `[0, τ]` fine enough for `e^{iys}` with `|y| ≤ max_rate`.
#[derive(Debug, Clone)]
pub struct TimeGrid {
    tau: f64,
    panels: usize,
    half: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl TimeGrid {
    pub fn new(tau: f64, max_rate: f64, level: u32) -> Self {
        let phase = PHASE_PER_PANEL / f64::from(1u32 << level);
        let panels = ((max_rate * tau / phase).ceil() as usize).max(1);
        let gl = GaussLegendre::shared(ORDER);
        let (mut nodes, mut weights) = (Vec::new(), Vec::new());
        let width = tau / panels as f64;
        for p in 0..panels {
            let c = width * (p as f64 + 0.5);
            for (x, w) in gl.nodes().iter().zip(gl.weights()) {
                nodes.push(c + 0.5 * width * x);
                weights.push(0.5 * width * w);
            }
        }
        Self { tau, panels, half: 0.5 * width, nodes, weights }
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `Σ_m w_m g_m e^{i y s_m}`, i.e. `∫₀^τ g(s) e^{iys} ds` for `g` sampled on the nodes.
    pub fn transform(&self, y: f64, g: &[Complex64]) -> Complex64 {
        let gl = GaussLegendre::shared(ORDER);
        let offsets: Vec<Complex64> =
            gl.nodes().iter().map(|x| Complex64::from_polar(1.0, y * self.half * x)).collect();
        let step = Complex64::from_polar(1.0, 2.0 * y * self.half);
        let mut centre = Complex64::from_polar(1.0, y * self.half);
        let mut sum = Complex64::new(0.0, 0.0);
        for p in 0..self.panels {
            if p % RESYNC == 0 {
                centre = Complex64::from_polar(1.0, y * self.half * (2 * p + 1) as f64);
            }
            let base = p * ORDER;
            let mut panel = Complex64::new(0.0, 0.0);
            for j in 0..ORDER {
                panel += offsets[j] * g[base + j] * self.weights[base + j];
            }
            sum += centre * panel;
            centre *= step;
        }
        sum
    }

    /// `∫₀^τ e^{iys} ds` evaluated on the grid.
    pub fn window(&self, y: f64) -> Complex64 {
        let gl = GaussLegendre::shared(ORDER);
        let per_panel: Complex64 = gl
            .nodes()
            .iter()
            .zip(gl.weights())
            .map(|(x, w)| Complex64::from_polar(w * self.half, y * self.half * x))
            .sum();
        let mut sum = Complex64::new(0.0, 0.0);
        let step = Complex64::from_polar(1.0, 2.0 * y * self.half);
        let mut centre = Complex64::from_polar(1.0, y * self.half);
        for p in 0..self.panels {
            if p % RESYNC == 0 {
                centre = Complex64::from_polar(1.0, y * self.half * (2 * p + 1) as f64);
            }
            sum += centre;
            centre *= step;
        }
        sum * per_panel
    }
}

/// `∫₀^t e^{iys} ds` from its primitive, written to stay accurate as `yt → 0`.
pub fn elementary_window(y: f64, t: f64) -> Complex64 {
    let h = 0.5 * y * t;
    let sinc = if h.abs() < 1e-4 { 1.0 - h * h / 6.0 } else { h.sin() / h };
    Complex64::from_polar(t * sinc, h)
}

/// Time-ordered double integral `∫₀^τ dt1 e^{i b t1} ∫₀^{t1} dt2 e^{i a t2}`.
///
/// With `s = t1 − t2` it is `∫₀^τ e^{ibs} F(a + b; τ − s) ds`; the inner
/// window uses its primitive, the outer integral runs on `grid`.
pub fn ordered(grid: &TimeGrid, a: f64, b: f64) -> Complex64 {
    let tau = grid.tau();
    let g: Vec<Complex64> = grid.nodes().iter().map(|s| elementary_window(a + b, tau - s)).collect();
    grid.transform(b, &g)
}

/// Largest oscillation rate in time of any integrand built from photon
/// frequencies up to `nu_max`: `ν + 1` from the window plus 2 from an inner
/// ordered window.
pub fn max_rate(nu_max: f64) -> f64 {
    nu_max + 3.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_matches_primitive() {
        let g = TimeGrid::new(37.0, 12.0, 0);
        for y in [0.0, 0.3, -5.0, 11.9] {
            let want = elementary_window(y, 37.0);
            assert!((g.window(y) - want).norm() < 1e-12 * 37.0, "{y}");
            let ones = vec![Complex64::new(1.0, 0.0); g.nodes().len()];
            assert!((g.transform(y, &ones) - want).norm() < 1e-12 * 37.0, "{y}");
        }
    }

    #[test]
    fn ordered_integral_reduces_to_products_when_symmetrized() {
        let g = TimeGrid::new(9.0, 8.0, 0);
        let (a, b) = (1.7, -3.2);
        let sum = ordered(&g, a, b) + ordered(&g, b, a);
        let want = elementary_window(a, 9.0) * elementary_window(b, 9.0);
        assert!((sum - want).norm() < 1e-12 * want.norm());
    }
}
