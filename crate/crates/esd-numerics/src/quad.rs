//! Gauss-Legendre rules and an adaptive Filon-type integrator for
//! `∫ g(ν) e^{iων} dν` with smooth `g`.
//!
//! The Filon panels expand `g` in Legendre polynomials on the panel and
//! integrate each polynomial against the exponential exactly through
//! `∫_{-1}^{1} P_n(s) e^{iθs} ds = 2 iⁿ j_n(θ)`, so the cost of a panel does
//! not grow with `ω`. Panel errors come from the two highest Legendre
//! coefficients; refinement is global (largest error first).

use num_complex::Complex64;
use std::collections::BinaryHeap;
use std::f64::consts::PI;
use std::ops::{Add, Mul};
use std::sync::OnceLock;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadError {
    #[error("quadrature did not converge: error estimate {estimate:.3e} > target {target:.3e} after {panels} panels")]
    NotConverged { estimate: f64, target: f64, panels: usize },
    #[error("integrand returned a non-finite value at {at}")]
    NonFinite { at: f64 },
}

/// Values a quadrature rule can accumulate.
pub trait Summand: Copy + Add<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
}

impl Summand for f64 {
    fn zero() -> Self {
        0.0
    }
}

impl Summand for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
}

#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

const MAX_SHARED: usize = 128;

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "a Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    /// Process-wide cached rule for `n <= 128`.
    pub fn shared(n: usize) -> &'static GaussLegendre {
        static CACHE: [OnceLock<GaussLegendre>; MAX_SHARED + 1] = [const { OnceLock::new() }; MAX_SHARED + 1];
        assert!(n <= MAX_SHARED, "shared rules go up to {MAX_SHARED} nodes");
        CACHE[n].get_or_init(|| GaussLegendre::new(n))
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights on `[-1, 1]`.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate<T: Summand>(&self, a: f64, b: f64, f: impl Fn(f64) -> T) -> T {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut s = T::zero();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            s = s + f(c + h * x) * *w;
        }
        s * h
    }

    /// Equal-width composite rule with `panels` panels.
    pub fn composite<T: Summand>(&self, a: f64, b: f64, panels: usize, f: impl Fn(f64) -> T) -> T {
        let panels = panels.max(1);
        let width = (b - a) / panels as f64;
        let mut s = T::zero();
        for k in 0..panels {
            let lo = a + width * k as f64;
            let hi = if k + 1 == panels { b } else { lo + width };
            s = s + self.integrate(lo, hi, &f);
        }
        s
    }

    /// Nodes and weights of the equal-width composite rule, mapped onto `[a, b]`.
    pub fn composite_points(&self, a: f64, b: f64, panels: usize) -> Vec<(f64, f64)> {
        let panels = panels.max(1);
        let width = (b - a) / panels as f64;
        let h = 0.5 * width;
        let mut out = Vec::with_capacity(panels * self.len());
        for k in 0..panels {
            let c = a + width * (k as f64 + 0.5);
            for (x, w) in self.nodes.iter().zip(&self.weights) {
                out.push((c + h * x, h * w));
            }
        }
        out
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Spherical Bessel functions `j_0(θ) .. j_{n-1}(θ)` written into `out`.
pub fn spherical_bessel_j(theta: f64, out: &mut [f64]) {
    let n = out.len();
    if n == 0 {
        return;
    }
    let t = theta.abs();
    if t < 1.0 {
        // power series, few terms needed
        let mut lead = 1.0; // t^k / (2k+1)!!
        for (k, slot) in out.iter_mut().enumerate() {
            if k > 0 {
                lead *= t / (2 * k + 1) as f64;
            }
            let mut term = 1.0;
            let mut sum = 1.0;
            let t2 = 0.5 * t * t;
            for j in 1..30 {
                term *= -t2 / (j as f64 * (2 * (k + j) + 1) as f64);
                sum += term;
                if term.abs() < 1e-18 {
                    break;
                }
            }
            *slot = lead * sum;
        }
    } else if t >= n as f64 {
        let (s, c) = t.sin_cos();
        out[0] = s / t;
        if n > 1 {
            out[1] = s / (t * t) - c / t;
        }
        for k in 2..n {
            out[k] = (2 * k - 1) as f64 / t * out[k - 1] - out[k - 2];
        }
    } else {
        // Miller's downward recurrence, normalized by sum (2k+1) j_k^2 = 1
        let start = n + 30 + t as usize;
        let mut jp1 = 0.0;
        let mut j = 1.0;
        let mut norm = 0.0;
        for k in (0..=start).rev() {
            if k < n {
                out[k] = j;
            }
            norm += (2 * k + 1) as f64 * j * j;
            let jm1 = (2 * k + 1) as f64 / t * j - jp1;
            jp1 = j;
            j = jm1;
            if j.abs() > 1e100 {
                let s = 1e-100;
                j *= s;
                jp1 *= s;
                norm *= s * s;
                for v in out.iter_mut() {
                    *v *= s;
                }
            }
        }
        let mut scale = 1.0 / norm.sqrt();
        let j0 = t.sin() / t;
        if out[0] * j0 < 0.0 {
            scale = -scale;
        }
        for v in out.iter_mut() {
            *v *= scale;
        }
    }
    if theta < 0.0 {
        for (k, v) in out.iter_mut().enumerate() {
            if k % 2 == 1 {
                *v = -*v;
            }
        }
    }
}

/// Tolerances and limits for the adaptive integrators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_panels: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self { rel_tol: 1e-8, abs_tol: 1e-300, max_panels: 4000 }
    }
}

const FILON_ORDER: usize = 20;
// Legendre tails below this many ulps of the samples count as converged
const ROUNDING_TAIL: f64 = 64.0;

struct FilonRule {
    gl: &'static GaussLegendre,
    // legendre[n][k] = (2n+1)/2 * w_k * P_n(s_k)
    projector: Vec<Vec<f64>>,
}

fn filon_rule() -> &'static FilonRule {
    static RULE: OnceLock<FilonRule> = OnceLock::new();
    RULE.get_or_init(|| {
        let gl = GaussLegendre::shared(FILON_ORDER);
        let mut projector = vec![vec![0.0; FILON_ORDER]; FILON_ORDER];
        for (k, (&s, &w)) in gl.nodes().iter().zip(gl.weights()).enumerate() {
            let mut p0 = 1.0;
            let mut p1 = s;
            for (n, row) in projector.iter_mut().enumerate() {
                let pn = match n {
                    0 => 1.0,
                    1 => s,
                    _ => {
                        let nf = n as f64;
                        let p2 = ((2.0 * nf - 1.0) * s * p1 - (nf - 1.0) * p0) / nf;
                        p0 = p1;
                        p1 = p2;
                        p2
                    }
                };
                row[k] = 0.5 * (2 * n + 1) as f64 * w * pn;
            }
        }
        FilonRule { gl, projector }
    })
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    value: Complex64,
    error: f64,
    // 2h·max|g|, bounds what rounding can resolve on the panel
    magnitude: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn filon_panel(g: &impl Fn(f64) -> Complex64, omega: f64, lo: f64, hi: f64) -> Result<Panel, QuadError> {
    let rule = filon_rule();
    let c = 0.5 * (lo + hi);
    let h = 0.5 * (hi - lo);
    let mut vals = [Complex64::new(0.0, 0.0); FILON_ORDER];
    let mut largest: f64 = 0.0;
    for (v, s) in vals.iter_mut().zip(rule.gl.nodes()) {
        let x = c + h * s;
        *v = g(x);
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(QuadError::NonFinite { at: x });
        }
        largest = largest.max(v.norm());
    }
    let mut coef = [Complex64::new(0.0, 0.0); FILON_ORDER];
    for (n, row) in rule.projector.iter().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for (v, p) in vals.iter().zip(row) {
            acc += v * p;
        }
        coef[n] = acc;
    }
    let theta = omega * h;
    let mut jn = [0.0; FILON_ORDER];
    spherical_bessel_j(theta, &mut jn);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut ipow = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    for n in 0..FILON_ORDER {
        sum += coef[n] * ipow * jn[n];
        ipow *= i;
    }
    let phase = Complex64::from_polar(1.0, omega * c);
    let value = phase * sum * (2.0 * h);
    let tail = coef[FILON_ORDER - 1].norm() + coef[FILON_ORDER - 2].norm();
    // a tail at the rounding level of the samples is resolved; splitting
    // further cannot lower it
    // ∫P_n e^{iθs} = 2iⁿj_n(θ) and |j_n(θ)| ≤ 1/|θ|, so the unresolved
    // remainder is damped by the oscillation
    let damping = 1.0 / theta.abs().max(1.0);
    let error = if tail <= ROUNDING_TAIL * f64::EPSILON * largest { 0.0 } else { 2.0 * h * tail * damping };
    Ok(Panel { lo, hi, value, error, magnitude: 2.0 * h * largest })
}

/// `∫_a^b g(ν) e^{iων} dν` over the given breakpoints (at least two, increasing).
pub fn oscillatory(
    g: impl Fn(f64) -> Complex64,
    omega: f64,
    breakpoints: &[f64],
    opts: &QuadOptions,
) -> Result<Complex64, QuadError> {
    let mut heap = BinaryHeap::new();
    let mut total = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    let mut magnitude = 0.0;
    for w in breakpoints.windows(2) {
        if w[1] > w[0] {
            let p = filon_panel(&g, omega, w[0], w[1])?;
            total += p.value;
            err += p.error;
            magnitude += p.magnitude;
            heap.push(p);
        }
    }
    loop {
        // an integral that cancels far below ∫|g| is only known to the
        // rounding level of ∫|g|
        let floor = ROUNDING_TAIL * f64::EPSILON * magnitude;
        let target = opts.abs_tol.max(opts.rel_tol * total.norm()).max(floor);
        if err <= target {
            return Ok(total);
        }
        if heap.len() >= opts.max_panels {
            return Err(QuadError::NotConverged { estimate: err, target, panels: heap.len() });
        }
        let worst = match heap.pop() {
            Some(p) => p,
            None => return Ok(total),
        };
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi {
            // interval cannot be split further; accept it as is
            return Err(QuadError::NotConverged { estimate: err, target, panels: heap.len() });
        }
        let left = filon_panel(&g, omega, worst.lo, mid)?;
        let right = filon_panel(&g, omega, mid, worst.hi)?;
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        magnitude += left.magnitude + right.magnitude - worst.magnitude;
        heap.push(left);
        heap.push(right);
    }
}

/// Adaptive integral of a smooth non-oscillatory integrand.
pub fn adaptive(f: impl Fn(f64) -> Complex64, breakpoints: &[f64], opts: &QuadOptions) -> Result<Complex64, QuadError> {
    oscillatory(f, 0.0, breakpoints, opts)
}

/// Real-valued convenience wrapper of [`adaptive`].
pub fn adaptive_real(f: impl Fn(f64) -> f64, breakpoints: &[f64], opts: &QuadOptions) -> Result<f64, QuadError> {
    adaptive(|x| Complex64::new(f(x), 0.0), breakpoints, opts).map(|c| c.re)
}
