//! Exponential integral of complex argument and the sine/cosine integrals.
//!
//! `ei` follows the principal branch with the cut on the negative real axis,
//! so `Ei(x)` is real for real `x > 0`. Inside `|z| <= SERIES_RADIUS` the
//! power series is summed directly; outside it a Lentz continued fraction
//! for `E1(-z)` is used, except close to the positive real axis where the
//! series (up to `|z| = 50`) and then the asymptotic expansion take over.
//!
//! The switch radius 2.5 came out of an accuracy scan off the positive real
//! axis (see the `switch_radius_scan` test): the series loses roughly
//! `e^{|z|}` ulps to cancellation, the continued fraction drifts to ~1e-14
//! below `|z| = 2`. At 2.5 both paths sit near 5e-16.

use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI};
use thiserror::Error;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Radius below which the power series is used for `Ei`.
pub const SERIES_RADIUS: f64 = 2.5;

const REAL_SERIES_LIMIT: f64 = 50.0;
const EXP_OVERFLOW: f64 = 709.0;
const CF_MAX_ITER: usize = 5000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecialError {
    #[error("{function}: argument {arg} outside the domain")]
    Domain { function: &'static str, arg: Complex64 },
    #[error("{function}: argument {arg} overflows the representable range")]
    Overflow { function: &'static str, arg: Complex64 },
    #[error("{function}: continued fraction did not converge at {arg}")]
    NoConvergence { function: &'static str, arg: Complex64 },
}

/// `Ei(z)` on the principal branch.
pub fn ei(z: Complex64) -> Result<Complex64, SpecialError> {
    if !z.re.is_finite() || !z.im.is_finite() || (z.re == 0.0 && z.im == 0.0) {
        return Err(SpecialError::Domain { function: "ei", arg: z });
    }
    if z.re > EXP_OVERFLOW {
        return Err(SpecialError::Overflow { function: "ei", arg: z });
    }
    let r = z.norm();
    let near_positive_axis = z.re > 0.0 && z.im.abs() < z.re;
    if r <= SERIES_RADIUS || (near_positive_axis && r <= REAL_SERIES_LIMIT) {
        return Ok(ei_series(z));
    }
    if near_positive_axis {
        return Ok(ei_asymptotic(z));
    }
    let e1 = e1_continued_fraction(-z)?;
    Ok(-e1 + Complex64::new(0.0, PI * sign_of_im(z)))
}

/// `Ei(z)` forced onto the power series. Exposed for crossover checks.
pub fn ei_by_series(z: Complex64) -> Complex64 {
    ei_series(z)
}

/// `Ei(z)` forced onto the continued fraction. Exposed for crossover checks.
pub fn ei_by_continued_fraction(z: Complex64) -> Result<Complex64, SpecialError> {
    let e1 = e1_continued_fraction(-z)?;
    Ok(-e1 + Complex64::new(0.0, PI * sign_of_im(z)))
}

/// `Ei(i a) - ln|a|` evaluated without forming the logarithm, for `a != 0`.
///
/// Near `a = 0` this tends to `gamma + i pi/2 sgn(a)`; callers near the
/// light cone combine it with an explicit `ln|a|` factor.
pub fn ei_imag_minus_log(a: f64) -> Result<Complex64, SpecialError> {
    if !a.is_finite() || a == 0.0 {
        return Err(SpecialError::Domain { function: "ei_imag_minus_log", arg: Complex64::new(0.0, a) });
    }
    if a.abs() <= SERIES_RADIUS {
        let z = Complex64::new(0.0, a);
        let head = Complex64::new(EULER_GAMMA, FRAC_PI_2 * a.signum());
        Ok(head + series_tail(z))
    } else {
        Ok(ei(Complex64::new(0.0, a))? - a.abs().ln())
    }
}

fn sign_of_im(z: Complex64) -> f64 {
    if z.im > 0.0 {
        1.0
    } else if z.im < 0.0 {
        -1.0
    } else {
        0.0
    }
}

// sum_{k>=1} z^k / (k k!)
fn series_tail(z: Complex64) -> Complex64 {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 1..400 {
        let kf = k as f64;
        term *= z / kf;
        let add = term / kf;
        sum += add;
        if add.norm() <= 1e-17 * sum.norm() {
            break;
        }
    }
    sum
}

fn ei_series(z: Complex64) -> Complex64 {
    Complex64::new(EULER_GAMMA, 0.0) + z.ln() + series_tail(z)
}

fn ei_asymptotic(z: Complex64) -> Complex64 {
    // e^z / z * sum k!/z^k, stopped at the smallest term
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut last = f64::INFINITY;
    for k in 1..200 {
        let next = term * (k as f64) / z;
        let m = next.norm();
        if m >= last {
            break;
        }
        last = m;
        term = next;
        sum += term;
        if m < 1e-17 {
            break;
        }
    }
    z.exp() / z * sum + Complex64::new(0.0, PI * sign_of_im(z))
}

/// `e^{ia} E1(ia)` for real `a != 0`, without forming the oscillating factors.
///
/// Far from the origin this is the smooth, slowly decaying part of
/// `Ei(∓ia)`; it stays accurate for `|a|` in the 10⁷ range where phases
/// like `e^{ia}` have already lost digits to argument rounding.
pub fn e1_scaled_imag(a: f64) -> Result<Complex64, SpecialError> {
    let z = Complex64::new(0.0, a);
    if !a.is_finite() || a == 0.0 {
        return Err(SpecialError::Domain { function: "e1_scaled_imag", arg: z });
    }
    if a.abs() <= SERIES_RADIUS {
        let e1 = -Complex64::new(EULER_GAMMA, 0.0) - z.ln() - series_tail(-z);
        Ok(z.exp() * e1)
    } else {
        e1_cf_scaled(z)
    }
}

// E1(w) = e^{-w} / (w + 1 - 1/(w + 3 - 4/(w + 5 - ...)))
fn e1_continued_fraction(w: Complex64) -> Result<Complex64, SpecialError> {
    Ok(e1_cf_scaled(w)? * (-w).exp())
}

fn e1_cf_scaled(w: Complex64) -> Result<Complex64, SpecialError> {
    let tiny = 1e-300;
    let mut b = w + 1.0;
    let mut c = Complex64::new(1.0 / tiny, 0.0);
    let mut d = b.inv();
    let mut h = d;
    for i in 1..CF_MAX_ITER {
        let an = -((i * i) as f64);
        b += 2.0;
        d = (d * an + b).inv();
        c = b + c.inv() * an;
        let del = c * d;
        h *= del;
        if (del - 1.0).norm() < 1e-16 {
            return Ok(h);
        }
    }
    Err(SpecialError::NoConvergence { function: "e1", arg: w })
}

/// Sine and cosine integrals `(Si(y), Ci(y))` for `y > 0`.
///
/// Series up to 4, the continued fraction of the auxiliary functions up
/// to 50 and their asymptotic expansion beyond.
pub fn sin_cos_integrals(y: f64) -> Result<(f64, f64), SpecialError> {
    if !(y > 0.0) || !y.is_finite() {
        return Err(SpecialError::Domain { function: "sin_cos_integrals", arg: Complex64::new(y, 0.0) });
    }
    if y <= 4.0 {
        return Ok(sici_series(y));
    }
    // e^{iy}E1(iy) = g − if; near the zeros of Ci the two products cancel
    // with an absolute error of order ε/y
    let (f, g) = if y <= 50.0 {
        let h = e1_cf_scaled(Complex64::new(0.0, y))?;
        (-h.im, h.re)
    } else {
        auxiliary_fg(y)
    };
    let (s, c) = y.sin_cos();
    Ok((FRAC_PI_2 - f * c - g * s, f * s - g * c))
}

fn sici_series(y: f64) -> (f64, f64) {
    let y2 = y * y;
    let mut si = 0.0;
    let mut term = y; // y^{2k+1}/(2k+1)!
    for k in 0..60 {
        let n = (2 * k + 1) as f64;
        let add = term / n;
        si += add;
        term *= -y2 / ((n + 1.0) * (n + 2.0));
        if add.abs() < 1e-18 * si.abs() {
            break;
        }
    }
    let mut ci = EULER_GAMMA + y.ln();
    let mut term = 1.0; // y^{2k}/(2k)!
    for k in 1..60 {
        let n = (2 * k) as f64;
        term *= -y2 / ((n - 1.0) * n);
        let add = term / n;
        ci += add;
        if add.abs() < 1e-18 {
            break;
        }
    }
    (si, ci)
}

fn auxiliary_fg(y: f64) -> (f64, f64) {
    let inv2 = 1.0 / (y * y);
    let mut f = 0.0;
    let mut g = 0.0;
    let mut tf = 1.0 / y;
    let mut tg = inv2;
    let mut last = f64::INFINITY;
    for k in 0..100 {
        if tf.abs() >= last {
            break;
        }
        last = tf.abs();
        f += tf;
        g += tg;
        let a = (2 * k + 1) as f64;
        tf *= -a * (a + 1.0) * inv2;
        tg *= -(a + 1.0) * (a + 2.0) * inv2;
        if last < 1e-19 {
            break;
        }
    }
    (f, g)
}
