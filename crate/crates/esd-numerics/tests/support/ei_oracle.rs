//! Double-double series and asymptotic expansion for Ei, shared by the
//! special-function tests and the acceptance harness.

#![allow(dead_code)]

use esd_numerics::{Complex64, EULER_GAMMA};
use std::f64::consts::{FRAC_PI_2, PI};

#[derive(Clone, Copy, Debug)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    fn new(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }
    fn add(self, o: Dd) -> Dd {
        let s = self.hi + o.hi;
        let bb = s - self.hi;
        let e = (self.hi - (s - bb)) + (o.hi - bb);
        let e = e + self.lo + o.lo;
        let hi = s + e;
        Dd { hi, lo: e - (hi - s) }
    }
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
    fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p);
        let e = e + self.hi * o.lo + self.lo * o.hi;
        let hi = p + e;
        Dd { hi, lo: e - (hi - p) }
    }
    fn div(self, o: Dd) -> Dd {
        let q = self.hi / o.hi;
        let r = self.add(o.mul(Dd::new(q)).neg());
        Dd::new(q).add(Dd::new(r.hi / o.hi))
    }
    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
    fn div_f(self, d: f64) -> Dd {
        let q = self.hi / d;
        let r = self.add(Dd::new(q).mul(Dd::new(d)).neg());
        let q2 = r.hi / d;
        Dd::new(q).add(Dd::new(q2))
    }
}

#[derive(Clone, Copy)]
struct Cdd {
    re: Dd,
    im: Dd,
}

impl Cdd {
    fn mul(self, o: Cdd) -> Cdd {
        Cdd { re: self.re.mul(o.re).add(self.im.mul(o.im).neg()), im: self.re.mul(o.im).add(self.im.mul(o.re)) }
    }
}

/// Oracle Ei: double-double series below |z| = 40, asymptotic expansion above.
pub fn ei_oracle(z: Complex64) -> Complex64 {
    let r = z.norm();
    if r < 40.0 {
        Complex64::new(EULER_GAMMA, 0.0) + z.ln() + series_part(z)
    } else {
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        for k in 1..200 {
            let next = term * (k as f64) / z;
            if next.norm() >= term.norm() {
                break;
            }
            term = next;
            sum += term;
        }
        let sgn = if z.im > 0.0 {
            1.0
        } else if z.im < 0.0 {
            -1.0
        } else {
            0.0
        };
        z.exp() / z * sum + Complex64::new(0.0, PI * sgn)
    }
}

pub fn log_grid(n: usize, lo: f64, hi: f64) -> impl Iterator<Item = f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(move |k| (a + (b - a) * k as f64 / (n - 1) as f64).exp())
}

pub fn rel_err(got: Complex64, want: Complex64) -> f64 {
    (got - want).norm() / want.norm()
}

const GAMMA_DD: Dd = Dd { hi: EULER_GAMMA, lo: -4.942_915_152_430_645e-18 };
const LN2_DD: Dd = Dd { hi: std::f64::consts::LN_2, lo: 2.319_046_813_846_299_6e-17 };

/// ln y in double-double: `y = m·2ᵉ` with m near 1, ln m = 2 atanh((m−1)/(m+1)).
fn ln_dd(y: f64) -> Dd {
    let mut e = ((y.to_bits() >> 52) & 0x7ff) as i32 - 1022;
    let mut m = y / 2f64.powi(e);
    if m < std::f64::consts::FRAC_1_SQRT_2 {
        m *= 2.0;
        e -= 1;
    }
    let s = Dd::new(m - 1.0).div(Dd::new(m).add(Dd::new(1.0)));
    let s2 = s.mul(s);
    let mut power = s;
    let mut sum = s;
    for k in 1..60 {
        power = power.mul(s2);
        let add = power.div_f((2 * k + 1) as f64);
        sum = sum.add(add);
        if add.hi.abs() < 1e-34 {
            break;
        }
    }
    Dd::new(e as f64).mul(LN2_DD).add(sum.add(sum))
}

fn series_part(z: Complex64) -> Complex64 {
    let s = series_dd(z);
    Complex64::new(s.re.to_f64(), s.im.to_f64())
}

/// `Σ_{k≥1} zᵏ/(k·k!)` in double-double.
fn series_dd(z: Complex64) -> Cdd {
    let zz = Cdd { re: Dd::new(z.re), im: Dd::new(z.im) };
    let mut term = Cdd { re: Dd::new(1.0), im: Dd::new(0.0) };
    let mut sum = Cdd { re: Dd::new(0.0), im: Dd::new(0.0) };
    for k in 1..600 {
        let kf = k as f64;
        term = term.mul(zz);
        term = Cdd { re: term.re.div_f(kf), im: term.im.div_f(kf) };
        let add = Cdd { re: term.re.div_f(kf), im: term.im.div_f(kf) };
        sum = Cdd { re: sum.re.add(add.re), im: sum.im.add(add.im) };
        if add.re.hi.abs() + add.im.hi.abs() < 1e-34 * (1.0 + sum.re.hi.abs() + sum.im.hi.abs()) {
            break;
        }
    }
    sum
}

/// `(Si(y), Ci(y))` for y > 0. Below |z| = 40 both come from double-double
/// sums, so they keep full relative accuracy at small y and near the
/// zeros of Ci.
pub fn sici_oracle(y: f64) -> (f64, f64) {
    if y < 40.0 {
        let s = series_dd(Complex64::new(0.0, y));
        (s.im.to_f64(), GAMMA_DD.add(ln_dd(y)).add(s.re).to_f64())
    } else {
        let e = ei_oracle(Complex64::new(0.0, y));
        (e.im - FRAC_PI_2, e.re)
    }
}
