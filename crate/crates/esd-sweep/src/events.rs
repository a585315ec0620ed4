//! Death, revival and extrema of a measure along a descending x-grid.
//!
//! The grid runs from large x to small x, which is forward in time. Events
//! are located on the grid first and then refined with a probe that
//! evaluates the measure at arbitrary x; without a probe the grid values are
//! reported as they are.

use serde::{Deserialize, Serialize};

/// Values at or below this are zero; the measures are `max(·, 0)`
/// constructs with exact zeros.
pub const ZERO_FLOOR: f64 = 1e-14;
/// A revival needs the measure back above this fraction of its largest value.
pub const RISE_FRACTION: f64 = 1e-12;
/// Target relative width of the bracket around a refined event.
pub const X_TOLERANCE: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub x: f64,
    pub tau: f64,
    /// `x > 1`: the atoms cannot have exchanged a photon yet.
    pub spacelike: bool,
}

impl Event {
    fn at(z: f64, x: f64) -> Self {
        Self { x, tau: z / x, spacelike: x > 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtremumKind {
    Minimum,
    Maximum,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extremum {
    pub kind: ExtremumKind,
    pub x: f64,
    pub tau: f64,
    pub value: f64,
    pub spacelike: bool,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct MeasureEvents {
    pub death: Option<Event>,
    pub revival: Option<Event>,
    /// Length of the dark period in τ, when both ends exist.
    pub dark_width_tau: Option<f64>,
    pub extrema: Vec<Extremum>,
}

impl MeasureEvents {
    pub fn maxima(&self) -> impl Iterator<Item = &Extremum> {
        self.extrema.iter().filter(|e| e.kind == ExtremumKind::Maximum)
    }

    pub fn minima(&self) -> impl Iterator<Item = &Extremum> {
        self.extrema.iter().filter(|e| e.kind == ExtremumKind::Minimum)
    }
}

/// Locations on the grid, before refinement.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GridEvents {
    /// Index of the first zero after a positive value.
    pub death: Option<usize>,
    /// Index of the first value above the rise threshold after the death.
    pub revival: Option<usize>,
    /// Index of each interior extremum with its kind.
    pub extrema: Vec<(usize, ExtremumKind)>,
}

impl GridEvents {
    /// Grid indices an adaptive pass should resolve more finely.
    pub fn indices(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.death.into_iter().chain(self.revival).collect();
        out.extend(self.extrema.iter().map(|(i, _)| *i));
        out
    }
}

fn is_zero(v: f64) -> bool {
    v <= ZERO_FLOOR
}

/// Scans `values` (ordered like a descending x-grid) for events.
pub fn grid_events(values: &[f64]) -> GridEvents {
    let scale = values.iter().cloned().fold(0.0, f64::max);
    let rise = (RISE_FRACTION * scale).max(ZERO_FLOOR);
    let death = (1..values.len()).find(|&i| !is_zero(values[i - 1]) && is_zero(values[i]));
    let revival = death.and_then(|d| (d + 1..values.len()).find(|&i| values[i] > rise));
    GridEvents { death, revival, extrema: grid_extrema(values) }
}

/// Interior extrema after merging steps within the noise floor. A minimum
/// sitting on zero is a dark period, not an extremum.
fn grid_extrema(values: &[f64]) -> Vec<(usize, ExtremumKind)> {
    // indices where the series moves by more than the floor
    let mut turns = Vec::new();
    let mut anchor = 0;
    let mut direction = 0i8;
    for i in 1..values.len() {
        let step = values[i] - values[anchor];
        if step.abs() <= ZERO_FLOOR {
            continue;
        }
        let d = if step > 0.0 { 1 } else { -1 };
        if direction != 0 && d != direction {
            // the extremal value lies between the anchor and i
            let range = anchor..i;
            let best = if direction > 0 {
                range.max_by(|a, b| values[*a].total_cmp(&values[*b]))
            } else {
                range.min_by(|a, b| values[*a].total_cmp(&values[*b]))
            };
            let kind = if direction > 0 { ExtremumKind::Maximum } else { ExtremumKind::Minimum };
            turns.push((best.unwrap_or(anchor), kind));
        }
        direction = d;
        anchor = i;
    }
    turns.retain(|(i, kind)| !(*kind == ExtremumKind::Minimum && is_zero(values[*i])));
    turns
}

/// Events of one measure. `probe(x)` evaluates the measure off the grid
/// (None on failure); refinement stops at the grid values when it fails.
pub fn detect_events<P>(z: f64, xs: &[f64], values: &[f64], probe: Option<P>) -> MeasureEvents
where
    P: Fn(f64) -> Option<f64>,
{
    assert_eq!(xs.len(), values.len());
    debug_assert!(xs.windows(2).all(|w| w[0] > w[1]), "x-grid must descend");
    let grid = grid_events(values);
    let scale = values.iter().cloned().fold(0.0, f64::max);
    let rise = (RISE_FRACTION * scale).max(ZERO_FLOOR);

    let crossing = |i: usize, zero_after: bool, threshold: f64| -> f64 {
        // bracket [xs[i], xs[i−1]]: the predicate flips between them
        // lo stays on the side of xs[i], the later grid point
        let (mut lo, mut hi) = (xs[i], xs[i - 1]);
        let Some(probe) = probe.as_ref() else { return lo };
        let below = |x: f64| probe(x).map(|v| if zero_after { v <= threshold } else { v > threshold });
        while (hi - lo) > X_TOLERANCE * lo {
            let mid = (lo * hi).sqrt();
            match below(mid) {
                Some(true) => lo = mid,
                Some(false) => hi = mid,
                None => break,
            }
        }
        lo
    };

    let death = grid.death.map(|i| Event::at(z, crossing(i, true, ZERO_FLOOR)));
    let revival = grid.revival.map(|i| Event::at(z, crossing(i, false, rise)));
    let dark_width_tau = match (death, revival) {
        (Some(d), Some(r)) => Some(r.tau - d.tau),
        _ => None,
    };
    let extrema = grid
        .extrema
        .iter()
        .map(|&(i, kind)| {
            let (x, value) = refine_extremum(xs, values, i, kind, probe.as_ref());
            Extremum { kind, x, tau: z / x, value, spacelike: x > 1.0 }
        })
        .collect();
    MeasureEvents { death, revival, dark_width_tau, extrema }
}

/// Golden-section search in ln x over the two grid cells around `i`.
fn refine_extremum<P>(xs: &[f64], values: &[f64], i: usize, kind: ExtremumKind, probe: Option<&P>) -> (f64, f64)
where
    P: Fn(f64) -> Option<f64>,
{
    let grid_best = (xs[i], values[i]);
    let Some(probe) = probe else { return grid_best };
    if i == 0 || i + 1 >= xs.len() {
        return grid_best;
    }
    let sign = match kind {
        ExtremumKind::Maximum => -1.0,
        ExtremumKind::Minimum => 1.0,
    };
    // minimize sign·f(e^s)
    let f = |s: f64| probe(s.exp()).map(|v| (sign * v, v));
    let (mut a, mut b) = (xs[i + 1].ln(), xs[i - 1].ln());
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (Some(mut fc), Some(mut fd)) = (f(c), f(d)) else { return grid_best };
    while b - a > X_TOLERANCE {
        if fc.0 < fd.0 {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            match f(c) {
                Some(v) => fc = v,
                None => return grid_best,
            }
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            match f(d) {
                Some(v) => fd = v,
                None => return grid_best,
            }
        }
    }
    let (s, best) = if fc.0 < fd.0 { (c, fc) } else { (d, fd) };
    // a search that wandered off the grid optimum keeps the grid point
    if sign * best.1 <= sign * grid_best.1 {
        (s.exp(), best.1)
    } else {
        grid_best
    }
}

/// Probe that interpolates linearly in ln x between grid values.
pub fn interpolating_probe<'a>(xs: &'a [f64], values: &'a [f64]) -> impl Fn(f64) -> Option<f64> + 'a {
    move |x| {
        // xs descends
        let k = xs.partition_point(|v| *v > x);
        if k < xs.len() && xs[k] == x {
            return Some(values[k]);
        }
        if k == 0 || k >= xs.len() {
            return None;
        }
        let (x0, x1) = (xs[k - 1], xs[k]);
        let t = (x.ln() - x0.ln()) / (x1.ln() - x0.ln());
        Some(values[k - 1] + t * (values[k] - values[k - 1]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn descending(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..n).map(|k| hi - (hi - lo) * k as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn positive_series_has_no_events() {
        let xs = descending(0.5, 2.0, 50);
        let v: Vec<f64> = xs.iter().map(|x| 1.0 + x).collect();
        let e = detect_events(1.0, &xs, &v, None::<fn(f64) -> Option<f64>>);
        assert_eq!(e, MeasureEvents::default());
    }

    #[test]
    fn zero_plateau_is_not_a_minimum() {
        let v = [1.0, 0.5, 0.0, 0.0, 0.0, 0.4, 0.8];
        let g = grid_events(&v);
        assert_eq!((g.death, g.revival), (Some(2), Some(5)));
        assert!(g.extrema.is_empty());
    }

    #[test]
    fn noise_steps_are_merged() {
        // one maximum, placed on the largest sample of the plateau
        let v = [0.0, 1.0, 2.0, 2.0 + 1e-15, 2.0, 2.0 + 5e-15, 1.0];
        assert_eq!(grid_extrema(&v), vec![(5, ExtremumKind::Maximum)]);
    }
}
