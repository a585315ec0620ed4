use esd_sweep::events::{detect_events, grid_events, interpolating_probe, ExtremumKind};
use proptest::prelude::*;

fn descending(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| hi - (hi - lo) * k as f64 / (n - 1) as f64).collect()
}

fn exact(f: impl Fn(f64) -> f64) -> impl Fn(f64) -> Option<f64> {
    move |x| Some(f(x))
}

#[test]
fn constructed_zeros_give_death_and_revival() {
    let f = |x: f64| ((x - 2.0) * (x - 3.0)).max(0.0);
    let xs = descending(1.5, 3.5, 201);
    let v: Vec<f64> = xs.iter().map(|x| f(*x)).collect();
    let z = 6.0;
    let e = detect_events(z, &xs, &v, Some(exact(f)));
    let death = e.death.expect("death");
    let revival = e.revival.expect("revival");
    assert!((death.x - 3.0).abs() < 1e-4, "death at {}", death.x);
    assert!((revival.x - 2.0).abs() < 1e-4, "revival at {}", revival.x);
    assert!(death.spacelike && revival.spacelike);
    assert!((e.dark_width_tau.unwrap() - (z / 2.0 - z / 3.0)).abs() < 1e-3);
    assert!(e.extrema.is_empty(), "{:?}", e.extrema);
}

#[test]
fn a_single_bump_dies_once_and_never_revives() {
    // positive only between the roots: birth at 3, death at 2
    let f = |x: f64| ((x - 2.0) * (3.0 - x)).max(0.0);
    let xs = descending(1.5, 3.5, 201);
    let v: Vec<f64> = xs.iter().map(|x| f(*x)).collect();
    let e = detect_events(1.0, &xs, &v, Some(exact(f)));
    assert!((e.death.unwrap().x - 2.0).abs() < 1e-4);
    assert_eq!(e.revival, None);
    let maxima: Vec<_> = e.maxima().collect();
    assert_eq!(maxima.len(), 1);
    assert!((maxima[0].x - 2.5).abs() < 1e-4);
    assert!((maxima[0].value - 0.25).abs() < 1e-10);
}

#[test]
fn maximum_is_refined_off_the_grid() {
    let f = |x: f64| x * (-x).exp();
    let xs: Vec<f64> = (0..=40).rev().map(|k| 10f64.powf(-2.0 + k as f64 / 10.0)).collect();
    let v: Vec<f64> = xs.iter().map(|x| f(*x)).collect();
    let e = detect_events(10.0, &xs, &v, Some(exact(f)));
    assert_eq!(e.extrema.len(), 1);
    let m = e.extrema[0];
    assert_eq!(m.kind, ExtremumKind::Maximum);
    assert!((m.x - 1.0).abs() < 1e-3, "maximum at {}", m.x);
    assert!((m.value - (-1f64).exp()).abs() < 1e-12);
    assert!((m.tau - 10.0 / m.x).abs() < 1e-12);
}

#[test]
fn without_a_probe_events_stay_on_the_grid() {
    let f = |x: f64| ((x - 2.0) * (x - 3.0)).max(0.0);
    let xs = descending(1.5, 3.5, 21);
    let v: Vec<f64> = xs.iter().map(|x| f(*x)).collect();
    let e = detect_events(1.0, &xs, &v, None::<fn(f64) -> Option<f64>>);
    assert!(xs.contains(&e.death.unwrap().x));
    assert!(xs.contains(&e.revival.unwrap().x));
}

#[test]
fn failing_probe_falls_back_to_the_grid() {
    let f = |x: f64| ((x - 2.0) * (x - 3.0)).max(0.0);
    let xs = descending(1.5, 3.5, 21);
    let v: Vec<f64> = xs.iter().map(|x| f(*x)).collect();
    let e = detect_events(1.0, &xs, &v, Some(|_: f64| None));
    assert!(xs.contains(&e.death.unwrap().x));
}

#[test]
fn interpolating_probe_hits_grid_values() {
    let xs: Vec<f64> = (0..20).rev().map(|k| 1.5f64.powi(k)).collect();
    let v: Vec<f64> = xs.iter().map(|x| x.ln().sin()).collect();
    let probe = interpolating_probe(&xs, &v);
    for (x, y) in xs.iter().zip(&v) {
        assert_eq!(probe(*x), Some(*y));
    }
    assert_eq!(probe(xs[0] * 2.0), None);
    assert_eq!(probe(xs[19] / 2.0), None);
}

proptest! {
    #[test]
    fn roots_are_recovered(a in 0.2f64..5.0, gap in 0.05f64..3.0, n in 30usize..300) {
        let (lo_root, hi_root) = (a, a + gap);
        let f = move |x: f64| ((x - lo_root) * (x - hi_root)).max(0.0);
        let xs = descending(lo_root / 2.0, hi_root * 2.0, n);
        let v: Vec<f64> = xs.iter().map(|x| f(*x)).collect();
        // the grid must see the dark interval
        prop_assume!(xs.iter().any(|x| *x > lo_root && *x < hi_root));
        let e = detect_events(1.0, &xs, &v, Some(exact(f)));
        let d = e.death.unwrap();
        let r = e.revival.unwrap();
        prop_assert!((d.x - hi_root).abs() < 1e-5 * hi_root);
        prop_assert!((r.x - lo_root).abs() < 1e-5 * lo_root);
        prop_assert!(d.x > r.x);
    }

    #[test]
    fn monotone_positive_series_have_no_events(v0 in 1e-6f64..1.0, slope in 1e-6f64..1.0, n in 2usize..200) {
        let v: Vec<f64> = (0..n).map(|k| v0 + slope * k as f64).collect();
        let g = grid_events(&v);
        prop_assert_eq!(g.death, None);
        prop_assert!(g.extrema.is_empty());
    }

    #[test]
    fn noise_below_the_floor_makes_no_extrema(n in 3usize..100, seed in 0u64..1000) {
        let v: Vec<f64> = (0..n).map(|k| 0.5 + 1e-15 * (((k as u64 * 7919 + seed) % 13) as f64 - 6.0) / 6.0).collect();
        prop_assert!(grid_events(&v).extrema.is_empty());
    }
}
