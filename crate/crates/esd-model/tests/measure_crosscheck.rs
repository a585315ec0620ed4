//! Closed-form measures against the general eigensolver paths.

use esd_model::builders::QubitQutritState;
use esd_model::measures::negativity_generic;
use esd_model::*;
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type C = Complex64;

fn random_x_state(rng: &mut ChaCha8Rng) -> XState {
    let d: Vec<f64> = (0..4).map(|_| rng.random_range(0.0..1.0f64).powi(2)).collect();
    // coherences anywhere inside the positivity bound
    let r14 = (d[0] * d[3]).sqrt() * rng.random_range(0.0..1.0);
    let r23 = (d[1] * d[2]).sqrt() * rng.random_range(0.0..1.0);
    let ph = |rng: &mut ChaCha8Rng| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
    XState::with_norm(d[0], d[1], d[2], d[3], C::from_polar(r14, ph(rng)), C::from_polar(r23, ph(rng)))
}

#[test]
fn x_concurrence_matches_wootters() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let s = random_x_state(&mut rng);
        let closed = concurrence_x(&s).value;
        let oracle = concurrence_wootters(&s.to_matrix(), 1e-12).unwrap().value;
        worst = worst.max((closed - oracle).abs());
    }
    println!("worst X-state concurrence deviation {worst:e}");
    assert!(worst <= 1e-10);
}

fn qubit_qutrit(d: [f64; 6], c15: C, c24: C) -> QubitQutritState {
    let z = C::new(0.0, 0.0);
    QubitQutritState { diag: d, c13: z, c15, c24, c26: z, c35: z, c46: z, norm: d.iter().sum() }
}

fn random_second_order_shaped(rng: &mut ChaCha8Rng) -> QubitQutritState {
    let mut d = [0.0f64; 6];
    for k in [0, 1, 3] {
        d[k] = rng.random_range(0.0..1.0);
    }
    d[4] = d[1];
    let scale = rng.random_range(0.0..1.5);
    let c15 = C::from_polar((d[0] * d[4]).sqrt() * scale * rng.random_range(0.0..1.0), rng.random_range(-3.0..3.0));
    let c24 = C::from_polar((d[1] * d[3]).sqrt() * scale * rng.random_range(0.0..1.0), rng.random_range(-3.0..3.0));
    qubit_qutrit(d, c15, c24)
}

fn generic(s: &QubitQutritState) -> f64 {
    let m = s.to_matrix();
    negativity_generic(&DMatrix::from_iterator(6, 6, m.iter().copied()), 2, 3).unwrap().value
}

#[test]
fn closed_form_negativity_matches_partial_transpose() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut positive = 0;
    for _ in 0..200 {
        let s = random_second_order_shaped(&mut rng);
        let closed = negativity_af(&s, TruncationPolicy::OnePhoton).unwrap();
        assert_eq!(closed.method, Method::ClosedForm);
        let oracle = generic(&s);
        assert!((closed.value - oracle).abs() <= 1e-9, "{} vs {}", closed.value, oracle);
        if oracle > 0.0 {
            positive += 1;
        }
    }
    // both regimes exercised
    assert!(positive > 20 && positive < 180, "{positive}");
}

#[test]
fn full_policy_uses_eigensolver() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let s = random_second_order_shaped(&mut rng);
    let v = negativity_af(&s, TruncationPolicy::Full).unwrap();
    assert_eq!(v.method, Method::Oracle);
    assert!((v.value - negativity_af(&s, TruncationPolicy::OnePhoton).unwrap().value).abs() < 1e-12);
}

#[test]
fn partial_transpose_preserves_trace() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..50 {
        let a = DMatrix::from_fn(6, 6, |_, _| C::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        let mut rho = &a * a.adjoint();
        let tr = rho.trace();
        rho /= tr;
        let pt = DMatrix::from_fn(6, 6, |i, j| rho[((i / 3) * 3 + j % 3, (j / 3) * 3 + i % 3)]);
        let sum: f64 = pt.symmetric_eigenvalues().iter().sum();
        assert!((sum - 1.0).abs() < 1e-12);
        assert!(negativity_generic(&rho, 2, 3).unwrap().value >= 0.0);
    }
}

#[test]
fn product_state_has_no_negativity() {
    let z = C::new(0.0, 0.0);
    let s = qubit_qutrit([0.98, 0.0, 0.0, 0.02, 0.0, 0.0], z, z);
    assert_eq!(negativity_af(&s, TruncationPolicy::OnePhoton).unwrap().value, 0.0);
    assert!(generic(&s) < 1e-15);
}

proptest! {
    #[test]
    fn negativity_sign_condition(
        d0 in 0.0f64..1.0, d1 in 0.0f64..1.0, d3 in 0.0f64..1.0,
        m15 in 0.0f64..1.0, m24 in 0.0f64..1.0, ph in -3.0f64..3.0,
    ) {
        let s = qubit_qutrit([d0, d1, 0.0, d3, d1, 0.0], C::from_polar(m15, ph), C::from_polar(m24, -ph));
        let n = negativity_af(&s, TruncationPolicy::OnePhoton).unwrap().value;
        let margin24 = m24 * m24 - d0 * d1;
        let margin15 = m15 * m15 - d1 * d3;
        // stay away from the boundary where the guard decides
        prop_assume!(margin24.abs() > 1e-9 && margin15.abs() > 1e-9);
        prop_assert_eq!(n > 0.0, margin24 > 0.0 || margin15 > 0.0);
    }

    #[test]
    fn measures_ignore_coherence_phases(seed in 0u64..10_000, t1 in -3.0f64..3.0, t2 in -3.0f64..3.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_x_state(&mut rng);
        let mut r = s;
        r.rho14 *= C::from_polar(1.0, t1);
        r.rho23 *= C::from_polar(1.0, t2);
        prop_assert!((concurrence_x(&s).value - concurrence_x(&r).value).abs() < 1e-14);

        let q = random_second_order_shaped(&mut rng);
        let mut qr = q;
        qr.c15 *= C::from_polar(1.0, t1);
        qr.c24 *= C::from_polar(1.0, t2);
        let a = negativity_af(&q, TruncationPolicy::OnePhoton).unwrap().value;
        let b = negativity_af(&qr, TruncationPolicy::OnePhoton).unwrap().value;
        prop_assert!((a - b).abs() < 1e-14);
        prop_assert!((generic(&q) - generic(&qr)).abs() < 1e-12);
    }
}
