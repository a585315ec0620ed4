//! The propagator against the printed Ei form, a time-domain quadrature and
//! high-precision reference values.

use esd_kernels::angular::Orientation;
use esd_kernels::exchange::exchange_from;
use esd_kernels::propagator::{branch_term, propagator_at, propagator_derivatives_fd};
use esd_kernels::*;
use esd_model::{CouplingParams, DipoleChannel, EvalPoint};
use esd_numerics::{ei, Complex64, GaussLegendre};
use proptest::prelude::*;

type C = Complex64;

/// Closed form with the `Ei` terms written out, before the branch term.
fn printed_without_branch(z: f64, tau: f64) -> C {
    let i = C::new(0.0, 1.0);
    let d = |w: f64| {
        C::from_polar(1.0, -w) * ei(C::new(0.0, w)).unwrap() - C::from_polar(1.0, w) * ei(C::new(0.0, -w)).unwrap()
    };
    let bracket = d(z) * (-2.0 * tau.cos()) + d(z + tau) + d(z - tau);
    -i * C::from_polar(1.0, -tau) / (2.0 * z) * bracket
}

/// `−e^{−iτ} ∫₀^τ 2 sin(τ − s) PV[1/(z² − s²)] ds` plus the pole residue.
fn time_domain(z: f64, tau: f64) -> C {
    let gl = GaussLegendre::shared(32);
    let panels = 64 + (tau / 2.0) as usize;
    let g = |s: f64| 2.0 * (tau - s).sin();
    let inner = if tau < z {
        gl.composite(0.0, tau, panels, |s| g(s) / (z * z - s * s))
    } else {
        // 1/(z²−s²) = [1/(z−s) + 1/(z+s)]/(2z); subtract g(z) at the pole
        let plus: f64 = gl.composite(0.0, tau, panels, |s| g(s) / (z + s));
        let minus: f64 = gl.composite(0.0, tau, panels, |s| (g(s) - g(z)) / (z - s));
        let pv_log = g(z) * (z.ln() - (tau - z).ln());
        (plus + minus + pv_log) / (2.0 * z)
    };
    let residue = if tau > z { C::new(0.0, -std::f64::consts::PI * g(z) / (2.0 * z)) } else { C::new(0.0, 0.0) };
    -C::from_polar(1.0, -tau) * (C::new(inner, 0.0) + residue)
}

fn rel(a: C, b: C) -> f64 {
    (a - b).norm() / b.norm()
}

#[test]
fn matches_printed_form_with_branch_term() {
    for z in [0.5, 5.0, 7.3, 40.0, 300.0] {
        for x in [0.05, 0.3, 0.7, 0.999, 1.001, 1.5, 4.0, 30.0] {
            let tau = z / x;
            let mut want = printed_without_branch(z, tau);
            if x < 1.0 {
                want += branch_term(z);
            }
            let got = propagator_at(z, tau).unwrap().value;
            assert!(rel(got, want) < 1e-10, "z={z} x={x}: {got} vs {want}");
        }
    }
}

#[test]
fn matches_time_domain_quadrature() {
    for (z, x) in [(5.0, 2.0), (5.0, 0.5), (50.0, 0.5), (3.0, 1.5), (10.0, 0.9)] {
        let p = EvalPoint::new(z, x).unwrap();
        let got = propagator(&p, LIGHT_CONE_WIDTH).unwrap().value;
        let want = time_domain(z, p.tau());
        assert!(rel(got, want) < 1e-6, "z={z} x={x}: {got} vs {want}");
    }
}

#[test]
fn branch_term_closes_the_gap_at_the_light_cone() {
    for z in [5.0, 7.3, 40.0] {
        let inside = EvalPoint::new(z, 1.0 - 2e-6).unwrap();
        let outside = EvalPoint::new(z, 1.0 + 2e-6).unwrap();
        // the printed form alone jumps by exactly the branch term
        let gap = printed_without_branch(z, outside.tau()) - printed_without_branch(z, inside.tau());
        assert!(rel(gap, branch_term(z)) < 1e-3, "z={z}: gap {gap} vs {}", branch_term(z));
        let a = propagator(&inside, LIGHT_CONE_WIDTH).unwrap().value;
        let b = propagator(&outside, LIGHT_CONE_WIDTH).unwrap().value;
        assert!((a - b).norm() < 1e-3 * branch_term(z).norm(), "z={z}");
    }
}

#[test]
fn reference_values_at_large_separation() {
    // 60-digit evaluation of the printed form plus branch term, derivatives
    // by high-order numerical differentiation of the same
    let refs: [(f64, f64, [f64; 2], [f64; 2], [f64; 2]); 6] = [
        (
            2e7,
            0.5,
            [1.349462424914946e-7, -8.0396035156616861e-8],
            [1.6079205848245512, 2.6989249330033005],
            [-53978500.267986404, 32158408.997566019],
        ),
        (
            2e7,
            2.0,
            [1.0164167009423297e-14, 4.7114047482855613e-15],
            [-2.4360646846320493e-14, -1.1291910799641036e-14],
            [9.4587608952154377e-14, 4.3844272681962074e-14],
        ),
        (
            2e7,
            30.0,
            [1.8042690993355623e-15, 6.1533494556696828e-15],
            [-3.6116715035539615e-15, -1.2317384856081395e-14],
            [1.0847561671483033e-14, 3.6994945893128843e-14],
        ),
        (
            5e5,
            0.05,
            [4.8486228992343883e-6, 3.9961683641794641e-6],
            [-1.9980875087330163, 2.4243041699829987],
            [-1212150.0869021944, -999046.1786600968],
        ),
        (
            5.0,
            2.0,
            [0.12309783154833156, 0.09195682490833227],
            [-0.26355717779133778, -0.19688308840742316],
            [0.8697137271294361, 0.64969554638022869],
        ),
        (
            50.0,
            0.5,
            [-0.043111135224694773, -0.044433094434118537],
            [2.2887506374767519, -2.1524520262515749],
            [105.26240370998222, 116.59851452908666],
        ),
    ];
    for (z, x, v, d1, d2) in refs {
        let p = propagator(&EvalPoint::new(z, x).unwrap(), LIGHT_CONE_WIDTH).unwrap();
        let c = |a: [f64; 2]| C::new(a[0], a[1]);
        // phases of order z/x are only known to ~1e-16 · τ in double precision
        let tol = 1e-9_f64.max(1e-15 * z / x);
        assert!(rel(p.value, c(v)) < tol, "I at z={z} x={x}: {} vs {:?}", p.value, v);
        assert!(rel(p.first, c(d1)) < tol, "I1 at z={z} x={x}: {} vs {:?}", p.first, d1);
        assert!(rel(p.second, c(d2)) < tol, "I2 at z={z} x={x}: {} vs {:?}", p.second, d2);
    }
}

#[test]
fn analytic_derivatives_match_richardson_differences() {
    for (z, x) in [(5.0, 2.0), (5.0, 0.5), (50.0, 0.5), (100.0, 0.9), (3.0, 1.5), (20.0, 7.0), (200.0, 0.2)] {
        let pt = EvalPoint::new(z, x).unwrap();
        let p = propagator(&pt, LIGHT_CONE_WIDTH).unwrap();
        let (d1, d2) = propagator_derivatives_fd(&pt).unwrap();
        assert!(rel(d1, p.first) < 1e-8, "I1 z={z} x={x}: {d1} vs {}", p.first);
        // the second difference carries O(h⁴) truncation of about 1e-8
        assert!(rel(d2, p.second) < 1e-7, "I2 z={z} x={x}: {d2} vs {}", p.second);
    }
}

#[test]
fn exchange_relations() {
    let c = CouplingParams::default();
    let pt = EvalPoint::new(5.0, 2.0).unwrap();
    let par = exchange(&pt, &c, DipoleChannel::Longitudinal, LIGHT_CONE_WIDTH).unwrap();
    let perp = exchange(&pt, &c, DipoleChannel::Transverse, LIGHT_CONE_WIDTH).unwrap();
    let avg = exchange(&pt, &c, DipoleChannel::Averaged, LIGHT_CONE_WIDTH).unwrap();
    assert_eq!(avg, (par + perp) * 0.5);

    // linear in κ
    let c2 = CouplingParams::new(1e-2).unwrap();
    let par2 = exchange(&pt, &c2, DipoleChannel::Longitudinal, LIGHT_CONE_WIDTH).unwrap();
    assert!(rel(par2, par * 4.0) < 1e-14);

    let prop = propagator(&pt, LIGHT_CONE_WIDTH).unwrap();
    assert_eq!(exchange_from(&prop, c.k_at(&pt), Orientation::Longitudinal), par);
}

#[test]
fn exchange_is_suppressed_outside_the_light_cone() {
    let c = CouplingParams::default();
    for z in [5.0, 50.0, 2e3] {
        for ch in [DipoleChannel::Longitudinal, DipoleChannel::Transverse] {
            let inside = exchange(&EvalPoint::new(z, 0.5).unwrap(), &c, ch, LIGHT_CONE_WIDTH).unwrap();
            let outside = exchange(&EvalPoint::new(z, 4.0).unwrap(), &c, ch, LIGHT_CONE_WIDTH).unwrap();
            assert!(outside.norm() < 0.1 * inside.norm(), "z={z} {ch}: {} vs {}", outside.norm(), inside.norm());
        }
    }
}

proptest! {
    #[test]
    fn conjugating_the_ei_arguments_conjugates_the_result(z in 0.5f64..200.0, x in 0.05f64..20.0) {
        prop_assume!((x - 1.0).abs() > 1e-3);
        let tau = z / x;
        // with every Ei argument and phase conjugated the bracket becomes
        // the conjugate bracket: check term by term via the printed form
        let i = C::new(0.0, 1.0);
        let d_conj = |w: f64| {
            C::from_polar(1.0, w) * ei(C::new(0.0, -w)).unwrap() - C::from_polar(1.0, -w) * ei(C::new(0.0, w)).unwrap()
        };
        let bracket = d_conj(z) * (-2.0 * tau.cos()) + d_conj(z + tau) + d_conj(z - tau);
        let conj_form = i * C::from_polar(1.0, tau) / (2.0 * z) * bracket;
        let direct = printed_without_branch(z, tau);
        prop_assert!((conj_form - direct.conj()).norm() <= 1e-12 * direct.norm().max(1e-300));
    }

    #[test]
    fn derivatives_consistent_over_random_points(z in 1.0f64..500.0, x in 0.1f64..10.0) {
        prop_assume!((x - 1.0).abs() > 0.05);
        let pt = EvalPoint::new(z, x).unwrap();
        let p = propagator(&pt, LIGHT_CONE_WIDTH).unwrap();
        let (d1, _) = propagator_derivatives_fd(&pt).unwrap();
        prop_assert!(rel(d1, p.first) < 1e-7, "{} vs {}", d1, p.first);
    }
}
