mod common;

use phasefront::front_law::{hausdorff, FrontCurve};
use phasefront::harness::{compare_curves, run_plane};
use phasefront::phasefield_2d::*;
use phasefront::profiles::theta0;
use phasefront::Error;
use proptest::prelude::*;

const L: f64 = 1.28;
const C: [f64; 2] = [0.64, 0.64];

fn disk(n: usize, eps: f64, beta: f64, radius: f64) -> PlaneState {
    let g = PlaneGrid::square(n, L / n as f64).unwrap();
    let shape = Shape::Circle { center: C, radius };
    init_from_shape(g, &shape, eps, beta, OrientationInit::Profile, &common::profile()).unwrap()
}

fn contour_error(n: usize) -> f64 {
    let c = extract_contour(&disk(n, 0.08, 0.0, 0.3)).unwrap();
    hausdorff(&c, &FrontCurve::circle(C, 0.3, 2048).unwrap())
}

#[test]
fn disk_contour_within_one_cell() {
    assert!(contour_error(128) <= L / 128.0);
}

#[test]
fn contour_converges_at_second_order() {
    let e: Vec<f64> = [128, 256, 512].iter().map(|&n| contour_error(n)).collect();
    for w in e.windows(2) {
        let ratio = w[0] / w[1];
        assert!((3.0..=5.0).contains(&ratio), "ratio {ratio}");
    }
}

#[test]
fn two_bumps_are_rejected() {
    let n = 128;
    let g = PlaneGrid::square(n, L / n as f64).unwrap();
    let mut s = PlaneState::constant(g, 0.0, 0.08, 0.0);
    for j in 0..n {
        for i in 0..n {
            let d = |cx: f64| 0.2 - (g.x(i) - cx).hypot(g.y(j) - 0.64);
            s.rho[j * n + i] = theta0(d(0.35) / 0.08).max(theta0(d(0.93) / 0.08));
        }
    }
    assert!(matches!(extract_contour(&s), Err(Error::Components { count: 2 })));
}

#[test]
fn straight_strip_energy_is_length_times_c0() {
    let n = 256;
    let g = PlaneGrid::square(n, L / n as f64).unwrap();
    let eps = 0.08;
    let mut s = PlaneState::constant(g, 0.0, eps, 0.0);
    for j in 0..n {
        for i in 0..n {
            s.rho[j * n + i] = theta0((g.x(i) - 0.64) / eps);
        }
    }
    let (e, f) = energies(&s);
    let c0 = common::profile().c0();
    assert!((e - L * c0).abs() <= 1e-3 * L * c0, "{e}");
    assert_eq!(f, 0.0);
}

#[test]
fn mass_is_conserved_over_many_steps() {
    let mut s = disk(64, 0.16, 0.2, 0.3);
    let dt = max_stable_dt(s.eps, &s.grid);
    let mut stepper = Stepper2d::new(s.grid, s.eps, s.beta, dt).unwrap();
    let m0 = s.mass();
    for _ in 0..1000 {
        stepper.step(&mut s).unwrap();
        assert!((s.mass() - m0).abs() <= 1e-12 * s.grid.area());
    }
}

#[test]
fn short_run_with_motility_stays_in_band() {
    let s = disk(256, 0.05, 0.1, 0.25);
    let (records, last, stats) = run_plane(s, 0.01, 4, None, |_| Ok(())).unwrap();
    assert_eq!(stats.band_violations, 0);
    assert!(records.iter().all(|r| r.band_ok));
    assert!(stats.max_mass_drift <= 1e-12 * last.grid.area());
    assert!(stats.energy_ratio <= 1.0);
}

#[test]
fn energy_decreases_without_motility() {
    let s = disk(128, 0.08, 0.0, 0.3);
    let (records, _, _) = run_plane(s, 0.02, 10, None, |_| Ok(())).unwrap();
    for w in records.windows(2) {
        assert!(w[1].e_eps <= w[0].e_eps + 1e-12);
    }
}

#[test]
fn contour_follows_curve_law_for_a_circle() {
    let p = common::profile();
    let s = disk(128, 0.08, 0.0, 0.3);
    let curve = extract_contour_with(&s, 128).unwrap();
    let front_dt = 0.1 * curve.min_spacing().powi(2);
    let rows = compare_curves(s, &curve, 0.05, 5, None, front_dt, &p).unwrap();
    assert!(rows.iter().all(|r| r.hausdorff <= 5.0 * 0.08));
}

#[test]
fn mismatched_initial_curves_are_rejected() {
    let p = common::profile();
    let s = disk(128, 0.08, 0.0, 0.3);
    let curve = extract_contour_with(&s, 128).unwrap().translated([0.1, 0.0]);
    let r = compare_curves(s, &curve, 0.05, 5, None, 1e-5, &p);
    assert!(matches!(r, Err(Error::Validation(_))));
}

#[test]
fn coarse_grid_is_rejected() {
    let g = PlaneGrid::square(64, 0.02).unwrap();
    let shape = Shape::Circle { center: C, radius: 0.3 };
    let r = init_from_shape(g, &shape, 0.08, 0.0, OrientationInit::Zero, &common::profile());
    assert!(matches!(r, Err(Error::Config(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn single_step_conserves_mass(
        cx in 0.25f64..0.39, cy in 0.25f64..0.39, radius in 0.1f64..0.2, beta in -0.5f64..0.5,
    ) {
        let g = PlaneGrid::square(64, 0.01).unwrap();
        let shape = Shape::Circle { center: [cx, cy], radius };
        let s = init_from_shape(g, &shape, 0.08, beta, OrientationInit::Profile, &common::profile()).unwrap();
        let (next, rec) = step_2d(&s, max_stable_dt(0.08, &g)).unwrap();
        prop_assert!((next.mass() - s.mass()).abs() <= 1e-12 * g.area());
        prop_assert!(rec.band_ok);
        prop_assert!((next.t - s.t - max_stable_dt(0.08, &g)).abs() <= 1e-15);
    }
}
