mod common;

use phasefront::asymptotics::*;
use phasefront::field::LineField;
use phasefront::profiles::*;
use proptest::prelude::*;
use std::time::Instant;

#[test]
fn psi0_matches_green_function() {
    let start = Instant::now();
    let p = ProfileTable::build(40.0, 0.01).unwrap();
    let psi = solve_psi0(0.0, 1.0, &p).unwrap();
    let elapsed = start.elapsed();
    let mut worst = 0.0f64;
    for (j, y) in p.grid().nodes().enumerate() {
        if y.abs() <= 20.0 && j % 25 == 0 {
            worst = worst.max((psi.values()[j] - common::psi0_green(y)).abs());
        }
    }
    assert!(worst <= 1e-6, "max error {worst:e}");
    assert!(elapsed.as_secs_f64() < 1.0, "{elapsed:?}");
}

#[test]
fn psi0_is_second_order() {
    let exact = common::psi0_green(0.0);
    let err: Vec<f64> = [0.04, 0.02]
        .iter()
        .map(|&h| {
            let p = ProfileTable::build(40.0, h).unwrap();
            (solve_psi0(0.0, 1.0, &p).unwrap().values()[p.center()] - exact).abs()
        })
        .collect();
    let ratio = err[0] / err[1];
    assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}");
}

#[test]
fn phi_at_zero_matches_double_quadrature() {
    let p = common::profile();
    let phi = phi_of_v(0.0, &p).unwrap();
    let oracle = common::phi0_green();
    assert!((phi - oracle).abs() <= 1e-6, "{phi} vs {oracle}");
}

#[test]
fn phi_richardson_ratio() {
    let ps: Vec<ProfileTable> = [0.04, 0.02, 0.01]
        .iter()
        .map(|&h| ProfileTable::build(40.0, h).unwrap())
        .collect();
    for v in [-1.0, 0.0, 1.0] {
        let f: Vec<f64> = ps.iter().map(|p| phi_of_v(v, p).unwrap()).collect();
        let ratio = (f[0] - f[1]) / (f[1] - f[2]);
        assert!((3.5..=4.5).contains(&ratio), "V = {v}: ratio {ratio}");
        let h: f64 = 0.04;
        assert!((f[0] - f[1]).abs() <= 1e-4 * h * h);
    }
}

#[test]
fn phi_is_even() {
    let p = common::profile();
    for v in [0.5, 1.0, 2.0, 4.5] {
        let (a, b) = (phi_of_v(v, &p).unwrap(), phi_of_v(-v, &p).unwrap());
        assert!((a - b).abs() <= 1e-12 * a, "V = {v}");
    }
}

fn scan_oracle(f: f64, beta: f64, p: &ProfileTable) -> Vec<(f64, f64)> {
    let c0 = p.c0();
    let rise = p.total_rise();
    let g = |v: f64| c0 * v - beta * phi_of_v(-v, p).unwrap() - f * rise;
    let mut brackets = Vec::new();
    let mut prev = (-5.0, g(-5.0));
    for k in 1..=10_000 {
        let v = -5.0 + k as f64 * 1e-3;
        let gv = g(v);
        if prev.1 * gv <= 0.0 {
            brackets.push((prev.0, v));
        }
        prev = (v, gv);
    }
    brackets
}

#[test]
fn v0_matches_brute_force_scan() {
    let p = ProfileTable::build(40.0, 0.04).unwrap();
    let (f, beta) = (0.05, 0.1);
    let brackets = scan_oracle(f, beta, &p);
    assert_eq!(brackets.len(), 1);
    let v0 = solve_v0(f, beta, &p).unwrap();
    let (lo, hi) = brackets[0];
    assert!(v0 >= lo - 1e-12 && v0 <= hi + 1e-12, "{v0} not in [{lo}, {hi}]");
    let residual = p.c0() * v0 - beta * phi_of_v(-v0, &p).unwrap() - f * p.total_rise();
    assert!(residual.abs() <= 1e-10, "{residual:e}");
}

#[test]
fn first_order_with_constant_forcing() {
    let p = common::profile();
    let c0 = p.c0();
    let t: Vec<f64> = (0..=4).map(|k| 0.25 * k as f64).collect();
    let forcing = vec![c0; t.len()];
    let e = build_expansion(1, &forcing, 0.0, &t, &p).unwrap();
    // the truncated tails make the total rise 1 - 1e-12
    assert!(e.velocity(0).iter().all(|v| (v - 1.0).abs() < 1e-10));
    let h = p.spacing();
    let d = p.dtheta0_field();
    for k in 0..t.len() {
        let th1 = e.theta(1, k);
        assert!(th1.dot(&d).abs() < 1e-10);
        let v = th1.values();
        for j in 1..v.len() - 1 {
            let y = p.grid().node(j);
            let lhs = -(v[j + 1] - 2.0 * v[j] + v[j - 1]) / (h * h) + d2w(theta0(y)) * v[j];
            let rhs = -dtheta0(y) + c0;
            assert!((lhs - rhs).abs() <= 10.0 * h * h, "y = {y}: {}", lhs - rhs);
        }
    }
}

#[test]
fn defect_improves_with_order_and_scales() {
    let p = common::profile();
    let t: Vec<f64> = (0..=20).map(|k| 0.05 * k as f64).collect();
    let forcing: Vec<f64> = t.iter().map(|s| 0.02 * s.sin() + 0.01).collect();
    let beta = 0.1;
    let eps = [0.1, 0.05, 0.025];
    let e0 = build_expansion(0, &forcing, beta, &t, &p).unwrap();
    let e1 = build_expansion(1, &forcing, beta, &t, &p).unwrap();
    let d0: Vec<f64> = eps.iter().map(|&x| defect_norm(&e0, x, &forcing, beta).unwrap().0).collect();
    let d1: Vec<f64> = eps.iter().map(|&x| defect_norm(&e1, x, &forcing, beta).unwrap().0).collect();
    for k in 0..3 {
        assert!(d1[k] < d0[k], "eps = {}: {} vs {}", eps[k], d1[k], d0[k]);
    }
    let slope = (d1[0] / d1[2]).ln() / (eps[0] / eps[2]).ln();
    assert!(slope >= 1.5, "slope {slope}");
}

#[test]
fn unbalanced_forcing_is_out_of_range() {
    let p = common::profile();
    assert!(matches!(solve_v0(5.0, 0.0, &p), Err(phasefront::Error::RootNotFound { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn psi0_is_linear_in_beta(v in -3.0f64..3.0, beta in -0.5f64..0.5) {
        let p = ProfileTable::build(40.0, 0.04).unwrap();
        let one = solve_psi0(v, 1.0, &p).unwrap();
        let b = solve_psi0(v, beta, &p).unwrap();
        for (x, y) in one.values().iter().zip(b.values()) {
            prop_assert!((beta * x - y).abs() <= 1e-12 * x.abs().max(1e-3));
        }
    }

    #[test]
    fn v0_satisfies_first_order_solvability(f in -0.2f64..0.2, beta in -0.3f64..0.3) {
        let p = ProfileTable::build(40.0, 0.04).unwrap();
        let v0 = solve_v0(f, beta, &p).unwrap();
        let psi = solve_psi0(v0, beta, &p).unwrap();
        let d = p.dtheta0();
        let rhs: Vec<f64> = (0..d.len())
            .map(|j| -v0 * d[j] + psi.values()[j] * d[j] + f)
            .collect();
        let inner = LineField::new(*p.grid(), rhs).unwrap().dot(&p.dtheta0_field());
        prop_assert!(inner.abs() <= 1e-9, "{inner:e}");
    }
}
