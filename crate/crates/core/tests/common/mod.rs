#![allow(dead_code)]

use phasefront::profiles::{dtheta0, ProfileTable};

/// Gauss–Legendre nodes and weights on `[-1, 1]` by Newton iteration on
/// the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    (1..=n)
        .map(|i| {
            let mut x = (std::f64::consts::PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

/// Composite Gauss–Legendre quadrature with `panels` equal panels.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let rule = gauss_legendre(10);
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|p| {
            let mid = a + (p as f64 + 0.5) * h;
            rule.iter().map(|&(x, w)| w * f(mid + 0.5 * h * x)).sum::<f64>() * 0.5 * h
        })
        .sum()
}

/// `Psi(y) = 1/2 ∫ e^{-|y-s|} theta0'(s) ds`, the decaying solution of
/// `Psi'' - Psi = -theta0'`.
pub fn psi0_green(y: f64) -> f64 {
    let left = integrate(|s| (s - y).exp() * dtheta0(s), y - 60.0, y, 600);
    let right = integrate(|s| (y - s).exp() * dtheta0(s), y, y + 60.0, 600);
    0.5 * (left + right)
}

/// `Phi(0) = ∫ Psi(y) theta0'(y)^2 dy` with the Green's-function `Psi`.
pub fn phi0_green() -> f64 {
    integrate(|y| psi0_green(y) * dtheta0(y).powi(2), -30.0, 30.0, 120)
}

pub fn profile() -> ProfileTable {
    ProfileTable::build(40.0, 0.02).unwrap()
}
