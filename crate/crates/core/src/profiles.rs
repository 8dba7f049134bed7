//! Double-well potential, the standing-wave profile connecting its wells,
//! the linearized Allen–Cahn operator around that profile, and weighted
//! functional inequalities measured against the profile.
//!
//! The profile is the increasing heteroclinic orbit
//! `theta0(y) = (1 + tanh(y / sqrt 8)) / 2`, which solves
//! `theta0'' = W'(theta0)`, tends to 0 at `-inf` and 1 at `+inf`, and has
//! `theta0(0) = 1/2`.
//!
//! Note on the interface constant `c0 = ∫ (theta0')^2 dy`: by equipartition
//! `theta0' = sqrt(2 W(theta0))`, so `c0 = ∫_0^1 sqrt(2W) = sqrt(2)/12`.
//! The value `sqrt(3/2)` that circulates for this potential does not match
//! this integral; the tables here always carry the quadrature value.

use crate::error::{Error, Result};
use crate::field::{self, LineField, UniformGrid};
use crate::asymptotics::PhiScan;
use crate::tridiag;
use std::sync::{Arc, OnceLock};

/// Quartic double well `W(rho) = rho^2 (1 - rho)^2 / 4`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Potential;

impl Potential {
    /// `W^(order)(rho)` for `order` in `0..=4`.
    pub fn eval(&self, rho: f64, order: u32) -> Result<f64> {
        match order {
            0 => Ok(w(rho)),
            1 => Ok(dw(rho)),
            2 => Ok(d2w(rho)),
            3 => Ok(d3w(rho)),
            4 => Ok(D4W),
            _ => Err(Error::Domain(format!(
                "potential derivative order must be 0..=4, got {order}"
            ))),
        }
    }
}

#[inline]
pub fn w(rho: f64) -> f64 {
    let s = rho * (1.0 - rho);
    0.25 * s * s
}

#[inline]
pub fn dw(rho: f64) -> f64 {
    0.5 * rho * (1.0 - rho) * (1.0 - 2.0 * rho)
}

#[inline]
pub fn d2w(rho: f64) -> f64 {
    0.5 - 3.0 * rho + 3.0 * rho * rho
}

#[inline]
pub fn d3w(rho: f64) -> f64 {
    6.0 * rho - 3.0
}

pub const D4W: f64 = 6.0;

/// Largest `|W''|` on `[lo, hi]`. `W''` is a parabola with vertex at 1/2.
pub fn max_abs_d2w(lo: f64, hi: f64) -> f64 {
    let mut m = d2w(lo).abs().max(d2w(hi).abs());
    if lo <= 0.5 && 0.5 <= hi {
        m = m.max(d2w(0.5).abs());
    }
    m
}

const SQRT8: f64 = 2.828_427_124_746_190_1;

/// Closed-form standing wave.
#[inline]
pub fn theta0(y: f64) -> f64 {
    0.5 * (1.0 + (y / SQRT8).tanh())
}

#[inline]
pub fn dtheta0(y: f64) -> f64 {
    let s = 1.0 / (y / SQRT8).cosh();
    s * s / (2.0 * SQRT8)
}

#[inline]
pub fn d2theta0(y: f64) -> f64 {
    let t = theta0(y);
    dtheta0(y) * (1.0 - 2.0 * t) / std::f64::consts::SQRT_2
}

/// `ln((theta0')^2)` evaluated without underflow.
fn log_dtheta0_sq(y: f64) -> f64 {
    let x = (y / SQRT8).abs();
    let ln_cosh = x + (-2.0 * x).exp().ln_1p() - std::f64::consts::LN_2;
    -2.0 * (2.0 * SQRT8).ln() - 4.0 * ln_cosh
}

/// Tabulated standing wave on the symmetric grid `[-L, L]`.
#[derive(Debug, Clone)]
pub struct ProfileTable {
    grid: UniformGrid,
    center: usize,
    theta0: Vec<f64>,
    dtheta0: Vec<f64>,
    d2theta0: Vec<f64>,
    /// Potential of the discrete linearized operator, `W''(theta0)` up to
    /// `O(h^2)`, chosen so that the sampled `theta0'` is its exact null
    /// vector.
    linear_potential: Vec<f64>,
    c0: f64,
    total_rise: f64,
    kappa_env: f64,
    c_env: f64,
    phi_scan: OnceLock<Arc<PhiScan>>,
}

impl ProfileTable {
    /// Tabulates the profile with half-width `half_width >= 40` and
    /// spacing `spacing <= 0.1`. The half-width is rounded to a whole
    /// number of cells so that `y = 0` is a node.
    pub fn build(half_width: f64, spacing: f64) -> Result<Self> {
        if !(half_width >= 40.0) || !half_width.is_finite() {
            return Err(Error::Config(format!(
                "profile half-width must be >= 40, got {half_width}"
            )));
        }
        if !(spacing > 0.0 && spacing <= 0.1) {
            return Err(Error::Config(format!(
                "profile spacing must lie in (0, 0.1], got {spacing}"
            )));
        }
        let half_cells = (half_width / spacing).round() as usize;
        let grid = UniformGrid::new(-(half_cells as f64) * spacing, spacing, 2 * half_cells + 1)?;
        let y = |j: usize| (j as f64 - half_cells as f64) * spacing;
        let theta0: Vec<f64> = (0..grid.len).map(|j| self::theta0(y(j))).collect();
        let dtheta0: Vec<f64> = (0..grid.len).map(|j| self::dtheta0(y(j))).collect();
        let d2theta0: Vec<f64> = (0..grid.len).map(|j| self::d2theta0(y(j))).collect();

        let h2 = spacing * spacing;
        let linear_potential: Vec<f64> = (0..grid.len)
            .map(|j| {
                let yj = y(j);
                let lap = self::dtheta0(yj - spacing) - 2.0 * dtheta0[j] + self::dtheta0(yj + spacing);
                lap / (h2 * dtheta0[j])
            })
            .collect();

        let sq: Vec<f64> = dtheta0.iter().map(|d| d * d).collect();
        let c0 = grid.trapezoid(&sq);
        let total_rise = grid.trapezoid(&dtheta0);

        // least squares fit of ln((theta0')^2) = a - kappa |y| on |y| <= L/2
        let half = half_cells as f64 * spacing / 2.0;
        let (mut n, mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for j in 0..grid.len {
            let yj = y(j);
            if yj.abs() <= half {
                let xa = yj.abs();
                let lg = log_dtheta0_sq(yj);
                n += 1.0;
                sx += xa;
                sy += lg;
                sxx += xa * xa;
                sxy += xa * lg;
            }
        }
        let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        let kappa_env = -slope;
        let worst = (0..grid.len)
            .map(|j| (log_dtheta0_sq(y(j)) + kappa_env * y(j).abs()).abs())
            .fold(0.0_f64, f64::max);
        let c_env = worst.exp() * 1.01;

        Ok(Self {
            grid,
            center: half_cells,
            theta0,
            dtheta0,
            d2theta0,
            linear_potential,
            c0,
            total_rise,
            kappa_env,
            c_env,
            phi_scan: OnceLock::new(),
        })
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    pub fn spacing(&self) -> f64 {
        self.grid.spacing
    }

    pub fn half_width(&self) -> f64 {
        self.center as f64 * self.grid.spacing
    }

    /// Index of the node `y = 0`.
    pub fn center(&self) -> usize {
        self.center
    }

    pub fn theta0(&self) -> &[f64] {
        &self.theta0
    }

    pub fn dtheta0(&self) -> &[f64] {
        &self.dtheta0
    }

    pub fn d2theta0(&self) -> &[f64] {
        &self.d2theta0
    }

    /// `∫ (theta0')^2 dy` by trapezoid quadrature.
    pub fn c0(&self) -> f64 {
        self.c0
    }

    /// `∫ theta0' dy`.
    pub fn total_rise(&self) -> f64 {
        self.total_rise
    }

    /// Decay rate of the envelope `(theta0')^2 ~ exp(-kappa |y|)`.
    pub fn kappa_env(&self) -> f64 {
        self.kappa_env
    }

    /// Envelope constant: `c_env^-1 e^{-kappa|y|} < (theta0')^2 <= c_env e^{-kappa|y|}`.
    pub fn c_env(&self) -> f64 {
        self.c_env
    }

    pub fn theta0_field(&self) -> LineField {
        LineField::new(self.grid, self.theta0.clone()).expect("grid-sized")
    }

    pub fn dtheta0_field(&self) -> LineField {
        LineField::new(self.grid, self.dtheta0.clone()).expect("grid-sized")
    }

    /// Max over interior nodes of `|D^2 theta0 - W'(theta0)|` with the
    /// three-point second difference.
    pub fn standing_wave_residual(&self) -> f64 {
        let h2 = self.grid.spacing * self.grid.spacing;
        let t = &self.theta0;
        (1..t.len() - 1)
            .map(|j| ((t[j + 1] - 2.0 * t[j] + t[j - 1]) / h2 - dw(t[j])).abs())
            .fold(0.0, f64::max)
    }

    /// `Phi(V)` tabulated on the velocity scan grid, computed on first use.
    pub fn phi_scan(&self) -> &PhiScan {
        self.phi_scan.get_or_init(|| Arc::new(PhiScan::compute(self)))
    }

    /// Weighted inner product `∫ a b dy` on the profile grid.
    pub(crate) fn dot(&self, a: &[f64], b: &[f64]) -> f64 {
        field::dot(&self.grid, a, b)
    }

    /// `∫ f (theta0')^2 dy`.
    pub(crate) fn weighted_mean_sq(&self, f: &[f64]) -> f64 {
        let w: Vec<f64> = self.dtheta0.iter().map(|d| d * d).collect();
        self.dot(f, &w)
    }
}

/// `-u'' + W''(theta0) u` by central differences with zero values beyond
/// the truncated ends. The potential is the `O(h^2)` perturbation of
/// `W''(theta0)` that makes `theta0'` an exact null vector at interior
/// nodes.
pub fn linearized_ac_apply(u: &LineField, profile: &ProfileTable) -> Result<LineField> {
    u.check_grid(profile.grid())?;
    let h2 = profile.spacing() * profile.spacing();
    let v = u.values();
    let n = v.len();
    let out = (0..n)
        .map(|j| {
            let left = if j > 0 { v[j - 1] } else { 0.0 };
            let right = if j + 1 < n { v[j + 1] } else { 0.0 };
            -(right - 2.0 * v[j] + left) / h2 + profile.linear_potential[j] * v[j]
        })
        .collect();
    LineField::new(*profile.grid(), out)
}

/// Largest `|<f, theta0'>|` accepted by [`linearized_ac_solve`].
pub const SOLVABILITY_TOL: f64 = 1e-8;

/// Solves `-u'' + W''(theta0) u = f` with `<u, theta0'> = 0`.
pub fn linearized_ac_solve(f: &LineField, profile: &ProfileTable) -> Result<LineField> {
    f.check_grid(profile.grid())?;
    let kernel = profile.dtheta0();
    let inner = profile.dot(f.values(), kernel);
    if inner.abs() > SOLVABILITY_TOL || !inner.is_finite() {
        return Err(Error::Solvability { inner });
    }
    let u = kernel_solve(f.values(), profile)?;
    LineField::new(*profile.grid(), u)
}

/// Solves the singular system on the complement of the kernel: the
/// residual kernel component of `f` is removed, the value at the centre is
/// pinned to zero so that both halves are ordinary Dirichlet problems, and
/// the kernel component of the result is projected out.
pub(crate) fn kernel_solve(f: &[f64], profile: &ProfileTable) -> Result<Vec<f64>> {
    let n = f.len();
    let k = profile.dtheta0();
    let kk: f64 = k.iter().map(|x| x * x).sum();
    let fk: f64 = f.iter().zip(k).map(|(a, b)| a * b).sum();
    let mut u: Vec<f64> = f.iter().zip(k).map(|(a, b)| a - fk / kk * b).collect();

    let h2 = profile.spacing() * profile.spacing();
    let c = profile.center();
    for range in [0..c, c + 1..n] {
        let m = range.len();
        let off = vec![-1.0 / h2; m];
        let diag: Vec<f64> = profile.linear_potential[range.clone()]
            .iter()
            .map(|q| 2.0 / h2 + q)
            .collect();
        tridiag::Factored::new(&off, &diag, &off)?.solve_in_place(&mut u[range]);
    }
    u[c] = 0.0;
    let g = profile.dot(&u, k) / profile.dot(k, k);
    Ok(u.iter().zip(k).map(|(a, b)| a - g * b).collect())
}

/// One inequality measurement: `lhs <= C * rhs` holds with `C >= ratio`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InequalityRatio {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

impl InequalityRatio {
    fn new(lhs: f64, rhs: f64) -> Self {
        let ratio = if rhs > 0.0 {
            lhs / rhs
        } else if lhs.abs() <= f64::EPSILON {
            0.0
        } else {
            f64::INFINITY
        };
        Self { lhs, rhs, ratio }
    }
}

/// Weighted inequalities with weight `(theta0')^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InequalityReport {
    /// `∫w (v - <v>)^2` against `∫w (v')^2`.
    pub poincare: InequalityRatio,
    /// `∫w u^2` against `∫w (u')^2` for `u = v - v(0)`.
    pub friedrichs: InequalityRatio,
    /// `∫(theta0')^3 v^3` against `G^{1/2} M`.
    pub interp3: InequalityRatio,
    /// `∫(theta0')^4 v^4` against `G^{1/2} M^{3/2}`.
    pub interp4: InequalityRatio,
}

/// Reference constants for the weighted inequalities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InequalityConstants {
    /// `c_env^4 / kappa_env^2`; bounds the Friedrichs and Poincaré ratios.
    pub friedrichs: f64,
    /// `(3/2)^{1/4}` from `|u|_inf^2 <= |u| |u'|` with `u = theta0' v`
    /// and `|theta0''| <= theta0' / sqrt 2`.
    pub interp3: f64,
    /// `(3/2)^{1/2}` by the same argument.
    pub interp4: f64,
}

impl InequalityConstants {
    pub fn for_profile(profile: &ProfileTable) -> Self {
        Self {
            friedrichs: profile.c_env.powi(4) / (profile.kappa_env * profile.kappa_env),
            interp3: 1.5_f64.powf(0.25),
            interp4: 1.5_f64.sqrt(),
        }
    }
}

/// Measures the weighted Poincaré, Friedrichs and interpolation
/// inequalities for `v` sampled on the profile grid.
pub fn check_weighted_inequalities(v: &LineField, profile: &ProfileTable) -> Result<InequalityReport> {
    v.check_grid(profile.grid())?;
    let grid = profile.grid();
    let vals = v.values();
    let dv = field::derivative(vals, grid.spacing);
    let d = profile.dtheta0();
    let weight: Vec<f64> = d.iter().map(|x| x * x).collect();
    let integrate = |f: &dyn Fn(usize) -> f64| -> f64 {
        let g: Vec<f64> = (0..vals.len()).map(f).collect();
        grid.trapezoid(&g)
    };

    let c0 = integrate(&|j| weight[j]);
    let mean = integrate(&|j| weight[j] * vals[j]) / c0;
    let grad = integrate(&|j| weight[j] * dv[j] * dv[j]);
    let poincare = InequalityRatio::new(integrate(&|j| weight[j] * (vals[j] - mean).powi(2)), grad);

    let v0 = vals[profile.center()];
    let friedrichs = InequalityRatio::new(integrate(&|j| weight[j] * (vals[j] - v0).powi(2)), grad);

    let m = integrate(&|j| weight[j] * vals[j] * vals[j]);
    let g = m + grad;
    let interp3 = InequalityRatio::new(integrate(&|j| (d[j] * vals[j]).powi(3)), g.sqrt() * m);
    let interp4 = InequalityRatio::new(
        integrate(&|j| (d[j] * vals[j]).powi(4)),
        g.sqrt() * m.powf(1.5),
    );
    Ok(InequalityReport {
        poincare,
        friedrichs,
        interp3,
        interp4,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile() -> ProfileTable {
        ProfileTable::build(40.0, 0.01).unwrap()
    }

    #[test]
    fn potential_values() {
        let p = Potential;
        assert_eq!(p.eval(0.0, 0).unwrap(), 0.0);
        assert!((p.eval(0.5, 0).unwrap() - 1.0 / 64.0).abs() < 1e-16);
        assert!((p.eval(0.25, 1).unwrap() - 0.046875).abs() < 1e-16);
        assert_eq!(p.eval(0.37, 4).unwrap(), 6.0);
        assert!(matches!(p.eval(0.2, 5), Err(Error::Domain(_))));
    }

    #[test]
    fn potential_derivatives_match_finite_differences() {
        let d = 1e-5;
        for &r in &[-0.7, -0.1, 0.2, 0.5, 0.81, 1.3, 1.9] {
            let p = Potential;
            for order in 0..4 {
                let fd = (p.eval(r + d, order).unwrap() - p.eval(r - d, order).unwrap()) / (2.0 * d);
                let exact = p.eval(r, order + 1).unwrap();
                assert!((fd - exact).abs() < 1e-8, "order {order} at {r}");
            }
        }
    }

    #[test]
    fn potential_invariants() {
        assert_eq!(dw(0.0), 0.0);
        assert_eq!(dw(1.0), 0.0);
        assert_eq!(dw(0.5), 0.0);
        for k in 0..=300 {
            let r = -1.0 + 3.0 * k as f64 / 300.0;
            assert!(w(r) >= 0.0);
            if (0.0..=1.0).contains(&r) {
                assert!(dw(r).powi(2) <= 6.0 * w(r) + 1e-18);
            }
        }
    }

    #[test]
    fn profile_shape() {
        let p = profile();
        assert_eq!(p.theta0()[p.center()], 0.5);
        assert!(p.theta0()[0] < 1e-6 && *p.theta0().last().unwrap() > 1.0 - 1e-6);
        assert!(p.theta0().windows(2).all(|w| w[1] >= w[0]));
        assert!((p.total_rise() - 1.0).abs() < 1e-8);
        assert!((p.dtheta0()[p.center()] - 2f64.sqrt() / 8.0).abs() < 1e-12);
        assert!((p.c0() - 2f64.sqrt() / 12.0).abs() < 1e-10);
        assert!(p.standing_wave_residual() <= 10.0 * 0.01 * 0.01);
    }

    #[test]
    fn envelope_brackets_profile() {
        let p = profile();
        assert!(p.c_env() > 1.0 && p.kappa_env() > 0.0);
        // the fit window includes the core, so the slope sits below sqrt 2
        assert!(p.kappa_env() > 1.2 && p.kappa_env() < 2f64.sqrt());
        for (y, d) in p.grid().nodes().zip(p.dtheta0()) {
            let e = (-p.kappa_env() * y.abs()).exp();
            assert!(d * d <= p.c_env() * e);
            assert!(e / p.c_env() < d * d);
        }
    }

    #[test]
    fn build_rejects_bad_configuration() {
        assert!(matches!(ProfileTable::build(20.0, 0.01), Err(Error::Config(_))));
        assert!(matches!(ProfileTable::build(40.0, 0.2), Err(Error::Config(_))));
    }

    #[test]
    fn kernel_is_annihilated() {
        let p = profile();
        let out = linearized_ac_apply(&p.dtheta0_field(), &p).unwrap();
        assert!(out.max_abs() <= 10.0 * 1e-4);
        let zero = linearized_ac_apply(&LineField::zeros(*p.grid()), &p).unwrap();
        assert_eq!(zero.max_abs(), 0.0);
    }

    #[test]
    fn solve_rejects_kernel_direction() {
        let p = profile();
        match linearized_ac_solve(&p.dtheta0_field(), &p) {
            Err(Error::Solvability { inner }) => assert!((inner - p.c0()).abs() < 1e-12),
            other => panic!("expected solvability error, got {other:?}"),
        }
    }

    #[test]
    fn solve_zero_is_zero() {
        let p = profile();
        let u = linearized_ac_solve(&LineField::zeros(*p.grid()), &p).unwrap();
        assert_eq!(u.max_abs(), 0.0);
    }

    #[test]
    fn grid_mismatch_is_domain_error() {
        let p = profile();
        let g = UniformGrid::new(-1.0, 0.5, 5).unwrap();
        assert!(matches!(
            linearized_ac_apply(&LineField::zeros(g), &p),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn constant_has_zero_poincare_ratio() {
        let p = profile();
        let v = LineField::from_fn(*p.grid(), |_| 3.0);
        let r = check_weighted_inequalities(&v, &p).unwrap();
        assert!(r.poincare.lhs.abs() < 1e-14);
        assert_eq!(r.poincare.ratio, 0.0);
    }
}
