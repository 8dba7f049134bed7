//! Inner expansion of the one-dimensional model around a moving front.
//!
//! In the stretched variable `y = (x - x_eps(t)) / eps` the model becomes
//!
//! ```text
//! eps^2 d_t rho + eps V rho' - rho'' + W'(rho) - eps P rho' - eps F = 0
//! eps d_t P     +     V P'   - P''   + P       - beta rho'        = 0
//! ```
//!
//! with `V = -dx_eps/dt`. Powers of `eps` give the hierarchy for
//! `theta_i`, `Psi_i`, `V_i` built by [`build_expansion`].

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{self, LineField, UniformGrid};
use crate::profiles::{kernel_solve, d3w, dw, ProfileTable, SOLVABILITY_TOL};
use crate::tridiag;

/// Largest `|V|` for which the orientation profile is solved.
pub const MAX_SPEED: f64 = 5.0;
/// Velocity scan step used to bracket roots.
pub const SCAN_STEP: f64 = 1e-3;
const SCAN_HALF: usize = 5000;
/// Target residual for polished velocity roots.
pub const ROOT_TOL: f64 = 1e-10;
/// Highest supported expansion order.
pub const MAX_ORDER: usize = 3;

/// Solution of `Psi'' - V Psi' - Psi = -beta theta0'` on the profile grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PsiProfile {
    grid: UniformGrid,
    values: Vec<f64>,
    velocity: f64,
    beta: f64,
}

impl PsiProfile {
    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn velocity(&self) -> f64 {
        self.velocity
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn to_field(&self) -> LineField {
        LineField::new(self.grid, self.values.clone()).expect("grid-sized")
    }
}

fn check_speed(v: f64) -> Result<()> {
    if v.abs() <= MAX_SPEED {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "velocity {v} outside [-{MAX_SPEED}, {MAX_SPEED}]"
        )))
    }
}

/// Solves `Psi'' - v Psi' - Psi = rhs` with `Psi = 0` held at both end
/// nodes.
fn advected_solve(v: f64, rhs: &[f64], h: f64) -> Result<Vec<f64>> {
    let n = rhs.len();
    let h2 = h * h;
    let mut lower = vec![-1.0 / h2 - v / (2.0 * h); n];
    let mut upper = vec![-1.0 / h2 + v / (2.0 * h); n];
    let mut diag = vec![2.0 / h2 + 1.0; n];
    let mut x: Vec<f64> = rhs.iter().map(|r| -r).collect();
    for j in [0, n - 1] {
        lower[j] = 0.0;
        upper[j] = 0.0;
        diag[j] = 1.0;
        x[j] = 0.0;
    }
    tridiag::solve_in_place(&lower, &diag, &upper, &mut x)?;
    Ok(x)
}

pub fn solve_psi0(velocity: f64, beta: f64, profile: &ProfileTable) -> Result<PsiProfile> {
    check_speed(velocity)?;
    let rhs: Vec<f64> = profile.dtheta0().iter().map(|d| -beta * d).collect();
    let values = advected_solve(velocity, &rhs, profile.spacing())?;
    Ok(PsiProfile {
        grid: *profile.grid(),
        values,
        velocity,
        beta,
    })
}

/// `Phi(V) = ∫ Psi0(y; -V, beta = 1) (theta0')^2 dy`.
pub fn phi_of_v(velocity: f64, profile: &ProfileTable) -> Result<f64> {
    let psi = solve_psi0(-velocity, 1.0, profile)?;
    Ok(profile.weighted_mean_sq(psi.values()))
}

/// `Phi` sampled at `V_k = (k - 5000) / 1000`, `k = 0..=10000`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhiScan {
    values: Vec<f64>,
}

impl PhiScan {
    pub(crate) fn compute(profile: &ProfileTable) -> Self {
        let values = (0..=2 * SCAN_HALF)
            .into_par_iter()
            .map(|k| phi_of_v(Self::node(k), profile).expect("|V| <= 5 keeps the system diagonally dominant"))
            .collect();
        Self { values }
    }

    #[inline]
    pub fn node(k: usize) -> f64 {
        (k as f64 - SCAN_HALF as f64) / 1000.0
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn velocities(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.values.len()).map(Self::node)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Four-point Lagrange interpolation in `V`; errors outside the table.
    pub fn interpolate(&self, v: f64) -> Result<f64> {
        check_speed(v)?;
        let s = (v + MAX_SPEED) / SCAN_STEP;
        let last = self.values.len() - 1;
        let j = (s.floor() as usize).clamp(1, last - 2);
        let u = s - j as f64;
        let (f0, f1, f2, f3) = (
            self.values[j - 1],
            self.values[j],
            self.values[j + 1],
            self.values[j + 2],
        );
        Ok(-u * (u - 1.0) * (u - 2.0) / 6.0 * f0 + (u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0 * f1
            - (u + 1.0) * u * (u - 2.0) / 2.0 * f2
            + (u + 1.0) * u * (u - 1.0) / 6.0 * f3)
    }
}

/// All roots of `residual` on `[-5, 5]`, bracketed by sign changes of
/// `scan` on the scan grid and polished with exact evaluations.
pub(crate) fn scan_roots(
    scan: impl Fn(usize) -> f64,
    residual: impl Fn(f64) -> Result<f64>,
) -> Result<Vec<f64>> {
    let n = 2 * SCAN_HALF + 1;
    let g: Vec<f64> = (0..n).map(&scan).collect();
    let mut roots = Vec::new();
    for k in 0..n {
        if g[k] == 0.0 {
            roots.push(PhiScan::node(k));
        } else if k + 1 < n && g[k + 1] != 0.0 && (g[k] < 0.0) != (g[k + 1] < 0.0) {
            roots.push(polish(PhiScan::node(k), PhiScan::node(k + 1), g[k], &residual)?);
        }
    }
    Ok(roots)
}

/// Bisection to a narrow bracket, then safeguarded Newton steps with a
/// finite-difference slope.
fn polish(mut a: f64, mut b: f64, ga: f64, residual: &impl Fn(f64) -> Result<f64>) -> Result<f64> {
    let neg_at_a = ga < 0.0;
    let mut best = (f64::INFINITY, a);
    for _ in 0..20 {
        let m = 0.5 * (a + b);
        let gm = residual(m)?;
        if gm.abs() < best.0 {
            best = (gm.abs(), m);
        }
        if gm == 0.0 {
            return Ok(m);
        }
        if (gm < 0.0) == neg_at_a {
            a = m;
        } else {
            b = m;
        }
    }
    let mut x = 0.5 * (a + b);
    for _ in 0..60 {
        let gx = residual(x)?;
        if gx.abs() < best.0 {
            best = (gx.abs(), x);
        }
        if gx.abs() <= 1e-14 {
            return Ok(x);
        }
        if (gx < 0.0) == neg_at_a {
            a = x;
        } else {
            b = x;
        }
        let d = 1e-7;
        let slope = (residual(x + d)? - residual(x - d)?) / (2.0 * d);
        let newton = x - gx / slope;
        x = if slope.is_finite() && slope != 0.0 && newton > a && newton < b {
            newton
        } else {
            0.5 * (a + b)
        };
        if b - a < 1e-15 {
            break;
        }
    }
    if best.0 <= ROOT_TOL {
        Ok(best.1)
    } else {
        Err(Error::NoConvergence {
            iterations: 80,
            residual: best.0,
        })
    }
}

/// Leading-order velocity: the root of
/// `g(V) = c0 V - beta Phi(-V) - F ∫theta0'` on `[-5, 5]`.
pub fn solve_v0(forcing: f64, beta: f64, profile: &ProfileTable) -> Result<f64> {
    if !(beta.abs() <= 0.5) {
        return Err(Error::Config(format!("|beta| must be <= 0.5, got {beta}")));
    }
    let c0 = profile.c0();
    let rise = profile.total_rise();
    let last = 2 * SCAN_HALF;
    let roots = if beta == 0.0 {
        let v = forcing * rise / c0;
        if v.abs() <= MAX_SPEED {
            vec![v]
        } else {
            vec![]
        }
    } else {
        let table = profile.phi_scan().values();
        scan_roots(
            |k| c0 * PhiScan::node(k) - beta * table[last - k] - forcing * rise,
            |v| Ok(c0 * v - beta * phi_of_v(-v, profile)? - forcing * rise),
        )?
    };
    match roots.len() {
        0 => Err(Error::RootNotFound {
            lo: -MAX_SPEED,
            hi: MAX_SPEED,
            forcing,
            beta,
        }),
        1 => Ok(roots[0]),
        _ => Err(Error::MultipleRoots { roots }),
    }
}

/// Order-`N` inner expansion sampled on a time grid.
#[derive(Debug, Clone)]
pub struct ExpansionSet {
    order: usize,
    grid: UniformGrid,
    times: Vec<f64>,
    forcing: Vec<f64>,
    beta: f64,
    /// `theta[i - 1][k]` is `theta_i` at time node `k`.
    theta: Vec<Vec<Vec<f64>>>,
    /// `psi[i][k]` is `Psi_i` at time node `k`.
    psi: Vec<Vec<Vec<f64>>>,
    velocity: Vec<Vec<f64>>,
    position: Vec<Vec<f64>>,
    alpha: f64,
}

impl ExpansionSet {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn forcing(&self) -> &[f64] {
        &self.forcing
    }

    /// Bookkeeping exponent of the residual scaling.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `theta_i` at time node `k`, `1 <= i <= N`.
    pub fn theta(&self, i: usize, k: usize) -> LineField {
        LineField::new(self.grid, self.theta[i - 1][k].clone()).expect("grid-sized")
    }

    pub(crate) fn theta_values(&self, i: usize, k: usize) -> &[f64] {
        &self.theta[i - 1][k]
    }

    /// `Psi_i` at time node `k`, `0 <= i <= N`.
    pub fn psi(&self, i: usize, k: usize) -> LineField {
        LineField::new(self.grid, self.psi[i][k].clone()).expect("grid-sized")
    }

    pub(crate) fn psi_values(&self, i: usize, k: usize) -> &[f64] {
        &self.psi[i][k]
    }

    /// Number of velocity corrections `V_0, V_1, ...` carried.
    pub fn velocity_count(&self) -> usize {
        self.velocity.len()
    }

    /// `V_i` at every time node.
    pub fn velocity(&self, i: usize) -> &[f64] {
        &self.velocity[i]
    }

    /// `x_i(t) = -∫_0^t V_i`, with `x_i(t_0) = 0`.
    pub fn position(&self, i: usize) -> &[f64] {
        &self.position[i]
    }

    /// `sum_i eps^i V_i` at node `k`.
    pub fn total_velocity(&self, eps: f64, k: usize) -> f64 {
        self.velocity
            .iter()
            .enumerate()
            .map(|(i, v)| eps.powi(i as i32) * v[k])
            .sum()
    }
}

fn check_time_grid(t: &[f64]) -> Result<()> {
    if t.is_empty() {
        return Err(Error::Config("time grid is empty".into()));
    }
    if t.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Config("time grid must be strictly increasing".into()));
    }
    Ok(())
}

/// `dW^(i)` for `i = 2, 3` from `theta_1..theta_{i-1}`.
fn nonlinear_source(i: usize, theta0: f64, th: &[&[f64]], j: usize) -> f64 {
    match i {
        2 => 0.5 * d3w(theta0) * th[0][j] * th[0][j],
        3 => d3w(theta0) * th[0][j] * th[1][j] + th[0][j].powi(3),
        _ => 0.0,
    }
}

/// Builds `theta_1..theta_N`, `Psi_0..Psi_N` and `V_0..V_{N-1}` on `t_grid`.
///
/// `forcing[k]` is `F(t_grid[k])`. `V_0` always comes from the nonlinear
/// solvability condition; each later `V_{i-1}` solves a linear one because
/// `Psi_{i-1}` depends affinely on it. The top-order `Psi_N` is closed
/// with `V_N = 0`.
pub fn build_expansion(
    order: usize,
    forcing: &[f64],
    beta: f64,
    t_grid: &[f64],
    profile: &ProfileTable,
) -> Result<ExpansionSet> {
    if order > MAX_ORDER {
        return Err(Error::Config(format!(
            "expansion order {order} exceeds the maximum {MAX_ORDER}"
        )));
    }
    if beta.abs() > 0.5 {
        return Err(Error::Config(format!("|beta| must be <= 0.5, got {beta}")));
    }
    check_time_grid(t_grid)?;
    if forcing.len() != t_grid.len() {
        return Err(Error::Config(format!(
            "forcing has {} samples for {} time nodes",
            forcing.len(),
            t_grid.len()
        )));
    }
    let h = profile.spacing();
    let n = profile.grid().len;
    let m = t_grid.len();
    let th0 = profile.theta0();
    let d0 = profile.dtheta0();

    // order 1: V_0, Psi_0, theta_1
    let first: Vec<(f64, Vec<f64>, Option<Vec<f64>>)> = (0..m)
        .into_par_iter()
        .map(|k| {
            let v0 = solve_v0(forcing[k], beta, profile).map_err(|e| e.at_order(1, k))?;
            let psi0 = solve_psi0(v0, beta, profile).map_err(|e| e.at_order(1, k))?;
            let psi0 = psi0.values;
            let theta1 = if order >= 1 {
                let rhs: Vec<f64> = (0..n)
                    .map(|j| (psi0[j] - v0) * d0[j] + forcing[k])
                    .collect();
                Some(order_solve(&rhs, profile).map_err(|e| e.at_order(1, k))?)
            } else {
                None
            };
            Ok((v0, psi0, theta1))
        })
        .collect::<Result<_>>()?;

    let mut velocity = vec![first.iter().map(|f| f.0).collect::<Vec<_>>()];
    let mut psi: Vec<Vec<Vec<f64>>> = vec![first.iter().map(|f| f.1.clone()).collect()];
    let mut theta: Vec<Vec<Vec<f64>>> = Vec::new();
    if order >= 1 {
        theta.push(first.into_iter().map(|f| f.2.unwrap()).collect());
    }

    // orders 2..=N: V_{i-1}, Psi_{i-1}, theta_i
    for i in 2..=order {
        let psi_dot = time_derivatives(t_grid, &psi[i - 2]);
        let theta_dot = if i >= 3 {
            Some(time_derivatives(t_grid, &theta[i - 3]))
        } else {
            None
        };
        let step: Vec<(f64, Vec<f64>, Vec<f64>)> = (0..m)
            .into_par_iter()
            .map(|k| {
                let v0 = velocity[0][k];
                let dtheta: Vec<Vec<f64>> = (0..i - 1)
                    .map(|q| field::derivative(&theta[q][k], h))
                    .collect();
                let dpsi: Vec<Vec<f64>> =
                    (0..i - 1).map(|q| field::derivative(&psi[q][k], h)).collect();
                // theta_q' with theta_0' analytic
                let dth = |q: usize, j: usize| if q == 0 { d0[j] } else { dtheta[q - 1][j] };

                let mut rhs_part: Vec<f64> = (0..n)
                    .map(|j| -beta * dtheta[i - 2][j] + psi_dot[k][j])
                    .collect();
                for jv in 1..i - 1 {
                    let v = velocity[jv][k];
                    for (r, d) in rhs_part.iter_mut().zip(&dpsi[i - 1 - jv]) {
                        *r += v * d;
                    }
                }
                let part = advected_solve(v0, &rhs_part, h).map_err(|e| e.at_order(i, k))?;
                let unit = advected_solve(v0, &dpsi[0], h).map_err(|e| e.at_order(i, k))?;

                let th_refs: Vec<&[f64]> = (0..i - 1).map(|q| theta[q][k].as_slice()).collect();
                let base: Vec<f64> = (0..n)
                    .map(|j| {
                        let mut r = -nonlinear_source(i, th0[j], &th_refs, j);
                        if let Some(td) = &theta_dot {
                            r -= td[k][j];
                        }
                        for jv in 0..i - 1 {
                            r -= velocity[jv][k] * dth(i - 1 - jv, j);
                            r += psi[jv][k][j] * dth(i - 1 - jv, j);
                        }
                        r + part[j] * d0[j]
                    })
                    .collect();
                let slope: Vec<f64> = (0..n).map(|j| (unit[j] - 1.0) * d0[j]).collect();
                let b = profile.dot(&base, d0);
                let a = profile.dot(&slope, d0);
                if a.abs() < 1e-12 {
                    return Err(Error::Solvability { inner: a }.at_order(i, k));
                }
                let v_prev = -b / a;
                let rhs: Vec<f64> = base.iter().zip(&slope).map(|(b, s)| b + v_prev * s).collect();
                let theta_i = order_solve(&rhs, profile).map_err(|e| e.at_order(i, k))?;
                let psi_prev: Vec<f64> = part.iter().zip(&unit).map(|(p, u)| p + v_prev * u).collect();
                Ok((v_prev, psi_prev, theta_i))
            })
            .collect::<Result<_>>()?;
        velocity.push(step.iter().map(|s| s.0).collect());
        psi.push(step.iter().map(|s| s.1.clone()).collect());
        theta.push(step.into_iter().map(|s| s.2).collect());
    }

    // top-order Psi_N with V_N = 0
    if order >= 1 {
        let psi_dot = time_derivatives(t_grid, &psi[order - 1]);
        let top: Vec<Vec<f64>> = (0..m)
            .into_par_iter()
            .map(|k| {
                let dtop = field::derivative(&theta[order - 1][k], h);
                let mut rhs: Vec<f64> = (0..n).map(|j| -beta * dtop[j] + psi_dot[k][j]).collect();
                for jv in 1..order {
                    let d = field::derivative(&psi[order - jv][k], h);
                    let v = velocity[jv][k];
                    for (r, dd) in rhs.iter_mut().zip(&d) {
                        *r += v * dd;
                    }
                }
                advected_solve(velocity[0][k], &rhs, h).map_err(|e| e.at_order(order, k))
            })
            .collect::<Result<_>>()?;
        psi.push(top);
    }

    let position = velocity
        .iter()
        .map(|v| {
            let mut x = vec![0.0; m];
            for k in 1..m {
                x[k] = x[k - 1] - 0.5 * (t_grid[k] - t_grid[k - 1]) * (v[k] + v[k - 1]);
            }
            x
        })
        .collect();

    Ok(ExpansionSet {
        order,
        grid: *profile.grid(),
        times: t_grid.to_vec(),
        forcing: forcing.to_vec(),
        beta,
        theta,
        psi,
        velocity,
        position,
        alpha: (order as f64 - 1.0).max(1.0),
    })
}

/// Solves one order of the hierarchy with the orthogonality normalization.
fn order_solve(rhs: &[f64], profile: &ProfileTable) -> Result<Vec<f64>> {
    let inner = profile.dot(rhs, profile.dtheta0());
    if inner.abs() > SOLVABILITY_TOL {
        return Err(Error::Solvability { inner });
    }
    kernel_solve(rhs, profile)
}

fn time_derivatives(t: &[f64], series: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let refs: Vec<&[f64]> = series.iter().map(|s| s.as_slice()).collect();
    field::time_derivative(t, &refs)
}

/// Space-time `L^2` norms of the residuals of the stretched model
/// evaluated at the truncated expansion, with `V = sum eps^i V_i`.
///
/// Returns `(defect_rho, defect_P)`, measured in `y` over interior nodes.
pub fn defect_norm(
    expansion: &ExpansionSet,
    eps: f64,
    forcing: &[f64],
    beta: f64,
) -> Result<(f64, f64)> {
    if !(eps > 0.0 && eps <= 0.5) {
        return Err(Error::Resolution(format!("eps must lie in (0, 0.5], got {eps}")));
    }
    let h = expansion.grid.spacing;
    if h > 0.1 {
        return Err(Error::Resolution(format!(
            "profile spacing {h} does not resolve the layer (need <= 0.1)"
        )));
    }
    let t = &expansion.times;
    let m = t.len();
    if forcing.len() != m {
        return Err(Error::Config(format!(
            "forcing has {} samples for {} time nodes",
            forcing.len(),
            m
        )));
    }
    let n = expansion.grid.len;
    let order = expansion.order;
    let x0 = expansion.grid.start;
    let th0: Vec<f64> = (0..n).map(|j| crate::profiles::theta0(x0 + j as f64 * h)).collect();
    let d0: Vec<f64> = (0..n).map(|j| crate::profiles::dtheta0(x0 + j as f64 * h)).collect();

    let dth0_fd = field::derivative(&th0, h);
    let theta_dot: Vec<Vec<Vec<f64>>> = expansion.theta.iter().map(|s| time_derivatives(t, s)).collect();
    let psi_dot: Vec<Vec<Vec<f64>>> = expansion.psi.iter().map(|s| time_derivatives(t, s)).collect();

    let per_node: Vec<(f64, f64)> = (0..m)
        .into_par_iter()
        .map(|k| {
            let mut rho = th0.clone();
            let mut rho_t = vec![0.0; n];
            let mut p = vec![0.0; n];
            let mut p_t = vec![0.0; n];
            let mut scale = 1.0;
            for i in 0..=order {
                if i >= 1 {
                    for j in 0..n {
                        rho[j] += scale * expansion.theta[i - 1][k][j];
                        rho_t[j] += scale * theta_dot[i - 1][k][j];
                    }
                }
                for j in 0..n {
                    p[j] += scale * expansion.psi[i][k][j];
                    p_t[j] += scale * psi_dot[i][k][j];
                }
                scale *= eps;
            }
            let v = expansion.total_velocity(eps, k);
            let mut drho = field::derivative(&rho, h);
            // the leading layer carries its exact slope
            for j in 0..n {
                drho[j] += d0[j] - dth0_fd[j];
            }
            let dp = field::derivative(&p, h);
            let h2 = h * h;
            let (mut sr, mut sp) = (0.0, 0.0);
            for j in 1..n - 1 {
                let rho_yy = (rho[j + 1] - 2.0 * rho[j] + rho[j - 1]) / h2;
                let p_yy = (p[j + 1] - 2.0 * p[j] + p[j - 1]) / h2;
                let r = eps * eps * rho_t[j] + eps * v * drho[j] - rho_yy + dw(rho[j])
                    - eps * p[j] * drho[j]
                    - eps * forcing[k];
                let q = eps * p_t[j] + v * dp[j] - p_yy + p[j] - beta * drho[j];
                sr += r * r;
                sp += q * q;
            }
            (sr * h, sp * h)
        })
        .collect();

    let weights: Vec<f64> = if m == 1 {
        vec![1.0]
    } else {
        (0..m)
            .map(|k| {
                let left = if k > 0 { t[k] - t[k - 1] } else { 0.0 };
                let right = if k + 1 < m { t[k + 1] - t[k] } else { 0.0 };
                0.5 * (left + right)
            })
            .collect()
    };
    let (r, p) = per_node
        .iter()
        .zip(&weights)
        .fold((0.0, 0.0), |(a, b), ((r, p), w)| (a + w * r, b + w * p));
    Ok((r.sqrt(), p.sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile() -> ProfileTable {
        ProfileTable::build(40.0, 0.05).unwrap()
    }

    #[test]
    fn zero_coupling_gives_zero_psi() {
        let p = profile();
        let psi = solve_psi0(0.3, 0.0, &p).unwrap();
        assert!(psi.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn psi_is_linear_in_beta() {
        let p = profile();
        let a = solve_psi0(-0.7, 0.2, &p).unwrap();
        let b = solve_psi0(-0.7, 0.4, &p).unwrap();
        for (x, y) in a.values().iter().zip(b.values()) {
            assert!((2.0 * x - y).abs() <= 1e-12);
        }
    }

    #[test]
    fn psi_decays_at_ends() {
        let p = profile();
        for v in [-5.0, 0.0, 5.0] {
            let psi = solve_psi0(v, 1.0, &p).unwrap();
            assert!(psi.values()[0].abs() <= 1e-8 && psi.values().last().unwrap().abs() <= 1e-8);
        }
    }

    #[test]
    fn out_of_range_speed_is_rejected() {
        let p = profile();
        assert!(matches!(solve_psi0(5.5, 1.0, &p), Err(Error::Domain(_))));
    }

    #[test]
    fn trivial_velocities() {
        let p = profile();
        assert_eq!(solve_v0(0.0, 0.0, &p).unwrap(), 0.0);
        assert!((solve_v0(p.c0(), 0.0, &p).unwrap() - 1.0).abs() < 1e-8);
        assert!(matches!(solve_v0(10.0, 0.0, &p), Err(Error::RootNotFound { .. })));
    }

    #[test]
    fn table_interpolation_matches_direct_phi() {
        let p = profile();
        let scan = p.phi_scan();
        for v in [-4.3217, -0.0005, 0.77777, 4.999] {
            let direct = phi_of_v(v, &p).unwrap();
            assert!((scan.interpolate(v).unwrap() - direct).abs() < 1e-11);
        }
        assert!(scan.interpolate(5.1).is_err());
    }

    #[test]
    fn zero_cascade() {
        let p = profile();
        let e = build_expansion(1, &[0.0, 0.0, 0.0], 0.0, &[0.0, 0.1, 0.2], &p).unwrap();
        assert!(e.velocity(0).iter().all(|&v| v == 0.0));
        for k in 0..3 {
            assert_eq!(e.theta(1, k).max_abs(), 0.0);
            assert_eq!(e.psi(0, k).max_abs(), 0.0);
        }
    }

    #[test]
    fn rejects_high_order_and_large_beta() {
        let p = profile();
        assert!(build_expansion(4, &[0.0], 0.0, &[0.0], &p).is_err());
        assert!(build_expansion(1, &[0.0], 0.6, &[0.0], &p).is_err());
        assert!(build_expansion(1, &[0.0, 0.0], 0.1, &[0.0, 0.0], &p).is_err());
    }

    #[test]
    fn defect_rejects_bad_eps() {
        let p = profile();
        let e = build_expansion(0, &[0.0], 0.0, &[0.0], &p).unwrap();
        assert!(matches!(defect_norm(&e, 0.0, &[0.0], 0.0), Err(Error::Resolution(_))));
        assert!(matches!(defect_norm(&e, 0.7, &[0.0], 0.0), Err(Error::Resolution(_))));
    }
}
