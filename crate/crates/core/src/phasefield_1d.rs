//! One-dimensional model
//!
//! ```text
//! rho_t = rho_xx - W'(rho)/eps^2 + P rho_x + F(t)/eps
//! P_t   = eps P_xx - P/eps + beta rho_x
//! ```
//!
//! on a truncated line with `rho_x = 0` and `P = 0` at the ends.

use crate::asymptotics::build_expansion;
use crate::error::{Error, Result};
use crate::field::{self, LineField, UniformGrid};
use crate::forcing::Forcing;
use crate::profiles::{dtheta0, dw, max_abs_d2w, theta0, ProfileTable};
use crate::tridiag::Factored;

#[derive(Debug, Clone, PartialEq)]
pub struct LineState {
    pub grid: UniformGrid,
    pub rho: Vec<f64>,
    pub p: Vec<f64>,
    pub t: f64,
    pub eps: f64,
    pub beta: f64,
}

impl LineState {
    pub fn rho_field(&self) -> LineField {
        LineField::new(self.grid, self.rho.clone()).expect("grid-sized")
    }

    pub fn p_field(&self) -> LineField {
        LineField::new(self.grid, self.p.clone()).expect("grid-sized")
    }

    pub fn rho_range(&self) -> (f64, f64) {
        self.rho
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &r| (lo.min(r), hi.max(r)))
    }

    /// Whether `rho` stays within `[-eps^{1/4}, 1 + eps^{1/4}]`.
    pub fn in_band(&self) -> bool {
        let b = self.eps.powf(0.25);
        let (lo, hi) = self.rho_range();
        lo >= -b && hi <= 1.0 + b
    }

    /// Whether `rho` stays within the band widened by 0.1.
    pub fn in_soft_band(&self) -> bool {
        let b = self.eps.powf(0.25) + 0.1;
        let (lo, hi) = self.rho_range();
        lo >= -b && hi <= 1.0 + b
    }
}

/// Spacing of the time grid used to difference the expansion at start-up.
const INIT_TIME_STEP: f64 = 0.01;

/// Well-prepared data: the order-`N` inner expansion at `t = t0`, centred
/// at `x_front`.
#[allow(clippy::too_many_arguments)]
pub fn init_well_prepared(
    eps: f64,
    beta: f64,
    x_front: f64,
    order: usize,
    forcing: &Forcing,
    t0: f64,
    grid: UniformGrid,
    profile: &ProfileTable,
) -> Result<LineState> {
    if !(eps > 0.0 && eps <= 0.5) {
        return Err(Error::Config(format!("eps must lie in (0, 0.5], got {eps}")));
    }
    if grid.spacing > eps / 10.0 * (1.0 + 1e-12) {
        return Err(Error::Config(format!(
            "grid spacing {} exceeds eps/10 = {}",
            grid.spacing,
            eps / 10.0
        )));
    }
    if x_front - grid.start < 20.0 * eps || grid.end() - x_front < 20.0 * eps {
        return Err(Error::Config(format!(
            "front at {x_front} needs a 20 eps margin inside [{}, {}]",
            grid.start,
            grid.end()
        )));
    }
    let t_grid = [t0, t0 + INIT_TIME_STEP, t0 + 2.0 * INIT_TIME_STEP];
    let f = forcing.sample(&t_grid);
    let expansion = build_expansion(order, &f, beta, &t_grid, profile)?;
    let ygrid = expansion.grid();
    let mut rho = Vec::with_capacity(grid.len);
    let mut p = Vec::with_capacity(grid.len);
    for x in grid.nodes() {
        let y = (x - x_front) / eps;
        let mut r = theta0(y);
        let mut q = 0.0;
        let mut scale = 1.0;
        for i in 0..=order {
            if i >= 1 {
                r += scale * field::interpolate_or_zero(ygrid, expansion.theta_values(i, 0), y);
            }
            q += scale * field::interpolate_or_zero(ygrid, expansion.psi_values(i, 0), y);
            scale *= eps;
        }
        rho.push(r);
        p.push(q);
    }
    // P vanishes on the boundary
    p[0] = 0.0;
    *p.last_mut().unwrap() = 0.0;
    Ok(LineState {
        grid,
        rho,
        p,
        t: t0,
        eps,
        beta,
    })
}

/// Largest stable step `min(eps^2 / K_W, h^2 / 4)` with `K_W = max |W''|`
/// over the band `[-eps^{1/4}, 1 + eps^{1/4}]`.
pub fn max_stable_dt(eps: f64, spacing: f64) -> f64 {
    let b = eps.powf(0.25);
    let k_w = max_abs_d2w(-b, 1.0 + b);
    (eps * eps / k_w).min(spacing * spacing / 4.0)
}

/// Semi-implicit stepper with pre-factored diffusion operators.
#[derive(Debug, Clone)]
pub struct LineStepper {
    dt: f64,
    eps: f64,
    beta: f64,
    spacing: f64,
    rho_op: Factored,
    p_op: Factored,
    rho_x: Vec<f64>,
}

impl LineStepper {
    pub fn new(grid: &UniformGrid, eps: f64, beta: f64, dt: f64) -> Result<Self> {
        let limit = max_stable_dt(eps, grid.spacing);
        if !(dt > 0.0 && dt <= limit * (1.0 + 1e-12)) {
            return Err(Error::Config(format!(
                "dt = {dt} outside the stability budget (0, {limit:.4e}]"
            )));
        }
        let n = grid.len;
        let h2 = grid.spacing * grid.spacing;
        let r = dt / h2;
        let mut lower = vec![-r; n];
        let mut upper = vec![-r; n];
        let diag = vec![1.0 + 2.0 * r; n];
        upper[0] = -2.0 * r;
        lower[n - 1] = -2.0 * r;
        let rho_op = Factored::new(&lower, &diag, &upper)?;

        let s = dt * eps / h2;
        let a = 1.0 + dt / eps;
        let mut lower = vec![-s; n];
        let mut upper = vec![-s; n];
        let mut diag = vec![a + 2.0 * s; n];
        for j in [0, n - 1] {
            lower[j] = 0.0;
            upper[j] = 0.0;
            diag[j] = 1.0;
        }
        let p_op = Factored::new(&lower, &diag, &upper)?;
        Ok(Self {
            dt,
            eps,
            beta,
            spacing: grid.spacing,
            rho_op,
            p_op,
            rho_x: vec![0.0; n],
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Advances `state` by one step with forcing value `forcing`.
    pub fn step(&mut self, state: &mut LineState, forcing: f64, step: usize) -> Result<()> {
        let n = state.rho.len();
        let (dt, eps) = (self.dt, self.eps);
        let inv_2h = 0.5 / self.spacing;
        self.rho_x[0] = 0.0;
        self.rho_x[n - 1] = 0.0;
        for j in 1..n - 1 {
            self.rho_x[j] = (state.rho[j + 1] - state.rho[j - 1]) * inv_2h;
        }
        let inv_eps2 = 1.0 / (eps * eps);
        let f_eps = forcing / eps;
        for j in 0..n {
            let r = state.rho[j];
            state.rho[j] = r + dt * (-dw(r) * inv_eps2 + state.p[j] * self.rho_x[j] + f_eps);
        }
        for j in 1..n - 1 {
            state.p[j] += dt * self.beta * self.rho_x[j];
        }
        state.p[0] = 0.0;
        state.p[n - 1] = 0.0;
        self.rho_op.solve_in_place(&mut state.rho);
        self.p_op.solve_in_place(&mut state.p);
        state.t += dt;
        if !state.rho.iter().chain(&state.p).all(|v| v.is_finite()) {
            return Err(Error::Divergence { step });
        }
        Ok(())
    }
}

/// One step from a copy of `state`.
pub fn step_1d(state: &LineState, dt: f64, forcing: f64) -> Result<LineState> {
    let mut stepper = LineStepper::new(&state.grid, state.eps, state.beta, dt)?;
    let mut next = state.clone();
    stepper.step(&mut next, forcing, 1)?;
    Ok(next)
}

/// Position of the `rho = 1/2` crossing with the steepest jump.
pub fn extract_front(state: &LineState) -> Result<f64> {
    let rho = &state.rho;
    let mut best: Option<(f64, f64)> = None;
    for j in 0..rho.len() - 1 {
        let (a, b) = (rho[j] - 0.5, rho[j + 1] - 0.5);
        if a == b || (a > 0.0 && b > 0.0) || (a < 0.0 && b < 0.0) {
            continue;
        }
        let jump = (rho[j + 1] - rho[j]).abs();
        if best.is_none_or(|(_, m)| jump > m) {
            let x = state.grid.node(j) + state.grid.spacing * a / (a - b);
            best = Some((x, jump));
        }
    }
    best.map(|(x, _)| x).ok_or(Error::FrontLost)
}

/// `rho1 = (rho - theta0((x - x_eps)/eps)) / eps` and its `L^2` norm in `x`.
pub fn residual_profile(state: &LineState, _profile: &ProfileTable) -> Result<(LineField, f64)> {
    let front = extract_front(state)?;
    let eps = state.eps;
    let values: Vec<f64> = state
        .grid
        .nodes()
        .zip(&state.rho)
        .map(|(x, r)| (r - theta0((x - front) / eps)) / eps)
        .collect();
    let field = LineField::new(state.grid, values)?;
    let norm = field.l2_norm();
    Ok((field, norm))
}

/// Projection `∫ (rho - theta0(y)) theta0'(y) dy` of the state onto the
/// translation mode centred at `x_front`.
pub fn translation_component(state: &LineState, x_front: f64) -> f64 {
    let eps = state.eps;
    let g: Vec<f64> = state
        .grid
        .nodes()
        .zip(&state.rho)
        .map(|(x, r)| {
            let y = (x - x_front) / eps;
            (r - theta0(y)) * dtheta0(y)
        })
        .collect();
    state.grid.trapezoid(&g) / eps
}

/// Settings of a 1D run.
#[derive(Debug, Clone, PartialEq)]
pub struct LineRun {
    pub eps: f64,
    pub beta: f64,
    pub order: usize,
    pub x_front: f64,
    pub forcing: Forcing,
    pub t_final: f64,
    /// Grid spacing as a fraction of `eps`.
    pub spacing_ratio: f64,
    /// Time step as a fraction of the stability budget.
    pub dt_ratio: f64,
    /// Samples recorded over the run, excluding the initial one.
    pub samples: usize,
    /// Bound on `|x_0'|` used to pad the domain for front travel.
    pub speed_bound: f64,
}

impl LineRun {
    /// Domain `x_front ± (30 eps + 1.5 T speed_bound)`.
    pub fn grid(&self) -> Result<UniformGrid> {
        let half = 30.0 * self.eps + 1.5 * self.t_final * self.speed_bound;
        let h = self.spacing_ratio * self.eps;
        let cells = (2.0 * half / h).ceil() as usize;
        UniformGrid::new(self.x_front - 0.5 * cells as f64 * h, h, cells + 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineRecord {
    pub t: f64,
    pub front: f64,
    pub residual_norm: f64,
    pub rho_min: f64,
    pub rho_max: f64,
    pub band_ok: bool,
}

#[derive(Debug, Clone)]
pub struct LineRunOutput {
    pub records: Vec<LineRecord>,
    pub final_state: LineState,
    pub dt: f64,
    pub steps: usize,
}

fn record(state: &LineState, profile: &ProfileTable) -> Result<LineRecord> {
    let (_, residual_norm) = residual_profile(state, profile)?;
    let (rho_min, rho_max) = state.rho_range();
    Ok(LineRecord {
        t: state.t,
        front: extract_front(state)?,
        residual_norm,
        rho_min,
        rho_max,
        band_ok: state.in_band(),
    })
}

/// Runs the PDE from well-prepared data and records the front.
pub fn simulate(run: &LineRun, profile: &ProfileTable) -> Result<LineRunOutput> {
    if !(run.t_final > 0.0) || run.samples == 0 {
        return Err(Error::Config("t_final and samples must be positive".into()));
    }
    if !(run.dt_ratio > 0.0 && run.dt_ratio <= 1.0) {
        return Err(Error::Config(format!("dt_ratio must lie in (0, 1], got {}", run.dt_ratio)));
    }
    run.forcing.validate()?;
    let grid = run.grid()?;
    let mut state = init_well_prepared(
        run.eps,
        run.beta,
        run.x_front,
        run.order,
        &run.forcing,
        0.0,
        grid,
        profile,
    )?;
    let budget = max_stable_dt(run.eps, grid.spacing) * run.dt_ratio;
    let per_sample = (run.t_final / run.samples as f64 / budget).ceil() as usize;
    let steps = per_sample * run.samples;
    let dt = run.t_final / steps as f64;
    let mut stepper = LineStepper::new(&grid, run.eps, run.beta, dt)?;
    let mut records = vec![record(&state, profile)?];
    for step in 1..=steps {
        let t = (step - 1) as f64 * dt;
        stepper
            .step(&mut state, run.forcing.eval(t), step)
            .map_err(|e| e.at_time(t))?;
        state.t = step as f64 * dt;
        if step % per_sample == 0 {
            records.push(record(&state, profile).map_err(|e| e.at_time(state.t))?);
        }
    }
    Ok(LineRunOutput {
        records,
        final_state: state,
        dt,
        steps,
    })
}
