//! Two-dimensional model with a volume constraint
//!
//! ```text
//! rho_t = Δrho - W'(rho)/eps^2 - P·∇rho + lambda(t)
//! P_t   = eps ΔP - P/eps - beta ∇rho
//! ```
//!
//! on a rectangle with `∂_n rho = 0` and `P = 0` on the boundary.
//! Unknowns sit at cell centres; `lambda` keeps `∫rho` fixed.

use serde::{Deserialize, Serialize};
use std::collections::HashMap;

use crate::asymptotics::solve_psi0;
use crate::error::{Error, Result};
use crate::field;
use crate::front_law::{FrontCurve, Point};
use crate::profiles::{dw, max_abs_d2w, theta0, w, ProfileTable};
use crate::tridiag::Factored;

/// Cell-centred uniform grid on `[x0, x0 + nx hx] x [y0, y0 + ny hy]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlaneGrid {
    pub nx: usize,
    pub ny: usize,
    pub hx: f64,
    pub hy: f64,
    pub origin: Point,
}

impl PlaneGrid {
    pub fn new(nx: usize, ny: usize, hx: f64, hy: f64, origin: Point) -> Result<Self> {
        if nx < 4 || ny < 4 {
            return Err(Error::Domain(format!("grid needs at least 4x4 cells, got {nx}x{ny}")));
        }
        if !(hx > 0.0 && hy > 0.0) {
            return Err(Error::Domain(format!("spacings must be positive, got {hx}, {hy}")));
        }
        Ok(Self { nx, ny, hx, hy, origin })
    }

    /// `n x n` cells of size `h` with the lower-left corner at the origin.
    pub fn square(n: usize, h: f64) -> Result<Self> {
        Self::new(n, n, h, h, [0.0, 0.0])
    }

    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        self.origin[0] + (i as f64 + 0.5) * self.hx
    }

    #[inline]
    pub fn y(&self, j: usize) -> f64 {
        self.origin[1] + (j as f64 + 0.5) * self.hy
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cell_area(&self) -> f64 {
        self.hx * self.hy
    }

    pub fn area(&self) -> f64 {
        self.len() as f64 * self.cell_area()
    }

    pub fn center(&self) -> Point {
        [
            self.origin[0] + 0.5 * self.nx as f64 * self.hx,
            self.origin[1] + 0.5 * self.ny as f64 * self.hy,
        ]
    }
}

/// Scalar `rho` and vector `P` at cell centres, row-major with `x` fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneState {
    pub grid: PlaneGrid,
    pub rho: Vec<f64>,
    pub px: Vec<f64>,
    pub py: Vec<f64>,
    pub t: f64,
    pub eps: f64,
    pub beta: f64,
    pub mass0: f64,
}

impl PlaneState {
    /// Uniform fields; mostly useful for tests.
    pub fn constant(grid: PlaneGrid, rho: f64, eps: f64, beta: f64) -> Self {
        let n = grid.len();
        let mut s = Self {
            grid,
            rho: vec![rho; n],
            px: vec![0.0; n],
            py: vec![0.0; n],
            t: 0.0,
            eps,
            beta,
            mass0: 0.0,
        };
        s.mass0 = s.mass();
        s
    }

    pub fn mass(&self) -> f64 {
        self.rho.iter().sum::<f64>() * self.grid.cell_area()
    }
}

/// Initial interface shape, with `s > 0` inside.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum Shape {
    Circle { center: Point, radius: f64 },
    Ellipse { center: Point, a: f64, b: f64 },
    Polygon { vertices: Vec<Point> },
}

const ELLIPSE_SAMPLES: usize = 2048;

impl Shape {
    pub fn validate(&self) -> Result<()> {
        match self {
            Shape::Circle { radius, .. } if !(*radius > 0.0) => {
                Err(Error::Config(format!("circle radius must be positive, got {radius}")))
            }
            Shape::Ellipse { a, b, .. } if !(*a > 0.0 && *b > 0.0) => {
                Err(Error::Config(format!("ellipse axes must be positive, got {a}, {b}")))
            }
            Shape::Polygon { vertices } if vertices.len() < 3 => {
                Err(Error::Config("polygon needs at least 3 vertices".into()))
            }
            _ => Ok(()),
        }
    }

    /// Boundary as a closed counterclockwise curve with `n` nodes.
    pub fn curve(&self, n: usize) -> Result<FrontCurve> {
        match self {
            Shape::Circle { center, radius } => FrontCurve::circle(*center, *radius, n),
            Shape::Ellipse { center, a, b } => FrontCurve::ellipse(*center, *a, *b, n),
            Shape::Polygon { vertices } => FrontCurve::new(vertices.clone()),
        }
    }

    fn distance_field(&self, grid: &PlaneGrid) -> Result<(Vec<f64>, Vec<Point>)> {
        let mut s = Vec::with_capacity(grid.len());
        let mut g = Vec::with_capacity(grid.len());
        match self {
            Shape::Circle { center, radius } => {
                for j in 0..grid.ny {
                    for i in 0..grid.nx {
                        let d = [grid.x(i) - center[0], grid.y(j) - center[1]];
                        let r = d[0].hypot(d[1]);
                        s.push(radius - r);
                        g.push(if r > 0.0 { [-d[0] / r, -d[1] / r] } else { [0.0, 0.0] });
                    }
                }
            }
            _ => {
                let curve = match self {
                    Shape::Ellipse { .. } => self.curve(ELLIPSE_SAMPLES)?,
                    _ => self.curve(0)?,
                };
                let nodes = curve.nodes();
                for j in 0..grid.ny {
                    for i in 0..grid.nx {
                        let (d, grad) = polygon_signed_distance(nodes, [grid.x(i), grid.y(j)]);
                        s.push(d);
                        g.push(grad);
                    }
                }
            }
        }
        Ok((s, g))
    }
}

fn polygon_signed_distance(nodes: &[Point], p: Point) -> (f64, Point) {
    let n = nodes.len();
    let mut best = f64::INFINITY;
    let mut foot = p;
    let mut inside = false;
    for k in 0..n {
        let a = nodes[k];
        let b = nodes[(k + 1) % n];
        let ab = [b[0] - a[0], b[1] - a[1]];
        let ap = [p[0] - a[0], p[1] - a[1]];
        let len2 = ab[0] * ab[0] + ab[1] * ab[1];
        let t = ((ap[0] * ab[0] + ap[1] * ab[1]) / len2).clamp(0.0, 1.0);
        let q = [a[0] + t * ab[0], a[1] + t * ab[1]];
        let d = (p[0] - q[0]).hypot(p[1] - q[1]);
        if d < best {
            best = d;
            foot = q;
        }
        if (a[1] > p[1]) != (b[1] > p[1]) {
            let xc = a[0] + (p[1] - a[1]) / (b[1] - a[1]) * ab[0];
            if p[0] < xc {
                inside = !inside;
            }
        }
    }
    let dir = if best > 0.0 {
        [(p[0] - foot[0]) / best, (p[1] - foot[1]) / best]
    } else {
        [0.0, 0.0]
    };
    if inside {
        (best, dir)
    } else {
        (-best, [-dir[0], -dir[1]])
    }
}

/// How `P` is initialised.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OrientationInit {
    Zero,
    /// The stationary inner profile along the normal, scaled by `beta`.
    #[default]
    Profile,
}

/// `rho = theta0(s/eps)` around `shape`, and `P = -beta Psi0(s/eps) ∇s`
/// (or zero), where `Psi0` solves `Psi'' - Psi = -theta0'`.
pub fn init_from_shape(
    grid: PlaneGrid,
    shape: &Shape,
    eps: f64,
    beta: f64,
    orientation: OrientationInit,
    profile: &ProfileTable,
) -> Result<PlaneState> {
    shape.validate()?;
    if !(eps > 0.0) {
        return Err(Error::Config(format!("eps must be positive, got {eps}")));
    }
    let h = grid.hx.max(grid.hy);
    if h > eps / 8.0 * (1.0 + 1e-12) {
        return Err(Error::Config(format!(
            "grid spacing {h} exceeds eps/8 = {}",
            eps / 8.0
        )));
    }
    let (s, grad) = shape.distance_field(&grid)?;
    let rho: Vec<f64> = s.iter().map(|d| theta0(d / eps)).collect();
    let n = grid.len();
    let (mut px, mut py) = (vec![0.0; n], vec![0.0; n]);
    if orientation == OrientationInit::Profile && beta != 0.0 {
        let psi = solve_psi0(0.0, 1.0, profile)?;
        for k in 0..n {
            let q = -beta * field::interpolate_or_zero(psi.grid(), psi.values(), s[k] / eps);
            px[k] = q * grad[k][0];
            py[k] = q * grad[k][1];
        }
    }
    let mut state = PlaneState {
        grid,
        rho,
        px,
        py,
        t: 0.0,
        eps,
        beta,
        mass0: 0.0,
    };
    state.mass0 = state.mass();
    Ok(state)
}

/// Centred gradient with mirror ghosts (`∂_n rho = 0`).
fn gradient(grid: &PlaneGrid, f: &[f64], gx: &mut [f64], gy: &mut [f64]) {
    let (nx, ny) = (grid.nx, grid.ny);
    let (ix, iy) = (0.5 / grid.hx, 0.5 / grid.hy);
    for j in 0..ny {
        let row = j * nx;
        let up = if j + 1 < ny { row + nx } else { row };
        let down = if j > 0 { row - nx } else { row };
        for i in 0..nx {
            let right = if i + 1 < nx { i + 1 } else { i };
            let left = if i > 0 { i - 1 } else { i };
            gx[row + i] = (f[row + right] - f[row + left]) * ix;
            gy[row + i] = (f[up + i] - f[down + i]) * iy;
        }
    }
}

/// `lambda = mean(W'(rho)/eps^2 + P·∇rho)`.
pub fn lagrange_multiplier(state: &PlaneState) -> f64 {
    let n = state.grid.len();
    let (mut gx, mut gy) = (vec![0.0; n], vec![0.0; n]);
    gradient(&state.grid, &state.rho, &mut gx, &mut gy);
    let inv = 1.0 / (state.eps * state.eps);
    let total: f64 = (0..n)
        .map(|k| dw(state.rho[k]) * inv + state.px[k] * gx[k] + state.py[k] * gy[k])
        .sum();
    total / n as f64
}

/// `(E_eps, F_eps)` by midpoint quadrature.
pub fn energies(state: &PlaneState) -> (f64, f64) {
    let n = state.grid.len();
    let (mut gx, mut gy) = (vec![0.0; n], vec![0.0; n]);
    gradient(&state.grid, &state.rho, &mut gx, &mut gy);
    let eps = state.eps;
    let da = state.grid.cell_area();
    let mut e = 0.0;
    let mut f = 0.0;
    for k in 0..n {
        e += 0.5 * eps * (gx[k] * gx[k] + gy[k] * gy[k]) + w(state.rho[k]) / eps;
        let p2 = state.px[k] * state.px[k] + state.py[k] * state.py[k];
        f += p2 + p2 * p2;
    }
    (e * da, f * da)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandReport {
    pub rho_min: f64,
    pub rho_max: f64,
    /// Inside `[-eps^{1/4}, 1 + eps^{1/4}]`.
    pub band_ok: bool,
    /// Inside `[-2 eps^2 Λ, 1 + 2 eps^2 Λ]` with `Λ = sup |lambda|`.
    pub sharp_ok: bool,
    /// Outside `[-1.1 eps^{1/4}, 1 + 1.1 eps^{1/4}]`.
    pub warning: bool,
}

/// Extrema of `rho` against both bands; `lambda_sup` is the running
/// supremum of `|lambda|`.
pub fn max_principle_check(state: &PlaneState, lambda_sup: f64) -> BandReport {
    let (lo, hi) = state
        .rho
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &r| (a.min(r), b.max(r)));
    let b = state.eps.powf(0.25);
    let sharp = 2.0 * state.eps * state.eps * lambda_sup;
    BandReport {
        rho_min: lo,
        rho_max: hi,
        band_ok: lo >= -b && hi <= 1.0 + b,
        sharp_ok: lo >= -sharp && hi <= 1.0 + sharp,
        warning: lo < -1.1 * b || hi > 1.0 + 1.1 * b,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub e_eps: f64,
    pub f_eps: f64,
    pub lambda: f64,
    pub rho_min: f64,
    pub rho_max: f64,
    pub mass_drift: f64,
    pub band_ok: bool,
    /// The band is exceeded by more than a tenth of its margin.
    pub band_warning: bool,
}

/// Largest stable step `min(eps^2 / K_W, h^2 / 4)`.
pub fn max_stable_dt(eps: f64, grid: &PlaneGrid) -> f64 {
    let b = eps.powf(0.25);
    let h = grid.hx.min(grid.hy);
    (eps * eps / max_abs_d2w(-b, 1.0 + b)).min(h * h / 4.0)
}

/// What one step reports without computing energies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepInfo {
    /// Explicit multiplier plus the mass-restoring shift per unit time.
    pub lambda: f64,
    pub mass_drift: f64,
    pub rho_min: f64,
    pub rho_max: f64,
}

/// Semi-implicit ADI stepper for a fixed grid and step size.
#[derive(Debug, Clone)]
pub struct Stepper2d {
    dt: f64,
    eps: f64,
    beta: f64,
    grid: PlaneGrid,
    rho_x: Factored,
    rho_y: Factored,
    p_x: Factored,
    p_y: Factored,
    gx: Vec<f64>,
    gy: Vec<f64>,
    lambda_sup: f64,
    steps: usize,
}

impl Stepper2d {
    pub fn new(grid: PlaneGrid, eps: f64, beta: f64, dt: f64) -> Result<Self> {
        let limit = max_stable_dt(eps, &grid);
        if !(dt > 0.0 && dt <= limit * (1.0 + 1e-12)) {
            return Err(Error::Config(format!(
                "dt = {dt} outside the stability budget (0, {limit:.4e}]"
            )));
        }
        let (rx, ry) = (dt / (grid.hx * grid.hx), dt / (grid.hy * grid.hy));
        // Neumann: mirror ghost; Dirichlet for P: antisymmetric ghost
        let rho_x = Factored::constant(grid.nx, 1.0 + 2.0 * rx, -rx, 1.0 + rx, 1.0 + rx)?;
        let rho_y = Factored::constant(grid.ny, 1.0 + 2.0 * ry, -ry, 1.0 + ry, 1.0 + ry)?;
        let a = 1.0 + dt / eps;
        let (sx, sy) = (eps * rx, eps * ry / a);
        let p_x = Factored::constant(grid.nx, a + 2.0 * sx, -sx, a + 3.0 * sx, a + 3.0 * sx)?;
        let p_y = Factored::constant(grid.ny, 1.0 + 2.0 * sy, -sy, 1.0 + 3.0 * sy, 1.0 + 3.0 * sy)?;
        let n = grid.len();
        Ok(Self {
            dt,
            eps,
            beta,
            grid,
            rho_x,
            rho_y,
            p_x,
            p_y,
            gx: vec![0.0; n],
            gy: vec![0.0; n],
            lambda_sup: 0.0,
            steps: 0,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Running supremum of `|lambda|` over the steps taken so far.
    pub fn lambda_sup(&self) -> f64 {
        self.lambda_sup
    }

    pub fn step(&mut self, state: &mut PlaneState) -> Result<StepInfo> {
        if !state.grid.eq(&self.grid) || state.eps != self.eps || state.beta != self.beta {
            return Err(Error::Domain("state does not match the stepper".into()));
        }
        let n = self.grid.len();
        let dt = self.dt;
        gradient(&self.grid, &state.rho, &mut self.gx, &mut self.gy);
        let inv = 1.0 / (self.eps * self.eps);
        let mut total = 0.0;
        for k in 0..n {
            let src = dw(state.rho[k]) * inv + state.px[k] * self.gx[k] + state.py[k] * self.gy[k];
            total += src;
            state.rho[k] -= dt * src;
        }
        let lambda = total / n as f64;
        for r in state.rho.iter_mut() {
            *r += dt * lambda;
        }
        for k in 0..n {
            state.px[k] -= dt * self.beta * self.gx[k];
            state.py[k] -= dt * self.beta * self.gy[k];
        }
        let nx = self.grid.nx;
        let (rho, px, py) = (&mut state.rho, &mut state.px, &mut state.py);
        rayon::join(
            || implicit(rho, nx, &self.rho_x, &self.rho_y),
            || {
                rayon::join(
                    || implicit(px, nx, &self.p_x, &self.p_y),
                    || implicit(py, nx, &self.p_x, &self.p_y),
                )
            },
        );

        // restore the mass exactly with a constant shift
        let shift = (state.mass0 - state.mass()) / self.grid.area();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let mut finite = true;
        for r in state.rho.iter_mut() {
            *r += shift;
            lo = lo.min(*r);
            hi = hi.max(*r);
            finite &= r.is_finite();
        }
        self.steps += 1;
        if !finite || !state.px.iter().chain(&state.py).all(|v| v.is_finite()) {
            return Err(Error::Divergence { step: self.steps });
        }
        state.t += dt;
        let lambda = lambda + shift / dt;
        self.lambda_sup = self.lambda_sup.max(lambda.abs());
        Ok(StepInfo {
            lambda,
            mass_drift: state.mass() - state.mass0,
            rho_min: lo,
            rho_max: hi,
        })
    }

    /// Full diagnostics for the current state after a step.
    pub fn diagnostics(&self, state: &PlaneState, info: &StepInfo) -> DiagnosticsRecord {
        let (e, f) = energies(state);
        let band = max_principle_check(state, self.lambda_sup);
        DiagnosticsRecord {
            t: state.t,
            e_eps: e,
            f_eps: f,
            lambda: info.lambda,
            rho_min: band.rho_min,
            rho_max: band.rho_max,
            mass_drift: info.mass_drift,
            band_ok: band.band_ok,
            band_warning: band.warning,
        }
    }
}

fn implicit(f: &mut [f64], nx: usize, ox: &Factored, oy: &Factored) {
    for row in f.chunks_mut(nx) {
        ox.solve_in_place(row);
    }
    oy.solve_lanes(f, nx);
}

/// One step from a copy of `state`.
pub fn step_2d(state: &PlaneState, dt: f64) -> Result<(PlaneState, DiagnosticsRecord)> {
    let mut stepper = Stepper2d::new(state.grid, state.eps, state.beta, dt)?;
    let mut next = state.clone();
    let info = stepper.step(&mut next)?;
    let record = stepper.diagnostics(&next, &info);
    Ok((next, record))
}

/// The `rho = 1/2` level set as a closed curve resampled to uniform
/// arclength with roughly one node per cell width.
pub fn extract_contour(state: &PlaneState) -> Result<FrontCurve> {
    let chain = level_chain(state)?;
    let perim = polyline_length(&chain);
    let n = ((perim / state.grid.hx.min(state.grid.hy)).ceil() as usize).clamp(32, 8192);
    resample_closed(&chain, n)
}

/// Like [`extract_contour`] with a prescribed node count.
pub fn extract_contour_with(state: &PlaneState, nodes: usize) -> Result<FrontCurve> {
    let chain = level_chain(state)?;
    resample_closed(&chain, nodes)
}

fn polyline_length(p: &[Point]) -> f64 {
    let n = p.len();
    (0..n)
        .map(|k| {
            let q = p[(k + 1) % n];
            (q[0] - p[k][0]).hypot(q[1] - p[k][1])
        })
        .sum()
}

fn resample_closed(p: &[Point], n: usize) -> Result<FrontCurve> {
    let m = p.len();
    let mut cum = vec![0.0; m + 1];
    for k in 0..m {
        let q = p[(k + 1) % m];
        cum[k + 1] = cum[k] + (q[0] - p[k][0]).hypot(q[1] - p[k][1]);
    }
    let total = cum[m];
    let mut out = Vec::with_capacity(n);
    let mut seg = 0;
    for i in 0..n {
        let s = total * i as f64 / n as f64;
        while seg + 1 < m && cum[seg + 1] <= s {
            seg += 1;
        }
        let len = cum[seg + 1] - cum[seg];
        let t = if len > 0.0 { (s - cum[seg]) / len } else { 0.0 };
        let (a, b) = (p[seg], p[(seg + 1) % m]);
        out.push([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
    }
    FrontCurve::new(out)
}

/// Marching squares on the cell centres, stitched through shared edges.
fn level_chain(state: &PlaneState) -> Result<Vec<Point>> {
    const LEVEL: f64 = 0.5;
    let g = &state.grid;
    let (nx, ny) = (g.nx, g.ny);
    let v = &state.rho;
    let h_edge = |i: usize, j: usize| j * nx + i;
    let v_edge = |i: usize, j: usize| nx * ny + j * nx + i;
    let crossing = |id: usize| -> Point {
        let (a, b) = if id < nx * ny {
            let (i, j) = (id % nx, id / nx);
            ((i, j), (i + 1, j))
        } else {
            let id = id - nx * ny;
            let (i, j) = (id % nx, id / nx);
            ((i, j), (i, j + 1))
        };
        let (fa, fb) = (v[a.1 * nx + a.0], v[b.1 * nx + b.0]);
        let t = (LEVEL - fa) / (fb - fa);
        [
            g.x(a.0) + t * (g.x(b.0) - g.x(a.0)),
            g.y(a.1) + t * (g.y(b.1) - g.y(a.1)),
        ]
    };

    let mut segments: Vec<[usize; 2]> = Vec::new();
    for j in 0..ny - 1 {
        for i in 0..nx - 1 {
            let a = v[j * nx + i];
            let b = v[j * nx + i + 1];
            let c = v[(j + 1) * nx + i + 1];
            let d = v[(j + 1) * nx + i];
            let case = (a >= LEVEL) as u8
                | ((b >= LEVEL) as u8) << 1
                | ((c >= LEVEL) as u8) << 2
                | ((d >= LEVEL) as u8) << 3;
            let edges = [h_edge(i, j), v_edge(i + 1, j), h_edge(i, j + 1), v_edge(i, j)];
            let centre_in = 0.25 * (a + b + c + d) >= LEVEL;
            let pairs: &[(usize, usize)] = match case {
                0 | 15 => &[],
                1 | 14 => &[(3, 0)],
                2 | 13 => &[(0, 1)],
                3 | 12 => &[(3, 1)],
                4 | 11 => &[(1, 2)],
                6 | 9 => &[(0, 2)],
                7 | 8 => &[(3, 2)],
                5 if centre_in => &[(0, 1), (2, 3)],
                5 => &[(3, 0), (1, 2)],
                10 if centre_in => &[(3, 0), (1, 2)],
                10 => &[(0, 1), (2, 3)],
                _ => unreachable!(),
            };
            for &(p, q) in pairs {
                segments.push([edges[p], edges[q]]);
            }
        }
    }
    if segments.is_empty() {
        return Err(Error::Components { count: 0 });
    }
    let mut by_edge: HashMap<usize, Vec<usize>> = HashMap::new();
    for (s, e) in segments.iter().enumerate() {
        by_edge.entry(e[0]).or_default().push(s);
        by_edge.entry(e[1]).or_default().push(s);
    }
    let mut used = vec![false; segments.len()];
    let mut chains: Vec<(Vec<usize>, bool)> = Vec::new();
    for start in 0..segments.len() {
        if used[start] {
            continue;
        }
        used[start] = true;
        let first = segments[start][0];
        let mut edges = vec![first];
        let mut current = segments[start][1];
        let mut closed = false;
        loop {
            if current == first {
                closed = true;
                break;
            }
            edges.push(current);
            let next = by_edge[&current].iter().copied().find(|&s| !used[s]);
            match next {
                Some(s) => {
                    used[s] = true;
                    current = if segments[s][0] == current {
                        segments[s][1]
                    } else {
                        segments[s][0]
                    };
                }
                None => break,
            }
        }
        if !closed {
            // extend backwards from the first edge
            let mut back = Vec::new();
            let mut cur = first;
            while let Some(s) = by_edge[&cur].iter().copied().find(|&s| !used[s]) {
                used[s] = true;
                cur = if segments[s][0] == cur { segments[s][1] } else { segments[s][0] };
                back.push(cur);
            }
            back.reverse();
            back.extend(edges);
            edges = back;
        }
        chains.push((edges, closed));
    }
    if chains.len() != 1 {
        return Err(Error::Components { count: chains.len() });
    }
    let (edges, closed) = chains.pop().unwrap();
    if !closed {
        return Err(Error::Domain("level set reaches the domain boundary".into()));
    }
    let mut pts: Vec<Point> = Vec::with_capacity(edges.len());
    for e in edges {
        let p = crossing(e);
        if pts
            .last()
            .is_none_or(|q: &Point| (q[0] - p[0]).hypot(q[1] - p[1]) > 1e-12)
        {
            pts.push(p);
        }
    }
    if pts.len() >= 2 {
        let (a, b) = (pts[0], pts[pts.len() - 1]);
        if (a[0] - b[0]).hypot(a[1] - b[1]) <= 1e-12 {
            pts.pop();
        }
    }
    if pts.len() < 3 {
        return Err(Error::Components { count: 0 });
    }
    Ok(pts)
}
