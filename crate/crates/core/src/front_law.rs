//! Sharp-interface motion laws.
//!
//! In one dimension the front position solves the implicit velocity
//! equation `c0 x' + beta Phi(x') + F(t) = 0`. In two dimensions a closed
//! curve moves along its inward normal with speed
//! `V = kappa + (beta/c0) Phi(V) - mean(kappa + (beta/c0) Phi(V))`.

use crate::asymptotics::{phi_of_v, scan_roots, PhiScan, MAX_SPEED};
use crate::error::{Error, Result};
use crate::profiles::ProfileTable;
use crate::tridiag;

pub type Point = [f64; 2];

#[inline]
fn sub(a: Point, b: Point) -> Point {
    [a[0] - b[0], a[1] - b[1]]
}

#[inline]
fn cross(a: Point, b: Point) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

#[inline]
fn norm(a: Point) -> f64 {
    a[0].hypot(a[1])
}

/// Closed counterclockwise polyline with per-node geometry.
#[derive(Debug, Clone, PartialEq)]
pub struct FrontCurve {
    nodes: Vec<Point>,
    normals: Vec<Point>,
    curvature: Vec<f64>,
    weights: Vec<f64>,
}

impl FrontCurve {
    /// Builds a curve from its nodes, reversing them if they run clockwise.
    pub fn new(mut nodes: Vec<Point>) -> Result<Self> {
        if nodes.len() < 3 {
            return Err(Error::Domain(format!(
                "a closed curve needs at least 3 nodes, got {}",
                nodes.len()
            )));
        }
        if nodes.iter().any(|p| !p[0].is_finite() || !p[1].is_finite()) {
            return Err(Error::Domain("curve has non-finite nodes".into()));
        }
        if signed_area(&nodes) < 0.0 {
            nodes.reverse();
        }
        let mut curve = Self {
            nodes,
            normals: Vec::new(),
            curvature: Vec::new(),
            weights: Vec::new(),
        };
        curve.update_geometry();
        Ok(curve)
    }

    pub fn circle(center: Point, radius: f64, n: usize) -> Result<Self> {
        Self::ellipse(center, radius, radius, n)
    }

    /// Nodes equally spaced in the angle parameter.
    pub fn ellipse(center: Point, a: f64, b: f64, n: usize) -> Result<Self> {
        if !(a > 0.0 && b > 0.0) {
            return Err(Error::Domain(format!("ellipse semi-axes must be positive, got {a}, {b}")));
        }
        let nodes = (0..n)
            .map(|i| {
                let t = std::f64::consts::TAU * i as f64 / n as f64;
                [center[0] + a * t.cos(), center[1] + b * t.sin()]
            })
            .collect();
        Self::new(nodes)
    }

    fn update_geometry(&mut self) {
        let n = self.nodes.len();
        self.normals.clear();
        self.curvature.clear();
        self.weights.clear();
        for i in 0..n {
            let a = self.nodes[(i + n - 1) % n];
            let b = self.nodes[i];
            let c = self.nodes[(i + 1) % n];
            let chord = sub(c, a);
            let len = norm(chord);
            self.weights.push(0.5 * len);
            self.normals.push([-chord[1] / len, chord[0] / len]);
            self.curvature.push(menger(a, b, c));
        }
    }

    pub fn nodes(&self) -> &[Point] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Unit inward normals.
    pub fn normals(&self) -> &[Point] {
        &self.normals
    }

    /// Signed curvature, positive on a counterclockwise circle.
    pub fn curvature(&self) -> &[f64] {
        &self.curvature
    }

    /// Arclength quadrature weights `|x_{i+1} - x_{i-1}| / 2`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    fn edge_lengths(&self) -> impl Iterator<Item = f64> + '_ {
        let n = self.nodes.len();
        (0..n).map(move |i| norm(sub(self.nodes[(i + 1) % n], self.nodes[i])))
    }

    pub fn perimeter(&self) -> f64 {
        self.edge_lengths().sum()
    }

    /// Mean node spacing.
    pub fn spacing(&self) -> f64 {
        self.perimeter() / self.nodes.len() as f64
    }

    pub fn min_spacing(&self) -> f64 {
        self.edge_lengths().fold(f64::INFINITY, f64::min)
    }

    pub fn max_spacing(&self) -> f64 {
        self.edge_lengths().fold(0.0, f64::max)
    }

    /// `max |spacing_i / mean - 1|`.
    pub fn spacing_deviation(&self) -> f64 {
        let mean = self.spacing();
        self.edge_lengths()
            .map(|l| (l / mean - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Sum of signed exterior angles.
    pub fn total_turning(&self) -> f64 {
        let n = self.nodes.len();
        (0..n)
            .map(|i| {
                let u = sub(self.nodes[i], self.nodes[(i + n - 1) % n]);
                let v = sub(self.nodes[(i + 1) % n], self.nodes[i]);
                cross(u, v).atan2(u[0] * v[0] + u[1] * v[1])
            })
            .sum()
    }

    /// `4 pi A / L^2`, equal to 1 only for a circle.
    pub fn isoperimetric_ratio(&self) -> f64 {
        let l = self.perimeter();
        4.0 * std::f64::consts::PI * enclosed_area(self) / (l * l)
    }

    /// Whether any two non-adjacent edges intersect.
    pub fn self_intersects(&self) -> bool {
        let n = self.nodes.len();
        for i in 0..n {
            let (a, b) = (self.nodes[i], self.nodes[(i + 1) % n]);
            for j in i + 2..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                let (c, d) = (self.nodes[j], self.nodes[(j + 1) % n]);
                if segments_cross(a, b, c, d) {
                    return true;
                }
            }
        }
        false
    }

    pub fn translated(&self, shift: Point) -> FrontCurve {
        let nodes = self.nodes.iter().map(|p| [p[0] + shift[0], p[1] + shift[1]]).collect();
        FrontCurve::new(nodes).expect("translation keeps the curve valid")
    }
}

fn segments_cross(a: Point, b: Point, c: Point, d: Point) -> bool {
    let d1 = cross(sub(b, a), sub(c, a));
    let d2 = cross(sub(b, a), sub(d, a));
    let d3 = cross(sub(d, c), sub(a, c));
    let d4 = cross(sub(d, c), sub(b, c));
    if d1 * d2 < 0.0 && d3 * d4 < 0.0 {
        return true;
    }
    // touching counts for non-adjacent edges
    (d1 == 0.0 && within(a, b, c))
        || (d2 == 0.0 && within(a, b, d))
        || (d3 == 0.0 && within(c, d, a))
        || (d4 == 0.0 && within(c, d, b))
}

/// Whether `p`, collinear with `a` and `b`, lies on the segment.
fn within(a: Point, b: Point, p: Point) -> bool {
    p[0] >= a[0].min(b[0]) && p[0] <= a[0].max(b[0]) && p[1] >= a[1].min(b[1]) && p[1] <= a[1].max(b[1])
}

/// Curvature of the circle through three points, signed by turning
/// direction; nearly collinear triples give 0.
fn menger(a: Point, b: Point, c: Point) -> f64 {
    let ab = sub(b, a);
    let bc = sub(c, b);
    let ca = sub(a, c);
    let (lab, lbc, lca) = (norm(ab), norm(bc), norm(ca));
    let cr = cross(ab, bc);
    if lab == 0.0 || lbc == 0.0 || cr.abs() <= 1e-14 * lab * lbc {
        return 0.0;
    }
    2.0 * cr / (lab * lbc * lca)
}

fn signed_area(nodes: &[Point]) -> f64 {
    let n = nodes.len();
    0.5 * (0..n)
        .map(|i| cross(nodes[i], nodes[(i + 1) % n]))
        .sum::<f64>()
}

/// Shoelace area, positive for counterclockwise curves.
pub fn enclosed_area(curve: &FrontCurve) -> f64 {
    signed_area(&curve.nodes)
}

/// Recomputes curvature and normals; requires at least 16 nodes.
pub fn curvature_and_normals(curve: &FrontCurve) -> Result<FrontCurve> {
    if curve.len() < 16 {
        return Err(Error::Domain(format!(
            "curvature needs at least 16 nodes, got {}",
            curve.len()
        )));
    }
    FrontCurve::new(curve.nodes.clone())
}

/// Periodic cubic spline through the nodes, parametrized by cumulative
/// chord length.
struct PeriodicSpline {
    knots: Vec<f64>,
    total: f64,
    coords: [Vec<f64>; 2],
    second: [Vec<f64>; 2],
}

impl PeriodicSpline {
    fn new(nodes: &[Point]) -> Result<Self> {
        let n = nodes.len();
        let h: Vec<f64> = (0..n).map(|i| norm(sub(nodes[(i + 1) % n], nodes[i]))).collect();
        if h.iter().any(|&x| x <= 0.0) {
            return Err(Error::Domain("curve has coincident consecutive nodes".into()));
        }
        let mut knots = vec![0.0; n];
        for i in 1..n {
            knots[i] = knots[i - 1] + h[i - 1];
        }
        let total = knots[n - 1] + h[n - 1];
        let lower: Vec<f64> = (0..n).map(|i| h[(i + n - 1) % n]).collect();
        let diag: Vec<f64> = (0..n).map(|i| 2.0 * (h[(i + n - 1) % n] + h[i])).collect();
        let upper = h.clone();
        let mut coords = [Vec::new(), Vec::new()];
        let mut second = [Vec::new(), Vec::new()];
        for c in 0..2 {
            let y: Vec<f64> = nodes.iter().map(|p| p[c]).collect();
            let slope: Vec<f64> = (0..n).map(|i| (y[(i + 1) % n] - y[i]) / h[i]).collect();
            let rhs: Vec<f64> = (0..n)
                .map(|i| 6.0 * (slope[i] - slope[(i + n - 1) % n]))
                .collect();
            second[c] = tridiag::solve_cyclic(&lower, &diag, &upper, &rhs)?;
            coords[c] = y;
        }
        Ok(Self {
            knots,
            total,
            coords,
            second,
        })
    }

    fn eval(&self, s: f64) -> Point {
        let n = self.knots.len();
        let s = s.rem_euclid(self.total);
        let i = (self.knots.partition_point(|&k| k <= s) - 1).min(n - 1);
        let i1 = (i + 1) % n;
        let hi = if i + 1 < n { self.knots[i + 1] } else { self.total } - self.knots[i];
        let t = s - self.knots[i];
        let mut out = [0.0; 2];
        for (c, o) in out.iter_mut().enumerate() {
            let (y0, y1) = (self.coords[c][i], self.coords[c][i1]);
            let (m0, m1) = (self.second[c][i], self.second[c][i1]);
            let d = (y1 - y0) / hi;
            *o = y0 + t * (d - hi * (2.0 * m0 + m1) / 6.0) + t * t * m0 / 2.0
                + t * t * t * (m1 - m0) / (6.0 * hi);
        }
        out
    }
}

/// Resamples to `n` nodes equally spaced in arclength (two spline passes).
pub fn reparametrize(curve: &FrontCurve, n: usize) -> Result<FrontCurve> {
    let mut nodes = curve.nodes.clone();
    for pass in 0..2 {
        let spline = PeriodicSpline::new(&nodes)?;
        let count = if pass == 0 { n } else { nodes.len() };
        nodes = (0..count)
            .map(|i| spline.eval(spline.total * i as f64 / count as f64))
            .collect();
    }
    FrontCurve::new(nodes)
}

/// Velocity of the 1D front `x' = V`: a root of `c0 V + beta Phi(V) + F`.
/// With several roots the one nearest `warm_start` (or 0) is returned
/// together with the root count.
pub fn solve_velocity_1d(
    forcing: f64,
    beta: f64,
    profile: &ProfileTable,
    warm_start: Option<f64>,
) -> Result<(f64, usize)> {
    let c0 = profile.c0();
    let roots = if beta == 0.0 {
        let v = -forcing / c0;
        if v.abs() <= MAX_SPEED {
            vec![v]
        } else {
            vec![]
        }
    } else {
        let table = profile.phi_scan().values();
        scan_roots(
            |k| c0 * PhiScan::node(k) + beta * table[k] + forcing,
            |v| Ok(c0 * v + beta * phi_of_v(v, profile)? + forcing),
        )?
    };
    let target = warm_start.unwrap_or(0.0);
    let best = roots
        .iter()
        .copied()
        .min_by(|a, b| (a - target).abs().total_cmp(&(b - target).abs()))
        .ok_or(Error::RootNotFound {
            lo: -MAX_SPEED,
            hi: MAX_SPEED,
            forcing,
            beta,
        })?;
    Ok((best, roots.len()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrontTrajectory1D {
    pub t: Vec<f64>,
    pub x0: Vec<f64>,
    pub v: Vec<f64>,
    /// Number of velocity roots found at each node.
    pub branch_flags: Vec<usize>,
}

impl FrontTrajectory1D {
    /// Position at time `t` by linear interpolation.
    pub fn position_at(&self, t: f64) -> f64 {
        let n = self.t.len();
        if t <= self.t[0] {
            return self.x0[0];
        }
        if t >= self.t[n - 1] {
            return self.x0[n - 1];
        }
        let j = self.t.partition_point(|&s| s <= t) - 1;
        let w = (t - self.t[j]) / (self.t[j + 1] - self.t[j]);
        (1.0 - w) * self.x0[j] + w * self.x0[j + 1]
    }
}

/// Explicit midpoint integration of `x' = V(F(t))` with branch continuation.
pub fn integrate_front_1d(
    forcing: impl Fn(f64) -> f64,
    beta: f64,
    x_init: f64,
    t_span: (f64, f64),
    dt: f64,
    profile: &ProfileTable,
) -> Result<FrontTrajectory1D> {
    let (t0, t1) = t_span;
    let length = t1 - t0;
    if !(length > 0.0) {
        return Err(Error::Config(format!("empty time span [{t0}, {t1}]")));
    }
    if !(dt > 0.0 && dt <= 1e-2 * length * (1.0 + 1e-12)) {
        return Err(Error::Config(format!(
            "dt = {dt} must lie in (0, {}]",
            1e-2 * length
        )));
    }
    let steps = (length / dt - 1e-9).ceil() as usize;
    let dt = length / steps as f64;
    let solve = |t: f64, warm: Option<f64>| {
        solve_velocity_1d(forcing(t), beta, profile, warm).map_err(|e| e.at_time(t))
    };
    let (v_start, m_start) = solve(t0, None)?;
    let mut traj = FrontTrajectory1D {
        t: vec![t0],
        x0: vec![x_init],
        v: vec![v_start],
        branch_flags: vec![m_start],
    };
    let mut x = x_init;
    let mut v = v_start;
    for k in 0..steps {
        let t = t0 + k as f64 * dt;
        let (v_mid, _) = solve(t + 0.5 * dt, Some(v))?;
        x += dt * v_mid;
        let t_next = t0 + (k + 1) as f64 * dt;
        let (v_next, mult) = solve(t_next, Some(v_mid))?;
        v = v_next;
        traj.t.push(t_next);
        traj.x0.push(x);
        traj.v.push(v);
        traj.branch_flags.push(mult);
    }
    Ok(traj)
}

/// Arclength-weighted mean over the curve nodes.
pub fn curve_mean(curve: &FrontCurve, values: &[f64]) -> f64 {
    let w = curve.weights();
    let total: f64 = w.iter().sum();
    w.iter().zip(values).map(|(a, b)| a * b).sum::<f64>() / total
}

pub const FIXED_POINT_TOL: f64 = 1e-10;
pub const FIXED_POINT_MAX_ITER: usize = 200;
const DAMPING: f64 = 0.5;

/// Normal velocity field of the nonlocal curvature law.
pub fn solve_velocity_field_2d(curve: &FrontCurve, beta: f64, profile: &ProfileTable) -> Result<Vec<f64>> {
    if !(beta.abs() <= 0.5) {
        return Err(Error::Config(format!("|beta| must be <= 0.5, got {beta}")));
    }
    let kappa = curve.curvature();
    let map = |v: &[f64]| -> Result<Vec<f64>> {
        let mut g = kappa.to_vec();
        if beta != 0.0 {
            let scan = profile.phi_scan();
            let scale = beta / profile.c0();
            for (gi, vi) in g.iter_mut().zip(v) {
                *gi += scale * scan.interpolate(*vi)?;
            }
        }
        let mean = curve_mean(curve, &g);
        g.iter_mut().for_each(|x| *x -= mean);
        Ok(g)
    };
    let mut v = map(&vec![0.0; curve.len()])?;
    if beta == 0.0 {
        return Ok(v);
    }
    let mut residual = f64::INFINITY;
    for _ in 0..FIXED_POINT_MAX_ITER {
        let g = map(&v)?;
        residual = g.iter().zip(&v).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        if residual <= FIXED_POINT_TOL {
            return Ok(g);
        }
        for (vi, gi) in v.iter_mut().zip(&g) {
            *vi += DAMPING * (gi - *vi);
        }
    }
    Err(Error::NoConvergence {
        iterations: FIXED_POINT_MAX_ITER,
        residual,
    })
}

/// Recorded states of a curve evolution.
#[derive(Debug, Clone)]
pub struct CurveEvolution {
    pub times: Vec<f64>,
    pub curves: Vec<FrontCurve>,
}

/// Forward-Euler motion along the inward normal followed by arclength
/// reparametrization at every step. Every `record_every`-th state is kept,
/// together with the first and last.
pub fn evolve_curve(
    curve: &FrontCurve,
    beta: f64,
    t_span: (f64, f64),
    dt: f64,
    profile: &ProfileTable,
    record_every: usize,
) -> Result<CurveEvolution> {
    let (t0, t1) = t_span;
    let length = t1 - t0;
    if !(length > 0.0) {
        return Err(Error::Config(format!("empty time span [{t0}, {t1}]")));
    }
    let limit = 0.1 * curve.min_spacing().powi(2);
    if !(dt > 0.0 && dt <= limit) {
        return Err(Error::Config(format!(
            "dt = {dt} exceeds the explicit limit 0.1 h^2 = {limit:.3e}"
        )));
    }
    let record_every = record_every.max(1);
    let steps = (length / dt - 1e-9).ceil() as usize;
    let dt = length / steps as f64;
    let n = curve.len();
    let mut current = curvature_and_normals(curve)?;
    let mut out = CurveEvolution {
        times: vec![t0],
        curves: vec![current.clone()],
    };
    for step in 1..=steps {
        let t = t0 + step as f64 * dt;
        let next = euler_step(&current, beta, dt, profile).map_err(|e| e.at_time(t))?;
        let next = reparametrize(&next, n).map_err(|e| e.at_time(t))?;
        if next.self_intersects() {
            return Err(Error::SelfIntersection { step });
        }
        current = next;
        if step % record_every == 0 || step == steps {
            out.times.push(t);
            out.curves.push(current.clone());
        }
    }
    Ok(out)
}

pub(crate) fn euler_step(curve: &FrontCurve, beta: f64, dt: f64, profile: &ProfileTable) -> Result<FrontCurve> {
    let v = solve_velocity_field_2d(curve, beta, profile)?;
    let nodes = curve
        .nodes()
        .iter()
        .zip(curve.normals())
        .zip(&v)
        .map(|((p, nrm), vi)| [p[0] + dt * vi * nrm[0], p[1] + dt * vi * nrm[1]])
        .collect();
    FrontCurve::new(nodes)
}

fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let ab = sub(b, a);
    let ap = sub(p, a);
    let len2 = ab[0] * ab[0] + ab[1] * ab[1];
    let t = if len2 > 0.0 {
        ((ap[0] * ab[0] + ap[1] * ab[1]) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    norm([ap[0] - t * ab[0], ap[1] - t * ab[1]])
}

fn directed_distance(from: &FrontCurve, to: &FrontCurve) -> f64 {
    let m = to.len();
    from.nodes()
        .iter()
        .map(|&p| {
            (0..m)
                .map(|j| point_segment_distance(p, to.nodes[j], to.nodes[(j + 1) % m]))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

/// Symmetric Hausdorff distance between the nodes of each curve and the
/// polyline of the other.
pub fn hausdorff(a: &FrontCurve, b: &FrontCurve) -> f64 {
    directed_distance(a, b).max(directed_distance(b, a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn circle_curvature_and_normals() {
        let c = FrontCurve::circle([0.3, -1.0], 2.0, 256).unwrap();
        let c = curvature_and_normals(&c).unwrap();
        for (k, (p, n)) in c.curvature().iter().zip(c.nodes().iter().zip(c.normals())) {
            assert!((k - 0.5).abs() < 1e-4);
            let radial = [(p[0] - 0.3) / 2.0, (p[1] + 1.0) / 2.0];
            assert!((n[0] + radial[0]).abs() < 1e-12 && (n[1] + radial[1]).abs() < 1e-12);
        }
        assert!((c.total_turning() - 2.0 * PI).abs() < 1e-10);
    }

    #[test]
    fn reversed_circle_is_normalized() {
        let c = FrontCurve::circle([0.0, 0.0], 1.0, 64).unwrap();
        let mut rev = c.nodes().to_vec();
        rev.reverse();
        let r = FrontCurve::new(rev).unwrap();
        assert!(enclosed_area(&r) > 0.0);
        for k in r.curvature() {
            assert!((k - 1.0).abs() < 1e-3);
        }
    }

    #[test]
    fn too_few_nodes_for_curvature() {
        let c = FrontCurve::circle([0.0, 0.0], 1.0, 8).unwrap();
        assert!(matches!(curvature_and_normals(&c), Err(Error::Domain(_))));
    }

    #[test]
    fn areas() {
        let sq = FrontCurve::new(vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap();
        assert!((enclosed_area(&sq) - 1.0).abs() < 1e-15);
        let c = FrontCurve::circle([0.0, 0.0], 1.0, 512).unwrap();
        assert!((enclosed_area(&c) - PI).abs() < 1e-4);
        let moved = c.translated([3.0, -7.5]);
        assert!((enclosed_area(&moved) - enclosed_area(&c)).abs() < 1e-12);
    }

    #[test]
    fn reparametrization_equalizes_spacing() {
        let e = FrontCurve::ellipse([0.0, 0.0], 2.0, 1.0, 128).unwrap();
        assert!(e.spacing_deviation() > 0.1);
        let r = reparametrize(&e, 128).unwrap();
        assert!(r.spacing_deviation() < 0.01);
        assert!((enclosed_area(&r) - enclosed_area(&e)).abs() / enclosed_area(&e) < 1e-4);
    }

    #[test]
    fn figure_eight_self_intersects() {
        let nodes: Vec<Point> = (0..64)
            .map(|i| {
                let t = std::f64::consts::TAU * (i as f64 + 0.5) / 64.0;
                [t.sin(), t.sin() * t.cos()]
            })
            .collect();
        assert!(FrontCurve::new(nodes).unwrap().self_intersects());
        assert!(!FrontCurve::circle([0.0, 0.0], 1.0, 64).unwrap().self_intersects());
    }

    #[test]
    fn hausdorff_of_concentric_circles() {
        let a = FrontCurve::circle([0.0, 0.0], 1.0, 400).unwrap();
        let b = FrontCurve::circle([0.0, 0.0], 1.2, 400).unwrap();
        assert!((hausdorff(&a, &b) - 0.2).abs() < 1e-3);
        assert_eq!(hausdorff(&a, &a), 0.0);
    }
}
