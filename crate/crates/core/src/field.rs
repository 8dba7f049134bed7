//! Uniform one-dimensional grids and the scalar fields that live on them.

use crate::error::{Error, Result};

/// Nodes `start + j * spacing` for `j = 0..len`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformGrid {
    pub start: f64,
    pub spacing: f64,
    pub len: usize,
}

impl UniformGrid {
    pub fn new(start: f64, spacing: f64, len: usize) -> Result<Self> {
        if !(spacing > 0.0) || !spacing.is_finite() || !start.is_finite() {
            return Err(Error::Domain(format!(
                "grid spacing must be positive and finite, got {spacing}"
            )));
        }
        if len < 3 {
            return Err(Error::Domain(format!("grid needs at least 3 nodes, got {len}")));
        }
        Ok(Self { start, spacing, len })
    }

    /// Grid covering `[lo, hi]` with spacing at most `max_spacing`.
    pub fn covering(lo: f64, hi: f64, max_spacing: f64) -> Result<Self> {
        if !(hi > lo) {
            return Err(Error::Domain(format!("empty interval [{lo}, {hi}]")));
        }
        let intervals = ((hi - lo) / max_spacing).ceil().max(2.0) as usize;
        Self::new(lo, (hi - lo) / intervals as f64, intervals + 1)
    }

    #[inline]
    pub fn node(&self, j: usize) -> f64 {
        self.start + j as f64 * self.spacing
    }

    pub fn end(&self) -> f64 {
        self.node(self.len - 1)
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len).map(move |j| self.node(j))
    }

    pub fn same_as(&self, other: &UniformGrid) -> bool {
        self.len == other.len
            && (self.start - other.start).abs() <= 1e-12 * (1.0 + self.start.abs())
            && (self.spacing - other.spacing).abs() <= 1e-12 * self.spacing
    }

    /// Composite trapezoid weights.
    pub fn trapezoid(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.len);
        let n = values.len();
        let inner: f64 = values[1..n - 1].iter().sum();
        self.spacing * (inner + 0.5 * (values[0] + values[n - 1]))
    }
}

/// Scalar field sampled on a [`UniformGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct LineField {
    grid: UniformGrid,
    values: Vec<f64>,
}

impl LineField {
    pub fn new(grid: UniformGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len {
            return Err(Error::Domain(format!(
                "field has {} values but grid has {} nodes",
                values.len(),
                grid.len
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: UniformGrid) -> Self {
        Self {
            grid,
            values: vec![0.0; grid.len],
        }
    }

    pub fn from_fn(grid: UniformGrid, f: impl Fn(f64) -> f64) -> Self {
        Self {
            grid,
            values: grid.nodes().map(f).collect(),
        }
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn check_grid(&self, other: &UniformGrid) -> Result<()> {
        if self.grid.same_as(other) {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "grid mismatch: {:?} vs {:?}",
                self.grid, other
            )))
        }
    }

    /// Central first difference, second-order one-sided at the ends.
    pub fn derivative(&self) -> LineField {
        LineField {
            grid: self.grid,
            values: derivative(&self.values, self.grid.spacing),
        }
    }

    /// Trapezoid integral of the field.
    pub fn integral(&self) -> f64 {
        self.grid.trapezoid(&self.values)
    }

    /// Trapezoid inner product with a field on the same grid.
    pub fn dot(&self, other: &LineField) -> f64 {
        dot(&self.grid, &self.values, &other.values)
    }

    pub fn l2_norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Linear interpolation, zero outside the grid.
    pub fn interpolate(&self, x: f64) -> f64 {
        interpolate_or_zero(&self.grid, &self.values, x)
    }
}

pub(crate) fn dot(grid: &UniformGrid, a: &[f64], b: &[f64]) -> f64 {
    let n = a.len();
    let inner: f64 = a[1..n - 1].iter().zip(&b[1..n - 1]).map(|(x, y)| x * y).sum();
    grid.spacing * (inner + 0.5 * (a[0] * b[0] + a[n - 1] * b[n - 1]))
}

pub(crate) fn derivative(v: &[f64], h: f64) -> Vec<f64> {
    let n = v.len();
    let mut d = vec![0.0; n];
    for j in 1..n - 1 {
        d[j] = (v[j + 1] - v[j - 1]) / (2.0 * h);
    }
    d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
    d[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
    d
}

pub(crate) fn interpolate_or_zero(grid: &UniformGrid, v: &[f64], x: f64) -> f64 {
    let s = (x - grid.start) / grid.spacing;
    if !(s >= 0.0) || s > (grid.len - 1) as f64 {
        return 0.0;
    }
    let j = (s.floor() as usize).min(grid.len - 2);
    let w = s - j as f64;
    (1.0 - w) * v[j] + w * v[j + 1]
}

/// First derivative in time on a possibly non-uniform grid: three-point
/// formulas (second order) with one-sided stencils at the ends.
pub(crate) fn time_derivative(t: &[f64], series: &[&[f64]]) -> Vec<Vec<f64>> {
    let m = t.len();
    let n = series[0].len();
    if m == 1 {
        return vec![vec![0.0; n]];
    }
    if m == 2 {
        let dt = t[1] - t[0];
        let d: Vec<f64> = (0..n).map(|j| (series[1][j] - series[0][j]) / dt).collect();
        return vec![d.clone(), d];
    }
    let mut out = Vec::with_capacity(m);
    for k in 0..m {
        let (a, b, c) = if k == 0 {
            (0, 1, 2)
        } else if k == m - 1 {
            (m - 3, m - 2, m - 1)
        } else {
            (k - 1, k, k + 1)
        };
        // Lagrange derivative weights at t[k]
        let (ta, tb, tc, tk) = (t[a], t[b], t[c], t[k]);
        let wa = ((tk - tb) + (tk - tc)) / ((ta - tb) * (ta - tc));
        let wb = ((tk - ta) + (tk - tc)) / ((tb - ta) * (tb - tc));
        let wc = ((tk - ta) + (tk - tb)) / ((tc - ta) * (tc - tb));
        out.push(
            (0..n)
                .map(|j| wa * series[a][j] + wb * series[b][j] + wc * series[c][j])
                .collect(),
        );
    }
    out
}
