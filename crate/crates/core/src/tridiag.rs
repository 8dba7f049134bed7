//! Tridiagonal solvers: plain Thomas elimination, a pre-factored variant for
//! repeated solves with a fixed matrix, and the periodic (cyclic) case.

use crate::error::{Error, Result};

const TINY_PIVOT: f64 = 1e-300;

/// Solves `A x = rhs` for tridiagonal `A` in place.
///
/// `lower[0]` and `upper[n-1]` are ignored.
pub fn solve_in_place(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &mut [f64]) -> Result<()> {
    let n = rhs.len();
    assert!(lower.len() == n && diag.len() == n && upper.len() == n);
    if n == 0 {
        return Ok(());
    }
    let mut c = vec![0.0; n];
    let mut pivot = diag[0];
    if pivot.abs() < TINY_PIVOT {
        return Err(Error::Singular { row: 0, pivot });
    }
    c[0] = upper[0] / pivot;
    rhs[0] /= pivot;
    for i in 1..n {
        pivot = diag[i] - lower[i] * c[i - 1];
        if pivot.abs() < TINY_PIVOT || !pivot.is_finite() {
            return Err(Error::Singular { row: i, pivot });
        }
        c[i] = upper[i] / pivot;
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / pivot;
    }
    for i in (0..n - 1).rev() {
        rhs[i] -= c[i] * rhs[i + 1];
    }
    Ok(())
}

/// Convenience wrapper around [`solve_in_place`].
pub fn solve(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let mut x = rhs.to_vec();
    solve_in_place(lower, diag, upper, &mut x)?;
    Ok(x)
}

/// LU factors of a tridiagonal matrix, reused across many right-hand sides.
#[derive(Debug, Clone)]
pub struct Factored {
    lower: Vec<f64>,
    inv_pivot: Vec<f64>,
    c: Vec<f64>,
}

impl Factored {
    pub fn new(lower: &[f64], diag: &[f64], upper: &[f64]) -> Result<Self> {
        let n = diag.len();
        assert!(lower.len() == n && upper.len() == n && n > 0);
        let mut c = vec![0.0; n];
        let mut inv_pivot = vec![0.0; n];
        let mut prev_c = 0.0;
        for i in 0..n {
            let pivot = if i == 0 {
                diag[0]
            } else {
                diag[i] - lower[i] * prev_c
            };
            if pivot.abs() < TINY_PIVOT || !pivot.is_finite() {
                return Err(Error::Singular { row: i, pivot });
            }
            inv_pivot[i] = 1.0 / pivot;
            c[i] = upper[i] * inv_pivot[i];
            prev_c = c[i];
        }
        Ok(Self {
            lower: lower.to_vec(),
            inv_pivot,
            c,
        })
    }

    /// Constant-coefficient matrix: `diag` on the diagonal, `off` on both
    /// off-diagonals, with the first and last diagonal entries replaced.
    pub fn constant(n: usize, diag: f64, off: f64, first: f64, last: f64) -> Result<Self> {
        let lower = vec![off; n];
        let upper = vec![off; n];
        let mut d = vec![diag; n];
        d[0] = first;
        d[n - 1] = last;
        Self::new(&lower, &d, &upper)
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    pub fn solve_in_place(&self, rhs: &mut [f64]) {
        let n = self.c.len();
        debug_assert_eq!(rhs.len(), n);
        rhs[0] *= self.inv_pivot[0];
        for i in 1..n {
            rhs[i] = (rhs[i] - self.lower[i] * rhs[i - 1]) * self.inv_pivot[i];
        }
        for i in (0..n - 1).rev() {
            rhs[i] -= self.c[i] * rhs[i + 1];
        }
    }
}

impl Factored {
    /// Solves along the block index of `data`, which holds `len()` blocks
    /// of `lanes` contiguous values; every lane is an independent system.
    pub fn solve_lanes(&self, data: &mut [f64], lanes: usize) {
        let n = self.c.len();
        debug_assert_eq!(data.len(), n * lanes);
        let p0 = self.inv_pivot[0];
        data[..lanes].iter_mut().for_each(|v| *v *= p0);
        for i in 1..n {
            let (head, tail) = data.split_at_mut(i * lanes);
            let prev = &head[(i - 1) * lanes..];
            let (l, p) = (self.lower[i], self.inv_pivot[i]);
            for (cur, pr) in tail[..lanes].iter_mut().zip(prev) {
                *cur = (*cur - l * pr) * p;
            }
        }
        for i in (0..n - 1).rev() {
            let (head, tail) = data.split_at_mut((i + 1) * lanes);
            let cur = &mut head[i * lanes..];
            let c = self.c[i];
            for (cu, nx) in cur.iter_mut().zip(&tail[..lanes]) {
                *cu -= c * nx;
            }
        }
    }
}

/// Solves a periodic tridiagonal system where row 0 couples to `x[n-1]`
/// through `lower[0]` and row `n-1` couples to `x[0]` through `upper[n-1]`.
/// Uses the Sherman–Morrison correction on top of a Thomas solve.
pub fn solve_cyclic(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = rhs.len();
    assert!(n >= 3);
    let alpha = upper[n - 1];
    let beta = lower[0];
    let gamma = -diag[0];
    let mut d = diag.to_vec();
    d[0] -= gamma;
    d[n - 1] -= alpha * beta / gamma;
    let x = solve(lower, &d, upper, rhs)?;
    let mut u = vec![0.0; n];
    u[0] = gamma;
    u[n - 1] = alpha;
    let z = solve(lower, &d, upper, &u)?;
    let fact = (x[0] + beta * x[n - 1] / gamma) / (1.0 + z[0] + beta * z[n - 1] / gamma);
    Ok(x.iter().zip(&z).map(|(xi, zi)| xi - fact * zi).collect())
}
