//! Finite-difference eigenvalues of the radial operator, used as an
//! independent check on the variational spectrum.
//!
//! The operator is discretized in conservative form,
//! `-(1/x)(x u')' + (gamma^2/x^2 + delta x + x^2) u = W u`, on the
//! cell-centred grid `x_i = (i - 1/2) h`. The flux through `x = 0` vanishes
//! and `u(x_max) = 0`. Rescaling `v_i = sqrt(x_i) u_i` (the discrete analogue
//! of `u = x^(-1/2) v`) makes the matrix symmetric tridiagonal, and its lowest
//! eigenvalues are found by Sturm-count bisection. The scheme is second
//! order for `gamma = 0` as well as for integer `gamma >= 1`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::DimensionlessModel;

pub const DEFAULT_X_MAX: f64 = 10.0;
pub const DEFAULT_POINTS: usize = 4000;
pub const MIN_POINTS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FdGrid {
    x_max: f64,
    n_points: usize,
}

impl Default for FdGrid {
    fn default() -> Self {
        Self {
            x_max: DEFAULT_X_MAX,
            n_points: DEFAULT_POINTS,
        }
    }
}

impl FdGrid {
    pub fn new(x_max: f64, n_points: usize) -> Result<Self> {
        if !(x_max.is_finite() && x_max > 0.0) {
            return Err(Error::domain(format!(
                "x_max must be finite and > 0, got {x_max}"
            )));
        }
        if n_points < MIN_POINTS {
            return Err(Error::domain(format!(
                "need at least {MIN_POINTS} grid points, got {n_points}"
            )));
        }
        Ok(Self { x_max, n_points })
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn spacing(&self) -> f64 {
        self.x_max / (self.n_points as f64 + 0.5)
    }

    pub fn node(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.spacing()
    }
}

/// Symmetric tridiagonal matrix: `diag[i]`, and `off[i]` coupling `i` and `i + 1`.
struct Tridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl Tridiagonal {
    fn assemble(model: &DimensionlessModel, grid: &FdGrid) -> Self {
        let n = grid.n_points;
        let h = grid.spacing();
        let h2 = h * h;
        let g2 = model.gamma() * model.gamma();
        let mut diag = Vec::with_capacity(n);
        let mut off = Vec::with_capacity(n - 1);
        for i in 0..n {
            let x = grid.node(i);
            let left = if i == 0 { 0.0 } else { x - 0.5 * h };
            let right = x + 0.5 * h;
            diag.push((left + right) / (h2 * x) + g2 / (x * x) + model.potential(x));
            if i + 1 < n {
                off.push(-right / (h2 * (x * grid.node(i + 1)).sqrt()));
            }
        }
        Self { diag, off }
    }

    /// Number of eigenvalues strictly below `lambda`.
    fn count_below(&self, lambda: f64) -> usize {
        let pivmin = f64::MIN_POSITIVE.sqrt();
        let mut count = 0;
        let mut q = 1.0;
        for i in 0..self.diag.len() {
            let coupling = if i == 0 {
                0.0
            } else {
                self.off[i - 1] * self.off[i - 1] / q
            };
            q = self.diag[i] - lambda - coupling;
            if q.abs() < pivmin {
                q = -pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.diag.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.off[i - 1].abs() } else { 0.0 }
                + if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// `k`-th smallest eigenvalue (0-based) by bisection.
    fn eigenvalue(&self, k: usize, bounds: (f64, f64)) -> f64 {
        let (mut lo, mut hi) = bounds;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

/// Lowest `n_levels` eigenvalues `W_j` on one grid.
pub fn fd_spectrum(model: &DimensionlessModel, grid: &FdGrid, n_levels: usize) -> Result<Vec<f64>> {
    if n_levels == 0 || n_levels > grid.n_points {
        return Err(Error::domain(format!(
            "n_levels must be in 1..={}, got {n_levels}",
            grid.n_points
        )));
    }
    let t = Tridiagonal::assemble(model, grid);
    let (lo, hi) = t.gershgorin();
    let mut values = Vec::with_capacity(n_levels);
    let mut floor = lo;
    for k in 0..n_levels {
        let w = t.eigenvalue(k, (floor, hi));
        values.push(w);
        floor = w.min(hi);
    }
    Ok(values)
}

/// Second grid for Richardson extrapolation: twice the points of `grid`.
pub fn refined(grid: &FdGrid) -> FdGrid {
    FdGrid {
        x_max: grid.x_max,
        n_points: 2 * grid.n_points,
    }
}

/// Two-grid Richardson extrapolation assuming an `h^2` leading error.
pub fn fd_spectrum_extrapolated(
    model: &DimensionlessModel,
    grid: &FdGrid,
    n_levels: usize,
) -> Result<Vec<f64>> {
    let fine = refined(grid);
    let coarse_w = fd_spectrum(model, grid, n_levels)?;
    let fine_w = fd_spectrum(model, &fine, n_levels)?;
    let r2 = (grid.spacing() / fine.spacing()).powi(2);
    Ok(coarse_w
        .iter()
        .zip(&fine_w)
        .map(|(c, f)| (r2 * f - c) / (r2 - 1.0))
        .collect())
}

/// Empirical convergence order per level from grids with `n`, `2n`, `4n` points.
pub fn observed_order(
    model: &DimensionlessModel,
    grid: &FdGrid,
    n_levels: usize,
) -> Result<Vec<f64>> {
    let g2 = refined(grid);
    let g4 = refined(&g2);
    let w1 = fd_spectrum(model, grid, n_levels)?;
    let w2 = fd_spectrum(model, &g2, n_levels)?;
    let w4 = fd_spectrum(model, &g4, n_levels)?;
    let ratio = grid.spacing() / g2.spacing();
    Ok((0..n_levels)
        .map(|j| ((w1[j] - w2[j]) / (w2[j] - w4[j])).abs().ln() / ratio.ln())
        .collect())
}
