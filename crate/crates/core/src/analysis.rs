//! Sweeps over `delta`, the overlay of truncation points on the variational
//! curves, the Hellmann-Feynman check `dW/d delta = <x>`, and the
//! "allowed frequency" tables obtained by reading truncation roots as a
//! quantization of `omega`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::frobenius;
use crate::model::{energy_from_w, omega_from_delta, PhysicalParameters};
use crate::variational::{RitzSolver, DEFAULT_MAX_BASIS, DEFAULT_TOL};

pub const DEFAULT_DELTA_MIN: f64 = -3.0;
pub const DEFAULT_DELTA_MAX: f64 = 3.0;
pub const DEFAULT_GRID: usize = 61;
pub const DEFAULT_TRUNCATION_DEGREE: usize = 4;
/// Eigenvectors at `delta - h` and `delta + h` must overlap at least this much.
pub const MIN_STATE_OVERLAP: f64 = 0.9;

/// Attached to every frequency table.
pub const FREQUENCY_TABLE_NOTE: &str =
    "artifact of truncation: bound states exist for every omega, these values are not a physical quantization";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TruncationPoint {
    pub n: usize,
    pub i: usize,
    pub delta_root: f64,
    pub w: f64,
    /// Always `i - 1`: the solution has `i - 1` nodes.
    pub matched_level: usize,
    pub variational_w: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridFailure {
    pub delta: f64,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepTable {
    pub gamma: f64,
    pub delta_grid: Vec<f64>,
    /// `levels[j][k]` is `W_j` at `delta_grid[k]`; NaN where the solve failed.
    pub levels: Vec<Vec<f64>>,
    pub truncation_points: Vec<TruncationPoint>,
    pub failures: Vec<GridFailure>,
}

impl SweepTable {
    pub fn max_residual(&self) -> f64 {
        self.truncation_points
            .iter()
            .map(|p| p.residual)
            .fold(0.0, f64::max)
    }

    /// `(level, grid index)` pairs where a row fails to increase.
    pub fn monotonicity_violations(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (j, row) in self.levels.iter().enumerate() {
            for k in 1..row.len() {
                if !(row[k] > row[k - 1]) {
                    out.push((j, k));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepParams {
    pub gamma: f64,
    pub delta_min: f64,
    pub delta_max: f64,
    pub n_grid: usize,
    pub n_levels: usize,
    pub n_trunc_max: usize,
    pub tol: f64,
}

impl Default for SweepParams {
    fn default() -> Self {
        Self {
            gamma: 0.0,
            delta_min: DEFAULT_DELTA_MIN,
            delta_max: DEFAULT_DELTA_MAX,
            n_grid: DEFAULT_GRID,
            n_levels: crate::variational::DEFAULT_LEVELS,
            n_trunc_max: DEFAULT_TRUNCATION_DEGREE,
            tol: DEFAULT_TOL,
        }
    }
}

impl SweepParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.delta_min.is_finite()
            && self.delta_max.is_finite()
            && self.delta_min < self.delta_max)
        {
            return Err(Error::domain(format!(
                "need finite delta_min < delta_max, got [{}, {}]",
                self.delta_min, self.delta_max
            )));
        }
        if self.n_grid < 2 {
            return Err(Error::domain("the delta grid needs at least 2 points"));
        }
        if self.n_levels == 0 {
            return Err(Error::domain("n_levels must be >= 1"));
        }
        if !(self.gamma.is_finite() && self.gamma >= 0.0) {
            return Err(Error::domain(format!(
                "gamma must be finite and >= 0, got {}",
                self.gamma
            )));
        }
        Ok(())
    }

    pub fn grid(&self) -> Vec<f64> {
        let step = (self.delta_max - self.delta_min) / (self.n_grid - 1) as f64;
        (0..self.n_grid)
            .map(|k| {
                if k + 1 == self.n_grid {
                    self.delta_max
                } else {
                    self.delta_min + k as f64 * step
                }
            })
            .collect()
    }
}

/// Variational curves on the grid plus every truncation point in range.
/// Grid points are solved in parallel on the current rayon pool; the
/// result does not depend on scheduling.
pub fn sweep(params: &SweepParams) -> Result<SweepTable> {
    params.validate()?;
    let levels_needed = params.n_levels.max(params.n_trunc_max + 1);
    let solver = RitzSolver::new(params.gamma, DEFAULT_MAX_BASIS.max(levels_needed + 20))?;
    let grid = params.grid();

    let solved: Vec<Result<Vec<f64>>> = grid
        .par_iter()
        .map(|&delta| {
            let r = solver.spectrum(delta, params.n_levels, params.tol)?;
            if !r.converged() {
                return Err(Error::numeric(format!(
                    "not converged at basis size {}",
                    r.basis_size_used
                )));
            }
            Ok(r.values())
        })
        .collect();

    let mut levels = vec![Vec::with_capacity(grid.len()); params.n_levels];
    let mut failures = Vec::new();
    for (&delta, result) in grid.iter().zip(solved) {
        match result {
            Ok(values) => {
                for (row, w) in levels.iter_mut().zip(values) {
                    row.push(w);
                }
            }
            Err(e) => {
                failures.push(GridFailure {
                    delta,
                    message: e.to_string(),
                });
                for row in levels.iter_mut() {
                    row.push(f64::NAN);
                }
            }
        }
    }

    let mut candidates = Vec::new();
    for n in 0..=params.n_trunc_max {
        for sol in frobenius::all_solutions(n as i64, params.gamma)? {
            if sol.delta_root >= params.delta_min && sol.delta_root <= params.delta_max {
                candidates.push(sol);
            }
        }
    }
    let points: Vec<std::result::Result<TruncationPoint, GridFailure>> = candidates
        .par_iter()
        .map(|sol| {
            let level = sol.i - 1;
            solver
                .spectrum(sol.delta_root, sol.i, params.tol)
                .map(|r| {
                    let variational_w = r.levels[level].w;
                    TruncationPoint {
                        n: sol.n,
                        i: sol.i,
                        delta_root: sol.delta_root,
                        w: sol.w,
                        matched_level: level,
                        variational_w,
                        residual: (sol.w - variational_w).abs(),
                    }
                })
                .map_err(|e| GridFailure {
                    delta: sol.delta_root,
                    message: e.to_string(),
                })
        })
        .collect();
    let mut truncation_points = Vec::with_capacity(points.len());
    for p in points {
        match p {
            Ok(p) => truncation_points.push(p),
            Err(f) => failures.push(f),
        }
    }

    Ok(SweepTable {
        gamma: params.gamma,
        delta_grid: grid,
        levels,
        truncation_points,
        failures,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HellmannFeynman {
    pub gamma: f64,
    pub delta: f64,
    pub level: usize,
    pub h: f64,
    /// `(W_j(delta + h) - W_j(delta - h)) / 2h`.
    pub lhs: f64,
    /// `<x>` in state `j` at `delta`.
    pub rhs: f64,
    pub abs_diff: f64,
}

pub fn hellmann_feynman_check(gamma: f64, delta: f64, j: usize, h: f64) -> Result<HellmannFeynman> {
    let solver = RitzSolver::new(gamma, DEFAULT_MAX_BASIS)?;
    hellmann_feynman_with(&solver, delta, j, h)
}

/// Same as [`hellmann_feynman_check`] with a prebuilt solver. All three
/// solves use the basis size at which the spectrum at `delta` converged.
pub fn hellmann_feynman_with(
    solver: &RitzSolver,
    delta: f64,
    j: usize,
    h: f64,
) -> Result<HellmannFeynman> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::domain(format!("step h must be > 0, got {h}")));
    }
    let center = solver.spectrum(delta, j + 1, DEFAULT_TOL)?;
    let size = center.basis_size_used;
    let eig = solver.solve(delta, size, j + 1)?;
    let lower = solver.solve(delta - h, size, j + 1)?;
    let upper = solver.solve(delta + h, size, j + 1)?;

    let s = solver.basis().overlap_block(size);
    let overlap = lower.vector(j).dot(&(&s * upper.vector(j))).abs();
    if overlap < MIN_STATE_OVERLAP {
        return Err(Error::LevelCrossing {
            level: j,
            lo: delta - h,
            hi: delta + h,
            overlap,
        });
    }

    let lhs = (upper.values[j] - lower.values[j]) / (2.0 * h);
    let rhs = solver.mean_x(&eig, j);
    Ok(HellmannFeynman {
        gamma: solver.gamma(),
        delta,
        level: j,
        h,
        lhs,
        rhs,
        abs_diff: (lhs - rhs).abs(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrequencyRow {
    pub i: usize,
    pub delta_root: f64,
    pub omega: f64,
    pub energy: f64,
    /// Set for the `delta = 0` root, which gives `omega = 0`.
    pub excluded: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrequencyTable {
    pub n: usize,
    pub gamma: f64,
    pub physical: PhysicalParameters,
    pub rows: Vec<FrequencyRow>,
    pub note: &'static str,
}

/// `omega^(n,i) = delta_i^2 q^2 / (2 m (b g)^2)` and
/// `E^(n,i) = omega (n + gamma + 1)/2 - m (b g)^2 omega^2 / (8 q^2) + k^2/(2m)`.
pub fn allowed_frequencies_table(
    n: usize,
    gamma: f64,
    p: &PhysicalParameters,
) -> Result<FrequencyTable> {
    if n == 0 {
        return Err(Error::domain("frequency tables start at n = 1"));
    }
    p.validate()?;
    let bg2 = (p.b * p.g).powi(2);
    let q2 = p.q_abs * p.q_abs;
    let rows = frobenius::truncation_roots(n as i64, gamma)?
        .into_iter()
        .enumerate()
        .map(|(k, delta_root)| -> Result<FrequencyRow> {
            let omega = omega_from_delta(delta_root, p)?;
            let energy = omega * (n as f64 + gamma + 1.0) / 2.0
                - p.m * bg2 * omega * omega / (8.0 * q2)
                + p.k * p.k / (2.0 * p.m);
            Ok(FrequencyRow {
                i: k + 1,
                delta_root,
                omega,
                energy,
                excluded: delta_root == 0.0,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FrequencyTable {
        n,
        gamma,
        physical: *p,
        rows,
        note: FREQUENCY_TABLE_NOTE,
    })
}

/// Closed form for the first radial mode, `omega_1 = 4 q^2 / (m (b g)^2 (2 gamma + 3))`.
pub fn omega_first_radial_mode(gamma: f64, p: &PhysicalParameters) -> f64 {
    4.0 * p.q_abs * p.q_abs / (p.m * (p.b * p.g).powi(2) * (2.0 * gamma + 3.0))
}

/// The same energy written through `W^(n,i)` and the physical map `E = W omega/4 + k^2/(2m)`.
pub fn frequency_row_energy_via_w(
    n: usize,
    gamma: f64,
    row: &FrequencyRow,
    p: &PhysicalParameters,
) -> f64 {
    energy_from_w(
        frobenius::exact_w(n, gamma, row.delta_root),
        row.omega,
        p.k,
        p.m,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EnergyCount {
    /// Distinct `delta^2` among the nonzero truncation roots.
    pub distinct: usize,
    /// `(n - 1)/2` for odd `n`, `n/2` for even `n`, as claimed in the literature.
    pub closed_form_claim: usize,
}

pub fn distinct_energy_count(n: usize, gamma: f64) -> Result<EnergyCount> {
    if n == 0 {
        return Err(Error::domain("distinct energy count starts at n = 1"));
    }
    let mut squares: Vec<f64> = frobenius::truncation_roots(n as i64, gamma)?
        .into_iter()
        .filter(|d| *d != 0.0)
        .map(|d| d * d)
        .collect();
    squares.sort_by(f64::total_cmp);
    let mut distinct = 0;
    let mut last: Option<f64> = None;
    for s in squares {
        if last.is_none_or(|l| (s - l).abs() > 1e-9 * s.max(1.0)) {
            distinct += 1;
            last = Some(s);
        }
    }
    let closed_form_claim = if n % 2 == 1 { (n - 1) / 2 } else { n / 2 };
    Ok(EnergyCount {
        distinct,
        closed_form_claim,
    })
}
