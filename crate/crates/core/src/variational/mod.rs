//! Rayleigh-Ritz spectrum of the radial problem over the basis
//! `phi_j(x) = x^(gamma + j) exp(-x^2/2)`.
//!
//! `moments` holds the analytic monomial route; `orthopoly` spans the same
//! space with an orthonormal polynomial basis, which is what [`spectrum`]
//! uses so that the basis can grow well past the point where the monomial
//! Gram matrix stops being representable in double precision.

mod eigen;
mod moments;
mod orthopoly;

pub use eigen::{
    cholesky, solve_generalized, GeneralizedEigen, GeneralizedEigenProblem, MIN_PIVOT_RATIO,
};
pub use moments::{
    expectation_x, gaussian_moment, hamiltonian_matrix, hamiltonian_matrix_direct, overlap_matrix,
    position_matrix, BasisSpec,
};
pub use orthopoly::OrthonormalBasis;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::DimensionlessModel;

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_LEVELS: usize = 5;
pub const DEFAULT_MAX_BASIS: usize = 80;
pub const BASIS_STEP: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Level {
    pub j: usize,
    pub w: f64,
    pub converged: bool,
    /// `|W_j(N) - W_j(N - BASIS_STEP)|` at the reported `N`.
    pub est_error: f64,
    /// `<x>` in this state, i.e. `dW_j / d delta`.
    pub mean_x: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumResult {
    pub model: DimensionlessModel,
    pub levels: Vec<Level>,
    pub basis_size_used: usize,
}

impl SpectrumResult {
    pub fn values(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.w).collect()
    }

    pub fn converged(&self) -> bool {
        self.levels.iter().all(|l| l.converged)
    }
}

/// Ritz machinery for one `gamma`. The basis does not depend on `delta`,
/// so one solver serves a whole sweep.
#[derive(Debug, Clone)]
pub struct RitzSolver {
    basis: OrthonormalBasis,
}

impl RitzSolver {
    pub fn new(gamma: f64, max_size: usize) -> Result<Self> {
        Ok(Self {
            basis: OrthonormalBasis::new(gamma, max_size)?,
        })
    }

    pub fn gamma(&self) -> f64 {
        self.basis.gamma
    }

    pub fn max_size(&self) -> usize {
        self.basis.size
    }

    pub fn basis(&self) -> &OrthonormalBasis {
        &self.basis
    }

    pub fn problem(&self, delta: f64, size: usize) -> GeneralizedEigenProblem {
        GeneralizedEigenProblem {
            h: self.basis.hamiltonian(delta, size),
            s: self.basis.overlap_block(size),
        }
    }

    /// Lowest `count` Ritz pairs with the first `size` basis functions.
    pub fn solve(&self, delta: f64, size: usize, count: usize) -> Result<GeneralizedEigen> {
        if size == 0 || size > self.max_size() {
            return Err(Error::domain(format!(
                "basis size must be in 1..={}, got {size}",
                self.max_size()
            )));
        }
        solve_generalized(&self.problem(delta, size), count)
    }

    /// `<x>` for Ritz vector `j` of a solve at basis size `size`.
    pub fn mean_x(&self, eig: &GeneralizedEigen, j: usize) -> f64 {
        let v = eig.vector(j);
        let x = self.basis.position_block(v.len());
        v.dot(&(x * &v))
    }

    fn schedule(&self, n_levels: usize) -> Vec<usize> {
        let mut sizes: Vec<usize> = (1..)
            .map(|k| k * BASIS_STEP)
            .take_while(|&n| n <= self.max_size())
            .filter(|&n| n > n_levels)
            .collect();
        if sizes.last() != Some(&self.max_size()) && self.max_size() > n_levels {
            sizes.push(self.max_size());
        }
        sizes
    }

    /// Grows the basis until the lowest `n_levels` values move by less than `tol`.
    pub fn spectrum(&self, delta: f64, n_levels: usize, tol: f64) -> Result<SpectrumResult> {
        let model = DimensionlessModel::new(self.gamma(), delta)?;
        if n_levels == 0 {
            return Err(Error::domain("n_levels must be >= 1"));
        }
        if !(tol > 0.0) {
            return Err(Error::domain(format!("tolerance must be > 0, got {tol}")));
        }
        let sizes = self.schedule(n_levels);
        if sizes.is_empty() {
            return Err(Error::domain(format!(
                "{n_levels} levels need a basis larger than {}",
                self.max_size()
            )));
        }

        let mut previous: Option<Vec<f64>> = None;
        let mut current: Option<(usize, GeneralizedEigen)> = None;
        for size in sizes {
            let eig = match self.solve(delta, size, n_levels) {
                Ok(eig) => eig,
                Err(err @ Error::Conditioning { .. }) => match current {
                    Some(_) => {
                        log::warn!("stopping basis growth at {size}: {err}");
                        break;
                    }
                    None => return Err(err),
                },
                Err(err) => return Err(err),
            };
            if let Some((_, last)) = current.take() {
                previous = Some(last.values);
            }
            let done = previous.as_ref().is_some_and(|prev| {
                prev.iter()
                    .zip(&eig.values)
                    .all(|(a, b)| (a - b).abs() < tol)
            });
            current = Some((size, eig));
            if done {
                break;
            }
        }

        let (size, eig) = current.expect("at least one basis size was solved");
        let levels = eig
            .values
            .iter()
            .enumerate()
            .map(|(j, &w)| {
                let est_error = previous
                    .as_ref()
                    .map_or(f64::INFINITY, |p| (p[j] - w).abs());
                Level {
                    j,
                    w,
                    converged: est_error < tol,
                    est_error,
                    mean_x: self.mean_x(&eig, j),
                }
            })
            .collect();
        Ok(SpectrumResult {
            model,
            levels,
            basis_size_used: size,
        })
    }
}

/// Variational spectrum with the default basis range.
pub fn spectrum(model: &DimensionlessModel, n_levels: usize, tol: f64) -> Result<SpectrumResult> {
    RitzSolver::new(model.gamma(), DEFAULT_MAX_BASIS)?.spectrum(model.delta(), n_levels, tol)
}
