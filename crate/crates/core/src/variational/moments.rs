//! Analytic matrix elements over the monomial basis
//! `phi_j(x) = x^(gamma + j) exp(-x^2/2)` with the radial weight `x`.
//!
//! Every integral reduces to `G(m) = int_0^inf x^m exp(-x^2) dx = Gamma((m+1)/2) / 2`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisSpec {
    pub gamma: f64,
    pub size: usize,
}

impl BasisSpec {
    pub fn new(gamma: f64, size: usize) -> Result<Self> {
        if !(gamma.is_finite() && gamma >= 0.0) {
            return Err(Error::domain(format!(
                "gamma must be finite and >= 0, got {gamma}"
            )));
        }
        if size == 0 {
            return Err(Error::domain("basis size must be >= 1"));
        }
        Ok(Self { gamma, size })
    }
}

/// `G(m) = Gamma((m + 1)/2) / 2`, defined for `m > -1`.
pub fn gaussian_moment(m: f64) -> Result<f64> {
    if !(m > -1.0) {
        return Err(Error::domain(format!(
            "gaussian moment diverges for m = {m} <= -1"
        )));
    }
    Ok(0.5 * libm::tgamma(0.5 * (m + 1.0)))
}

// Callers only pass exponents that are > -1 by construction.
fn g(m: f64) -> f64 {
    0.5 * libm::tgamma(0.5 * (m + 1.0))
}

/// `S_ij = int phi_i phi_j x dx = G(2 gamma + i + j + 1)`.
pub fn overlap_matrix(basis: &BasisSpec) -> DMatrix<f64> {
    let s0 = 2.0 * basis.gamma;
    DMatrix::from_fn(basis.size, basis.size, |i, j| g(s0 + (i + j) as f64 + 1.0))
}

/// `int phi_i phi_j x^2 dx = G(2 gamma + i + j + 2)`; the Hellmann-Feynman
/// derivative matrix `dH/d delta`.
pub fn position_matrix(basis: &BasisSpec) -> DMatrix<f64> {
    let s0 = 2.0 * basis.gamma;
    DMatrix::from_fn(basis.size, basis.size, |i, j| g(s0 + (i + j) as f64 + 2.0))
}

/// Symmetrized form
/// `H_ij = int [phi_i' phi_j' x + gamma^2 phi_i phi_j / x + (delta x + x^2) phi_i phi_j x] dx`.
pub fn hamiltonian_matrix(basis: &BasisSpec, delta: f64) -> DMatrix<f64> {
    let gamma = basis.gamma;
    DMatrix::from_fn(basis.size, basis.size, |i, j| {
        let a = gamma + i as f64;
        let b = gamma + j as f64;
        let s = a + b;
        // phi_i' phi_j' x = [ab x^(s-1) - s x^(s+1) + x^(s+3)] e^(-x^2)
        let singular = a * b + gamma * gamma;
        let low = if singular == 0.0 {
            0.0
        } else {
            singular * g(s - 1.0)
        };
        low - s * g(s + 1.0) + 2.0 * g(s + 3.0) + delta * g(s + 2.0)
    })
}

/// `H_ij = int phi_i (H phi_j) x dx` with the operator applied directly:
/// `H phi_j = [(gamma^2 - a^2) x^(a-2) + (2a + 2) x^a + delta x^(a+1)] e^(-x^2/2)`, `a = gamma + j`.
pub fn hamiltonian_matrix_direct(basis: &BasisSpec, delta: f64) -> DMatrix<f64> {
    let gamma = basis.gamma;
    DMatrix::from_fn(basis.size, basis.size, |i, j| {
        let a = gamma + j as f64;
        let s = 2.0 * gamma + (i + j) as f64;
        let c = gamma * gamma - a * a;
        let low = if c == 0.0 { 0.0 } else { c * g(s - 1.0) };
        low + (2.0 * a + 2.0) * g(s + 1.0) + delta * g(s + 2.0)
    })
}

/// `<x> = sum_ij v_i v_j G(2 gamma + i + j + 2)` for an `S`-normalized coefficient vector.
pub fn expectation_x(eigvec: &DVector<f64>, basis: &BasisSpec) -> Result<f64> {
    if eigvec.len() != basis.size {
        return Err(Error::domain(format!(
            "eigenvector length {} does not match basis size {}",
            eigvec.len(),
            basis.size
        )));
    }
    Ok(eigvec.dot(&(position_matrix(basis) * eigvec)))
}
