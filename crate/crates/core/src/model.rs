//! The dimensionless radial eigenproblem
//!
//! ```text
//! u'' + u'/x - (nu^2/x^2) u - delta x u - x^2 u + W u = 0,   x > 0,
//! ```
//!
//! and the maps between the physical parameters of an electron in a
//! uniformly charged background and the dimensionless pair `(gamma, delta)`
//! with `gamma = |nu|`. Bound states are square integrable with the radial
//! weight `x`.

use serde::Serialize;

use crate::error::{Error, Result};

/// The pair `(gamma, delta)` that fixes the eigenproblem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DimensionlessModel {
    gamma: f64,
    delta: f64,
}

impl DimensionlessModel {
    pub fn new(gamma: f64, delta: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma >= 0.0) {
            return Err(Error::domain(format!(
                "gamma must be finite and >= 0, got {gamma}"
            )));
        }
        if !delta.is_finite() {
            return Err(Error::domain(format!("delta must be finite, got {delta}")));
        }
        Ok(Self { gamma, delta })
    }

    /// Model built from integer quantum numbers; `gamma = |l + (1 - s)/2|`.
    pub fn from_quantum_numbers(l: i64, s: i64, delta: f64) -> Result<Self> {
        let nu = nu_from_quantum_numbers(l, s)?;
        Self::new(nu.unsigned_abs() as f64, delta)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn with_delta(&self, delta: f64) -> Result<Self> {
        Self::new(self.gamma, delta)
    }

    /// `V(delta, x) = delta x + x^2`.
    pub fn potential(&self, x: f64) -> f64 {
        potential_value(self.delta, x)
    }
}

/// Physical inputs, in units with `hbar = c = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalParameters {
    pub m: f64,
    pub q_abs: f64,
    pub g: f64,
    pub b: f64,
    pub rho: f64,
    pub k: f64,
    pub l: i64,
    pub s: i64,
}

impl PhysicalParameters {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("m", self.m),
            ("q", self.q_abs),
            ("b", self.b),
            ("rho", self.rho),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::domain(format!(
                    "{name} must be finite and > 0, got {v}"
                )));
            }
        }
        if !self.g.is_finite() || !self.k.is_finite() {
            return Err(Error::domain("g and k must be finite"));
        }
        check_sign(self.s)
    }

    pub fn nu(&self) -> Result<i64> {
        nu_from_quantum_numbers(self.l, self.s)
    }

    pub fn gamma(&self) -> Result<f64> {
        Ok(self.nu()?.unsigned_abs() as f64)
    }
}

fn check_sign(s: i64) -> Result<()> {
    if s == 1 || s == -1 {
        Ok(())
    } else {
        Err(Error::domain(format!("s must be +1 or -1, got {s}")))
    }
}

/// `nu = l + (1 - s)/2`.
pub fn nu_from_quantum_numbers(l: i64, s: i64) -> Result<i64> {
    check_sign(s)?;
    Ok(l + (1 - s) / 2)
}

/// `omega = sqrt(2 |q| rho / m)`.
pub fn omega_from_charge(p: &PhysicalParameters) -> f64 {
    (2.0 * p.q_abs * p.rho / p.m).sqrt()
}

/// `delta = g b sqrt(2 m omega) / |q|`.
pub fn delta_from_physical(p: &PhysicalParameters, omega: f64) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(Error::domain(format!("omega must be > 0, got {omega}")));
    }
    Ok(p.g * p.b * (2.0 * p.m * omega).sqrt() / p.q_abs)
}

/// Frequency at which the model takes the linear coupling `delta`:
/// `omega = delta^2 q^2 / (2 m (b g)^2)`. Undefined for `g = 0`.
pub fn omega_from_delta(delta: f64, p: &PhysicalParameters) -> Result<f64> {
    let bg = p.b * p.g;
    if bg == 0.0 {
        return Err(Error::domain("omega(delta) needs a nonzero coupling g"));
    }
    Ok(delta * delta * p.q_abs * p.q_abs / (2.0 * p.m * bg * bg))
}

/// `E = W omega / 4 + k^2 / (2m)`.
pub fn energy_from_w(w: f64, omega: f64, k: f64, m: f64) -> f64 {
    w * omega / 4.0 + k * k / (2.0 * m)
}

pub fn potential_value(delta: f64, x: f64) -> f64 {
    delta * x + x * x
}
