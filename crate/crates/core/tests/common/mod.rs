//! Checks shared by the property tests and the acceptance report. Each
//! returns `Err` with the first violation found.

#![allow(dead_code)]

use qes_core::analysis::{sweep, SweepParams, SweepTable};
use qes_core::frobenius::{self, count_nodes};
use qes_core::poly::companion_roots;
use qes_core::variational::RitzSolver;

pub const PROPERTY_GAMMAS: [f64; 5] = [0.0, 0.5, 1.0, 2.0, 5.0];
pub const NODE_GAMMAS: [f64; 3] = [0.0, 1.0, 2.0];
pub const REALNESS_TOL: f64 = 1e-9;
pub const SYMMETRY_TOL: f64 = 1e-10;

/// Companion eigenvalues are real to `1e-9` (relative to the root scale)
/// and the root set is symmetric under `delta -> -delta`.
pub fn roots_real_and_symmetric(n: usize, gamma: f64) -> Result<(), String> {
    let poly = frobenius::truncation_polynomial(n as i64, gamma).map_err(|e| e.to_string())?;
    let raw = companion_roots(&poly.coefficients());
    let scale = raw.iter().map(|z| z.norm()).fold(1.0, f64::max);
    if let Some(z) = raw.iter().find(|z| z.im.abs() > REALNESS_TOL * scale) {
        return Err(format!(
            "n={n} gamma={gamma}: companion root {z} is not real"
        ));
    }
    let roots = frobenius::truncation_roots(n as i64, gamma).map_err(|e| e.to_string())?;
    if roots.len() != n + 1 {
        return Err(format!(
            "n={n} gamma={gamma}: {} roots, expected {}",
            roots.len(),
            n + 1
        ));
    }
    for (a, b) in roots.iter().zip(roots.iter().rev()) {
        if (a + b).abs() > SYMMETRY_TOL * scale {
            return Err(format!(
                "n={n} gamma={gamma}: roots {a} and {b} are not mirror images"
            ));
        }
    }
    Ok(())
}

/// The `i`-th solution (roots in descending order) has exactly `i - 1` positive zeros.
pub fn node_law(n: usize, gamma: f64) -> Result<(), String> {
    for sol in frobenius::all_solutions(n as i64, gamma).map_err(|e| e.to_string())? {
        let nodes = count_nodes(&sol);
        if nodes != sol.i - 1 {
            return Err(format!("n={n} i={} gamma={gamma}: {nodes} nodes", sol.i));
        }
    }
    Ok(())
}

pub fn delta_monotone(table: &SweepTable) -> Result<(), String> {
    match table.monotonicity_violations().first() {
        None => Ok(()),
        Some(&(j, k)) => Err(format!(
            "gamma={}: W_{j} does not increase between delta={} and {}",
            table.gamma,
            table.delta_grid[k - 1],
            table.delta_grid[k]
        )),
    }
}

/// Ritz values never increase as the basis grows, up to the eigensolver's
/// backward error `10 eps ||H||_F`.
pub fn basis_monotone(gamma: f64, delta: f64, levels: usize) -> Result<(), String> {
    let solver = RitzSolver::new(gamma, 80).map_err(|e| e.to_string())?;
    let mut previous: Option<Vec<f64>> = None;
    for size in (10..=80).step_by(10) {
        let eig = solver
            .solve(delta, size, levels)
            .map_err(|e| e.to_string())?;
        let slack = 10.0 * f64::EPSILON * solver.problem(delta, size).h.norm();
        if let Some(prev) = &previous {
            for (j, (old, new)) in prev.iter().zip(eig.values.iter()).enumerate() {
                if *new > old + slack {
                    return Err(format!(
                        "gamma={gamma} delta={delta}: W_{j} rose from {old} to {new} at N={size}"
                    ));
                }
            }
        }
        previous = Some(eig.values);
    }
    Ok(())
}

pub fn figure_sweep(gamma: f64) -> SweepTable {
    sweep(&SweepParams {
        gamma,
        ..Default::default()
    })
    .expect("sweep runs")
}
