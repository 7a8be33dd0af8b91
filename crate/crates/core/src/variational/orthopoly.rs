//! Orthonormal basis for the span of `{x^(gamma+j) exp(-x^2/2) : j < N}`.
//!
//! Writing a trial function as `x^gamma exp(-x^2/2) p(x)` turns the radial
//! inner product into `int w(x) p q dx` with `w(x) = x^(2 gamma + 1) exp(-x^2)`
//! on `(0, inf)`. In that picture the operator becomes
//!
//! ```text
//! <p, H q> = int w p' q' dx + (2 gamma + 2) int w p q dx + delta int w x p q dx,
//! ```
//!
//! so the Ritz matrices only need polynomial integrals against `w`. The raw
//! monomials are hopeless beyond `N ~ 16` (their Gram matrix is a Hankel
//! moment matrix), so the basis here is the sequence of polynomials
//! orthonormal under `w`. Their recurrence coefficients come from a Lanczos
//! run with full reorthogonalization on a fine discretization of `w`, which
//! is exact to rounding for every polynomial degree used.

use gauss_quad::legendre::GaussLegendre;
use nalgebra::DMatrix;

use crate::error::{Error, Result};

const POINTS_PER_PANEL: usize = 20;
const PANEL_WIDTH: f64 = 0.25;
/// Geometric grading toward the origin, where `w` is not smooth for non-integer `gamma`.
const GRADED_LEVELS: i32 = 30;
const GRADING_RATIO: f64 = 0.2;

/// Discrete measure `sum_m weights[m] delta(x - nodes[m])` reproducing `w`.
#[derive(Debug, Clone)]
struct DiscreteMeasure {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl DiscreteMeasure {
    fn new(gamma: f64, max_degree: usize) -> Result<Self> {
        let rule = GaussLegendre::new(POINTS_PER_PANEL)
            .map_err(|e| Error::numeric(format!("Gauss-Legendre rule: {e}")))?;
        // x^(2d + 2 gamma + 1) exp(-x^2) is negligible past its peak by several widths
        let x_max = (max_degree as f64 + gamma + 1.0).sqrt() + 9.0;
        let panels = (x_max / PANEL_WIDTH).ceil() as usize;

        let mut edges: Vec<f64> = (1..=GRADED_LEVELS)
            .rev()
            .map(|k| PANEL_WIDTH * GRADING_RATIO.powi(k))
            .collect();
        edges.insert(0, 0.0);
        edges.extend((1..=panels).map(|k| PANEL_WIDTH * k as f64));

        let mut nodes = Vec::with_capacity(edges.len() * POINTS_PER_PANEL);
        let mut weights = Vec::with_capacity(edges.len() * POINTS_PER_PANEL);
        for pair in edges.windows(2) {
            let (lo, hi) = (pair[0], pair[1]);
            let half = 0.5 * (hi - lo);
            let mid = 0.5 * (hi + lo);
            for &(t, wt) in rule.as_node_weight_pairs() {
                let x = mid + half * t;
                nodes.push(x);
                weights.push(half * wt * x.powf(2.0 * gamma + 1.0) * (-x * x).exp());
            }
        }
        Ok(Self { nodes, weights })
    }
}

/// Ritz matrices over the first `size` orthonormal polynomials.
#[derive(Debug, Clone)]
pub struct OrthonormalBasis {
    pub gamma: f64,
    pub size: usize,
    /// Recurrence `b_{k+1} p_{k+1} = (x - alpha_k) p_k - b_k p_{k-1}`.
    pub alpha: Vec<f64>,
    /// `b_0 = sqrt(int w)`, then the off-diagonal Jacobi entries.
    pub beta: Vec<f64>,
    /// `int w p_i' p_j'`.
    pub kinetic: DMatrix<f64>,
    /// `int w p_i p_j`; the identity up to rounding.
    pub overlap: DMatrix<f64>,
    /// `int w x p_i p_j`; tridiagonal up to rounding.
    pub position: DMatrix<f64>,
}

impl OrthonormalBasis {
    pub fn new(gamma: f64, size: usize) -> Result<Self> {
        if !(gamma.is_finite() && gamma >= 0.0) {
            return Err(Error::domain(format!(
                "gamma must be finite and >= 0, got {gamma}"
            )));
        }
        if size == 0 {
            return Err(Error::domain("basis size must be >= 1"));
        }
        let measure = DiscreteMeasure::new(gamma, 2 * size + 2)?;
        let (alpha, beta) = lanczos(&measure, size)?;

        let m = measure.nodes.len();
        let mut p = DMatrix::<f64>::zeros(size, m);
        let mut dp = DMatrix::<f64>::zeros(size, m);
        for (col, &x) in measure.nodes.iter().enumerate() {
            let (mut p_prev, mut p_cur) = (0.0, 1.0 / beta[0]);
            let (mut d_prev, mut d_cur) = (0.0, 0.0);
            p[(0, col)] = p_cur;
            for k in 0..size - 1 {
                let b_k = if k == 0 { 0.0 } else { beta[k] };
                let p_next = ((x - alpha[k]) * p_cur - b_k * p_prev) / beta[k + 1];
                let d_next = ((x - alpha[k]) * d_cur + p_cur - b_k * d_prev) / beta[k + 1];
                p[(k + 1, col)] = p_next;
                dp[(k + 1, col)] = d_next;
                (p_prev, p_cur) = (p_cur, p_next);
                (d_prev, d_cur) = (d_cur, d_next);
            }
        }

        let weighted = |rows: &DMatrix<f64>, f: &dyn Fn(f64) -> f64| {
            let mut scaled = rows.clone();
            for (col, (&x, &w)) in measure.nodes.iter().zip(&measure.weights).enumerate() {
                let s = w * f(x);
                scaled.column_mut(col).scale_mut(s);
            }
            scaled
        };
        let overlap = weighted(&p, &|_| 1.0) * p.transpose();
        let position = weighted(&p, &|x| x) * p.transpose();
        let kinetic = weighted(&dp, &|_| 1.0) * dp.transpose();

        Ok(Self {
            gamma,
            size,
            alpha,
            beta,
            kinetic: symmetrize(kinetic),
            overlap: symmetrize(overlap),
            position: symmetrize(position),
        })
    }

    /// `H = K + (2 gamma + 2) S + delta X` on the leading `size x size` block.
    pub fn hamiltonian(&self, delta: f64, size: usize) -> DMatrix<f64> {
        let n = size.min(self.size);
        let k = self.kinetic.view((0, 0), (n, n));
        let s = self.overlap.view((0, 0), (n, n));
        let x = self.position.view((0, 0), (n, n));
        k + s * (2.0 * self.gamma + 2.0) + x * delta
    }

    pub fn overlap_block(&self, size: usize) -> DMatrix<f64> {
        let n = size.min(self.size);
        self.overlap.view((0, 0), (n, n)).into_owned()
    }

    pub fn position_block(&self, size: usize) -> DMatrix<f64> {
        let n = size.min(self.size);
        self.position.view((0, 0), (n, n)).into_owned()
    }

    /// Expansion of `p_k` in monomials, `coeffs[(k, j)]` multiplying `x^j`.
    /// Only meaningful for small `size`; the monomial expansion is itself ill-conditioned.
    pub fn monomial_coefficients(&self, size: usize) -> DMatrix<f64> {
        let n = size.min(self.size);
        let mut c = DMatrix::<f64>::zeros(n, n);
        c[(0, 0)] = 1.0 / self.beta[0];
        for k in 0..n.saturating_sub(1) {
            for j in 0..=k {
                let v = c[(k, j)];
                c[(k + 1, j + 1)] += v / self.beta[k + 1];
                c[(k + 1, j)] -= self.alpha[k] * v / self.beta[k + 1];
                if k > 0 {
                    c[(k + 1, j)] -= self.beta[k] * c[(k - 1, j)] / self.beta[k + 1];
                }
            }
        }
        c
    }
}

fn symmetrize(m: DMatrix<f64>) -> DMatrix<f64> {
    (&m + m.transpose()) * 0.5
}

/// Lanczos on `diag(x)` with starting vector `sqrt(w)`; returns `(alpha, beta)`
/// with `beta[0] = sqrt(sum w)` and `beta[k]` the `k`-th off-diagonal entry.
fn lanczos(measure: &DiscreteMeasure, size: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let m = measure.nodes.len();
    if size > m / 4 {
        return Err(Error::domain(format!(
            "basis size {size} too large for the quadrature grid"
        )));
    }
    let x = &measure.nodes;
    let start: Vec<f64> = measure.weights.iter().map(|w| w.sqrt()).collect();
    let norm0 = start.iter().map(|v| v * v).sum::<f64>().sqrt();

    let mut q: Vec<Vec<f64>> = vec![start.iter().map(|v| v / norm0).collect()];
    let mut alpha = Vec::with_capacity(size);
    let mut beta = vec![norm0];
    for k in 0..size {
        let qk = &q[k];
        let mut v: Vec<f64> = qk.iter().zip(x).map(|(a, b)| a * b).collect();
        alpha.push(v.iter().zip(qk).map(|(a, b)| a * b).sum());
        if k + 1 == size {
            break;
        }
        for _ in 0..2 {
            for prev in &q {
                let c: f64 = v.iter().zip(prev).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(prev).for_each(|(a, b)| *a -= c * b);
            }
        }
        let b = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if !(b > 0.0) {
            return Err(Error::numeric(format!("Lanczos breakdown at step {k}")));
        }
        beta.push(b);
        q.push(v.into_iter().map(|a| a / b).collect());
    }
    Ok((alpha, beta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::variational::moments::{
        gaussian_moment, hamiltonian_matrix, overlap_matrix, BasisSpec,
    };
    use approx::assert_relative_eq;

    #[test]
    fn gram_matrix_is_identity() {
        for gamma in [0.0, 0.5, 1.0, 5.0] {
            let basis = OrthonormalBasis::new(gamma, 80).unwrap();
            let dev = (&basis.overlap - DMatrix::<f64>::identity(80, 80))
                .abs()
                .max();
            assert!(dev < 1e-12, "gamma={gamma}: |S - I| = {dev:.2e}");
        }
    }

    #[test]
    fn first_recurrence_coefficients_from_moments() {
        for gamma in [0.0, 0.5, 1.0, 2.0] {
            let basis = OrthonormalBasis::new(gamma, 4).unwrap();
            let m0 = gaussian_moment(2.0 * gamma + 1.0).unwrap();
            let m1 = gaussian_moment(2.0 * gamma + 2.0).unwrap();
            let m2 = gaussian_moment(2.0 * gamma + 3.0).unwrap();
            assert_relative_eq!(basis.beta[0] * basis.beta[0], m0, max_relative = 1e-13);
            assert_relative_eq!(basis.alpha[0], m1 / m0, max_relative = 1e-13);
            let var = m2 / m0 - (m1 / m0).powi(2);
            assert_relative_eq!(basis.beta[1] * basis.beta[1], var, max_relative = 1e-12);
        }
    }

    #[test]
    fn ritz_matrices_agree_with_monomial_route() {
        // same span, so C H_mono C^T must equal the orthonormal-basis Hamiltonian
        for gamma in [0.0, 1.0, 2.5] {
            let n = 5;
            let basis = OrthonormalBasis::new(gamma, n).unwrap();
            let c = basis.monomial_coefficients(n);
            let spec = BasisSpec::new(gamma, n).unwrap();
            let s = &c * overlap_matrix(&spec) * c.transpose();
            let h = &c * hamiltonian_matrix(&spec, 0.8) * c.transpose();
            let h_orth = basis.hamiltonian(0.8, n);
            // the monomial Gram matrix amplifies rounding, hence the loose bound
            assert!((s - DMatrix::<f64>::identity(n, n)).abs().max() < 1e-9);
            let scale = h_orth.abs().max();
            assert!((h - h_orth).abs().max() < 1e-9 * scale);
        }
    }

    #[test]
    fn position_matrix_is_the_jacobi_matrix() {
        let basis = OrthonormalBasis::new(1.0, 30).unwrap();
        for i in 0..30 {
            for j in 0..30 {
                let want = if i == j {
                    basis.alpha[i]
                } else if i + 1 == j {
                    basis.beta[j]
                } else if j + 1 == i {
                    basis.beta[i]
                } else {
                    0.0
                };
                assert!((basis.position[(i, j)] - want).abs() < 1e-11);
            }
        }
    }
}
