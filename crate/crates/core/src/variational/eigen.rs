use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

/// Smallest accepted ratio of Cholesky pivots of the overlap matrix.
pub const MIN_PIVOT_RATIO: f64 = 1e-13;

/// `H v = W S v` with `H` symmetric and `S` symmetric positive definite.
#[derive(Debug, Clone)]
pub struct GeneralizedEigenProblem {
    pub h: DMatrix<f64>,
    pub s: DMatrix<f64>,
}

#[derive(Debug, Clone)]
pub struct GeneralizedEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Columns in original basis coordinates, normalized so that `v^T S v = 1`.
    pub vectors: DMatrix<f64>,
}

impl GeneralizedEigen {
    pub fn vector(&self, j: usize) -> DVector<f64> {
        self.vectors.column(j).into_owned()
    }
}

/// Lower Cholesky factor; fails on a non-positive pivot or when the
/// smallest pivot `L_kk^2` drops below `MIN_PIVOT_RATIO` times the largest.
pub fn cholesky(s: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = s.nrows();
    let mut l = DMatrix::<f64>::zeros(n, n);
    let mut pivots = Vec::with_capacity(n);
    for j in 0..n {
        let mut d = s[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        pivots.push(d);
        let largest = pivots.iter().cloned().fold(f64::MIN, f64::max);
        if !(d > 0.0) || d < MIN_PIVOT_RATIO * largest {
            return Err(Error::Conditioning {
                size: n,
                pivot_ratio: d / largest,
            });
        }
        let ljj = d.sqrt();
        l[(j, j)] = ljj;
        for i in j + 1..n {
            let mut v = s[(i, j)];
            for k in 0..j {
                v -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = v / ljj;
        }
    }
    Ok(l)
}

/// Smallest `count` eigenpairs via the reduction `S = L L^T`,
/// `(L^-1 H L^-T) y = W y`, `v = L^-T y`.
pub fn solve_generalized(prob: &GeneralizedEigenProblem, count: usize) -> Result<GeneralizedEigen> {
    let n = prob.h.nrows();
    if prob.h.shape() != (n, n) || prob.s.shape() != (n, n) {
        return Err(Error::domain("H and S must be square and of equal size"));
    }
    if count == 0 || count > n {
        return Err(Error::domain(format!(
            "requested {count} eigenpairs from a {n}x{n} problem"
        )));
    }
    let l = cholesky(&prob.s)?;
    let singular = || Error::numeric("triangular solve with the Cholesky factor failed");
    let half = l.solve_lower_triangular(&prob.h).ok_or_else(singular)?;
    let reduced = l
        .solve_lower_triangular(&half.transpose())
        .ok_or_else(singular)?;
    let reduced = (&reduced + reduced.transpose()) * 0.5;

    let eig = SymmetricEigen::try_new(reduced, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::numeric("symmetric eigensolver did not converge"))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    order.truncate(count);

    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut y = DMatrix::<f64>::zeros(n, count);
    for (c, &k) in order.iter().enumerate() {
        y.set_column(c, &eig.eigenvectors.column(k));
    }
    let vectors = l
        .transpose()
        .solve_upper_triangular(&y)
        .ok_or_else(singular)?;
    Ok(GeneralizedEigen { values, vectors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::variational::moments::{hamiltonian_matrix, overlap_matrix, BasisSpec};
    use approx::assert_relative_eq;

    #[test]
    fn identical_matrices_give_unit_eigenvalues() {
        let spec = BasisSpec::new(0.0, 5).unwrap();
        let s = overlap_matrix(&spec);
        let r = solve_generalized(&GeneralizedEigenProblem { h: s.clone(), s }, 5).unwrap();
        for v in r.values {
            assert_relative_eq!(v, 1.0, max_relative = 1e-10);
        }
    }

    #[test]
    fn oscillator_ladder_from_monomials() {
        for gamma in [0.0, 1.0] {
            let spec = BasisSpec::new(gamma, 10).unwrap();
            let prob = GeneralizedEigenProblem {
                h: hamiltonian_matrix(&spec, 0.0),
                s: overlap_matrix(&spec),
            };
            let r = solve_generalized(&prob, 4).unwrap();
            for (j, w) in r.values.iter().enumerate() {
                assert_relative_eq!(
                    *w,
                    2.0 * (2.0 * j as f64 + gamma + 1.0),
                    max_relative = 1e-10
                );
            }
            for j in 0..4 {
                let v = r.vector(j);
                assert_relative_eq!(v.dot(&(&prob.s * &v)), 1.0, max_relative = 1e-9);
            }
        }
    }

    #[test]
    fn rejects_indefinite_and_badly_conditioned_overlaps() {
        let s = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        let prob = GeneralizedEigenProblem {
            h: DMatrix::identity(2, 2),
            s,
        };
        assert!(matches!(
            solve_generalized(&prob, 1),
            Err(Error::Conditioning { .. })
        ));
        let s = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0 + 1e-15]);
        assert!(matches!(cholesky(&s), Err(Error::Conditioning { .. })));
        // raw monomials break down well before N = 30
        let spec = BasisSpec::new(0.0, 30).unwrap();
        assert!(matches!(
            cholesky(&overlap_matrix(&spec)),
            Err(Error::Conditioning { .. })
        ));
    }

    #[test]
    fn count_is_validated() {
        let prob = GeneralizedEigenProblem {
            h: DMatrix::identity(3, 3),
            s: DMatrix::identity(3, 3),
        };
        assert!(solve_generalized(&prob, 0).is_err());
        assert!(solve_generalized(&prob, 4).is_err());
    }
}
