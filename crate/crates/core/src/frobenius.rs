//! Series solutions `u = x^gamma exp(-delta x/2 - x^2/2) sum_j a_j x^j`.
//!
//! The coefficients obey the three-term recurrence
//!
//! ```text
//! a_{j+2} = delta (2j + 2gamma + 3) / [2 (j+2)(j + 2gamma + 2)] a_{j+1}
//!         + (2j - theta) / [(j+2)(j + 2gamma + 2)] a_j,
//! theta   = W - 2(gamma + 1) + delta^2/4,        a_{-1} = 0, a_0 = 1.
//! ```
//!
//! The series terminates at degree `n` iff `theta = 2n` and `a_{n+1} = 0`.
//! With `theta = 2n` fixed, `a_{n+1}` is a polynomial of degree `n + 1` in
//! `delta` (the truncation polynomial); every root gives one exact eigenpair,
//! but only for the particular potential selected by that root.

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{self, SturmChain};

/// Roots closer than this are reported as suspect instead of being merged.
pub const DEGENERATE_ROOT_GAP: f64 = 1e-9;

/// Largest imaginary part accepted from the companion matrix for a real root.
pub const REALNESS_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientSequence {
    pub gamma: f64,
    pub delta: f64,
    pub w: f64,
    /// `a_0 ..= a_{j_max}`, with `a_0 = 1`.
    pub a: Vec<f64>,
}

/// `theta = W - 2(gamma + 1) + delta^2 / 4`.
pub fn theta_of(gamma: f64, delta: f64, w: f64) -> f64 {
    w - 2.0 * (gamma + 1.0) + 0.25 * delta * delta
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma.is_finite() && gamma >= 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "gamma must be finite and >= 0, got {gamma}"
        )))
    }
}

/// Runs the recurrence from `a_0 = 1` up to `a_{j_max}`.
pub fn coefficients(gamma: f64, delta: f64, w: f64, j_max: usize) -> Result<CoefficientSequence> {
    check_gamma(gamma)?;
    let theta = theta_of(gamma, delta, w);
    let mut a = Vec::with_capacity(j_max + 1);
    a.push(1.0);
    let (mut prev, mut cur) = (0.0, 1.0);
    // step j produces a_{j+2} from a_{j+1} (cur) and a_j (prev)
    for step in 0..j_max {
        let j = step as f64 - 1.0;
        let den = (j + 2.0) * (j + 2.0 * gamma + 2.0);
        let next = delta * (2.0 * j + 2.0 * gamma + 3.0) / (2.0 * den) * cur
            + (2.0 * j - theta) / den * prev;
        a.push(next);
        prev = cur;
        cur = next;
    }
    Ok(CoefficientSequence { gamma, delta, w, a })
}

/// `a_{n+1}` as an exact polynomial in `delta` after substituting `theta = 2n`.
#[derive(Debug, Clone)]
pub struct TruncationPolynomial {
    pub n: usize,
    pub gamma: f64,
    exact: Vec<BigRational>,
}

impl TruncationPolynomial {
    pub fn exact_coefficients(&self) -> &[BigRational] {
        &self.exact
    }

    /// Coefficients in ascending powers of `delta`, rounded to `f64`.
    pub fn coefficients(&self) -> Vec<f64> {
        self.exact.iter().map(poly::to_f64).collect()
    }

    pub fn degree(&self) -> usize {
        self.exact.len() - 1
    }

    pub fn eval(&self, delta: f64) -> f64 {
        poly::eval(&self.coefficients(), delta)
    }
}

pub fn truncation_polynomial(n: i64, gamma: f64) -> Result<TruncationPolynomial> {
    if n < 0 {
        return Err(Error::domain(format!(
            "polynomial degree n must be >= 0, got {n}"
        )));
    }
    check_gamma(gamma)?;
    let n_u = n as usize;
    let g = poly::exact(gamma);
    let two = poly::rational(2, 1);

    // a_j as polynomials in delta; a_{-1} = 0, a_0 = 1
    let mut prev: Vec<BigRational> = Vec::new();
    let mut cur: Vec<BigRational> = vec![poly::rational(1, 1)];
    for step in 0..=n_u {
        let j = poly::rational(step as i64 - 1, 1);
        let den = (&j + &two) * (&j + &two * &g + &two);
        let c_shift = (&two * &j + &two * &g + poly::rational(3, 1)) / (&two * &den);
        let c_keep = (&two * &j - poly::rational(2 * n, 1)) / &den;

        let mut next = vec![BigRational::zero(); cur.len() + 1];
        for (k, c) in cur.iter().enumerate() {
            next[k + 1] += &c_shift * c;
        }
        for (k, c) in prev.iter().enumerate() {
            next[k] += &c_keep * c;
        }
        prev = cur;
        cur = next;
    }
    let exact = poly::trim(cur);
    if exact.len() != n_u + 2 {
        return Err(Error::numeric(format!(
            "truncation polynomial for n={n} has degree {:?}, expected {}",
            exact.len().checked_sub(1),
            n_u + 1
        )));
    }
    Ok(TruncationPolynomial {
        n: n_u,
        gamma,
        exact,
    })
}

/// Refines a bracketed root of `p` by Newton steps safeguarded with bisection.
fn refine_root(coeffs: &[f64], mut lo: f64, mut hi: f64, guess: f64) -> Result<f64> {
    let f_lo = poly::eval(coeffs, lo);
    let f_hi = poly::eval(coeffs, hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::numeric(format!(
            "no sign change of the truncation polynomial on [{lo}, {hi}] around {guess}"
        )));
    }
    let lo_negative = f_lo < 0.0;
    let mut x = guess.clamp(lo, hi);
    for _ in 0..200 {
        let (f, df) = poly::eval_with_derivative(coeffs, x);
        if f == 0.0 {
            return Ok(x);
        }
        if (f < 0.0) == lo_negative {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - f / df;
        let next = if df != 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        let step = (next - x).abs();
        x = next;
        if step <= 1e-15 * x.abs().max(1e-280) || hi - lo <= 1e-15 * x.abs().max(1e-280) {
            return Ok(x);
        }
    }
    Err(Error::numeric(format!(
        "root refinement did not converge near {guess}"
    )))
}

/// All `n + 1` real roots of the truncation polynomial, strictly descending.
pub fn truncation_roots(n: i64, gamma: f64) -> Result<Vec<f64>> {
    let p = truncation_polynomial(n, gamma)?;
    roots_of(&p)
}

pub fn roots_of(p: &TruncationPolynomial) -> Result<Vec<f64>> {
    let coeffs = p.coefficients();
    let approx = poly::companion_roots(&coeffs);
    let scale = approx.iter().map(|z| z.norm()).fold(1.0, f64::max);
    if let Some(z) = approx.iter().find(|z| z.im.abs() > 1e-6 * scale) {
        return Err(Error::numeric(format!(
            "truncation polynomial n={} gamma={} has a non-real root {z}",
            p.n, p.gamma
        )));
    }
    let mut guesses: Vec<f64> = approx.iter().map(|z| z.re).collect();
    guesses.sort_by(|a, b| b.total_cmp(a));

    let d = guesses.len();
    let mut roots = Vec::with_capacity(d);
    for k in 0..d {
        let r = guesses[k];
        let hi = if k == 0 {
            r + 1.0 + r.abs()
        } else {
            0.5 * (guesses[k - 1] + r)
        };
        let lo = if k + 1 == d {
            r - 1.0 - r.abs()
        } else {
            0.5 * (r + guesses[k + 1])
        };
        let mut root = refine_root(&coeffs, lo, hi, r)?;
        // odd polynomials vanish exactly at the origin
        if p.exact[0].is_zero() && root.abs() < 1e-12 {
            root = 0.0;
        }
        roots.push(root);
    }
    for pair in roots.windows(2) {
        let gap = pair[0] - pair[1];
        if gap < DEGENERATE_ROOT_GAP {
            return Err(Error::numeric(format!(
                "suspect repeated root of truncation polynomial n={} gamma={}: {} and {} (gap {gap:.2e})",
                p.n, p.gamma, pair[0], pair[1]
            )));
        }
    }
    Ok(roots)
}

/// `W = 2(n + gamma + 1) - delta^2 / 4`.
pub fn exact_w(n: usize, gamma: f64, delta_root: f64) -> f64 {
    2.0 * (n as f64 + gamma + 1.0) - 0.25 * delta_root * delta_root
}

/// One polynomial eigenpair: root `i` (1-based, descending `delta`) of the
/// degree-`n` truncation condition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TruncationSolution {
    pub gamma: f64,
    pub n: usize,
    pub i: usize,
    pub delta_root: f64,
    pub w: f64,
    /// `a_0 ..= a_n`.
    pub coeffs: Vec<f64>,
}

impl TruncationSolution {
    /// The polynomial factor `f(x)`.
    pub fn polynomial(&self, x: f64) -> f64 {
        poly::eval(&self.coeffs, x)
    }

    /// The unnormalized radial function `u(x)`.
    pub fn eigenfunction(&self, x: f64) -> f64 {
        x.powf(self.gamma) * (-0.5 * self.delta_root * x - 0.5 * x * x).exp() * self.polynomial(x)
    }
}

pub fn polynomial_solution(n: i64, i: usize, gamma: f64) -> Result<TruncationSolution> {
    let roots = truncation_roots(n, gamma)?;
    solution_from_roots(n as usize, i, gamma, &roots)
}

/// All `n + 1` solutions for degree `n`, ordered by `i`.
pub fn all_solutions(n: i64, gamma: f64) -> Result<Vec<TruncationSolution>> {
    let roots = truncation_roots(n, gamma)?;
    (1..=roots.len())
        .map(|i| solution_from_roots(n as usize, i, gamma, &roots))
        .collect()
}

fn solution_from_roots(
    n: usize,
    i: usize,
    gamma: f64,
    roots: &[f64],
) -> Result<TruncationSolution> {
    if i == 0 || i > n + 1 {
        return Err(Error::domain(format!(
            "root index i must be in 1..={}, got {i}",
            n + 1
        )));
    }
    let delta_root = roots[i - 1];
    let w = exact_w(n, gamma, delta_root);
    let seq = coefficients(gamma, delta_root, w, n)?;
    Ok(TruncationSolution {
        gamma,
        n,
        i,
        delta_root,
        w,
        coeffs: seq.a,
    })
}

/// Zeros of `u` in `(0, inf)`, i.e. distinct positive roots of `f`.
pub fn count_nodes(sol: &TruncationSolution) -> usize {
    let exact: Vec<BigRational> = sol.coeffs.iter().map(|&c| poly::exact(c)).collect();
    let chain = SturmChain::new(&exact);
    if chain.has_repeated_root() {
        log::warn!(
            "polynomial factor of solution (n={}, i={}, gamma={}) has a repeated root; counted once",
            sol.n,
            sol.i,
            sol.gamma
        );
    }
    chain.count_positive_roots()
}
