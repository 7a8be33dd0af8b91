//! Dense univariate polynomials, stored in ascending order of powers.
//!
//! Two flavours are used: `f64` coefficients for evaluation and root
//! refinement, and exact `BigRational` coefficients for building the
//! truncation polynomial and for Sturm-sequence root counting.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

pub use nalgebra::Complex;

/// Exact rational image of a finite `f64`.
pub fn exact(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Horner evaluation.
pub fn eval(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// Value and first derivative in one Horner pass.
pub fn eval_with_derivative(coeffs: &[f64], x: f64) -> (f64, f64) {
    let mut p = 0.0;
    let mut dp = 0.0;
    for &c in coeffs.iter().rev() {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

/// Drops trailing zero coefficients so that the last entry is the leading one.
pub fn trim(mut coeffs: Vec<BigRational>) -> Vec<BigRational> {
    while coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
    coeffs
}

pub fn degree(coeffs: &[BigRational]) -> Option<usize> {
    coeffs.iter().rposition(|c| !c.is_zero())
}

pub fn derivative(coeffs: &[BigRational]) -> Vec<BigRational> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
        .collect()
}

/// Remainder of `num` divided by `den` (`den` must be nonzero).
pub fn remainder(num: &[BigRational], den: &[BigRational]) -> Vec<BigRational> {
    let den = trim(den.to_vec());
    let dd = den.len() - 1;
    let lead = den[dd].clone();
    let mut r = trim(num.to_vec());
    while r.len() > dd && !r.is_empty() {
        let shift = r.len() - 1 - dd;
        let factor = r.last().unwrap() / &lead;
        for (k, c) in den.iter().enumerate() {
            r[shift + k] -= &factor * c;
        }
        r.pop();
        r = trim(r);
    }
    r
}

/// Sturm sequence of an exact polynomial, together with whether the
/// polynomial has a repeated root (non-constant gcd with its derivative).
pub struct SturmChain {
    chain: Vec<Vec<BigRational>>,
    repeated_root: bool,
}

impl SturmChain {
    pub fn new(p: &[BigRational]) -> Self {
        let p = trim(p.to_vec());
        let mut chain = vec![p.clone()];
        let dp = trim(derivative(&p));
        if !dp.is_empty() {
            chain.push(dp);
        }
        while chain.len() >= 2 {
            let k = chain.len();
            let r: Vec<BigRational> = remainder(&chain[k - 2], &chain[k - 1])
                .into_iter()
                .map(|c| -c)
                .collect();
            if r.is_empty() {
                break;
            }
            chain.push(r);
        }
        let repeated_root = chain
            .last()
            .is_some_and(|last| degree(last).unwrap_or(0) > 0);
        Self {
            chain,
            repeated_root,
        }
    }

    pub fn has_repeated_root(&self) -> bool {
        self.repeated_root
    }

    fn sign_changes(signs: impl Iterator<Item = i8>) -> usize {
        let mut last = 0i8;
        let mut changes = 0;
        for s in signs.filter(|&s| s != 0) {
            if last != 0 && s != last {
                changes += 1;
            }
            last = s;
        }
        changes
    }

    fn sign(r: &BigRational) -> i8 {
        if r.is_positive() {
            1
        } else if r.is_negative() {
            -1
        } else {
            0
        }
    }

    /// Number of distinct real roots in `(0, inf)`. Assumes `p(0) != 0`.
    pub fn count_positive_roots(&self) -> usize {
        let at_zero =
            Self::sign_changes(self.chain.iter().map(|p| p.first().map_or(0, Self::sign)));
        let at_inf = Self::sign_changes(self.chain.iter().map(|p| p.last().map_or(0, Self::sign)));
        at_zero.saturating_sub(at_inf)
    }
}

/// Eigenvalues of the companion matrix of `coeffs` (ascending order, nonzero
/// leading coefficient).
pub fn companion_roots(coeffs: &[f64]) -> Vec<Complex<f64>> {
    let d = coeffs.len() - 1;
    if d == 0 {
        return Vec::new();
    }
    let lead = coeffs[d];
    if d == 1 {
        return vec![Complex::new(-coeffs[0] / lead, 0.0)];
    }
    let mut c = DMatrix::<f64>::zeros(d, d);
    for k in 1..d {
        c[(k, k - 1)] = 1.0;
    }
    for k in 0..d {
        c[(k, d - 1)] = -coeffs[k] / lead;
    }
    c.complex_eigenvalues().iter().copied().collect()
}
