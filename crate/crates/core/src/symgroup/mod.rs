//! The symmetric group `S_n` and its rational group algebra.

mod algebra;
pub mod dense;
mod matrix;
mod perm;

pub use algebra::{AlgebraElement, MAX_SUBGROUP_SET};
pub use dense::{DenseElement, MAX_DENSE_DEGREE};
pub use matrix::{character_trace, matrix_rep, matrix_stats, MatrixStats, RationalMatrix, MATRIX_BUDGET};
pub use perm::{factorial, Permutation, MAX_DEGREE};


use num_bigint::BigInt;
use num_rational::BigRational;

#[cfg(test)]
pub(crate) fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Formats a rational as `a` or `a/b`.
pub fn fmt_rational(q: &BigRational) -> String {
    if q.denom() == &BigInt::from(1) {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `a`, `-a` or `a/b`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d == BigInt::from(0) {
        return None;
    }
    Some(BigRational::new(n, d))
}
