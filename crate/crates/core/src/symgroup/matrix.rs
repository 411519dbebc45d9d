use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::algebra::AlgebraElement;
use super::fmt_rational;
use crate::error::{Error, Result};

/// Largest `N^n` for which a dense matrix is materialised.
pub const MATRIX_BUDGET: usize = 1 << 12;

/// Square matrix with exact rational entries, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    dim: usize,
    data: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn zeros(dim: usize) -> Self {
        RationalMatrix { dim, data: vec![BigRational::zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = BigRational::one();
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> &BigRational {
        &self.data[row * self.dim + col]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn trace(&self) -> BigRational {
        (0..self.dim).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let d = self.dim;
        let mut out = Self::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = &self.data[i * d + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    let b = &other.data[k * d + j];
                    if !b.is_zero() {
                        out.data[i * d + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        let rows: Vec<Vec<BigRational>> = self.data.chunks(self.dim.max(1)).map(|r| r.to_vec()).collect();
        rank_of(rows)
    }
}

fn rank_of(mut rows: Vec<Vec<BigRational>>) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank][c].clone();
        for r in rank + 1..rows.len() {
            if rows[r][c].is_zero() {
                continue;
            }
            let f = &rows[r][c] / &pivot;
            for k in c..cols {
                let v = &rows[rank][k] * &f;
                rows[r][k] -= v;
            }
        }
        rank += 1;
    }
    rank
}

fn tuple_index(t: &[usize], n_dim: usize) -> usize {
    t.iter().fold(0, |acc, &x| acc * n_dim + x)
}

fn check_budget(degree: usize, n_dim: usize) -> Result<usize> {
    if n_dim == 0 {
        return Err(Error::invalid("dimension N must be at least 1"));
    }
    let mut size: usize = 1;
    for _ in 0..degree {
        size = size.checked_mul(n_dim).filter(|&s| s <= MATRIX_BUDGET).ok_or_else(|| {
            Error::resource(format!("N^n = {n_dim}^{degree} exceeds the matrix budget {MATRIX_BUDGET}"))
        })?;
    }
    Ok(size)
}

/// Image of a basis tuple under `σ`: position `σ(k)` receives entry `k`.
fn act(images: &[usize], t: &[usize], out: &mut [usize]) {
    for (k, &x) in t.iter().enumerate() {
        out[images[k] - 1] = x;
    }
}

/// The action of `a` on `(C^N)^{⊗n}` in the lexicographic tuple basis.
pub fn matrix_rep(a: &AlgebraElement, n_dim: usize) -> Result<RationalMatrix> {
    let n = a.degree();
    let size = check_budget(n, n_dim)?;
    let mut m = RationalMatrix::zeros(size);
    let mut t = vec![0usize; n];
    let mut out = vec![0usize; n];
    let terms: Vec<_> = a.terms().map(|(p, c)| (p.images(), c.clone())).collect();
    for col in 0..size {
        let mut rem = col;
        for k in (0..n).rev() {
            t[k] = rem % n_dim;
            rem /= n_dim;
        }
        for (images, c) in &terms {
            act(images, &t, &mut out);
            m.data[tuple_index(&out, n_dim) * size + col] += c;
        }
    }
    Ok(m)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatrixStats {
    pub dimension: usize,
    pub size: String,
    pub rank: usize,
    pub trace: String,
    pub zero: bool,
}

/// Rank, trace and zero flag of the action on `(C^N)^{⊗n}`.
///
/// Permutations preserve the multiset of a basis tuple, so the matrix is
/// block diagonal over multisets and each block is handled on its own. The
/// trace is cross-checked against `Σ a_σ N^{cycles(σ)}`.
pub fn matrix_stats(a: &AlgebraElement, n_dim: usize) -> Result<MatrixStats> {
    let n = a.degree();
    if n_dim == 0 {
        return Err(Error::invalid("dimension N must be at least 1"));
    }
    let size = (n_dim as u128).checked_pow(n as u32).filter(|&s| s <= 1 << 24).ok_or_else(|| {
        Error::resource(format!("N^n = {n_dim}^{n} too large for block statistics"))
    })? as usize;
    let mut blocks: BTreeMap<Vec<usize>, Vec<Vec<usize>>> = BTreeMap::new();
    let mut t = vec![0usize; n];
    for idx in 0..size {
        let mut rem = idx;
        for k in (0..n).rev() {
            t[k] = rem % n_dim;
            rem /= n_dim;
        }
        let mut key = t.clone();
        key.sort_unstable();
        blocks.entry(key).or_default().push(t.clone());
    }
    let terms: Vec<_> = a.terms().map(|(p, c)| (p.images(), c.clone())).collect();
    let mut rank = 0;
    let mut trace = BigRational::zero();
    let mut out = vec![0usize; n];
    for tuples in blocks.values() {
        let pos: BTreeMap<&Vec<usize>, usize> = tuples.iter().enumerate().map(|(i, t)| (t, i)).collect();
        let b = tuples.len();
        let mut rows = vec![vec![BigRational::zero(); b]; b];
        for (col, t) in tuples.iter().enumerate() {
            for (images, c) in &terms {
                act(images, t, &mut out);
                rows[pos[&out]][col] += c;
            }
        }
        for (i, row) in rows.iter().enumerate() {
            trace += &row[i];
        }
        rank += rank_of(rows);
    }
    let check: BigRational = a
        .terms()
        .map(|(p, c)| c * BigRational::from_integer(BigInt::from(n_dim).pow(p.cycle_count() as u32)))
        .sum();
    debug_assert_eq!(trace, check, "block trace disagrees with cycle-count trace");
    if trace != check {
        return Err(Error::Verify("matrix trace disagrees with the cycle-count formula".into()));
    }
    Ok(MatrixStats { dimension: n_dim, size: size.to_string(), rank, trace: fmt_rational(&trace), zero: rank == 0 })
}

/// `tr ρ(a) = Σ a_σ N^{cycles(σ)}`.
pub fn character_trace(a: &AlgebraElement, n_dim: usize) -> BigRational {
    a.terms()
        .map(|(p, c)| c * BigRational::from_integer(BigInt::from(n_dim).pow(p.cycle_count() as u32)))
        .sum()
}
