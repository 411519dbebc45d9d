use num_rational::BigRational;
use serde::Serialize;

use super::ast::{BirdtrackExpr, Factor, SetKind};
use crate::error::{Error, Result};
use crate::symgroup::{fmt_rational, AlgebraElement, DenseElement};

/// Default degree bound for the expansion oracle.
pub const DEFAULT_ORACLE_BOUND: usize = 9;

fn check(e: &BirdtrackExpr, degree: usize, bound: usize) -> Result<()> {
    if e.degree() > degree {
        return Err(Error::invalid(format!("expression of degree {} does not fit degree {degree}", e.degree())));
    }
    if degree > bound {
        return Err(Error::resource(format!("degree {degree} exceeds the oracle bound {bound}")));
    }
    Ok(())
}

/// Product of the factors only, at the given degree.
pub fn expand_bar_dense(e: &BirdtrackExpr, degree: usize, bound: usize) -> Result<DenseElement> {
    check(e, degree, bound)?;
    let mut acc = DenseElement::identity(degree)?;
    if e.is_zero() {
        return DenseElement::zero(degree);
    }
    for f in &e.factors {
        match f {
            Factor::Set { kind, sets, .. } => {
                for s in sets {
                    let idx: Vec<usize> = s.iter().map(|&v| v as usize).collect();
                    acc.mul_set(&idx, *kind == SetKind::Anti)?;
                }
            }
            Factor::Perm { perm } => acc.mul_perm(perm)?,
        }
    }
    Ok(acc)
}

/// Full expansion at the given degree; symbolic constants are refused.
pub fn expand_dense(e: &BirdtrackExpr, degree: usize, bound: usize) -> Result<DenseElement> {
    let q = scalar_value(e)?;
    let mut acc = expand_bar_dense(e, degree, bound)?;
    acc.scale(q);
    Ok(acc)
}

fn scalar_value(e: &BirdtrackExpr) -> Result<&BigRational> {
    e.rational_scalar().ok_or_else(|| {
        Error::refused(format!("{} carries symbolic constants and has no exact expansion", super::print_expr(e)))
    })
}

/// Expansion in `QS_n` with `n` the largest index referenced.
pub fn expand(e: &BirdtrackExpr) -> Result<AlgebraElement> {
    Ok(expand_dense(e, e.degree(), DEFAULT_ORACLE_BOUND)?.to_algebra())
}

/// Expansion of `Ō`, ignoring the scalar.
pub fn expand_bar(e: &BirdtrackExpr) -> Result<AlgebraElement> {
    Ok(expand_bar_dense(e, e.degree(), DEFAULT_ORACLE_BOUND)?.to_algebra())
}

/// Outcome of comparing two expressions in the group algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Comparison {
    Equal { degree: usize },
    /// `left = ratio · right` with a nonzero rational ratio.
    Proportional { degree: usize, ratio: String },
    /// `witness` is a permutation whose coefficients differ.
    Unequal { degree: usize, witness: String, left: String, right: String },
}

impl Comparison {
    pub fn is_equal(&self) -> bool {
        matches!(self, Comparison::Equal { .. })
    }
}

/// Compares `a` and `b` at their common degree. Symbolic constants are
/// only allowed with `upto_scalar`, where they are dropped.
pub fn compare(a: &BirdtrackExpr, b: &BirdtrackExpr, bound: usize, upto_scalar: bool) -> Result<Comparison> {
    let degree = a.degree().max(b.degree()).max(1);
    let side = |e: &BirdtrackExpr| -> Result<DenseElement> {
        if upto_scalar {
            let mut d = expand_bar_dense(e, degree, bound)?;
            d.scale(&e.scalar.value);
            Ok(d)
        } else {
            expand_dense(e, degree, bound)
        }
    };
    let (x, y) = (side(a)?, side(b)?);
    if x == y {
        return Ok(Comparison::Equal { degree });
    }
    if upto_scalar {
        if let Some(r) = x.ratio_to(&y) {
            return Ok(Comparison::Proportional { degree, ratio: fmt_rational(&r) });
        }
    }
    let witness = x.witness_difference(&y).expect("elements differ");
    Ok(Comparison::Unequal {
        degree,
        left: fmt_rational(&x.coeff(&witness)),
        right: fmt_rational(&y.coeff(&witness)),
        witness: witness.to_string(),
    })
}
