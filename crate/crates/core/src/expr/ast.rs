use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::symgroup::Permutation;
use crate::tableau::Tableau;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SetKind {
    #[serde(rename = "S")]
    Sym,
    #[serde(rename = "A")]
    Anti,
}

impl SetKind {
    pub fn letter(self) -> char {
        match self {
            SetKind::Sym => 'S',
            SetKind::Anti => 'A',
        }
    }

    pub fn other(self) -> SetKind {
        match self {
            SetKind::Sym => SetKind::Anti,
            SetKind::Anti => SetKind::Sym,
        }
    }
}

/// Which family of the annotating tableau a set factor was built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Rows,
    Columns,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Annotation {
    pub tableau: Tableau,
    pub role: Role,
}

/// One factor of a birdtrack product.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Factor {
    Set {
        kind: SetKind,
        sets: Vec<Vec<u32>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        annotation: Option<Annotation>,
    },
    Perm {
        #[serde(with = "perm_text")]
        perm: Permutation,
    },
}

mod perm_text {
    use super::Permutation;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(p: &Permutation, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&p.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Permutation, D::Error> {
        let s = String::deserialize(d)?;
        Permutation::parse_cycles(&s, 0).map(|p| p.trimmed()).map_err(serde::de::Error::custom)
    }
}

/// Sorts each set, drops singletons and orders sets by their smallest entry.
pub fn normalize_sets(sets: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = sets
        .iter()
        .filter(|s| s.len() > 1)
        .map(|s| {
            let mut s = s.clone();
            s.sort_unstable();
            s
        })
        .collect();
    out.sort();
    out
}

impl Factor {
    pub fn set(kind: SetKind, sets: &[Vec<u32>]) -> Factor {
        Factor::Set { kind, sets: normalize_sets(sets), annotation: None }
    }

    pub fn sym(sets: &[Vec<u32>]) -> Factor {
        Self::set(SetKind::Sym, sets)
    }

    pub fn anti(sets: &[Vec<u32>]) -> Factor {
        Self::set(SetKind::Anti, sets)
    }

    pub fn perm(p: Permutation) -> Factor {
        Factor::Perm { perm: p.trimmed() }
    }

    pub fn annotated(kind: SetKind, t: &Tableau, role: Role) -> Factor {
        let sets = match role {
            Role::Rows => t.row_entries(),
            Role::Columns => t.column_entries(),
        };
        Factor::Set { kind, sets: normalize_sets(&sets), annotation: Some(Annotation { tableau: t.clone(), role }) }
    }

    pub fn kind(&self) -> Option<SetKind> {
        match self {
            Factor::Set { kind, .. } => Some(*kind),
            Factor::Perm { .. } => None,
        }
    }

    pub fn sets(&self) -> Option<&[Vec<u32>]> {
        match self {
            Factor::Set { sets, .. } => Some(sets),
            Factor::Perm { .. } => None,
        }
    }

    pub fn as_perm(&self) -> Option<&Permutation> {
        match self {
            Factor::Perm { perm } => Some(perm),
            Factor::Set { .. } => None,
        }
    }

    pub fn is_set(&self) -> bool {
        matches!(self, Factor::Set { .. })
    }

    /// A set factor without nontrivial sets, or the identity permutation.
    pub fn is_trivial(&self) -> bool {
        match self {
            Factor::Set { sets, .. } => sets.is_empty(),
            Factor::Perm { perm } => perm.is_identity(),
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            Factor::Set { sets, .. } => sets.iter().flatten().copied().max().unwrap_or(0) as usize,
            Factor::Perm { perm } => perm.support_degree(),
        }
    }

    /// Total number of indices in nontrivial sets.
    pub fn cardinality(&self) -> usize {
        self.sets().map_or(0, |s| s.iter().map(|x| x.len()).sum())
    }

    /// Same factor without its tableau annotation.
    pub fn bare(&self) -> Factor {
        match self {
            Factor::Set { kind, sets, .. } => Factor::Set { kind: *kind, sets: sets.clone(), annotation: None },
            other => other.clone(),
        }
    }

    /// Same kind and identical index sets, annotations ignored.
    pub fn same_as(&self, other: &Factor) -> bool {
        self.bare() == other.bare()
    }

    /// `self ⊑ other`: same kind and every set of `self` lies inside a set
    /// of `other`, so that `self·other = other·self = other`.
    pub fn absorbed_by(&self, other: &Factor) -> bool {
        match (self, other) {
            (Factor::Set { kind: k1, sets: s1, .. }, Factor::Set { kind: k2, sets: s2, .. }) if k1 == k2 => {
                sets_absorbed(s1, s2)
            }
            _ => false,
        }
    }

    pub fn conj(&self) -> Factor {
        match self {
            Factor::Perm { perm } => Factor::Perm { perm: perm.inverse().trimmed() },
            other => other.clone(),
        }
    }
}

pub fn sets_absorbed(inner: &[Vec<u32>], outer: &[Vec<u32>]) -> bool {
    inner.iter().all(|s| outer.iter().any(|o| s.iter().all(|v| o.contains(v))))
}

/// Exact rational times a product of opaque nonzero constants `k1, k2, …`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Scalar {
    #[serde(with = "rational_text")]
    pub value: BigRational,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tokens: Vec<u32>,
}

pub(crate) mod rational_text {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::symgroup::{fmt_rational, parse_rational};

    pub fn serialize<S: Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).ok_or_else(|| serde::de::Error::custom(format!("bad rational {s}")))
    }
}

impl Scalar {
    pub fn one() -> Self {
        Scalar { value: BigRational::one(), tokens: Vec::new() }
    }

    pub fn rational(value: BigRational) -> Self {
        Scalar { value, tokens: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.value.is_one() && self.tokens.is_empty()
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        let value = &self.value * &other.value;
        if value.is_zero() {
            return Scalar::rational(value);
        }
        let mut tokens: Vec<u32> = self.tokens.iter().chain(&other.tokens).copied().collect();
        tokens.sort_unstable();
        Scalar { value, tokens }
    }

    pub fn mul_rational(&self, q: &BigRational) -> Scalar {
        self.mul(&Scalar::rational(q.clone()))
    }

    pub fn with_token(&self, k: u32) -> Scalar {
        self.mul(&Scalar { value: BigRational::one(), tokens: vec![k] })
    }
}

/// `scalar × f_1 f_2 ⋯ f_m`, read left to right with the right factor acting
/// first on `V^{⊗n}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BirdtrackExpr {
    pub scalar: Scalar,
    pub factors: Vec<Factor>,
}

impl BirdtrackExpr {
    pub fn identity() -> Self {
        BirdtrackExpr { scalar: Scalar::one(), factors: Vec::new() }
    }

    pub fn zero() -> Self {
        BirdtrackExpr { scalar: Scalar::rational(BigRational::zero()), factors: Vec::new() }
    }

    pub fn new(scalar: Scalar, factors: Vec<Factor>) -> Self {
        BirdtrackExpr { scalar, factors }.normalized()
    }

    pub fn from_factors(factors: Vec<Factor>) -> Self {
        Self::new(Scalar::one(), factors)
    }

    /// Drops trivial factors and canonicalises zero.
    pub fn normalized(mut self) -> Self {
        if self.scalar.is_zero() {
            return Self::zero();
        }
        self.factors.retain(|f| !f.is_trivial());
        self
    }

    pub fn is_zero(&self) -> bool {
        self.scalar.is_zero()
    }

    pub fn degree(&self) -> usize {
        self.factors.iter().map(|f| f.degree()).max().unwrap_or(0)
    }

    /// Number of symmetrizer and antisymmetrizer factors.
    pub fn set_count(&self) -> usize {
        self.factors.iter().filter(|f| f.is_set()).count()
    }

    pub fn perm_count(&self) -> usize {
        self.factors.iter().filter(|f| !f.is_set()).count()
    }

    pub fn total_cardinality(&self) -> usize {
        self.factors.iter().map(|f| f.cardinality()).sum()
    }

    pub fn scaled(&self, q: &BigRational) -> Self {
        BirdtrackExpr { scalar: self.scalar.mul_rational(q), factors: self.factors.clone() }.normalized()
    }

    /// Product `self · other`.
    pub fn concat(&self, other: &BirdtrackExpr) -> Self {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        BirdtrackExpr { scalar: self.scalar.mul(&other.scalar), factors }.normalized()
    }

    /// Hermitian conjugate: reversed factor order, inverted permutations.
    pub fn conj(&self) -> Self {
        BirdtrackExpr { scalar: self.scalar.clone(), factors: self.factors.iter().rev().map(|f| f.conj()).collect() }
    }

    /// `Ō`: the operator with its scalar stripped.
    pub fn bar(&self) -> Self {
        BirdtrackExpr { scalar: Scalar::one(), factors: self.factors.clone() }
    }

    /// Annotation-free copy.
    pub fn bare(&self) -> Self {
        BirdtrackExpr { scalar: self.scalar.clone(), factors: self.factors.iter().map(|f| f.bare()).collect() }
    }

    /// Whether the outer factors read the same from both ends.
    pub fn is_palindromic(&self) -> bool {
        let n = self.factors.len();
        (0..n / 2).all(|i| self.factors[i].same_as(&self.factors[n - 1 - i].conj()))
    }

    pub fn tokens(&self) -> BTreeSet<u32> {
        self.scalar.tokens.iter().copied().collect()
    }

    pub fn rational_scalar(&self) -> Option<&BigRational> {
        self.scalar.tokens.is_empty().then_some(&self.scalar.value)
    }
}
