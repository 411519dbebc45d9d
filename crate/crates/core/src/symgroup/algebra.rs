use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::perm::{factorial, Permutation};
use super::{fmt_rational, parse_rational};
use crate::error::{Error, Result};

/// Largest index set that the sparse builders will enumerate (`k!` terms).
pub const MAX_SUBGROUP_SET: usize = 10;

/// An element of `QS_n`: a sparse map from permutations to nonzero rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct AlgebraElement {
    degree: usize,
    terms: BTreeMap<Permutation, BigRational>,
}

impl AlgebraElement {
    pub fn zero(degree: usize) -> Self {
        AlgebraElement { degree, terms: BTreeMap::new() }
    }

    pub fn identity(degree: usize) -> Self {
        Self::from_perm(Permutation::identity(degree), BigRational::one())
    }

    pub fn from_perm(p: Permutation, coeff: BigRational) -> Self {
        let mut e = Self::zero(p.degree());
        e.add_term(p, coeff);
        e
    }

    /// Builds an element from terms of possibly mixed degree; everything is
    /// embedded at `degree` (which must cover each term).
    pub fn from_terms(degree: usize, terms: impl IntoIterator<Item = (Permutation, BigRational)>) -> Result<Self> {
        let mut e = Self::zero(degree);
        for (p, c) in terms {
            e.add_term(p.embed(degree)?, c);
        }
        Ok(e)
    }

    pub(crate) fn add_term(&mut self, p: Permutation, c: BigRational) {
        debug_assert_eq!(p.degree(), self.degree);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(p) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Permutation, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, p: &Permutation) -> BigRational {
        if p.support_degree() > self.degree {
            return BigRational::zero();
        }
        let q = p.trimmed().embed(self.degree).expect("support fits");
        self.terms.get(&q).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Coefficient of the identity permutation.
    pub fn coeff_id(&self) -> BigRational {
        self.coeff(&Permutation::identity(self.degree))
    }

    pub fn embed(&self, m: usize) -> Result<Self> {
        if m < self.degree {
            return Err(Error::invalid(format!("cannot embed degree {} into {m}", self.degree)));
        }
        let mut terms = BTreeMap::new();
        for (p, c) in &self.terms {
            terms.insert(p.embed(m)?, c.clone());
        }
        Ok(AlgebraElement { degree: m, terms })
    }

    fn equalize(a: &Self, b: &Self) -> (Self, Self) {
        let m = a.degree.max(b.degree);
        (a.embed(m).unwrap(), b.embed(m).unwrap())
    }

    pub fn add(&self, other: &Self) -> Self {
        let (mut a, b) = Self::equalize(self, other);
        for (p, c) in b.terms {
            a.add_term(p, c);
        }
        a
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        if s.is_zero() {
            return Self::zero(self.degree);
        }
        AlgebraElement {
            degree: self.degree,
            terms: self.terms.iter().map(|(p, c)| (p.clone(), c * s)).collect(),
        }
    }

    /// Convolution product; `(a·b)` has coefficient `Σ a_σ b_τ` at `σ∘τ`.
    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = Self::equalize(self, other);
        let degree = a.degree;
        let bt: Vec<_> = b.terms.iter().collect();
        let at: Vec<_> = a.terms.iter().collect();
        let partials: Vec<BTreeMap<Permutation, BigRational>> = at
            .par_iter()
            .with_min_len(16)
            .fold(BTreeMap::new, |mut acc, &(p, c)| {
                for (q, d) in &bt {
                    let r = p.compose(q);
                    *acc.entry(r).or_insert_with(BigRational::zero) += c * *d;
                }
                acc
            })
            .collect();
        let mut out = Self::zero(degree);
        for part in partials {
            for (p, c) in part {
                out.add_term(p, c);
            }
        }
        out
    }

    /// Hermitian conjugation: `σ ↦ σ⁻¹` termwise.
    pub fn conj(&self) -> Self {
        AlgebraElement {
            degree: self.degree,
            terms: self.terms.iter().map(|(p, c)| (p.inverse(), c.clone())).collect(),
        }
    }

    fn set_element(idx: &[usize], signed: bool) -> Result<Self> {
        if idx.is_empty() {
            return Err(Error::invalid("empty index set"));
        }
        let mut sorted = idx.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != idx.len() || sorted[0] == 0 {
            return Err(Error::invalid(format!("bad index set {idx:?}")));
        }
        let k = sorted.len();
        if k > MAX_SUBGROUP_SET {
            return Err(Error::resource(format!("index set of size {k} exceeds {MAX_SUBGROUP_SET}")));
        }
        let degree = *sorted.last().unwrap();
        let norm = BigRational::new(BigInt::one(), BigInt::from(factorial(k)));
        let mut e = Self::zero(degree);
        for local in Permutation::all(k) {
            let mut images: Vec<usize> = (1..=degree).collect();
            for (i, &src) in sorted.iter().enumerate() {
                images[src - 1] = sorted[local.apply(i + 1) - 1];
            }
            let p = Permutation::from_images(&images)?;
            let c = if signed && local.sign() < 0 { -norm.clone() } else { norm.clone() };
            e.add_term(p, c);
        }
        Ok(e)
    }

    /// Normalized symmetrizer `(1/k!) Σ τ` over permutations of `idx`.
    pub fn symmetrizer(idx: &[usize]) -> Result<Self> {
        Self::set_element(idx, false)
    }

    /// Normalized antisymmetrizer `(1/k!) Σ sign(τ) τ`.
    pub fn antisymmetrizer(idx: &[usize]) -> Result<Self> {
        Self::set_element(idx, true)
    }

    /// When `self = r · other` for a nonzero rational `r`, returns `r`.
    pub fn ratio_to(&self, other: &Self) -> Option<BigRational> {
        let (a, b) = Self::equalize(self, other);
        if a.terms.len() != b.terms.len() || a.is_zero() {
            return None;
        }
        let (p0, c0) = a.terms.iter().next().unwrap();
        let r = c0 / b.terms.get(p0)?;
        for (p, c) in &a.terms {
            let d = b.terms.get(p)?;
            if &(d * &r) != c {
                return None;
            }
        }
        Some(r)
    }

    /// A permutation where the coefficients of `self` and `other` differ.
    pub fn witness_difference(&self, other: &Self) -> Option<Permutation> {
        let diff = self.sub(other);
        diff.terms.keys().next().map(|p| p.trimmed())
    }

    /// Structural equality after embedding both sides at a common degree.
    pub fn equals(&self, other: &Self) -> bool {
        let (a, b) = Self::equalize(self, other);
        a == b
    }

    pub fn max_abs_coeff(&self) -> BigRational {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_else(BigRational::zero)
    }
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (p, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}*{}", fmt_rational(c), p)?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    perm: String,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct ElementRepr {
    degree: usize,
    terms: Vec<TermRepr>,
}

impl Serialize for AlgebraElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ElementRepr {
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(p, c)| TermRepr { perm: p.to_string(), coeff: fmt_rational(c) })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for AlgebraElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = ElementRepr::deserialize(d)?;
        let mut e = AlgebraElement::zero(repr.degree);
        for t in repr.terms {
            let p = Permutation::parse_cycles(&t.perm, repr.degree).map_err(D::Error::custom)?;
            if p.degree() != repr.degree {
                return Err(D::Error::custom(format!("{} exceeds degree {}", t.perm, repr.degree)));
            }
            let c = parse_rational(&t.coeff).ok_or_else(|| D::Error::custom(format!("bad coefficient {}", t.coeff)))?;
            e.add_term(p, c);
        }
        Ok(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symgroup::rat;

    fn p(s: &str, n: usize) -> Permutation {
        Permutation::parse_cycles(s, n).unwrap()
    }

    #[test]
    fn symmetrizer_three_has_six_terms() {
        let s = AlgebraElement::symmetrizer(&[1, 2, 3]).unwrap();
        assert_eq!(s.len(), 6);
        assert!(s.terms().all(|(_, c)| *c == rat(1, 6)));
        let a = AlgebraElement::antisymmetrizer(&[1, 2, 3]).unwrap();
        assert_eq!(a.coeff(&p("(1 2)", 3)), rat(-1, 6));
        assert_eq!(a.coeff(&p("(1 2 3)", 3)), rat(1, 6));
    }

    #[test]
    fn singleton_set_is_identity() {
        let s = AlgebraElement::symmetrizer(&[5]).unwrap();
        assert!(s.equals(&AlgebraElement::identity(1)));
    }

    #[test]
    fn projector_and_annihilation() {
        let s = AlgebraElement::symmetrizer(&[1, 2]).unwrap();
        let a = AlgebraElement::antisymmetrizer(&[1, 2]).unwrap();
        assert_eq!(s.mul(&s), s);
        assert_eq!(a.mul(&a), a);
        assert!(a.mul(&s).is_zero());
        assert_eq!(s.mul(&AlgebraElement::identity(2)), s);
    }

    #[test]
    fn absorption_of_subsets() {
        let s12 = AlgebraElement::symmetrizer(&[1, 2]).unwrap();
        let s123 = AlgebraElement::symmetrizer(&[1, 2, 3]).unwrap();
        assert!(s12.mul(&s123).equals(&s123));
        assert!(s123.mul(&s12).equals(&s123));
    }

    #[test]
    fn embedding_keeps_terms() {
        let s = AlgebraElement::symmetrizer(&[1, 2]).unwrap();
        let e = s.embed(5).unwrap();
        assert_eq!(e.degree(), 5);
        assert_eq!(e.coeff(&p("(1 2)", 5)), rat(1, 2));
        assert_eq!(s.embed(2).unwrap(), s);
        assert!(s.embed(1).is_err());
    }

    #[test]
    fn conjugation_inverts() {
        let x = AlgebraElement::from_perm(p("(1 2 3)", 3), rat(2, 1));
        assert_eq!(x.conj().coeff(&p("(1 3 2)", 3)), rat(2, 1));
        assert_eq!(x.conj().conj(), x);
        let s = AlgebraElement::symmetrizer(&[1, 2, 3]).unwrap();
        assert_eq!(s.conj(), s);
    }

    #[test]
    fn json_roundtrip() {
        let a = AlgebraElement::antisymmetrizer(&[1, 2]).unwrap();
        let j = serde_json::to_string(&a).unwrap();
        assert_eq!(j, r#"{"degree":2,"terms":[{"perm":"()","coeff":"1/2"},{"perm":"(1 2)","coeff":"-1/2"}]}"#);
        let back: AlgebraElement = serde_json::from_str(&j).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn ratio() {
        let s = AlgebraElement::symmetrizer(&[1, 2]).unwrap();
        assert_eq!(s.scale(&rat(3, 2)).ratio_to(&s), Some(rat(3, 2)));
        let a = AlgebraElement::antisymmetrizer(&[1, 2]).unwrap();
        assert_eq!(a.ratio_to(&s), None);
        assert_eq!(s.witness_difference(&a), Some(p("(1 2)", 2)));
    }
}
