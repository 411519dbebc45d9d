//! A deliberately naive group-algebra oracle, sharing no code with the
//! library's expansion: elements are hash maps from image vectors to
//! rationals and products are plain double loops.

#![allow(dead_code)]

pub mod gen;

use std::collections::HashMap;

use birdtrack::expr::{BirdtrackExpr, Factor, SetKind};
use birdtrack::AlgebraElement;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Perm = Vec<u8>;

#[derive(Clone, Debug, PartialEq)]
pub struct Naive {
    pub n: usize,
    pub terms: HashMap<Perm, BigRational>,
}

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn identity(n: usize) -> Perm {
    (0..n as u8).collect()
}

/// `(a ∘ b)(i) = a(b(i))`.
fn compose(a: &Perm, b: &Perm) -> Perm {
    b.iter().map(|&x| a[x as usize]).collect()
}

fn sign(p: &Perm) -> i64 {
    let mut inv = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Every arrangement of `items`, by recursive insertion.
fn arrangements(items: &[u8]) -> Vec<Vec<u8>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for sub in arrangements(&items[1..]) {
        for k in 0..=sub.len() {
            let mut v = sub.clone();
            v.insert(k, items[0]);
            out.push(v);
        }
    }
    out
}

impl Naive {
    pub fn zero(n: usize) -> Self {
        Naive { n, terms: HashMap::new() }
    }

    pub fn one(n: usize) -> Self {
        let mut t = HashMap::new();
        t.insert(identity(n), BigRational::one());
        Naive { n, terms: t }
    }

    fn add_term(&mut self, p: Perm, c: BigRational) {
        let e = self.terms.entry(p).or_insert_with(BigRational::zero);
        *e += c;
    }

    fn cleaned(mut self) -> Self {
        self.terms.retain(|_, c| !c.is_zero());
        self
    }

    /// `(1/k!) Σ τ` or `(1/k!) Σ sign(τ) τ` over permutations of `set`.
    pub fn set_element(n: usize, set: &[u32], anti: bool) -> Self {
        let pts: Vec<u8> = set.iter().map(|&v| (v - 1) as u8).collect();
        let all = arrangements(&pts);
        let w = q(1, all.len() as i64);
        let mut out = Naive::zero(n);
        for img in all {
            let mut p = identity(n);
            for (a, b) in pts.iter().zip(&img) {
                p[*a as usize] = *b;
            }
            let s = if anti { sign(&p) } else { 1 };
            out.add_term(p, &w * BigInt::from(s));
        }
        out.cleaned()
    }

    pub fn perm(n: usize, images_one_based: &[usize]) -> Self {
        let mut p = identity(n);
        for (i, &v) in images_one_based.iter().enumerate() {
            p[i] = (v - 1) as u8;
        }
        let mut t = HashMap::new();
        t.insert(p, BigRational::one());
        Naive { n, terms: t }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Naive::zero(self.n);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term(compose(a, b), x * y);
            }
        }
        out.cleaned()
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        Naive { n: self.n, terms: self.terms.iter().map(|(p, c)| (p.clone(), c * s)).collect() }.cleaned()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(p.clone(), c.clone());
        }
        out.cleaned()
    }

    pub fn coeff_id(&self) -> BigRational {
        self.terms.get(&identity(self.n)).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `x ↦ x†`, inverting every permutation.
    pub fn conj(&self) -> Self {
        let inv = |p: &Perm| {
            let mut r = vec![0u8; p.len()];
            for (i, &v) in p.iter().enumerate() {
                r[v as usize] = i as u8;
            }
            r
        };
        Naive { n: self.n, terms: self.terms.iter().map(|(p, c)| (inv(p), c.clone())).collect() }
    }

    /// `self = r · other` for some nonzero `r`.
    pub fn ratio_to(&self, other: &Self) -> Option<BigRational> {
        let (p, c) = self.terms.iter().next()?;
        let r = c / other.terms.get(p)?;
        (other.scale(&r) == *self).then_some(r)
    }

    pub fn from_library(a: &AlgebraElement, n: usize) -> Self {
        let mut out = Naive::zero(n);
        for (p, c) in a.terms() {
            let mut img = identity(n);
            for (i, v) in p.images().into_iter().enumerate() {
                img[i] = (v - 1) as u8;
            }
            out.add_term(img, c.clone());
        }
        out.cleaned()
    }
}

/// Bare product of the factors (scalar ignored), at degree `n`.
pub fn expand_bar(e: &BirdtrackExpr, n: usize) -> Naive {
    let mut acc = Naive::one(n);
    for f in &e.factors {
        match f {
            Factor::Set { kind, sets, .. } => {
                for s in sets {
                    acc = acc.mul(&Naive::set_element(n, s, *kind == SetKind::Anti));
                }
            }
            Factor::Perm { perm } => acc = acc.mul(&Naive::perm(n, &perm.images())),
        }
    }
    acc
}

/// Full expansion; panics on symbolic constants.
pub fn expand(e: &BirdtrackExpr, n: usize) -> Naive {
    let s = e.rational_scalar().expect("no symbolic constants");
    if s.is_zero() {
        return Naive::zero(n);
    }
    expand_bar(e, n).scale(s)
}
