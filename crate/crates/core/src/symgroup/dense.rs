//! Dense elements of `QS_n` indexed by lexicographic permutation rank.
//!
//! Coefficients are kept as integer numerators over one common denominator.
//! Machine `i128` is tried first; any overflow switches the element to
//! `BigInt` and redoes the step. Right multiplication by a symmetrizer over
//! `{i_1 < … < i_k}` uses the coset factorisation
//! `Σ_{S_k} τ = C_2 C_3 ⋯ C_k` with `C_m = id ± Σ_{j<m} (i_j i_m)`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use super::algebra::AlgebraElement;
use super::perm::{factorial, rank, unrank_into, Permutation};
use crate::error::{Error, Result};

/// Hard ceiling on the dense degree (`10!` coefficients).
pub const MAX_DENSE_DEGREE: usize = 10;

trait Coef: Integer + Signed + CheckedAdd + CheckedSub + CheckedMul + Clone + Send + Sync + std::fmt::Debug {
    fn from_i64(v: i64) -> Self;
    fn to_big(&self) -> BigInt;
}

impl Coef for i128 {
    fn from_i64(v: i64) -> Self {
        v as i128
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Coef for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Frac<T> {
    num: Vec<T>,
    den: T,
}

#[derive(Clone, Debug)]
enum Repr {
    Small(Frac<i128>),
    Big(Frac<BigInt>),
}

/// Dense group-algebra element used by the expansion oracle.
#[derive(Clone, Debug)]
pub struct DenseElement {
    n: usize,
    repr: Repr,
}

fn table_cache() -> &'static Mutex<HashMap<(usize, usize, usize), Arc<Vec<u32>>>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize, usize), Arc<Vec<u32>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `T[rank π] = rank(π ∘ (a b))`, 0-based points `a < b`.
fn transposition_table(n: usize, a: usize, b: usize) -> Arc<Vec<u32>> {
    let key = (n, a, b);
    if let Some(t) = table_cache().lock().unwrap().get(&key) {
        return t.clone();
    }
    let size = factorial(n);
    let table: Vec<u32> = (0..size)
        .into_par_iter()
        .map_init(
            || vec![0u8; n],
            |buf, r| {
                unrank_into(n, r, buf);
                buf.swap(a, b);
                rank(buf) as u32
            },
        )
        .collect();
    let table = Arc::new(table);
    table_cache().lock().unwrap().insert(key, table.clone());
    table
}

fn check_degree(n: usize) -> Result<()> {
    if n > MAX_DENSE_DEGREE {
        return Err(Error::resource(format!("dense degree {n} exceeds {MAX_DENSE_DEGREE}")));
    }
    Ok(())
}

fn reduce<T: Coef>(f: &mut Frac<T>) {
    if f.den.is_negative() {
        f.den = -f.den.clone();
        f.num.par_iter_mut().for_each(|x| *x = -x.clone());
    }
    let g = f
        .num
        .par_iter()
        .filter(|x| !x.is_zero())
        .cloned()
        .reduce(T::zero, |a, b| a.gcd(&b));
    let g = g.gcd(&f.den);
    if g.is_zero() || g.is_one() {
        if f.num.iter().all(|x| x.is_zero()) {
            f.den = T::one();
        }
        return;
    }
    f.den = f.den.clone() / g.clone();
    f.num.par_iter_mut().for_each(|x| *x = x.clone() / g.clone());
}

/// One coset step: `new[π] = old[π] + s Σ_t old[T_t[π]]`.
fn coset_step<T: Coef>(f: &Frac<T>, tables: &[Arc<Vec<u32>>], negative: bool) -> Option<Frac<T>> {
    let num: Option<Vec<T>> = (0..f.num.len())
        .into_par_iter()
        .map(|r| {
            let mut acc = T::zero();
            for t in tables {
                acc = acc.checked_add(&f.num[t[r] as usize])?;
            }
            if negative {
                f.num[r].checked_sub(&acc)
            } else {
                f.num[r].checked_add(&acc)
            }
        })
        .collect();
    Some(Frac { num: num?, den: f.den.clone() })
}

fn set_mul<T: Coef>(n: usize, f: &Frac<T>, idx: &[usize], negative: bool) -> Option<Frac<T>> {
    let mut cur = f.clone();
    for m in 1..idx.len() {
        let tables: Vec<_> = (0..m).map(|j| transposition_table(n, idx[j] - 1, idx[m] - 1)).collect();
        cur = coset_step(&cur, &tables, negative)?;
        cur.den = cur.den.checked_mul(&T::from_i64(m as i64 + 1))?;
        reduce(&mut cur);
    }
    Some(cur)
}

fn scale_frac<T: Coef>(f: &Frac<T>, a: &T, b: &T) -> Option<Frac<T>> {
    let num: Option<Vec<T>> = f.num.par_iter().map(|x| x.checked_mul(a)).collect();
    let mut out = Frac { num: num?, den: f.den.checked_mul(b)? };
    reduce(&mut out);
    Some(out)
}

fn perm_mul<T: Coef>(n: usize, f: &Frac<T>, rho_inv: &[u8]) -> Frac<T> {
    let num: Vec<T> = (0..f.num.len())
        .into_par_iter()
        .map_init(
            || (vec![0u8; n], vec![0u8; n]),
            |(buf, tmp), r| {
                unrank_into(n, r, buf);
                for i in 0..n {
                    tmp[i] = buf[rho_inv[i] as usize];
                }
                f.num[rank(tmp)].clone()
            },
        )
        .collect();
    Frac { num, den: f.den.clone() }
}

fn add_frac<T: Coef>(a: &Frac<T>, b: &Frac<T>) -> Option<Frac<T>> {
    let num: Option<Vec<T>> = a
        .num
        .par_iter()
        .zip(b.num.par_iter())
        .map(|(x, y)| x.checked_mul(&b.den)?.checked_add(&y.checked_mul(&a.den)?))
        .collect();
    let mut out = Frac { num: num?, den: a.den.checked_mul(&b.den)? };
    reduce(&mut out);
    Some(out)
}

/// `(x·y)[π] = Σ_σ x[π∘σ⁻¹] y[σ]` over the nonzero entries of `y`.
fn full_mul<T: Coef>(n: usize, x: &Frac<T>, y: &Frac<T>) -> Option<Frac<T>> {
    let support: Vec<(Vec<u8>, T)> = y
        .num
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(r, c)| {
            let mut buf = vec![0u8; n];
            unrank_into(n, r, &mut buf);
            let p = Permutation::from_zero_based(buf).inverse();
            (p.images0().to_vec(), c.clone())
        })
        .collect();
    let num: Option<Vec<T>> = (0..x.num.len())
        .into_par_iter()
        .map_init(
            || (vec![0u8; n], vec![0u8; n]),
            |(buf, tmp), r| {
                unrank_into(n, r, buf);
                let mut acc = T::zero();
                for (inv, c) in &support {
                    for i in 0..n {
                        tmp[i] = buf[inv[i] as usize];
                    }
                    let xv = &x.num[rank(tmp)];
                    if !xv.is_zero() {
                        acc = acc.checked_add(&xv.checked_mul(c)?)?;
                    }
                }
                Some(acc)
            },
        )
        .collect();
    let mut out = Frac { num: num?, den: x.den.checked_mul(&y.den)? };
    reduce(&mut out);
    Some(out)
}

fn to_big(f: &Frac<i128>) -> Frac<BigInt> {
    Frac { num: f.num.iter().map(|x| x.to_big()).collect(), den: f.den.to_big() }
}

impl DenseElement {
    pub fn identity(n: usize) -> Result<Self> {
        Self::zero(n).map(|mut e| {
            if let Repr::Small(f) = &mut e.repr {
                f.num[0] = 1;
            }
            e
        })
    }

    pub fn zero(n: usize) -> Result<Self> {
        check_degree(n)?;
        Ok(DenseElement { n, repr: Repr::Small(Frac { num: vec![0; factorial(n)], den: 1 }) })
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn is_big(&self) -> bool {
        matches!(self.repr, Repr::Big(_))
    }

    fn promote(&mut self) {
        if let Repr::Small(f) = &self.repr {
            self.repr = Repr::Big(to_big(f));
        }
    }

    fn apply(
        &mut self,
        small: impl Fn(&Frac<i128>) -> Option<Frac<i128>>,
        big: impl Fn(&Frac<BigInt>) -> Option<Frac<BigInt>>,
    ) {
        if let Repr::Small(f) = &self.repr {
            if let Some(g) = small(f) {
                self.repr = Repr::Small(g);
                return;
            }
            log::debug!("dense element at n={} promoted to BigInt", self.n);
            self.promote();
        }
        if let Repr::Big(f) = &self.repr {
            self.repr = Repr::Big(big(f).expect("BigInt arithmetic cannot overflow"));
        }
    }

    /// Right multiplication by the normalized symmetrizer (or antisymmetrizer)
    /// over `idx` (1-based, every point at most the degree).
    pub fn mul_set(&mut self, idx: &[usize], antisym: bool) -> Result<()> {
        let mut sorted = idx.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != idx.len() || sorted.first() == Some(&0) || sorted.last().is_some_and(|&m| m > self.n) {
            return Err(Error::invalid(format!("index set {idx:?} invalid at degree {}", self.n)));
        }
        if sorted.len() < 2 {
            return Ok(());
        }
        let n = self.n;
        self.apply(|f| set_mul(n, f, &sorted, antisym), |f| set_mul(n, f, &sorted, antisym));
        Ok(())
    }

    pub fn mul_perm(&mut self, p: &Permutation) -> Result<()> {
        let p = p.trimmed().embed(self.n).map_err(|_| Error::invalid(format!("{p} exceeds degree {}", self.n)))?;
        if p.is_identity() {
            return Ok(());
        }
        let inv = p.inverse();
        let n = self.n;
        self.apply(|f| Some(perm_mul(n, f, inv.images0())), |f| Some(perm_mul(n, f, inv.images0())));
        Ok(())
    }

    pub fn scale(&mut self, q: &BigRational) {
        if q.is_zero() {
            *self = Self::zero(self.n).unwrap();
            return;
        }
        let (a, b) = (q.numer().clone(), q.denom().clone());
        let small = a.to_i128().zip(b.to_i128());
        self.apply(
            |f| {
                let (sa, sb) = small?;
                scale_frac(f, &sa, &sb)
            },
            |f| scale_frac(f, &a, &b),
        );
    }

    fn both_big(a: &Self, b: &Self) -> (Frac<BigInt>, Frac<BigInt>) {
        let conv = |e: &Self| match &e.repr {
            Repr::Small(f) => to_big(f),
            Repr::Big(f) => f.clone(),
        };
        (conv(a), conv(b))
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::invalid(format!("degree mismatch {} vs {}", self.n, other.n)));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        if let (Repr::Small(a), Repr::Small(b)) = (&self.repr, &other.repr) {
            if let Some(f) = add_frac(a, b) {
                return Ok(DenseElement { n: self.n, repr: Repr::Small(f) });
            }
        }
        let (a, b) = Self::both_big(self, other);
        Ok(DenseElement { n: self.n, repr: Repr::Big(add_frac(&a, &b).unwrap()) })
    }

    /// Full product in `QS_n`; cost is `n! × |support(other)|`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        if let (Repr::Small(a), Repr::Small(b)) = (&self.repr, &other.repr) {
            if let Some(f) = full_mul(self.n, a, b) {
                return Ok(DenseElement { n: self.n, repr: Repr::Small(f) });
            }
        }
        let (a, b) = Self::both_big(self, other);
        Ok(DenseElement { n: self.n, repr: Repr::Big(full_mul(self.n, &a, &b).unwrap()) })
    }

    fn entry(&self, r: usize) -> BigRational {
        match &self.repr {
            Repr::Small(f) => BigRational::new(BigInt::from(f.num[r]), BigInt::from(f.den)),
            Repr::Big(f) => BigRational::new(f.num[r].clone(), f.den.clone()),
        }
    }

    pub fn coeff(&self, p: &Permutation) -> BigRational {
        if p.support_degree() > self.n {
            return BigRational::zero();
        }
        let q = p.trimmed().embed(self.n).unwrap();
        self.entry(rank(q.images0()))
    }

    pub fn coeff_id(&self) -> BigRational {
        self.entry(0)
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Small(f) => f.num.iter().all(|x| *x == 0),
            Repr::Big(f) => f.num.iter().all(|x| x.is_zero()),
        }
    }

    pub fn support_size(&self) -> usize {
        match &self.repr {
            Repr::Small(f) => f.num.iter().filter(|x| **x != 0).count(),
            Repr::Big(f) => f.num.iter().filter(|x| !x.is_zero()).count(),
        }
    }

    pub fn to_algebra(&self) -> AlgebraElement {
        let mut terms = Vec::new();
        let mut buf = vec![0u8; self.n];
        for r in 0..factorial(self.n) {
            let c = self.entry(r);
            if !c.is_zero() {
                unrank_into(self.n, r, &mut buf);
                terms.push((Permutation::from_zero_based(buf.clone()), c));
            }
        }
        AlgebraElement::from_terms(self.n, terms).expect("degrees agree")
    }

    pub fn from_algebra(a: &AlgebraElement, n: usize) -> Result<Self> {
        if a.degree() > n {
            return Err(Error::invalid(format!("element of degree {} does not fit {n}", a.degree())));
        }
        check_degree(n)?;
        let mut num = vec![BigInt::zero(); factorial(n)];
        let den = a.terms().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
        for (p, c) in a.terms() {
            let q = p.embed(n)?;
            num[rank(q.images0())] = c.numer() * (&den / c.denom());
        }
        let mut f = Frac { num, den };
        reduce(&mut f);
        let mut e = DenseElement { n, repr: Repr::Big(f) };
        e.demote();
        Ok(e)
    }

    fn demote(&mut self) {
        if let Repr::Big(f) = &self.repr {
            let num: Option<Vec<i128>> = f.num.iter().map(|x| x.to_i128()).collect();
            if let (Some(num), Some(den)) = (num, f.den.to_i128()) {
                self.repr = Repr::Small(Frac { num, den });
            }
        }
    }

    /// Hermitian conjugate, `x[π] ↦ x[π⁻¹]`.
    pub fn conj(&self) -> Self {
        let n = self.n;
        let inv_rank: Vec<usize> = (0..factorial(n))
            .into_par_iter()
            .map_init(
                || vec![0u8; n],
                |buf, r| {
                    unrank_into(n, r, buf);
                    rank(Permutation::from_zero_based(buf.clone()).inverse().images0())
                },
            )
            .collect();
        let repr = match &self.repr {
            Repr::Small(f) => Repr::Small(Frac { num: inv_rank.iter().map(|&r| f.num[r]).collect(), den: f.den }),
            Repr::Big(f) => Repr::Big(Frac { num: inv_rank.iter().map(|&r| f.num[r].clone()).collect(), den: f.den.clone() }),
        };
        DenseElement { n, repr }
    }

    /// When `self = r · other` with `r ≠ 0`, returns `r`.
    pub fn ratio_to(&self, other: &Self) -> Option<BigRational> {
        if self.n != other.n {
            return None;
        }
        let (a, b) = Self::both_big(self, other);
        let pivot = b.num.iter().position(|x| !x.is_zero())?;
        if a.num[pivot].is_zero() {
            return None;
        }
        // a/da = r · b/db  ⇔  a·db·bp = b·da·ap with r = (ap/da)/(bp/db)
        let (ap, bp) = (&a.num[pivot], &b.num[pivot]);
        let ok = a.num.par_iter().zip(b.num.par_iter()).all(|(x, y)| x * bp == y * ap);
        ok.then(|| BigRational::new(ap * &b.den, bp * &a.den))
    }

    /// First permutation (by rank) where the two elements differ.
    pub fn witness_difference(&self, other: &Self) -> Option<Permutation> {
        let (a, b) = Self::both_big(self, other);
        let r = (0..a.num.len()).find(|&r| &a.num[r] * &b.den != &b.num[r] * &a.den)?;
        let mut buf = vec![0u8; self.n];
        unrank_into(self.n, r, &mut buf);
        Some(Permutation::from_zero_based(buf).trimmed())
    }

    pub fn embed(&self, m: usize) -> Result<Self> {
        if m == self.n {
            return Ok(self.clone());
        }
        Self::from_algebra(&self.to_algebra(), m)
    }
}

impl PartialEq for DenseElement {
    fn eq(&self, other: &Self) -> bool {
        if self.n != other.n {
            return false;
        }
        // Both sides are kept reduced with a positive denominator.
        match (&self.repr, &other.repr) {
            (Repr::Small(a), Repr::Small(b)) => a == b,
            _ => {
                let (a, b) = Self::both_big(self, other);
                a == b
            }
        }
    }
}

impl Eq for DenseElement {}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symgroup::rat;

    fn via_sparse(sets: &[(&[usize], bool)], n: usize) -> AlgebraElement {
        let mut acc = AlgebraElement::identity(n);
        for (idx, anti) in sets {
            let e = if *anti { AlgebraElement::antisymmetrizer(idx) } else { AlgebraElement::symmetrizer(idx) };
            acc = acc.mul(&e.unwrap());
        }
        acc.embed(n).unwrap()
    }

    #[test]
    fn matches_sparse_product() {
        let sets: Vec<(&[usize], bool)> = vec![(&[1, 2, 4], false), (&[1, 3], true), (&[2, 3, 4], false), (&[2, 4], true)];
        let mut d = DenseElement::identity(4).unwrap();
        for (idx, anti) in &sets {
            d.mul_set(idx, *anti).unwrap();
        }
        assert_eq!(d.to_algebra(), via_sparse(&sets, 4));
    }

    #[test]
    fn perm_factor_and_conj() {
        let mut d = DenseElement::identity(3).unwrap();
        d.mul_set(&[1, 2], false).unwrap();
        let p = Permutation::parse_cycles("(1 2 3)", 3).unwrap();
        d.mul_perm(&p).unwrap();
        let sparse = AlgebraElement::symmetrizer(&[1, 2]).unwrap().mul(&AlgebraElement::from_perm(p, rat(1, 1)));
        assert_eq!(d.to_algebra(), sparse.embed(3).unwrap());
        assert_eq!(d.conj().to_algebra(), sparse.conj().embed(3).unwrap());
    }

    #[test]
    fn full_mul_matches_sparse() {
        let a = AlgebraElement::symmetrizer(&[1, 3]).unwrap().mul(&AlgebraElement::antisymmetrizer(&[1, 2]).unwrap());
        let b = AlgebraElement::antisymmetrizer(&[2, 3]).unwrap();
        let da = DenseElement::from_algebra(&a, 3).unwrap();
        let db = DenseElement::from_algebra(&b, 3).unwrap();
        assert_eq!(da.mul(&db).unwrap().to_algebra(), a.mul(&b).embed(3).unwrap());
        assert_eq!(da.add(&db).unwrap().to_algebra(), a.add(&b).embed(3).unwrap());
    }

    #[test]
    fn big_and_small_agree() {
        let mut d = DenseElement::identity(4).unwrap();
        d.mul_set(&[1, 2, 3, 4], true).unwrap();
        let mut e = d.clone();
        e.promote();
        assert_eq!(d, e);
        assert_eq!(e.to_algebra(), AlgebraElement::antisymmetrizer(&[1, 2, 3, 4]).unwrap());
    }

    #[test]
    fn overflow_promotes() {
        let mut d = DenseElement::identity(3).unwrap();
        d.mul_set(&[1, 2], false).unwrap();
        let huge = BigRational::new(BigInt::from(10).pow(40), BigInt::from(3));
        d.scale(&huge);
        assert!(d.is_big());
        d.scale(&huge.recip());
        assert_eq!(d.to_algebra(), AlgebraElement::symmetrizer(&[1, 2]).unwrap().embed(3).unwrap());
    }

    #[test]
    fn ratio_and_witness() {
        let mut s = DenseElement::identity(2).unwrap();
        s.mul_set(&[1, 2], false).unwrap();
        let mut t = s.clone();
        t.scale(&rat(-5, 7));
        assert_eq!(t.ratio_to(&s), Some(rat(-5, 7)));
        let mut a = DenseElement::identity(2).unwrap();
        a.mul_set(&[1, 2], true).unwrap();
        assert_eq!(a.ratio_to(&s), None);
        assert_eq!(a.witness_difference(&s), Some(Permutation::parse_cycles("(1 2)", 2).unwrap()));
    }
}
