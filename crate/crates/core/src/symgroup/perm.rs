use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A permutation of the points `1..=n`.
///
/// Stored as the 0-based image array. Composition follows the birdtrack
/// reading direction: in `a.compose(&b)` the right factor `b` acts first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u8>,
}

pub const MAX_DEGREE: usize = u8::MAX as usize;

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        assert!(degree <= MAX_DEGREE, "degree {degree} exceeds {MAX_DEGREE}");
        Permutation { images: (0..degree as u8).collect() }
    }

    /// Builds a permutation from 1-based images, `images[i-1] = σ(i)`.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let n = images.len();
        if n > MAX_DEGREE {
            return Err(Error::invalid(format!("degree {n} exceeds {MAX_DEGREE}")));
        }
        let mut seen = vec![false; n];
        let mut out = Vec::with_capacity(n);
        for &im in images {
            if im == 0 || im > n || seen[im - 1] {
                return Err(Error::invalid(format!("{images:?} is not a permutation of 1..={n}")));
            }
            seen[im - 1] = true;
            out.push((im - 1) as u8);
        }
        Ok(Permutation { images: out })
    }

    pub(crate) fn from_zero_based(images: Vec<u8>) -> Self {
        debug_assert!({
            let mut s = images.clone();
            s.sort_unstable();
            s.iter().enumerate().all(|(i, &v)| i == v as usize)
        });
        Permutation { images }
    }

    /// Product of disjoint or overlapping cycles given with 1-based points,
    /// composed so that the last cycle acts first.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let needed = cycles.iter().flatten().copied().max().unwrap_or(0);
        if needed > degree {
            return Err(Error::invalid(format!("cycle point {needed} exceeds degree {degree}")));
        }
        let mut acc = Permutation::identity(degree);
        for cycle in cycles {
            let mut c = Permutation::identity(degree);
            let mut dup = vec![false; degree + 1];
            for &p in cycle {
                if p == 0 || dup[p] {
                    return Err(Error::invalid(format!("malformed cycle {cycle:?}")));
                }
                dup[p] = true;
            }
            for (i, &p) in cycle.iter().enumerate() {
                let next = cycle[(i + 1) % cycle.len()];
                c.images[p - 1] = (next - 1) as u8;
            }
            acc = acc.compose(&c);
        }
        Ok(acc)
    }

    pub fn transposition(degree: usize, a: usize, b: usize) -> Self {
        let mut p = Permutation::identity(degree);
        p.images.swap(a - 1, b - 1);
        p
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of the 1-based point `i`; points beyond the degree are fixed.
    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        if i == 0 || i > self.images.len() {
            i
        } else {
            self.images[i - 1] as usize + 1
        }
    }

    pub(crate) fn images0(&self) -> &[u8] {
        &self.images
    }

    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&v| v as usize + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i == v as usize)
    }

    /// `self ∘ other`: apply `other` first, then `self`. Degrees are
    /// equalised by the canonical embedding.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        let n = self.degree().max(other.degree());
        let mut images = Vec::with_capacity(n);
        for i in 0..n {
            let mid = if i < other.images.len() { other.images[i] as usize } else { i };
            let out = if mid < self.images.len() { self.images[mid] } else { mid as u8 };
            images.push(out);
        }
        Permutation { images }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u8; self.images.len()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v as usize] = i as u8;
        }
        Permutation { images: inv }
    }

    /// Canonical embedding into `S_m`: fixes the points `n+1..=m`.
    pub fn embed(&self, m: usize) -> Result<Permutation> {
        if m < self.degree() {
            return Err(Error::invalid(format!(
                "cannot embed degree {} into smaller degree {m}",
                self.degree()
            )));
        }
        if m > MAX_DEGREE {
            return Err(Error::invalid(format!("degree {m} exceeds {MAX_DEGREE}")));
        }
        let mut images = self.images.clone();
        images.extend(self.degree() as u8..m as u8);
        Ok(Permutation { images })
    }

    /// Smallest degree on which this permutation acts nontrivially.
    pub fn support_degree(&self) -> usize {
        self.images
            .iter()
            .enumerate()
            .rev()
            .find(|(i, &v)| *i != v as usize)
            .map(|(i, _)| i + 1)
            .unwrap_or(0)
    }

    /// Drops trailing fixed points (`id` becomes degree 0).
    pub fn trimmed(&self) -> Permutation {
        Permutation { images: self.images[..self.support_degree()].to_vec() }
    }

    /// Nontrivial cycles, 1-based, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start + 1];
            seen[start] = true;
            let mut cur = self.images[start] as usize;
            while cur != start {
                seen[cur] = true;
                cycle.push(cur + 1);
                cur = self.images[cur] as usize;
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    /// Number of cycles including fixed points.
    pub fn cycle_count(&self) -> usize {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut count = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            count += 1;
            let mut cur = start;
            while !seen[cur] {
                seen[cur] = true;
                cur = self.images[cur] as usize;
            }
        }
        count
    }

    pub fn sign(&self) -> i32 {
        if (self.degree() - self.cycle_count()) % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Parses cycle notation such as `(1 2)(3 4)`, `(1,2,3)`, `()` or `id`.
    /// The degree is the largest point mentioned unless `min_degree` is larger.
    pub fn parse_cycles(text: &str, min_degree: usize) -> Result<Permutation> {
        let cycles = parse_cycle_list(text)?;
        let degree = cycles.iter().flatten().copied().max().unwrap_or(0).max(min_degree);
        Permutation::from_cycles(degree, &cycles)
    }

    /// Every permutation of `S_n` in lexicographic order of image arrays.
    pub fn all(n: usize) -> Vec<Permutation> {
        let count = factorial(n);
        (0..count).map(|r| unrank(n, r)).collect()
    }
}

pub(crate) fn parse_cycle_list(text: &str) -> Result<Vec<Vec<usize>>> {
    let t = text.trim();
    if t == "id" || t.is_empty() {
        return Ok(Vec::new());
    }
    let bytes = t.as_bytes();
    let mut cycles = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b' ' | b'\t' | b'\n' => i += 1,
            b'(' => {
                let close = t[i..]
                    .find(')')
                    .map(|j| i + j)
                    .ok_or_else(|| Error::parse(i, "unclosed '(' in cycle notation"))?;
                let body = &t[i + 1..close];
                let mut cycle = Vec::new();
                for tok in body.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()) {
                    let v: usize = tok
                        .parse()
                        .map_err(|_| Error::parse(i + 1, format!("bad cycle entry '{tok}'")))?;
                    if v == 0 {
                        return Err(Error::parse(i + 1, "cycle points are 1-based"));
                    }
                    cycle.push(v);
                }
                // `(12)` without separators: read as single digits.
                if cycle.len() == 1 && body.trim().len() > 1 && body.trim().chars().all(|c| c.is_ascii_digit()) {
                    cycle = body.trim().bytes().map(|b| (b - b'0') as usize).collect();
                    if cycle.contains(&0) {
                        return Err(Error::parse(i + 1, "cycle points are 1-based"));
                    }
                }
                if cycle.len() > 1 {
                    cycles.push(cycle);
                }
                i = close + 1;
            }
            _ => return Err(Error::parse(i, format!("unexpected character '{}' in cycle notation", bytes[i] as char))),
        }
    }
    Ok(cycles)
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Lexicographic rank of a 0-based image array among all of `S_n`.
pub(crate) fn rank(images: &[u8]) -> usize {
    let n = images.len();
    let mut r = 0usize;
    let mut used: u32 = 0;
    for (i, &v) in images.iter().enumerate() {
        let smaller_unused = (v as u32) - (used & ((1u32 << v) - 1)).count_ones();
        r = r * (n - i) + smaller_unused as usize;
        used |= 1 << v;
    }
    r
}

pub(crate) fn unrank_into(n: usize, mut r: usize, out: &mut [u8]) {
    let mut digits = [0usize; 32];
    for i in (0..n).rev() {
        let base = n - i;
        digits[i] = r % base;
        r /= base;
    }
    let mut avail: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    for i in 0..n {
        let mut k = digits[i];
        let mut bits = avail;
        loop {
            let low = bits.trailing_zeros();
            if k == 0 {
                out[i] = low as u8;
                avail &= !(1 << low);
                break;
            }
            k -= 1;
            bits &= bits - 1;
        }
    }
}

pub(crate) fn unrank(n: usize, r: usize) -> Permutation {
    let mut images = vec![0u8; n];
    unrank_into(n, r, &mut images);
    Permutation { images }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write!(f, "(")?;
            for (i, p) in c.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{p}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}[n={}]", self.degree())
    }
}

impl FromStr for Permutation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Permutation::parse_cycles(s, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize) -> Permutation {
        Permutation::parse_cycles(s, n).unwrap()
    }

    #[test]
    fn transposition_squares_to_identity() {
        let t = p("(1 2)", 2);
        assert!(t.compose(&t).is_identity());
    }

    #[test]
    fn right_factor_acts_first() {
        // (23)∘(12): 1 -> 2 -> 3, 3 -> 3 -> 2, 2 -> 1 -> 1
        let r = p("(2 3)", 3).compose(&p("(1 2)", 3));
        assert_eq!(r.images(), vec![3, 1, 2]);
        assert_eq!(r, p("(1 3 2)", 3));
    }

    #[test]
    fn identity_is_neutral() {
        let s = p("(1 3)(2 4 5)", 5);
        assert_eq!(Permutation::identity(5).compose(&s), s);
        assert_eq!(s.compose(&Permutation::identity(5)), s);
    }

    #[test]
    fn signs() {
        assert_eq!(Permutation::identity(4).sign(), 1);
        assert_eq!(p("(1 2)", 2).sign(), -1);
        assert_eq!(p("(1 2 4)(3 5)", 5).sign(), -1);
    }

    #[test]
    fn cycle_printing_roundtrip() {
        let s = p("(3 5)(1 2 4)", 5);
        assert_eq!(s.to_string(), "(1 2 4)(3 5)");
        assert_eq!(p(&s.to_string(), 5), s);
        assert_eq!(Permutation::identity(3).to_string(), "()");
        assert_eq!(p("(12)", 0), p("(1 2)", 0));
        assert_eq!(p("(1,2,3)", 0), p("(1 2 3)", 0));
    }

    #[test]
    fn parse_errors() {
        assert!(Permutation::parse_cycles("(1 2", 0).is_err());
        assert!(Permutation::parse_cycles("(0 1)", 0).is_err());
        assert!(Permutation::parse_cycles("(1 1)", 0).is_err());
        assert!(Permutation::parse_cycles("x", 0).is_err());
    }

    #[test]
    fn embedding() {
        let s = p("(1 2)", 2);
        let e = s.embed(5).unwrap();
        assert_eq!(e.images(), vec![2, 1, 3, 4, 5]);
        assert_eq!(s.embed(2).unwrap(), s);
        assert_eq!(s.embed(4).unwrap().embed(6).unwrap(), s.embed(6).unwrap());
        assert!(e.embed(3).is_err());
    }

    #[test]
    fn rank_unrank_bijection() {
        for n in 0..=6 {
            let all = Permutation::all(n);
            assert_eq!(all.len(), factorial(n));
            for (r, q) in all.iter().enumerate() {
                assert_eq!(rank(q.images0()), r);
            }
            let mut sorted = all.clone();
            sorted.sort();
            assert_eq!(sorted, all);
        }
    }

    #[test]
    fn inverse_composes_to_identity() {
        for q in Permutation::all(4) {
            assert!(q.compose(&q.inverse()).is_identity());
        }
    }
}
