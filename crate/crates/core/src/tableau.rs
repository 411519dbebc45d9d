//! Young and semi-standard irregular tableaux.
//!
//! A tableau is stored as rows of optional cells; a hole is `None`. Rows may
//! start at a nonzero column offset, which is how irregular and amputated
//! tableaux are drawn. Columns are derived: column `j` is the sequence of
//! entries found at position `j`, top to bottom.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::symgroup::{factorial, Permutation};

/// Subgroup orders above this are logged as a warning.
pub const PERMSET_SOFT_LIMIT: usize = 40_320;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tableau {
    rows: Vec<Vec<Option<u32>>>,
}

/// Row or column stabiliser of a tableau as an explicit element list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermSet {
    pub elements: Vec<Permutation>,
    pub signed: bool,
}

impl PermSet {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        let t = p.trimmed();
        self.elements.iter().any(|q| q.trimmed() == t)
    }
}

impl Tableau {
    /// Validates semi-standardness, strips trailing holes and drops rows
    /// without entries.
    pub fn new(rows: Vec<Vec<Option<u32>>>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for v in rows.iter().flatten().flatten() {
            if *v == 0 {
                return Err(Error::invalid("tableau entries must be positive"));
            }
            if !seen.insert(*v) {
                return Err(Error::invalid(format!("entry {v} appears more than once")));
            }
        }
        let rows = rows
            .into_iter()
            .map(|mut r| {
                while r.last() == Some(&None) {
                    r.pop();
                }
                r
            })
            .filter(|r| !r.is_empty())
            .collect();
        Ok(Tableau { rows })
    }

    /// Hole-free rows, left aligned.
    pub fn from_rows(rows: &[Vec<u32>]) -> Result<Self> {
        Self::new(rows.iter().map(|r| r.iter().map(|&v| Some(v)).collect()).collect())
    }

    /// Parses and checks the Young property.
    pub fn young(rows: &[Vec<u32>]) -> Result<Self> {
        let t = Self::from_rows(rows)?;
        if !t.is_young() {
            return Err(Error::invalid(format!("{t} is not a Young tableau")));
        }
        Ok(t)
    }

    pub fn rows(&self) -> &[Vec<Option<u32>>] {
        &self.rows
    }

    pub fn size(&self) -> usize {
        self.rows.iter().flatten().flatten().count()
    }

    pub fn max_entry(&self) -> u32 {
        self.rows.iter().flatten().flatten().copied().max().unwrap_or(0)
    }

    pub fn entries(&self) -> BTreeSet<u32> {
        self.rows.iter().flatten().flatten().copied().collect()
    }

    fn width(&self) -> usize {
        self.rows.iter().map(|r| r.len()).max().unwrap_or(0)
    }

    /// Entries of each row in left-to-right order.
    pub fn row_entries(&self) -> Vec<Vec<u32>> {
        self.rows.iter().map(|r| r.iter().flatten().copied().collect()).collect()
    }

    /// Entries of each column, top to bottom; empty positions are skipped.
    pub fn column_entries(&self) -> Vec<Vec<u32>> {
        (0..self.width())
            .map(|j| self.rows.iter().filter_map(|r| r.get(j).copied().flatten()).collect::<Vec<_>>())
            .filter(|c| !c.is_empty())
            .collect()
    }

    /// Non-hole row lengths.
    pub fn shape(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.iter().flatten().count()).collect()
    }

    pub fn column_lengths(&self) -> Vec<usize> {
        self.column_entries().iter().map(|c| c.len()).collect()
    }

    pub fn is_young(&self) -> bool {
        if self.rows.iter().flatten().any(|c| c.is_none()) {
            return false;
        }
        let shape = self.shape();
        if shape.windows(2).any(|w| w[0] < w[1]) {
            return false;
        }
        let n = self.size() as u32;
        if self.entries() != (1..=n).collect() {
            return false;
        }
        let rows = self.row_entries();
        for (i, r) in rows.iter().enumerate() {
            for j in 0..r.len() {
                if j > 0 && r[j - 1] >= r[j] {
                    return false;
                }
                if i > 0 && rows[i - 1][j] >= r[j] {
                    return false;
                }
            }
        }
        true
    }

    fn require_young(&self) -> Result<()> {
        if self.is_young() {
            Ok(())
        } else {
            Err(Error::invalid(format!("{self} is not a Young tableau")))
        }
    }

    /// `Θ_(m)`: removes the boxes holding the `m` largest entries.
    pub fn ancestor(&self, m: usize) -> Result<Tableau> {
        self.require_young()?;
        let n = self.size();
        if m >= n && n > 0 {
            return Err(Error::invalid(format!("ancestor depth {m} must be below the size {n}")));
        }
        let keep = (n - m) as u32;
        let rows = self
            .row_entries()
            .into_iter()
            .map(|r| r.into_iter().filter(|&v| v <= keep).map(Some).collect())
            .collect();
        Tableau::new(rows)
    }

    /// Whether `self` is obtained from `other` by removing its highest boxes.
    pub fn is_ancestor_of(&self, other: &Tableau) -> bool {
        let (a, b) = (self.size(), other.size());
        a >= 1 && a <= b && self.is_young() && other.ancestor(b - a).map(|t| &t == self).unwrap_or(false)
    }

    fn row_index(&self, r: usize) -> Result<usize> {
        if r == 0 || r > self.rows.len() {
            return Err(Error::invalid(format!("row index {r} out of range 1..={}", self.rows.len())));
        }
        Ok(r - 1)
    }

    fn column_positions(&self) -> Vec<usize> {
        (0..self.width()).filter(|&j| self.rows.iter().any(|r| r.get(j).copied().flatten().is_some())).collect()
    }

    /// `Ampc[Θ][R]`: deletes every column that has no box in row `r`
    /// (1-based) and closes the gaps; rows left without entries vanish.
    pub fn amputate_columns(&self, r: usize) -> Result<Tableau> {
        let ri = self.row_index(r)?;
        let keep: Vec<usize> = self
            .column_positions()
            .into_iter()
            .filter(|&j| self.rows[ri].get(j).copied().flatten().is_some())
            .collect();
        let rows = self.rows.iter().map(|row| keep.iter().map(|&j| row.get(j).copied().flatten()).collect()).collect();
        Tableau::new(rows)
    }

    /// `Ampc` by the entry set of a row rather than its index.
    pub fn amputate_columns_by_set(&self, set: &[u32]) -> Result<Tableau> {
        let want: BTreeSet<u32> = set.iter().copied().collect();
        let r = self
            .row_entries()
            .iter()
            .position(|row| row.iter().copied().collect::<BTreeSet<_>>() == want)
            .ok_or_else(|| Error::invalid(format!("no row with entries {set:?}")))?;
        self.amputate_columns(r + 1)
    }

    /// `Ampr[Θ][C]`: deletes every row that has no box in column `c`
    /// (1-based, counting only columns that hold entries).
    pub fn amputate_rows(&self, c: usize) -> Result<Tableau> {
        let cols = self.column_positions();
        if c == 0 || c > cols.len() {
            return Err(Error::invalid(format!("column index {c} out of range 1..={}", cols.len())));
        }
        let j = cols[c - 1];
        let rows: Vec<Vec<Option<u32>>> =
            self.rows.iter().filter(|row| row.get(j).copied().flatten().is_some()).cloned().collect();
        let kept = Tableau { rows };
        let live = kept.column_positions();
        let rows = kept.rows.iter().map(|row| live.iter().map(|&k| row.get(k).copied().flatten()).collect()).collect();
        Tableau::new(rows)
    }

    pub fn amputate_rows_by_set(&self, set: &[u32]) -> Result<Tableau> {
        let want: BTreeSet<u32> = set.iter().copied().collect();
        let c = self
            .column_entries()
            .iter()
            .position(|col| col.iter().copied().collect::<BTreeSet<_>>() == want)
            .ok_or_else(|| Error::invalid(format!("no column with entries {set:?}")))?;
        self.amputate_rows(c + 1)
    }

    /// Product of hook lengths (arm + leg + 1) over all boxes.
    pub fn hook_product(&self) -> Result<BigInt> {
        self.require_young()?;
        Ok(self.shape_hook_product())
    }

    /// Left-aligned, hole-free rows of weakly decreasing length; entries
    /// may be any distinct labels.
    pub fn is_young_shaped(&self) -> bool {
        !self.rows.iter().flatten().any(|c| c.is_none()) && self.shape().windows(2).all(|w| w[0] >= w[1])
    }

    /// `α` of the shape, valid for relabelled Young tableaux as well.
    pub fn shape_alpha(&self) -> Result<BigRational> {
        if !self.is_young_shaped() {
            return Err(Error::invalid(format!("{self} does not have a Young shape")));
        }
        Ok(BigRational::new(self.row_col_factorials(), self.shape_hook_product()))
    }

    fn shape_hook_product(&self) -> BigInt {
        let shape = self.shape();
        let cols = self.column_lengths();
        let mut h = BigInt::from(1);
        for (i, &len) in shape.iter().enumerate() {
            for (j, &col_len) in cols.iter().enumerate().take(len) {
                h *= BigInt::from((len - j - 1) + (col_len - i - 1) + 1);
            }
        }
        h
    }

    /// `∏ row! · ∏ column!`, the normalisation of `Σ_h Σ_v`.
    pub fn row_col_factorials(&self) -> BigInt {
        let f = |v: Vec<usize>| v.into_iter().map(|k| BigInt::from(factorial(k))).product::<BigInt>();
        f(self.shape()) * f(self.column_lengths())
    }

    /// `α_Θ = ∏ row! ∏ column! / H_Θ`, making `α S_Θ A_Θ` idempotent.
    pub fn alpha(&self) -> Result<BigRational> {
        Ok(BigRational::new(self.row_col_factorials(), self.hook_product()?))
    }

    fn stabilizer(groups: Vec<Vec<u32>>, degree: usize, signed: bool) -> PermSet {
        let mut elements = vec![Permutation::identity(degree)];
        for g in groups.iter().filter(|g| g.len() > 1) {
            let local = Permutation::all(g.len());
            let mut next = Vec::with_capacity(elements.len() * local.len());
            for e in &elements {
                for l in &local {
                    let mut images: Vec<usize> = (1..=degree).collect();
                    for (i, &src) in g.iter().enumerate() {
                        images[src as usize - 1] = g[l.apply(i + 1) - 1] as usize;
                    }
                    next.push(e.compose(&Permutation::from_images(&images).unwrap()));
                }
            }
            elements = next;
        }
        if elements.len() > PERMSET_SOFT_LIMIT {
            log::warn!("stabiliser has {} elements (soft limit {PERMSET_SOFT_LIMIT})", elements.len());
        }
        elements.sort();
        PermSet { elements, signed }
    }

    /// `h_Θ`: permutations that only move entries within rows.
    pub fn horizontal_perms(&self) -> PermSet {
        Self::stabilizer(self.row_entries(), self.max_entry() as usize, false)
    }

    /// `v_Θ`: permutations that only move entries within columns (signed).
    pub fn vertical_perms(&self) -> PermSet {
        Self::stabilizer(self.column_entries(), self.max_entry() as usize, true)
    }

    /// Relabels every entry `v` as `p(v)`.
    pub fn relabel(&self, p: &Permutation) -> Tableau {
        let rows = self.rows.iter().map(|r| r.iter().map(|c| c.map(|v| p.apply(v as usize) as u32)).collect()).collect();
        Tableau { rows }
    }

    /// `Ψ∖{a_1..a_m}`: the listed boxes become holes.
    pub fn delete_entries(&self, entries: &[u32]) -> Result<Tableau> {
        let have = self.entries();
        if let Some(v) = entries.iter().find(|v| !have.contains(v)) {
            return Err(Error::invalid(format!("entry {v} is not in {self}")));
        }
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(|c| c.filter(|v| !entries.contains(v))).collect())
            .collect();
        Tableau::new(rows)
    }

    /// Shape including hole positions, used for same-shape checks.
    fn cell_layout(&self) -> Vec<Vec<bool>> {
        self.rows.iter().map(|r| r.iter().map(|c| c.is_some()).collect()).collect()
    }

    pub fn same_shape(&self, other: &Tableau) -> bool {
        self.cell_layout() == other.cell_layout()
    }

    /// Every standard Young tableau with `n` boxes.
    pub fn all_young(n: usize) -> Vec<Tableau> {
        let mut out = Vec::new();
        let mut rows: Vec<Vec<u32>> = Vec::new();
        fn grow(rows: &mut Vec<Vec<u32>>, next: u32, n: u32, out: &mut Vec<Tableau>) {
            if next > n {
                out.push(Tableau::from_rows(rows).unwrap());
                return;
            }
            for i in 0..=rows.len() {
                let ok = if i == rows.len() { true } else { i == 0 || rows[i - 1].len() > rows[i].len() };
                if !ok {
                    continue;
                }
                if i == rows.len() {
                    rows.push(vec![next]);
                    grow(rows, next + 1, n, out);
                    rows.pop();
                } else {
                    rows[i].push(next);
                    grow(rows, next + 1, n, out);
                    rows[i].pop();
                }
            }
        }
        if n == 0 {
            return vec![Tableau { rows: vec![] }];
        }
        grow(&mut rows, 1, n as u32, &mut out);
        out
    }
}

/// `ρ_ΘΦ` with `Θ = ρ_ΘΦ(Φ)` entrywise.
pub fn tableau_permutation(theta: &Tableau, phi: &Tableau) -> Result<Permutation> {
    if !theta.same_shape(phi) || theta.entries() != phi.entries() {
        return Err(Error::invalid(format!("{theta} and {phi} do not have the same shape and entries")));
    }
    let degree = theta.max_entry() as usize;
    let mut images: Vec<usize> = (1..=degree).collect();
    for (rt, rp) in theta.rows.iter().zip(&phi.rows) {
        for (ct, cp) in rt.iter().zip(rp) {
            if let (Some(t), Some(p)) = (ct, cp) {
                images[*p as usize - 1] = *t as usize;
            }
        }
    }
    Permutation::from_images(&images)
}

/// Recovers a tableau whose row and column entry sets are the given ones.
///
/// Entries covered by only one family get a singleton in the other. A Young
/// arrangement is preferred; otherwise rows keep their given order and
/// column positions follow first appearance.
pub fn reconstruct_tableau(row_sets: &[Vec<u32>], col_sets: &[Vec<u32>]) -> Option<Tableau> {
    let (rows, cols) = complete_families(row_sets, col_sets)?;
    let col_of: BTreeMap<u32, usize> = cols.iter().enumerate().flat_map(|(i, c)| c.iter().map(move |&v| (v, i))).collect();

    let mut young_rows: Vec<Vec<u32>> = rows
        .iter()
        .map(|r| {
            let mut r = r.clone();
            r.sort_unstable();
            r
        })
        .collect();
    young_rows.sort_by_key(|r| r[0]);
    if let Ok(t) = Tableau::from_rows(&young_rows) {
        if t.is_young() && same_family(&t.column_entries(), &cols) {
            return Some(t);
        }
    }

    let mut position: BTreeMap<usize, usize> = BTreeMap::new();
    let mut grid = Vec::new();
    for r in &rows {
        let mut sorted = r.clone();
        sorted.sort_unstable();
        let mut cells: Vec<(usize, u32)> = Vec::new();
        for v in sorted {
            let next = position.len();
            let pos = *position.entry(col_of[&v]).or_insert(next);
            cells.push((pos, v));
        }
        let width = cells.iter().map(|(p, _)| p + 1).max().unwrap_or(0);
        let mut row = vec![None; width];
        for (p, v) in cells {
            row[p] = Some(v);
        }
        grid.push(row);
    }
    let t = Tableau::new(grid).ok()?;
    same_family(&t.column_entries(), &cols).then_some(t)
}

/// Like [`reconstruct_tableau`] but only succeeds when the sets can be laid
/// out in a Young shape (a relabelled Young tableau). Standard labelling is
/// preferred when it exists.
pub fn young_shaped_tableau(row_sets: &[Vec<u32>], col_sets: &[Vec<u32>]) -> Option<Tableau> {
    let t = reconstruct_tableau(row_sets, col_sets)?;
    if t.is_young() {
        return Some(t);
    }
    let (mut rows, mut cols) = complete_families(row_sets, col_sets)?;
    let key = |s: &Vec<u32>| (std::cmp::Reverse(s.len()), s.iter().min().copied());
    rows.sort_by_key(key);
    cols.sort_by_key(key);
    let col_of: BTreeMap<u32, usize> = cols.iter().enumerate().flat_map(|(i, c)| c.iter().map(move |&v| (v, i))).collect();
    let mut grid = Vec::new();
    for r in &rows {
        let mut cells: Vec<(usize, u32)> = r.iter().map(|v| (col_of[v], *v)).collect();
        cells.sort_unstable();
        if cells.iter().enumerate().any(|(j, (c, _))| *c != j) {
            return None;
        }
        grid.push(cells.into_iter().map(|(_, v)| v).collect::<Vec<_>>());
    }
    let t = Tableau::from_rows(&grid).ok()?;
    (t.is_young_shaped() && same_family(&t.column_entries(), &cols)).then_some(t)
}

fn same_family(a: &[Vec<u32>], b: &[Vec<u32>]) -> bool {
    let norm = |f: &[Vec<u32>]| f.iter().map(|s| s.iter().copied().collect::<BTreeSet<u32>>()).collect::<BTreeSet<_>>();
    norm(a) == norm(b)
}

/// Completes both families with singletons so that they cover the same
/// entries; `None` if a family is not disjoint or a row meets a column
/// more than once.
fn complete_families(row_sets: &[Vec<u32>], col_sets: &[Vec<u32>]) -> Option<(Vec<Vec<u32>>, Vec<Vec<u32>>)> {
    let disjoint = |sets: &[Vec<u32>]| {
        let mut seen = BTreeSet::new();
        sets.iter().flatten().all(|v| *v > 0 && seen.insert(*v))
    };
    if !disjoint(row_sets) || !disjoint(col_sets) {
        return None;
    }
    let universe: BTreeSet<u32> = row_sets.iter().chain(col_sets).flatten().copied().collect();
    let mut rows: Vec<Vec<u32>> = row_sets.iter().filter(|r| !r.is_empty()).cloned().collect();
    let mut cols: Vec<Vec<u32>> = col_sets.iter().filter(|c| !c.is_empty()).cloned().collect();
    let in_rows: BTreeSet<u32> = rows.iter().flatten().copied().collect();
    let in_cols: BTreeSet<u32> = cols.iter().flatten().copied().collect();
    rows.extend(universe.iter().filter(|v| !in_rows.contains(v)).map(|&v| vec![v]));
    cols.extend(universe.iter().filter(|v| !in_cols.contains(v)).map(|&v| vec![v]));
    for r in &rows {
        for c in &cols {
            if r.iter().filter(|v| c.contains(v)).count() > 1 {
                return None;
            }
        }
    }
    Some((rows, cols))
}

impl fmt::Display for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (j, c) in r.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                match c {
                    Some(v) => write!(f, "{v}")?,
                    None => write!(f, "_")?,
                }
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Parses `[[1,2,3],[_,5]]`; whitespace is ignored.
pub fn parse_tableau(text: &str) -> Result<Tableau> {
    let chars: Vec<(usize, char)> = text.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
    let mut i = 0;
    let end = text.len();
    let at = |i: usize| chars.get(i).map(|&(p, _)| p).unwrap_or(end);
    let expect = |i: &mut usize, want: char| -> Result<()> {
        match chars.get(*i) {
            Some(&(_, c)) if c == want => {
                *i += 1;
                Ok(())
            }
            Some(&(p, c)) => Err(Error::parse(p, format!("expected '{want}', found '{c}'"))),
            None => Err(Error::parse(end, format!("expected '{want}', found end of input"))),
        }
    };
    expect(&mut i, '[')?;
    let mut rows = Vec::new();
    if chars.get(i).map(|c| c.1) == Some(']') {
        i += 1;
    } else {
        loop {
            expect(&mut i, '[')?;
            let mut row = Vec::new();
            loop {
                match chars.get(i) {
                    Some(&(_, '_')) => {
                        row.push(None);
                        i += 1;
                    }
                    Some(&(p, c)) if c.is_ascii_digit() => {
                        let mut v: u64 = 0;
                        while let Some(&(_, d)) = chars.get(i).filter(|c| c.1.is_ascii_digit()) {
                            v = v * 10 + d.to_digit(10).unwrap() as u64;
                            if v > u32::MAX as u64 {
                                return Err(Error::parse(p, "entry too large"));
                            }
                            i += 1;
                        }
                        row.push(Some(v as u32));
                    }
                    _ => return Err(Error::parse(at(i), "expected an entry or '_'")),
                }
                match chars.get(i) {
                    Some(&(_, ',')) => i += 1,
                    Some(&(_, ']')) => {
                        i += 1;
                        break;
                    }
                    _ => return Err(Error::parse(at(i), "expected ',' or ']' in row")),
                }
            }
            if row.iter().all(|c| c.is_none()) {
                return Err(Error::parse(at(i.saturating_sub(1)), "row without entries"));
            }
            rows.push(row);
            match chars.get(i) {
                Some(&(_, ',')) => i += 1,
                Some(&(_, ']')) => {
                    i += 1;
                    break;
                }
                _ => return Err(Error::parse(at(i), "expected ',' or ']' after row")),
            }
        }
    }
    if i != chars.len() {
        return Err(Error::parse(at(i), "trailing input after tableau"));
    }
    Tableau::new(rows).map_err(|e| match e {
        Error::Invalid(msg) => Error::parse(0, msg),
        other => other,
    })
}

impl FromStr for Tableau {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_tableau(s)
    }
}

impl Serialize for Tableau {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Tableau {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_tableau(&s).map_err(serde::de::Error::custom)
    }
}
