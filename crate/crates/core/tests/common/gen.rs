//! Seeded random generators for tableaux and operators.

use birdtrack::expr::{BirdtrackExpr, Factor, SetKind};
use birdtrack::{Permutation, Tableau};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// Standard Young tableau grown one box at a time at a random corner.
pub fn young(n: usize, rng: &mut ChaCha8Rng) -> Tableau {
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for k in 1..=n as u32 {
        let corners: Vec<usize> = (0..=rows.len()).filter(|&i| i == 0 || i == rows.len() || rows[i].len() < rows[i - 1].len()).collect();
        let i = corners[rng.random_range(0..corners.len())];
        if i == rows.len() {
            rows.push(vec![k]);
        } else {
            rows[i].push(k);
        }
    }
    Tableau::young(&rows).unwrap()
}

/// Same shape, entries sent through a random injection into `1..=n`.
pub fn relabel(t: &Tableau, n: usize, rng: &mut ChaCha8Rng) -> Tableau {
    let mut target: Vec<u32> = (1..=n as u32).collect();
    target.shuffle(rng);
    let rows: Vec<Vec<u32>> = t.row_entries().iter().map(|r| r.iter().map(|&v| target[v as usize - 1]).collect()).collect();
    Tableau::from_rows(&rows).unwrap()
}

/// A partition of `universe` coarser than `blocks`: random merges.
pub fn coarsen(blocks: &[Vec<u32>], universe: &[u32], rng: &mut ChaCha8Rng) -> Vec<Vec<u32>> {
    let mut parts: Vec<Vec<u32>> = blocks.to_vec();
    for &v in universe {
        if !parts.iter().flatten().any(|&w| w == v) {
            parts.push(vec![v]);
        }
    }
    let merges = rng.random_range(0..=parts.len().saturating_sub(1).min(3));
    for _ in 0..merges {
        if parts.len() < 2 {
            break;
        }
        let i = rng.random_range(0..parts.len());
        let a = parts.swap_remove(i);
        let j = rng.random_range(0..parts.len());
        parts[j].extend(a);
    }
    parts
}

/// Random sets, each a subset (of size at least two) of some block.
pub fn refine(blocks: &[Vec<u32>], rng: &mut ChaCha8Rng) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for b in blocks {
        if b.len() >= 2 && rng.random_bool(0.7) {
            let mut b = b.clone();
            b.shuffle(rng);
            let k = rng.random_range(2..=b.len());
            out.push(b[..k].to_vec());
        }
    }
    if out.is_empty() {
        if let Some(b) = blocks.iter().find(|b| b.len() >= 2) {
            out.push(b[..2].to_vec());
        }
    }
    out
}

pub fn has_both_factors(t: &Tableau) -> bool {
    t.shape()[0] >= 2 && t.shape().len() >= 2
}

/// `A_Φ1 S_Θ A_Θ S_Φ2` (or its kind-swapped mirror) with the inclusion
/// conditions satisfied by construction, degree at most `n_max`.
pub fn wedge(n_max: usize, rng: &mut ChaCha8Rng) -> BirdtrackExpr {
    loop {
        let n = rng.random_range(3..=n_max);
        let m = rng.random_range(3..=n);
        let t = young(m, rng);
        if !has_both_factors(&t) {
            continue;
        }
        let t = relabel(&t, n, rng);
        let universe: Vec<u32> = (1..=n as u32).collect();
        let rows = t.row_entries();
        let cols = t.column_entries();
        let outer_rows = coarsen(&rows, &universe, rng);
        let outer_cols = coarsen(&cols, &universe, rng);
        let factors = if rng.random_bool(0.5) {
            vec![Factor::anti(&outer_cols), Factor::sym(&rows), Factor::anti(&cols), Factor::sym(&outer_rows)]
        } else {
            vec![Factor::sym(&outer_rows), Factor::anti(&cols), Factor::sym(&rows), Factor::anti(&outer_cols)]
        };
        let e = BirdtrackExpr::from_factors(factors);
        if e.factors.len() == 4 {
            return e;
        }
    }
}

fn relabel_sets(sets: &[Vec<u32>], p: &Permutation) -> Vec<Vec<u32>> {
    sets.iter().map(|s| s.iter().map(|&v| p.apply(v as usize) as u32).collect()).collect()
}

/// `S_Θ M A_Θ` with `M` built from absorbable blocks and conjugated
/// blocks, so that a structural certificate exists. Returns `Θ` too.
pub fn certified(n_max: usize, rng: &mut ChaCha8Rng) -> (Tableau, BirdtrackExpr) {
    loop {
        let n = rng.random_range(2..=n_max);
        let t = young(n, rng);
        if !has_both_factors(&t) {
            continue;
        }
        let (rows, cols) = (t.row_entries(), t.column_entries());
        let mut factors = vec![Factor::sym(&rows)];
        for _ in 0..rng.random_range(1..=3) {
            if rng.random_bool(0.3) {
                let images = {
                    let mut v: Vec<usize> = (1..=n).collect();
                    v.shuffle(rng);
                    v
                };
                let p = Permutation::from_images(&images).unwrap();
                let pinv = p.inverse();
                factors.push(Factor::perm(p.clone()));
                factors.push(Factor::anti(&relabel_sets(&refine(&cols, rng), &pinv)));
                factors.push(Factor::sym(&relabel_sets(&refine(&rows, rng), &pinv)));
                factors.push(Factor::perm(pinv));
            } else {
                factors.push(Factor::anti(&refine(&cols, rng)));
                factors.push(Factor::sym(&refine(&rows, rng)));
            }
        }
        factors.push(Factor::anti(&cols));
        let e = BirdtrackExpr::from_factors(factors);
        if e.factors.len() > 2 && e.factors.first().unwrap().kind() == Some(SetKind::Sym) && e.factors.last().unwrap().kind() == Some(SetKind::Anti) {
            return (t, e);
        }
    }
}

/// Products of a few set factors drawn from random tableaux at degree `n`,
/// with the occasional permutation; rules have a fair chance to fire.
pub fn operator(n: usize, len: usize, rng: &mut ChaCha8Rng) -> BirdtrackExpr {
    let pool: Vec<Tableau> = (0..2).map(|_| young(n, rng)).collect();
    let mut factors = Vec::new();
    for _ in 0..len {
        let t = &pool[rng.random_range(0..pool.len())];
        match rng.random_range(0..10) {
            0 => {
                let mut v: Vec<usize> = (1..=n).collect();
                v.shuffle(rng);
                factors.push(Factor::perm(Permutation::from_images(&v).unwrap()));
            }
            1..=4 => factors.push(Factor::sym(&if rng.random_bool(0.5) { t.row_entries() } else { refine(&t.row_entries(), rng) })),
            _ => factors.push(Factor::anti(&if rng.random_bool(0.5) { t.column_entries() } else { refine(&t.column_entries(), rng) })),
        }
    }
    BirdtrackExpr::from_factors(factors)
}
