use super::{Block, NonzeroCertificate};
use crate::error::{Error, Result};
use crate::expr::{normalize_sets, sets_absorbed, BirdtrackExpr, Factor, SetKind};
use crate::symgroup::Permutation;
use crate::tableau::{young_shaped_tableau, Tableau};

fn absorbed(f: &Factor, rows: &[Vec<u32>], cols: &[Vec<u32>], want: SetKind) -> bool {
    match f {
        Factor::Set { kind, sets, .. } if *kind == want => {
            sets_absorbed(sets, if want == SetKind::Sym { rows } else { cols })
        }
        _ => false,
    }
}

/// Length of the longest prefix of `m` made of set factors each absorbed by
/// the outer factor of its kind. Absorption reduces any such run to the
/// alternating `A S A S … S` form.
fn inclusion_prefix(m: &[Factor], rows: &[Vec<u32>], cols: &[Vec<u32>]) -> usize {
    m.iter()
        .take_while(|f| f.kind().is_some_and(|k| absorbed(f, rows, cols, k)))
        .count()
}

fn relabel_sets(sets: &[Vec<u32>], p: &Permutation) -> Vec<Vec<u32>> {
    sets.iter().map(|s| s.iter().map(|&v| p.apply(v as usize) as u32).collect()).collect()
}

fn conjugated(m: &[Factor], rows: &[Vec<u32>], cols: &[Vec<u32>]) -> Option<Permutation> {
    let (first, last) = (m.first()?.as_perm()?, m.last()?.as_perm()?);
    if m.len() < 3 || !first.compose(last).is_identity() {
        return None;
    }
    m[1..m.len() - 1]
        .iter()
        .all(|f| match f {
            Factor::Set { kind, sets, .. } => {
                sets_absorbed(&relabel_sets(sets, first), if *kind == SetKind::Sym { rows } else { cols })
            }
            _ => false,
        })
        .then(|| first.clone())
}

/// Structural nonzero test for `O = S_Θ · M · A_Θ` (or `A_Θ · M · S_Θ`),
/// `e` spanning exactly that operator.
pub fn certify_nonzero(e: &BirdtrackExpr, theta: &Tableau) -> Result<NonzeroCertificate> {
    let n = e.factors.len();
    if n < 2 {
        return Err(Error::refused("expression is not of the form S M A"));
    }
    let (rows, cols) = (normalize_sets(&theta.row_entries()), normalize_sets(&theta.column_entries()));
    let ends: Vec<Vec<Vec<u32>>> = [&e.factors[0], &e.factors[n - 1]]
        .iter()
        .map(|f| f.sets().map(normalize_sets).unwrap_or_default())
        .collect();
    let matches = match e.factors[0].kind() {
        Some(SetKind::Sym) => ends[0] == rows && ends[1] == cols,
        Some(SetKind::Anti) => ends[0] == cols && ends[1] == rows,
        None => false,
    };
    if !matches {
        return Err(Error::refused(format!("outer factors are not the rows and columns of {theta}")));
    }
    Ok(certify_span(e, 0, n - 1)?.1)
}

fn certify_factors(rows: &[Vec<u32>], cols: &[Vec<u32>], m: &[Factor]) -> NonzeroCertificate {
    if inclusion_prefix(m, rows, cols) == m.len() {
        return NonzeroCertificate::Inclusion;
    }
    if let Some(p) = conjugated(m, rows, cols) {
        return NonzeroCertificate::Conjugated { perm: p.trimmed().to_string() };
    }
    let mut blocks = Vec::new();
    let mut i = 0;
    while i < m.len() {
        let len = inclusion_prefix(&m[i..], rows, cols);
        if len > 0 {
            blocks.push(Block { start: i, end: i + len, certificate: NonzeroCertificate::Inclusion });
            i += len;
            continue;
        }
        let found = (i + 2..m.len())
            .filter(|&j| m[j].as_perm().is_some())
            .find_map(|j| conjugated(&m[i..=j], rows, cols).map(|p| (j, p)));
        match found {
            Some((j, p)) => {
                blocks.push(Block {
                    start: i,
                    end: j + 1,
                    certificate: NonzeroCertificate::Conjugated { perm: p.trimmed().to_string() },
                });
                i = j + 1;
            }
            None => return NonzeroCertificate::Unknown,
        }
    }
    if blocks.len() < 2 {
        return NonzeroCertificate::Unknown;
    }
    NonzeroCertificate::Blocks { blocks }
}

/// The tableau of the outer pair of `factors[start..=end]` and the nonzero
/// certificate of the span. `S … A` and `A … S` spans are both accepted;
/// the latter is certified through its conjugate.
pub fn certify_span(e: &BirdtrackExpr, start: usize, end: usize) -> Result<(Tableau, NonzeroCertificate)> {
    if start >= end || end >= e.factors.len() {
        return Err(Error::invalid(format!("span {start}..={end} out of range")));
    }
    let (first, last) = (&e.factors[start], &e.factors[end]);
    let (Some(k1), Some(k2)) = (first.kind(), last.kind()) else {
        return Err(Error::refused("span must start and end with set factors"));
    };
    if k1 == k2 {
        return Err(Error::refused("span ends must be of opposite kinds"));
    }
    let (rows, cols) = if k1 == SetKind::Sym { (first, last) } else { (last, first) };
    let (rows, cols) = (rows.sets().unwrap(), cols.sets().unwrap());
    let t = young_shaped_tableau(rows, cols)
        .ok_or_else(|| Error::refused("span ends do not form a Young tableau"))?;
    let inner = &e.factors[start + 1..end];
    let entries = t.entries();
    let covered = inner.iter().all(|f| match f {
        Factor::Set { sets, .. } => sets.iter().flatten().all(|v| entries.contains(v)),
        Factor::Perm { perm } => {
            (1..=perm.degree()).all(|i| perm.apply(i) == i || entries.contains(&(i as u32)))
        }
    });
    if !covered {
        return Err(Error::refused(format!("inner factors reach indices outside {t}")));
    }
    let cert = if k1 == SetKind::Sym {
        certify_factors(rows, cols, inner)
    } else {
        let mirrored: Vec<Factor> = inner.iter().rev().map(|f| f.conj()).collect();
        certify_factors(rows, cols, &mirrored)
    };
    Ok((t, cert))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expr;

    fn cert(src: &str) -> NonzeroCertificate {
        let e = parse_expr(src).unwrap();
        certify_span(&e, 0, e.factors.len() - 1).unwrap().1
    }

    #[test]
    fn conditions() {
        assert_eq!(cert("S{1 2 5}{3 4} A{1 3} S{1 2}{3 4} A{1 3}{2 4}"), NonzeroCertificate::Inclusion);
        assert_eq!(
            cert("S{1 2}{3 4} p(2 3) S{1 3} p(2 3) A{1 3}{2 4}"),
            NonzeroCertificate::Conjugated { perm: "(2 3)".into() }
        );
        assert!(matches!(
            cert("S{1 2}{3 4} A{1 3} S{3 4} p(2 3) S{1 3} p(2 3) A{1 3}{2 4}"),
            NonzeroCertificate::Blocks { ref blocks } if blocks.len() == 2
        ));
        assert_eq!(cert("S{1 2}{3 4} A{1 2} A{1 3}{2 4}"), NonzeroCertificate::Unknown);
        assert_eq!(cert("A{1 3}{2 4} S{3 4} A{1 3} S{1 2}{3 4}"), NonzeroCertificate::Inclusion);
        assert_eq!(cert("S{1 2} S{1 2} A{1 3} A{1 3}"), NonzeroCertificate::Inclusion);
        assert_eq!(cert("S{1 2} A{1 3}"), NonzeroCertificate::Inclusion);
    }

    #[test]
    fn against_a_given_tableau() {
        let theta: Tableau = "[[1,2,5],[3,4]]".parse().unwrap();
        let q = parse_expr("S{1 2 5}{3 4} A{1 3} S{1 2}{3 4} A{1 3}{2 4}").unwrap();
        assert_eq!(certify_nonzero(&q, &theta).unwrap(), NonzeroCertificate::Inclusion);
        let other: Tableau = "[[1,2,3],[4,5]]".parse().unwrap();
        assert!(certify_nonzero(&q, &other).is_err());
    }

    #[test]
    fn refusals() {
        let e = parse_expr("S{1 2} A{1 4} A{1 3}").unwrap();
        assert!(matches!(certify_span(&e, 0, 2), Err(Error::Refused(_))));
        let e = parse_expr("S{1 2} S{1 2 3} A{1 3}").unwrap();
        assert!(certify_span(&e, 0, 2).is_ok());
        let e = parse_expr("S{1 2} S{2 4} A{1 3}").unwrap();
        assert!(certify_span(&e, 0, 2).is_err());
    }
}
