use num_rational::BigRational;
use num_traits::Zero;

use super::certify::certify_span;
use super::{Certificate, Direction, RuleInstance, Step, TungMode, Verification};
use crate::error::{Error, Result};
use crate::expr::{expand_bar_dense, normalize_sets, print_expr, BirdtrackExpr, Factor, Scalar, SetKind, DEFAULT_ORACLE_BOUND};
use crate::symgroup::fmt_rational;
use crate::tableau::{reconstruct_tableau, young_shaped_tableau, Tableau};

fn factor_at(e: &BirdtrackExpr, i: usize) -> Result<&Factor> {
    e.factors.get(i).ok_or_else(|| Error::invalid(format!("no factor at position {i} (expression has {})", e.factors.len())))
}

fn sets_of(f: &Factor) -> Result<(SetKind, &[Vec<u32>])> {
    match f {
        Factor::Set { kind, sets, .. } => Ok((*kind, sets)),
        _ => Err(Error::refused("expected a set factor, found a permutation")),
    }
}

/// Tableau with rows from the symmetrizer and columns from the
/// antisymmetrizer of an adjacent pair, in either order.
fn pair_tableau(a: &Factor, b: &Factor) -> Result<Tableau> {
    let (ka, sa) = sets_of(a)?;
    let (kb, sb) = sets_of(b)?;
    if ka == kb {
        return Err(Error::refused("pair is not one S and one A factor"));
    }
    let (rows, cols) = if ka == SetKind::Sym { (sa, sb) } else { (sb, sa) };
    young_shaped_tableau(rows, cols).ok_or_else(|| Error::refused("pair does not form a Young tableau"))
}

/// Applies one recorded rewrite. The returned instance is unverified.
pub fn apply_step(e: &BirdtrackExpr, step: &Step) -> Result<(BirdtrackExpr, RuleInstance)> {
    if e.is_zero() {
        return Err(Error::refused("no rules apply to zero"));
    }
    let mut factors = e.factors.clone();
    let (positions, scalar, certificate) = match step {
        &Step::Absorb { position: i } => {
            let (f, g) = (factor_at(e, i)?, factor_at(e, i + 1)?);
            let cert = match (f.as_perm(), g.as_perm()) {
                (Some(p), Some(q)) => {
                    factors[i] = Factor::perm(p.compose(q).trimmed());
                    factors.remove(i + 1);
                    Certificate::PermProduct
                }
                _ if f.absorbed_by(g) => {
                    factors.remove(i);
                    Certificate::Inclusion { absorbed: i, into: i + 1 }
                }
                _ if g.absorbed_by(f) => {
                    factors.remove(i + 1);
                    Certificate::Inclusion { absorbed: i + 1, into: i }
                }
                _ => return Err(Error::refused(format!("factors {i} and {} do not absorb", i + 1))),
            };
            (vec![i, i + 1], Scalar::one(), cert)
        }
        &Step::CancelWedgedYoung { position: i } => {
            let x: Vec<&Factor> = (i..i + 4).map(|j| factor_at(e, j)).collect::<Result<_>>()?;
            let kinds: Vec<SetKind> = x.iter().map(|f| sets_of(f).map(|s| s.0)).collect::<Result<_>>()?;
            if kinds[0] != kinds[2] || kinds[1] != kinds[3] || kinds[0] == kinds[1] {
                return Err(Error::refused("wedge needs the pattern X Y X Y of alternating kinds"));
            }
            let t = pair_tableau(x[1], x[2])?;
            if !x[1].absorbed_by(x[3]) || !x[2].absorbed_by(x[0]) {
                return Err(Error::refused(format!("middle pair {t} is not contained in its neighbours")));
            }
            let alpha = t.shape_alpha()?;
            factors.drain(i + 1..i + 3);
            let cert = Certificate::Wedge { tableau: t, alpha: fmt_rational(&alpha) };
            ((i..i + 4).collect(), Scalar::rational(alpha.recip()), cert)
        }
        &Step::CancelWedgedAncestor { position: i } => {
            let x: Vec<&Factor> = (i..i + 6).map(|j| factor_at(e, j)).collect::<Result<_>>()?;
            let k0 = sets_of(x[0])?.0;
            let tabs: Vec<Tableau> = (0..3).map(|p| pair_tableau(x[2 * p], x[2 * p + 1])).collect::<Result<_>>()?;
            if x.iter().step_by(2).any(|f| f.kind() != Some(k0)) {
                return Err(Error::refused("ancestor pattern needs three pairs of the same orientation"));
            }
            if tabs.iter().any(|t| !t.is_young()) {
                return Err(Error::refused("ancestor pattern needs standard Young tableaux"));
            }
            let (left, mid, right) = (&tabs[0], &tabs[1], &tabs[2]);
            if !mid.is_ancestor_of(left) || !mid.is_ancestor_of(right) {
                return Err(Error::refused(format!("{mid} is not an ancestor of both {left} and {right}")));
            }
            let alpha = mid.alpha()?;
            factors.drain(i + 2..i + 4);
            let cert = Certificate::Ancestor {
                ancestor: mid.clone(),
                left: left.clone(),
                right: right.clone(),
                alpha: fmt_rational(&alpha),
            };
            ((i..i + 6).collect(), Scalar::rational(alpha.recip()), cert)
        }
        &Step::TungCollapse { start, end, mode, token } => {
            let (t, nonzero) = certify_span(e, start, end)?;
            let (scalar, coefficient) = match mode {
                _ if end == start + 1 => (Scalar::one(), None),
                TungMode::Structural => {
                    if !nonzero.is_known() {
                        return Err(Error::refused(format!("no structural nonzero certificate for the span over {t}")));
                    }
                    let k = token.ok_or_else(|| Error::invalid("structural collapse needs a constant token"))?;
                    (Scalar::one().with_token(k), None)
                }
                TungMode::Exact => {
                    let span = BirdtrackExpr { scalar: Scalar::one(), factors: e.factors[start..=end].to_vec() };
                    let a_id = expand_bar_dense(&span, span.degree(), DEFAULT_ORACLE_BOUND)?.coeff_id();
                    if a_id.is_zero() {
                        return Err(Error::refused(format!("the span over {t} vanishes")));
                    }
                    let kappa = &a_id * BigRational::from_integer(t.row_col_factorials());
                    (Scalar::rational(kappa), Some(fmt_rational(&a_id)))
                }
                TungMode::Off => return Err(Error::refused("collapse is switched off")),
            };
            factors.drain(start + 1..end);
            let cert = Certificate::Tung { tableau: t, nonzero, identity_coefficient: coefficient };
            ((start..=end).collect(), scalar, cert)
        }
        Step::Propagate { position, direction, set } => {
            let i = *position;
            let y_at = match direction {
                Direction::Right => i + 1,
                Direction::Left => i.checked_sub(1).ok_or_else(|| Error::refused("nothing to the left"))?,
            };
            let z_at = match direction {
                Direction::Right => Some(i + 2),
                Direction::Left => i.checked_sub(2),
            };
            let x = factor_at(e, i)?;
            let (kx, xs) = sets_of(x)?;
            let (ky, ys) = sets_of(factor_at(e, y_at)?)?;
            if kx == ky {
                return Err(Error::refused("propagation needs X and Y of opposite kinds"));
            }
            let mut r = set.clone();
            r.sort_unstable();
            if !xs.contains(&r) {
                return Err(Error::refused(format!("{r:?} is not a set of the factor at {i}")));
            }
            let deficient: Vec<Vec<u32>> = xs.iter().filter(|s| **s != r).cloned().collect();
            let z_matches = z_at
                .and_then(|j| e.factors.get(j))
                .is_some_and(|z| z.kind() == Some(kx) && normalize_sets(z.sets().unwrap()) == deficient);
            if !z_matches && !deficient.is_empty() {
                return Err(Error::refused(format!("no factor with the sets of X minus {r:?} beyond Y")));
            }
            let (tableau, amputated, lengths) = propagation_check(kx, xs, ys, &r)?;
            let mut pos = vec![i, y_at];
            match (z_matches, direction) {
                (true, _) => {
                    let j = z_at.unwrap();
                    factors[j] = x.clone();
                    pos.push(j);
                }
                (false, Direction::Right) => factors.insert(i + 2, x.clone()),
                (false, Direction::Left) => factors.insert(y_at, x.clone()),
            }
            pos.sort_unstable();
            (pos, Scalar::one(), Certificate::Propagation { tableau, amputated, lengths })
        }
    };
    let out = BirdtrackExpr::new(e.scalar.mul(&scalar), factors);
    let inst = RuleInstance {
        rule: step.rule(),
        step: step.clone(),
        positions,
        scalar,
        certificate,
        verified: Verification::Skipped,
        before: print_expr(e),
        after: print_expr(&out),
    };
    Ok((out, inst))
}

/// Checks that the rows of `Ampc[Θ][R]` (for `S` factors) or the columns of
/// `Ampr[Θ][R]` (for `A` factors) all have the same length. `Θ` is built
/// from the sets of `X` and `Y`.
pub fn propagation_check(
    kind: SetKind,
    x_sets: &[Vec<u32>],
    y_sets: &[Vec<u32>],
    r: &[u32],
) -> Result<(Tableau, Tableau, Vec<usize>)> {
    let (rows, cols) = if kind == SetKind::Sym { (x_sets, y_sets) } else { (y_sets, x_sets) };
    let t = reconstruct_tableau(rows, cols)
        .ok_or_else(|| Error::refused("X and Y do not form a tableau (a row meets a column twice)"))?;
    let (amputated, lengths) = if kind == SetKind::Sym {
        let a = t.amputate_columns_by_set(r)?;
        let l = a.shape();
        (a, l)
    } else {
        let a = t.amputate_rows_by_set(r)?;
        let l = a.column_lengths();
        (a, l)
    };
    if lengths.windows(2).any(|w| w[0] != w[1]) {
        let what = if kind == SetKind::Sym { "row" } else { "column" };
        return Err(Error::refused(format!("amputated tableau {amputated} has unequal {what} lengths {lengths:?}")));
    }
    Ok((t, amputated, lengths))
}

/// Applies absorption (and products of adjacent permutations) until none is
/// left, leftmost first.
pub fn absorb_adjacent(e: &BirdtrackExpr) -> (BirdtrackExpr, Vec<RuleInstance>) {
    let mut cur = e.clone();
    let mut trace = Vec::new();
    while let Some(i) = (0..cur.factors.len().saturating_sub(1))
        .find(|&i| apply_step(&cur, &Step::Absorb { position: i }).is_ok())
    {
        let (next, inst) = apply_step(&cur, &Step::Absorb { position: i }).expect("checked above");
        cur = next;
        trace.push(inst);
    }
    (cur, trace)
}

pub fn cancel_wedged_young(e: &BirdtrackExpr, position: usize) -> Result<(BirdtrackExpr, RuleInstance)> {
    apply_step(e, &Step::CancelWedgedYoung { position })
}

pub fn cancel_wedged_ancestor(e: &BirdtrackExpr, position: usize) -> Result<(BirdtrackExpr, RuleInstance)> {
    apply_step(e, &Step::CancelWedgedAncestor { position })
}

/// Structural mode takes the next unused constant token.
pub fn tung_collapse(e: &BirdtrackExpr, start: usize, end: usize, mode: TungMode) -> Result<(BirdtrackExpr, RuleInstance)> {
    let token = (mode == TungMode::Structural).then(|| e.tokens().last().copied().unwrap_or(0) + 1);
    apply_step(e, &Step::TungCollapse { start, end, mode, token })
}

/// Propagates the factor at `position`. Without an explicit `set`, `R` is
/// read off the deficient partner or, failing that, taken as the only set
/// of `X`.
pub fn propagate(
    e: &BirdtrackExpr,
    position: usize,
    direction: Direction,
    set: Option<&[u32]>,
) -> Result<(BirdtrackExpr, RuleInstance)> {
    let set = match set {
        Some(s) => s.to_vec(),
        None => {
            let x = factor_at(e, position)?;
            let xs = sets_of(x)?.1;
            let z = match direction {
                Direction::Right => e.factors.get(position + 2),
                Direction::Left => position.checked_sub(2).and_then(|j| e.factors.get(j)),
            };
            let from_z = z.filter(|z| z.kind() == x.kind()).and_then(|z| {
                let zs = normalize_sets(z.sets().unwrap());
                let missing: Vec<&Vec<u32>> = xs.iter().filter(|s| !zs.contains(s)).collect();
                (missing.len() == 1 && zs.len() + 1 == xs.len()).then(|| missing[0].clone())
            });
            match from_z {
                Some(r) => r,
                None if xs.len() == 1 => xs[0].clone(),
                None => return Err(Error::refused("cannot infer the set R to propagate")),
            }
        }
    };
    apply_step(e, &Step::Propagate { position, direction, set })
}

