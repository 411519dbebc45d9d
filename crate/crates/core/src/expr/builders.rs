use super::ast::{BirdtrackExpr, Factor, Role, Scalar, SetKind};
use crate::error::{Error, Result};
use crate::tableau::Tableau;

/// `Ȳ_Θ = S_Θ A_Θ`, both factors annotated with `t`.
pub fn young_bar(t: &Tableau) -> BirdtrackExpr {
    BirdtrackExpr::new(
        Scalar::one(),
        vec![Factor::annotated(SetKind::Sym, t, Role::Rows), Factor::annotated(SetKind::Anti, t, Role::Columns)],
    )
}

/// `Y_Θ = α_Θ S_Θ A_Θ`.
pub fn young(t: &Tableau) -> Result<BirdtrackExpr> {
    if !t.is_young() {
        return Err(Error::invalid(format!("{t} is not a Young tableau")));
    }
    Ok(young_bar(t).scaled(&t.alpha()?))
}

/// Merges immediately adjacent identical set factors (`X X = X`).
pub fn merge_identical_adjacent(factors: Vec<Factor>) -> Vec<Factor> {
    let mut out: Vec<Factor> = Vec::with_capacity(factors.len());
    for f in factors {
        if f.is_set() && out.last().is_some_and(|g| g.same_as(&f)) {
            continue;
        }
        out.push(f);
    }
    out
}

/// Hermitian operator from the sandwich recursion
/// `P_Θ = P_{Θ_(1)} · Y_Θ · P_{Θ_(1)}`, `P` of a single box the identity.
/// Only identical neighbouring set factors are merged.
pub fn ks_hermitian(t: &Tableau) -> Result<BirdtrackExpr> {
    if !t.is_young() {
        return Err(Error::invalid(format!("{t} is not a Young tableau")));
    }
    if t.size() <= 1 {
        return Ok(BirdtrackExpr::identity());
    }
    let parent = ks_hermitian(&t.ancestor(1)?)?;
    let raw = parent.concat(&young(t)?).concat(&parent);
    Ok(BirdtrackExpr::new(raw.scalar, merge_identical_adjacent(raw.factors)))
}

/// The chain `Θ_(n-1), …, Θ_(1), Θ` of ancestors with at least two boxes.
pub fn ancestor_chain(t: &Tableau) -> Result<Vec<Tableau>> {
    let n = t.size();
    (0..n.saturating_sub(1)).rev().map(|m| t.ancestor(m)).collect()
}
