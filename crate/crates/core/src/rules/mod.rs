//! Rewrite rules on birdtrack expressions and the simplification engine.
//!
//! Every rewrite is recorded as a [`RuleInstance`] carrying the data needed to
//! replay it and the certificate that justified it.

mod apply;
mod certify;
mod engine;

use serde::{Deserialize, Serialize};

use crate::expr::Scalar;
use crate::tableau::Tableau;

pub use apply::{
    absorb_adjacent, apply_step, cancel_wedged_ancestor, cancel_wedged_young, propagate, propagation_check, tung_collapse,
};
pub use certify::{certify_nonzero, certify_span};
pub use engine::{replay, simplify, verify_step, Policy, RewriteTrace, SimplifyOptions, Simplified};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RuleName {
    Absorb,
    CancelWedgedAncestor,
    CancelWedgedYoung,
    TungCollapse,
    Propagate,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TungMode {
    /// Replace the span by `k·Ȳ` with a fresh opaque constant `k`, only when
    /// a structural nonzero certificate exists.
    #[default]
    Structural,
    /// Compute the constant from the identity coefficient of the span.
    Exact,
    Off,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    /// `X Y Z → X Y X` with `X` on the left.
    Right,
    /// `Z Y X → X Y X` with `X` on the right.
    Left,
}

/// Everything needed to re-apply a rewrite to the same expression.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Step {
    /// Merges the factors at `position` and `position + 1`.
    Absorb { position: usize },
    CancelWedgedYoung { position: usize },
    CancelWedgedAncestor { position: usize },
    TungCollapse {
        start: usize,
        end: usize,
        mode: TungMode,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        token: Option<u32>,
    },
    /// `position` is the full factor `X`; `set` is the row or column `R`.
    Propagate { position: usize, direction: Direction, set: Vec<u32> },
}

impl Step {
    pub fn rule(&self) -> RuleName {
        match self {
            Step::Absorb { .. } => RuleName::Absorb,
            Step::CancelWedgedYoung { .. } => RuleName::CancelWedgedYoung,
            Step::CancelWedgedAncestor { .. } => RuleName::CancelWedgedAncestor,
            Step::TungCollapse { .. } => RuleName::TungCollapse,
            Step::Propagate { .. } => RuleName::Propagate,
        }
    }
}

/// Why a span `S_Θ M A_Θ` is known not to vanish.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "condition", rename_all = "kebab-case")]
pub enum NonzeroCertificate {
    /// Every factor of `M` is a set absorbed by the outer factor of its kind;
    /// after absorption `M` alternates `A S A S … S`.
    Inclusion,
    /// `M = p D p⁻¹` with `D` absorbed by the pair relabelled through `p⁻¹`.
    Conjugated { perm: String },
    /// `M` splits into consecutive blocks of the two kinds above.
    Blocks { blocks: Vec<Block> },
    /// Nothing structural was found.
    Unknown,
}

impl NonzeroCertificate {
    pub fn is_known(&self) -> bool {
        !matches!(self, NonzeroCertificate::Unknown)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    /// Half-open range of factor indices inside `M`.
    pub start: usize,
    pub end: usize,
    pub certificate: NonzeroCertificate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Certificate {
    /// The factor at `absorbed` is contained in the one at `into`.
    Inclusion { absorbed: usize, into: usize },
    PermProduct,
    Wedge { tableau: Tableau, alpha: String },
    Ancestor { ancestor: Tableau, left: Tableau, right: Tableau, alpha: String },
    Tung {
        tableau: Tableau,
        nonzero: NonzeroCertificate,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        identity_coefficient: Option<String>,
    },
    /// The amputated tableau and its equal row (or column) lengths.
    Propagation { tableau: Tableau, amputated: Tableau, lengths: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Verification {
    Skipped,
    Exact { degree: usize },
    /// Both sides agree up to the nonzero ratio of a fresh constant.
    Proportional { degree: usize, ratio: String },
    Failed { degree: usize, witness: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleInstance {
    pub rule: RuleName,
    pub step: Step,
    /// Factor indices of the input that the rule read.
    pub positions: Vec<usize>,
    /// Multiplier picked up by the expression scalar.
    pub scalar: Scalar,
    pub certificate: Certificate,
    pub verified: Verification,
    pub before: String,
    pub after: String,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{expand, ks_hermitian, parse_expr, print_expr, BirdtrackExpr};
    use crate::symgroup::rat;
    use crate::Error;

    fn e(s: &str) -> BirdtrackExpr {
        parse_expr(s).unwrap()
    }

    fn exact(before: &BirdtrackExpr, after: &BirdtrackExpr) {
        assert!(matches!(verify_step(before, after, 9).unwrap(), Verification::Exact { .. }), "{before} vs {after}");
    }

    #[test]
    fn wedge_three_quarters() {
        let x = e("A{1 3}{2 4} S{1 2} A{1 3} S{1 2 5}");
        let (y, inst) = cancel_wedged_young(&x, 0).unwrap();
        assert_eq!(print_expr(&y), "3/4 * A{1 3}{2 4} S{1 2 5}");
        assert_eq!(inst.scalar.value, rat(3, 4));
        exact(&x, &y);
        // the mirrored orientation
        let x = e("S{1 2 5} A{1 3} S{1 2} A{1 3}{2 4}");
        let (y, _) = cancel_wedged_young(&x, 0).unwrap();
        exact(&x, &y);
        assert!(cancel_wedged_young(&e("A{1 3} S{1 2} A{1 3} S{3 4}"), 0).is_err());
    }

    #[test]
    fn ancestor_sandwich() {
        let x = e("S{1 2 4} A{1 3} S{1 2} A{1 3} S{1 2}{3 4} A{1 3}{2 4}");
        let (y, inst) = cancel_wedged_ancestor(&x, 0).unwrap();
        assert_eq!(inst.scalar.value, rat(3, 4));
        assert_eq!(print_expr(&y), "3/4 * S{1 2 4} A{1 3} S{1 2}{3 4} A{1 3}{2 4}");
        exact(&x, &y);
    }

    #[test]
    fn collapse_exact_and_structural() {
        let x = e("S{1 2 5}{3 4} A{1 3} S{1 2}{3 4} A{1 3}{2 4}");
        let (y, inst) = tung_collapse(&x, 0, 3, TungMode::Exact).unwrap();
        assert_eq!(y.factors.len(), 2);
        exact(&x, &y);
        assert!(matches!(inst.certificate, Certificate::Tung { nonzero: NonzeroCertificate::Inclusion, .. }));
        let (z, _) = tung_collapse(&x, 0, 3, TungMode::Structural).unwrap();
        assert_eq!(z.tokens().into_iter().collect::<Vec<_>>(), vec![1]);
        assert!(matches!(verify_step(&x, &z, 9).unwrap(), Verification::Proportional { .. }));
    }

    #[test]
    fn collapse_of_young_bar_is_trivial() {
        let x = e("S{1 2} A{1 3}");
        for mode in [TungMode::Exact, TungMode::Structural] {
            let (y, inst) = tung_collapse(&x, 0, 1, mode).unwrap();
            assert_eq!(y, x);
            assert!(inst.scalar.is_one());
        }
    }

    #[test]
    fn kind_swapped_propagation_signs() {
        let x = e("A{1 3}{2 4} S{1 2}{3 4} A{1 3}");
        let (y, _) = propagate(&x, 0, Direction::Right, None).unwrap();
        assert_eq!(print_expr(&y), "A{1 3}{2 4} S{1 2}{3 4} A{1 3}{2 4}");
        exact(&x, &y);
        let ex = expand(&y).unwrap();
        assert_eq!(ex.conj(), ex);
    }

    #[test]
    fn collapse_refuses_vanishing_span() {
        // S{1 2} p(2 3) A{1 3}... conjugates to S{12} A{12} = 0
        let x = e("S{1 2} A{1 2} A{1 3}");
        assert!(matches!(tung_collapse(&x, 0, 2, TungMode::Exact), Err(Error::Refused(_))));
        assert!(tung_collapse(&x, 0, 2, TungMode::Structural).is_err());
    }

    #[test]
    fn propagation_examples() {
        let x = e("S{1 2}{3 4} A{1 3}{2 4} S{1 2}");
        let (y, _) = propagate(&x, 0, Direction::Right, None).unwrap();
        assert_eq!(print_expr(&y), "S{1 2}{3 4} A{1 3}{2 4} S{1 2}{3 4}");
        exact(&x, &y);

        let x = e("S{1 2 3}{4 5}{6 7} A{1 4 6}{2 5 7} S{1 2 3}{4 5}");
        let (y, inst) = propagate(&x, 0, Direction::Right, Some(&[6, 7])).unwrap();
        exact(&x, &y);
        assert!(matches!(inst.certificate, Certificate::Propagation { ref lengths, .. } if lengths == &vec![2, 2, 2]));

        let x = e("S{1 2 3 4}{5 6 7}{8 9} A{1 5 8}{2 6 9} S{1 2 3 4}{5 6 7}");
        let (y, _) = propagate(&x, 0, Direction::Right, Some(&[8, 9])).unwrap();
        exact(&x, &y);
        let (w, _) = propagate(&e("S{1 2 3 4}{5 6 7} A{1 5 8}{2 6 9} S{1 2 3 4}{5 6 7}{8 9}"), 2, Direction::Left, None).unwrap();
        assert_eq!(w, y);
    }

    #[test]
    fn propagation_refuses_unequal_rows() {
        let x = e("S{1 2} A{1 3}");
        let err = propagate(&x, 0, Direction::Right, Some(&[1, 2])).unwrap_err();
        assert!(matches!(err, Error::Refused(ref m) if m.contains("[2, 1]")), "{err}");
    }

    #[test]
    fn absorption_merges_and_composes() {
        let (y, steps) = absorb_adjacent(&e("S{1 2} S{1 2 3} A{1 4} A{1 4}{2 5} p(1 2) p(1 2)"));
        assert_eq!(print_expr(&y), "S{1 2 3} A{1 4}{2 5}");
        assert_eq!(steps.len(), 3);
    }

    #[test]
    fn simplify_is_sound_and_replays() {
        for t in ["[[1,2],[3]]", "[[1,2],[3],[4]]", "[[1,2,4],[3]]", "[[1,3],[2,4]]", "[[1,2,4],[3,5]]"] {
            let x = ks_hermitian(&t.parse().unwrap()).unwrap();
            for policy in [Policy::All, Policy::CancelOnly] {
                for tung in [TungMode::Structural, TungMode::Exact, TungMode::Off] {
                    let opts = SimplifyOptions { policy, tung, verify: true, ..Default::default() };
                    let out = simplify(&x, &opts).unwrap();
                    assert_eq!(replay(&out.trace).unwrap(), out.expr.bare());
                    if tung != TungMode::Structural {
                        assert_eq!(expand(&out.expr).unwrap(), expand(&x).unwrap(), "{t}");
                    }
                }
            }
        }
    }

    #[test]
    fn trace_json_roundtrip() {
        let x = ks_hermitian(&"[[1,2,4],[3]]".parse().unwrap()).unwrap();
        let out = simplify(&x, &SimplifyOptions::default()).unwrap();
        let json = serde_json::to_string(&out.trace).unwrap();
        let back: RewriteTrace = serde_json::from_str(&json).unwrap();
        assert_eq!(back, out.trace);
        assert_eq!(replay(&back).unwrap(), out.expr.bare());
    }
}
