mod common;

use birdtrack::expr::{expand, ks_hermitian, parse_expr, print_expr, young, BirdtrackExpr};
use birdtrack::rules::{
    cancel_wedged_young, certify_nonzero, certify_span, propagate, replay, simplify, tung_collapse, Direction,
    NonzeroCertificate, Policy, SimplifyOptions, TungMode,
};
use birdtrack::{Error, Tableau};
use common::{gen, Naive};
use proptest::prelude::*;

fn naive(e: &BirdtrackExpr, n: usize) -> Naive {
    common::expand(e, n)
}

#[test]
fn ks_operators_are_hermitian_projectors() {
    for n in 2..=4 {
        for t in Tableau::all_young(n) {
            let p = naive(&ks_hermitian(&t).unwrap(), n);
            assert_eq!(p.conj(), p, "{t}");
            assert_eq!(p.mul(&p), p, "{t}");
        }
    }
}

#[test]
fn simplified_ks_operators_keep_their_expansion() {
    for n in 2..=5 {
        for t in Tableau::all_young(n) {
            let k = ks_hermitian(&t).unwrap();
            let opts = SimplifyOptions { tung: TungMode::Exact, verify: true, ..Default::default() };
            let out = simplify(&k, &opts).unwrap();
            assert!(out.expr.set_count() <= k.set_count());
            assert_eq!(expand(&out.expr).unwrap(), expand(&k).unwrap(), "{t}");
            assert_eq!(replay(&out.trace).unwrap(), out.expr.bare());
        }
    }
}

#[test]
fn already_minimal_input_is_unchanged() {
    for t in Tableau::all_young(5) {
        let y = birdtrack::expr::young_bar(&t);
        let out = simplify(&y, &SimplifyOptions::default()).unwrap();
        assert_eq!(out.expr, y);
        assert!(out.trace.steps.is_empty());
    }
}

#[test]
fn young_times_its_conjugate_shortens() {
    let y = young(&"[[1,2],[3]]".parse().unwrap()).unwrap();
    let e = y.concat(&y.conj());
    let out = simplify(&e, &SimplifyOptions { tung: TungMode::Exact, ..Default::default() }).unwrap();
    assert!(out.expr.set_count() < e.set_count());
    assert_eq!(naive(&out.expr, 3), naive(&e, 3));
}

#[test]
fn structural_collapse_needs_a_certificate() {
    let e = parse_expr("S{1 2}{3 4} A{1 2} A{1 3}{2 4}").unwrap();
    assert_eq!(certify_span(&e, 0, 2).unwrap().1, NonzeroCertificate::Unknown);
    assert!(matches!(tung_collapse(&e, 0, 2, TungMode::Structural), Err(Error::Refused(_))));
}

#[test]
fn kconjugated_theta_is_condition_two() {
    // S_Φ (ρ K_Θ ρ⁻¹) A_Φ with Φ = [[1,2],[3]], Θ = [[1,3],[2]], ρ = (2 3)
    let phi: Tableau = "[[1,2],[3]]".parse().unwrap();
    let e = parse_expr("S{1 2} p(2 3) A{1 2} S{1 3} p(2 3) A{1 3}").unwrap();
    assert!(matches!(certify_nonzero(&e, &phi).unwrap(), NonzeroCertificate::Conjugated { .. }));
    assert!(!naive(&e, 3).is_zero());
}

#[test]
fn wrong_tableau_is_rejected_by_certify() {
    let e = parse_expr("S{1 2} A{1 3}").unwrap();
    assert!(certify_nonzero(&e, &"[[1,3],[2]]".parse().unwrap()).is_err());
}

#[test]
fn propagation_after_palindromic_pattern_is_hermitian() {
    for (src, set) in [
        ("S{1 2}{3 4} A{1 3}{2 4} S{1 2}", vec![3, 4]),
        ("S{1 2 3}{4 5}{6 7} A{1 4 6}{2 5 7} S{1 2 3}{4 5}", vec![6, 7]),
        ("A{1 3}{2 4} S{1 2}{3 4} A{1 3}", vec![2, 4]),
    ] {
        let e = parse_expr(src).unwrap();
        let (out, _) = propagate(&e, 0, Direction::Right, Some(&set)).unwrap();
        let n = out.degree();
        let x = naive(&out, n);
        assert_eq!(x.conj(), x, "{src}");
        assert_eq!(x, naive(&e, n));
    }
}

#[test]
fn non_rectangular_propagation_would_be_wrong() {
    let e = parse_expr("S{1 2} A{1 3}").unwrap();
    assert!(propagate(&e, 0, Direction::Right, Some(&[1, 2])).is_err());
    let forced = parse_expr("S{1 2} A{1 3} S{1 2}").unwrap();
    assert_ne!(naive(&e, 3), naive(&forced, 3));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_wedges_cancel_exactly(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let e = gen::wedge(6, &mut rng);
        let (out, inst) = cancel_wedged_young(&e, 0).map_err(|err| TestCaseError::fail(format!("{e}: {err}")))?;
        prop_assert_eq!(out.factors.len(), 2);
        prop_assert!(!inst.scalar.is_zero());
        let n = e.degree();
        prop_assert_eq!(naive(&out, n), naive(&e, n), "{}", print_expr(&e));
    }

    #[test]
    fn certified_spans_do_not_vanish(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let (t, e) = gen::certified(5, &mut rng);
        let cert = certify_nonzero(&e, &t).unwrap();
        prop_assert!(cert.is_known(), "{} over {}", e, t);
        let n = t.size();
        let x = naive(&e, n);
        prop_assert!(!x.is_zero(), "{}", e);
        let (collapsed, inst) = tung_collapse(&e, 0, e.factors.len() - 1, TungMode::Exact).unwrap();
        prop_assert_eq!(naive(&collapsed, n), x);
        prop_assert_eq!(inst.scalar.tokens.len(), 0);
    }

    #[test]
    fn simplify_is_sound_on_random_operators(seed in any::<u64>(), n in 3usize..=5, len in 2usize..=7) {
        let mut rng = gen::rng(seed);
        let e = gen::operator(n, len, &mut rng);
        for policy in [Policy::All, Policy::CancelOnly, Policy::PropagateOnly] {
            let opts = SimplifyOptions { policy, tung: TungMode::Exact, verify: true, ..Default::default() };
            let out = simplify(&e, &opts).map_err(|err| TestCaseError::fail(format!("{e}: {err}")))?;
            prop_assert_eq!(naive(&out.expr, n), naive(&e, n), "{} -> {}", e, out.expr);
            prop_assert_eq!(replay(&out.trace).unwrap(), out.expr.bare());
        }
        let out = simplify(&e, &SimplifyOptions { verify: true, ..Default::default() }).unwrap();
        let (a, b) = (common::expand_bar(&out.expr, n).scale(&out.expr.scalar.value), naive(&e, n));
        if b.is_zero() {
            prop_assert!(a.is_zero());
        } else {
            prop_assert!(a.ratio_to(&b).is_some(), "{} -> {}", e, out.expr);
        }
    }
}
