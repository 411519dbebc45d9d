use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::apply::{apply_step, propagation_check};
use super::{Direction, RuleInstance, Step, TungMode, Verification};
use crate::error::{Error, Result};
use crate::expr::{expand_bar_dense, normalize_sets, parse_expr, print_expr, BirdtrackExpr, Factor};
use crate::symgroup::fmt_rational;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Policy {
    #[default]
    All,
    /// Absorption and the cancellation rules, no propagation.
    CancelOnly,
    PropagateOnly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplifyOptions {
    pub policy: Policy,
    pub tung: TungMode,
    /// Check every step against the expansion when the degree allows it.
    pub verify: bool,
    pub verify_bound: usize,
    pub max_steps: usize,
}

impl Default for SimplifyOptions {
    fn default() -> Self {
        SimplifyOptions { policy: Policy::All, tung: TungMode::Structural, verify: false, verify_bound: 7, max_steps: 10_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RewriteTrace {
    pub input: String,
    pub steps: Vec<RuleInstance>,
    pub output: String,
}

#[derive(Clone, Debug)]
pub struct Simplified {
    pub expr: BirdtrackExpr,
    pub trace: RewriteTrace,
}

fn applies(e: &BirdtrackExpr, step: &Step) -> bool {
    apply_step(e, step).is_ok()
}

fn find_cancel(e: &BirdtrackExpr, opts: &SimplifyOptions) -> Option<Step> {
    let n = e.factors.len();
    let found = (0..n)
        .map(|position| Step::CancelWedgedAncestor { position })
        .find(|s| applies(e, s))
        .or_else(|| (0..n).map(|position| Step::CancelWedgedYoung { position }).find(|s| applies(e, s)));
    if found.is_some() || opts.tung == TungMode::Off {
        return found;
    }
    let token = Some(e.tokens().last().copied().unwrap_or(0) + 1);
    for start in 0..n {
        if !e.factors[start].is_set() {
            continue;
        }
        for end in (start + 2..n).rev() {
            let step = match opts.tung {
                TungMode::Structural => Step::TungCollapse { start, end, mode: TungMode::Structural, token },
                _ => Step::TungCollapse { start, end, mode: TungMode::Exact, token: None },
            };
            if crate::rules::certify_span(e, start, end).is_ok() && applies(e, &step) {
                return Some(step);
            }
        }
    }
    None
}

/// Propagations with an explicit deficient partner, skipping those already
/// used in this round.
fn find_propagation(e: &BirdtrackExpr, done: &BTreeSet<(usize, Direction, Vec<u32>)>) -> Option<Step> {
    let n = e.factors.len();
    for position in 0..n {
        let Factor::Set { kind, sets, .. } = &e.factors[position] else { continue };
        for direction in [Direction::Right, Direction::Left] {
            let (y, z) = match direction {
                Direction::Right => (position + 1, position + 2),
                Direction::Left if position >= 2 => (position - 1, position - 2),
                Direction::Left => continue,
            };
            let (Some(yf), Some(zf)) = (e.factors.get(y), e.factors.get(z)) else { continue };
            if zf.kind() != Some(*kind) || yf.kind() != Some(kind.other()) {
                continue;
            }
            let zs = normalize_sets(zf.sets().unwrap());
            let missing: Vec<&Vec<u32>> = sets.iter().filter(|s| !zs.contains(s)).collect();
            if missing.len() != 1 || zs.len() + 1 != sets.len() {
                continue;
            }
            let r = missing[0].clone();
            if done.contains(&(position, direction, r.clone())) {
                continue;
            }
            if propagation_check(*kind, sets, yf.sets().unwrap(), &r).is_ok() {
                return Some(Step::Propagate { position, direction, set: r });
            }
        }
    }
    None
}

/// Compares both sides of a step in the group algebra. Constants introduced
/// by the step are allowed to differ by a nonzero ratio.
pub fn verify_step(before: &BirdtrackExpr, after: &BirdtrackExpr, bound: usize) -> Result<Verification> {
    let degree = before.degree().max(after.degree());
    if degree > bound {
        return Ok(Verification::Skipped);
    }
    let side = |e: &BirdtrackExpr| -> Result<_> {
        let mut d = expand_bar_dense(e, degree, bound)?;
        d.scale(&e.scalar.value);
        Ok(d)
    };
    let (b, a) = (side(before)?, side(after)?);
    let fresh = after.tokens().difference(&before.tokens()).count() > 0;
    if a == b {
        return Ok(Verification::Exact { degree });
    }
    if fresh {
        if let Some(ratio) = b.ratio_to(&a) {
            return Ok(Verification::Proportional { degree, ratio: fmt_rational(&ratio) });
        }
    }
    let witness = a.witness_difference(&b).map(|p| p.to_string()).unwrap_or_default();
    Ok(Verification::Failed { degree, witness })
}

/// Rewrites to a normal form: absorption first, then the ancestor and
/// wedge cancellations, then collapse, then propagation; each time at the
/// leftmost (and for collapse the widest) applicable place.
pub fn simplify(e: &BirdtrackExpr, opts: &SimplifyOptions) -> Result<Simplified> {
    let mut cur = e.clone();
    let mut steps = Vec::new();
    let mut done = BTreeSet::new();
    let cancel = opts.policy != Policy::PropagateOnly;
    let prop = opts.policy != Policy::CancelOnly;
    while !cur.is_zero() {
        if steps.len() >= opts.max_steps {
            return Err(Error::resource(format!("simplification exceeded {} steps", opts.max_steps)));
        }
        let step = cancel
            .then(|| {
                (0..cur.factors.len().saturating_sub(1))
                    .map(|position| Step::Absorb { position })
                    .find(|s| applies(&cur, s))
                    .or_else(|| find_cancel(&cur, opts))
            })
            .flatten()
            .or_else(|| prop.then(|| find_propagation(&cur, &done)).flatten());
        let Some(step) = step else { break };
        let (next, mut inst) = apply_step(&cur, &step)?;
        if let Step::Propagate { position, direction, set } = &step {
            done.insert((*position, *direction, set.clone()));
        } else {
            done.clear();
        }
        if opts.verify {
            inst.verified = verify_step(&cur, &next, opts.verify_bound)?;
            if let Verification::Failed { degree, witness } = &inst.verified {
                return Err(Error::Verify(format!(
                    "{:?} step {} → {} differs at degree {degree}, witness {witness}",
                    inst.rule, inst.before, inst.after
                )));
            }
        }
        log::debug!("{:?}: {} -> {}", inst.rule, inst.before, inst.after);
        steps.push(inst);
        cur = next;
    }
    let trace = RewriteTrace { input: print_expr(e), steps, output: print_expr(&cur) };
    Ok(Simplified { expr: cur, trace })
}

/// Re-applies every recorded step to the parsed input and checks that each
/// intermediate expression matches the record.
pub fn replay(trace: &RewriteTrace) -> Result<BirdtrackExpr> {
    let mut cur = parse_expr(&trace.input)?;
    for (i, inst) in trace.steps.iter().enumerate() {
        if inst.rule != inst.step.rule() {
            return Err(Error::Verify(format!("step {i}: rule name does not match its parameters")));
        }
        let (next, _) = apply_step(&cur, &inst.step)?;
        let printed = print_expr(&next);
        if printed != inst.after {
            return Err(Error::Verify(format!("step {i}: replay gave {printed}, trace says {}", inst.after)));
        }
        cur = next;
    }
    if print_expr(&cur) != trace.output {
        return Err(Error::Verify(format!("replay ends at {}, trace says {}", print_expr(&cur), trace.output)));
    }
    Ok(cur)
}

