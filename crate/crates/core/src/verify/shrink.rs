//! Greedy minimization of translation counterexamples.
//!
//! Each round lists every candidate one move away from the current formula,
//! orders them by node count, and keeps the first that still disagrees.
//! Moves: replace a connective by one of its operands (dropping a conjunct
//! or disjunct, unwrapping a negation), strip a quantifier
//! (the freed variable is then tried at every universe value in ascending
//! order), or replace a non-constant subformula by `true` or `false`. Only
//! strictly smaller candidates are considered, so the loop terminates.

use std::collections::BTreeSet;

use crate::formula::{substitute, Formula, Term, VariablePool};
use crate::interp::Interpretation;
use crate::structures::{eval, Assignment, Structure};

use super::{Counterexample, Evidence, VerifyError};

/// Everything needed to re-translate and re-evaluate candidates.
pub struct ShrinkContext<'a> {
    pub interpretation: &'a Interpretation,
    pub source: &'a Structure,
    pub target: &'a Structure,
}

struct Candidate {
    formula: Formula,
    /// Variable freed by stripping a quantifier.
    freed: Option<String>,
}

fn local_moves(f: &Formula, taken: &BTreeSet<String>, out: &mut Vec<Candidate>) {
    let plain = |formula: Formula| Candidate { formula, freed: None };
    match f {
        Formula::Not(g) => out.push(plain((**g).clone())),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
            out.push(plain((**a).clone()));
            out.push(plain((**b).clone()));
        }
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            if taken.contains(v) {
                let fresh = VariablePool::seeded(taken.iter().cloned().chain(body.all_vars())).fresh(v);
                out.push(Candidate {
                    formula: substitute(body, v, &Term::var(fresh.as_str())),
                    freed: Some(fresh),
                });
            } else {
                out.push(Candidate {
                    formula: (**body).clone(),
                    freed: Some(v.clone()),
                });
            }
        }
        _ => {}
    }
    if !matches!(f, Formula::True | Formula::False) {
        out.push(plain(Formula::True));
        out.push(plain(Formula::False));
    }
}

/// Every formula one move away from `f`, with the move applied in context.
fn moves(f: &Formula, taken: &BTreeSet<String>) -> Vec<Candidate> {
    let mut out = Vec::new();
    local_moves(f, taken, &mut out);
    let wrap = |inner: Vec<Candidate>, rebuild: &dyn Fn(Formula) -> Formula, out: &mut Vec<Candidate>| {
        out.extend(inner.into_iter().map(|c| Candidate {
            formula: rebuild(c.formula),
            freed: c.freed,
        }));
    };
    match f {
        Formula::Not(g) => wrap(moves(g, taken), &Formula::not, &mut out),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
            let build = |l: Formula, r: Formula| match f {
                Formula::And(..) => Formula::and(l, r),
                Formula::Or(..) => Formula::or(l, r),
                Formula::Implies(..) => Formula::implies(l, r),
                _ => Formula::iff(l, r),
            };
            wrap(moves(a, taken), &|l| build(l, (**b).clone()), &mut out);
            wrap(moves(b, taken), &|r| build((**a).clone(), r), &mut out);
        }
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            let universal = matches!(f, Formula::Forall(..));
            let rebuild = |g: Formula| {
                if universal {
                    Formula::forall(v.clone(), g)
                } else {
                    Formula::exists(v.clone(), g)
                }
            };
            wrap(moves(body, taken), &rebuild, &mut out);
        }
        _ => {}
    }
    out
}

/// Reduces a translation counterexample to a smaller one that still
/// disagrees. Other kinds are returned unchanged after revalidation.
pub fn shrink(c: &Counterexample, ctx: &ShrinkContext) -> Result<Counterexample, VerifyError> {
    c.revalidate()?;
    if !matches!(c.evidence, Evidence::Translation { .. }) {
        return Ok(c.clone());
    }
    let mut best = c.clone();
    while let Some(next) = step(&best, ctx)? {
        best = next;
    }
    best.revalidate()?;
    Ok(best)
}

fn step(c: &Counterexample, ctx: &ShrinkContext) -> Result<Option<Counterexample>, VerifyError> {
    let current = c.formula();
    let size = current.measure().nodes;
    let mut taken = current.free_vars();
    taken.extend(c.assignment.iter().map(|(k, _)| k.clone()));
    let mut candidates: Vec<Candidate> = moves(current, &taken)
        .into_iter()
        .filter(|m| m.formula.measure().nodes < size)
        .collect();
    candidates.sort_by_key(|m| m.formula.measure().nodes);

    for cand in candidates {
        let translated = ctx.interpretation.translate_fresh(&cand.formula)?;
        let free = cand.formula.free_vars();
        let mut base = c.assignment.clone();
        base.retain(|v| free.contains(v));
        let values: Vec<Option<u64>> = match &cand.freed {
            Some(v) if free.contains(v) => ctx.source.universe().elements(c.bound).map(Some).collect(),
            _ => vec![None],
        };
        for value in values {
            let mut assignment = base.clone();
            if let (Some(v), Some(x)) = (&cand.freed, value) {
                assignment.insert(v.clone(), x);
            }
            if let Some(found) = disagreement(c, ctx, &cand.formula, &translated, assignment)? {
                return Ok(Some(found));
            }
        }
    }
    Ok(None)
}

fn disagreement(
    c: &Counterexample,
    ctx: &ShrinkContext,
    formula: &Formula,
    translated: &Formula,
    assignment: Assignment,
) -> Result<Option<Counterexample>, VerifyError> {
    let left = eval(formula, ctx.source, &assignment, c.bound)?.value;
    let right = eval(translated, ctx.target, &assignment, c.bound)?.value;
    if left == right {
        return Ok(None);
    }
    Ok(Some(Counterexample {
        evidence: Evidence::Translation {
            formula: formula.clone(),
            translated: translated.clone(),
            source: ctx.source.name().into(),
            target: ctx.target.name().into(),
        },
        assignment,
        left_value: left,
        right_value: right,
        ..c.clone()
    }))
}
