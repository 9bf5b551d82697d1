//! Capture-avoiding substitution of terms for free variables.

use std::collections::{BTreeMap, BTreeSet};

use super::{Formula, FormulaError, Signature, Term, VariablePool};

fn subst_term(t: &Term, map: &BTreeMap<String, Term>) -> Term {
    match t {
        Term::Var(v) => map.get(v).cloned().unwrap_or_else(|| t.clone()),
        Term::Lit(_) => t.clone(),
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| subst_term(a, map)).collect()),
    }
}

/// Replaces every free `v` by `t`, renaming binders that would capture a
/// variable of `t`.
pub fn substitute(f: &Formula, v: &str, t: &Term) -> Formula {
    let mut map = BTreeMap::new();
    map.insert(v.to_string(), t.clone());
    substitute_all(f, &map)
}

/// [`substitute`] with both inputs checked against `sig` first.
pub fn substitute_checked(
    sig: &Signature,
    f: &Formula,
    v: &str,
    t: &Term,
) -> Result<Formula, FormulaError> {
    sig.check_formula(f)?;
    sig.check_term(t)?;
    Ok(substitute(f, v, t))
}

/// Simultaneous substitution. Renamed binders avoid every name in `f` and
/// in the substituted terms.
pub fn substitute_all(f: &Formula, map: &BTreeMap<String, Term>) -> Formula {
    let mut pool = VariablePool::seeded(f.all_vars());
    for t in map.values() {
        pool.reserve_all(t.free_vars());
    }
    pool.reserve_all(map.keys().cloned());
    substitute_all_with(f, map, &mut pool)
}

/// Simultaneous substitution drawing renamed binders from `pool`.
pub fn substitute_all_with(
    f: &Formula,
    map: &BTreeMap<String, Term>,
    pool: &mut VariablePool,
) -> Formula {
    match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Atom(r, args) => {
            Formula::Atom(r.clone(), args.iter().map(|t| subst_term(t, map)).collect())
        }
        Formula::Eq(a, b) => Formula::Eq(subst_term(a, map), subst_term(b, map)),
        Formula::Not(g) => Formula::not(substitute_all_with(g, map, pool)),
        Formula::And(a, b) => Formula::and(
            substitute_all_with(a, map, pool),
            substitute_all_with(b, map, pool),
        ),
        Formula::Or(a, b) => Formula::or(
            substitute_all_with(a, map, pool),
            substitute_all_with(b, map, pool),
        ),
        Formula::Implies(a, b) => Formula::implies(
            substitute_all_with(a, map, pool),
            substitute_all_with(b, map, pool),
        ),
        Formula::Iff(a, b) => Formula::iff(
            substitute_all_with(a, map, pool),
            substitute_all_with(b, map, pool),
        ),
        Formula::Forall(x, body) | Formula::Exists(x, body) => {
            let free = body.free_vars();
            let active: BTreeMap<String, Term> = map
                .iter()
                .filter(|(k, _)| *k != x && free.contains(*k))
                .map(|(k, t)| (k.clone(), t.clone()))
                .collect();
            if active.is_empty() {
                return f.clone();
            }
            let mut incoming = BTreeSet::new();
            for t in active.values() {
                t.collect_vars(&mut incoming);
            }
            let (binder, body) = if incoming.contains(x) {
                let mut avoid = incoming;
                avoid.extend(body.all_vars());
                avoid.extend(active.keys().cloned());
                let renamed = pool.fresh_avoiding(x, &avoid);
                let mut renaming = active;
                renaming.insert(x.clone(), Term::Var(renamed.clone()));
                (renamed, substitute_all_with(body, &renaming, pool))
            } else {
                (x.clone(), substitute_all_with(body, &active, pool))
            };
            match f {
                Formula::Forall(..) => Formula::forall(binder, body),
                _ => Formula::exists(binder, body),
            }
        }
    }
}
