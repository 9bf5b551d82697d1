use std::collections::BTreeSet;

use crate::formula::{Formula, Signature, Symbol, Term, VariablePool};

use super::{AtomDefinition, InterpError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymbolKind {
    Function,
    Relation,
}

/// A symbol defined by a formula over a base signature.
///
/// For a function symbol of arity `n`, `params` holds the `n` inputs followed
/// by the output, and `graph` expresses `output = f(inputs)`. For a relation
/// symbol, `params` holds its `n` arguments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Definition {
    symbol: String,
    arity: usize,
    kind: SymbolKind,
    params: Vec<String>,
    graph: Formula,
    base: Signature,
}

impl Definition {
    pub fn new(
        symbol: impl Into<String>,
        kind: SymbolKind,
        params: &[&str],
        graph: Formula,
        base: Signature,
    ) -> Result<Self, InterpError> {
        let symbol = symbol.into();
        let arity = match kind {
            SymbolKind::Function => params.len().checked_sub(1),
            SymbolKind::Relation => Some(params.len()),
        }
        .filter(|&a| a > 0)
        .ok_or_else(|| InterpError::Invalid(format!("`{symbol}` needs at least one argument")))?;
        if graph.mentions_relation(&symbol) || graph.mentions_function(&symbol) {
            return Err(InterpError::CyclicDefinition(symbol));
        }
        base.check_formula(&graph)?;
        let names: BTreeSet<String> = params.iter().map(|p| p.to_string()).collect();
        if names.len() != params.len() || graph.free_vars() != names {
            return Err(InterpError::Invalid(format!(
                "graph of `{symbol}` must have exactly its distinct parameters free"
            )));
        }
        Ok(Definition {
            symbol,
            arity,
            kind,
            params: params.iter().map(|p| p.to_string()).collect(),
            graph,
            base,
        })
    }

    pub fn symbol(&self) -> &str {
        &self.symbol
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn kind(&self) -> SymbolKind {
        self.kind
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn graph(&self) -> &Formula {
        &self.graph
    }

    pub fn base(&self) -> &Signature {
        &self.base
    }

    /// The base signature extended with the defined symbol.
    pub fn extended_signature(&self) -> Signature {
        let sym = Symbol::new(self.symbol.clone(), self.arity);
        match self.kind {
            SymbolKind::Function => self.base.clone().with_function(sym),
            SymbolKind::Relation => self.base.clone().with_relation(sym),
        }
        .expect("symbol is new to the base signature")
    }

    fn as_atom_definition(&self) -> AtomDefinition {
        AtomDefinition {
            params: self.params.clone(),
            formula: self.graph.clone(),
        }
    }
}

/// Eliminates the defined symbol from `f`.
///
/// Relation atoms `R(t̄)` become the graph instantiated at `t̄`. For a
/// function symbol, each atom containing an application `S(t̄)` becomes
/// `exists w. Graph(t̄, w) & atom[w/S(t̄)]`, innermost applications first,
/// with `w` fresh.
pub fn expand_definition(
    d: &Definition,
    f: &Formula,
    pool: &mut VariablePool,
) -> Result<Formula, InterpError> {
    d.extended_signature().check_formula(f)?;
    pool.reserve_all(f.all_vars());
    pool.reserve_all(d.graph.all_vars());
    Ok(expand(d, f, pool))
}

fn expand(d: &Definition, f: &Formula, pool: &mut VariablePool) -> Formula {
    match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Atom(r, args) if d.kind == SymbolKind::Relation && *r == d.symbol => {
            d.as_atom_definition().instantiate(args, pool)
        }
        Formula::Atom(..) | Formula::Eq(..) if d.kind == SymbolKind::Function => {
            flatten_atom(d, f.clone(), pool)
        }
        Formula::Atom(..) | Formula::Eq(..) => f.clone(),
        Formula::Not(g) => Formula::not(expand(d, g, pool)),
        Formula::And(a, b) => Formula::and(expand(d, a, pool), expand(d, b, pool)),
        Formula::Or(a, b) => Formula::or(expand(d, a, pool), expand(d, b, pool)),
        Formula::Implies(a, b) => Formula::implies(expand(d, a, pool), expand(d, b, pool)),
        Formula::Iff(a, b) => Formula::iff(expand(d, a, pool), expand(d, b, pool)),
        Formula::Forall(v, body) => Formula::forall(v.clone(), expand(d, body, pool)),
        Formula::Exists(v, body) => Formula::exists(v.clone(), expand(d, body, pool)),
    }
}

fn innermost_application<'t>(t: &'t Term, symbol: &str) -> Option<&'t Term> {
    match t {
        Term::App(g, args) => args
            .iter()
            .find_map(|a| innermost_application(a, symbol))
            .or_else(|| (g == symbol).then_some(t)),
        _ => None,
    }
}

fn replace_term(t: &Term, target: &Term, with: &Term) -> Term {
    if t == target {
        return with.clone();
    }
    match t {
        Term::App(g, args) => Term::App(
            g.clone(),
            args.iter().map(|a| replace_term(a, target, with)).collect(),
        ),
        _ => t.clone(),
    }
}

fn flatten_atom(d: &Definition, atom: Formula, pool: &mut VariablePool) -> Formula {
    let terms: Vec<&Term> = match &atom {
        Formula::Atom(_, args) => args.iter().collect(),
        Formula::Eq(a, b) => vec![a, b],
        _ => unreachable!("only atoms are flattened"),
    };
    let Some(app) = terms
        .iter()
        .find_map(|t| innermost_application(t, &d.symbol))
        .cloned()
    else {
        return atom;
    };
    let Term::App(_, inputs) = &app else {
        unreachable!()
    };
    let output = d.params.last().expect("function graphs have an output");
    let w = pool.fresh(output);
    let mut args = inputs.clone();
    args.push(Term::var(w.as_str()));
    let graph = d.as_atom_definition().instantiate(&args, pool);
    let replacement = Term::var(w.as_str());
    let rest = match atom {
        Formula::Atom(r, args) => Formula::Atom(
            r,
            args.iter().map(|t| replace_term(t, &app, &replacement)).collect(),
        ),
        Formula::Eq(a, b) => Formula::Eq(
            replace_term(&a, &app, &replacement),
            replace_term(&b, &app, &replacement),
        ),
        _ => unreachable!(),
    };
    Formula::exists(w, Formula::and(graph, flatten_atom(d, rest, pool)))
}
