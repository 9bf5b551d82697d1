//! First-order syntax: signatures, terms, formulas, and the operations on
//! them that do not depend on any particular structure.

mod parse;
mod print;
mod subst;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

pub use parse::{parse, ParseError, ParseErrorKind};
pub use subst::{substitute, substitute_all, substitute_all_with, substitute_checked};

/// Relation symbol printed and parsed infix as `a < b`.
pub const LESS: &str = "<";
/// Relation symbol printed and parsed infix as `b divides a` (meaning b | a).
pub const DIVIDES: &str = "divides";
/// Function symbol printed and parsed infix as `a mod b`.
pub const MOD: &str = "mod";
/// Successor relation: `succ(x, y)` holds iff x = y + 1.
pub const SUCC: &str = "succ";

pub(crate) const KEYWORDS: &[&str] = &[
    "forall", "exists", "not", "or", "mod", "divides", "true", "false",
];

pub(crate) fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

/// True for names matching `[a-zA-Z][a-zA-Z0-9_']*` that are not keywords.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'') && !is_keyword(s)
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("symbol `{0}` declared twice")]
    DuplicateSymbol(String),
    #[error("symbol `{name}` has invalid arity {arity}")]
    InvalidArity { name: String, arity: usize },
    #[error("`=` is reserved for equality")]
    ReservedEquality,
    #[error("relation symbol `{0}` is not in the signature")]
    UnknownRelation(String),
    #[error("function symbol `{0}` is not in the signature")]
    UnknownFunction(String),
    #[error("symbol `{symbol}` expects {expected} arguments, got {found}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("literal {0} used in a signature without literals")]
    LiteralNotAllowed(u64),
    #[error("`{0}` is not a valid variable name")]
    InvalidVariable(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
}

impl Symbol {
    pub fn new(name: impl Into<String>, arity: usize) -> Self {
        Symbol {
            name: name.into(),
            arity,
        }
    }
}

/// The non-logical vocabulary of a language. Equality is implicit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    name: String,
    relations: Vec<Symbol>,
    functions: Vec<Symbol>,
    allows_literals: bool,
}

impl Signature {
    pub fn new(
        name: impl Into<String>,
        relations: Vec<Symbol>,
        functions: Vec<Symbol>,
        allows_literals: bool,
    ) -> Result<Self, FormulaError> {
        let mut seen = BTreeSet::new();
        for sym in relations.iter().chain(&functions) {
            if sym.name == "=" {
                return Err(FormulaError::ReservedEquality);
            }
            if sym.arity == 0 {
                return Err(FormulaError::InvalidArity {
                    name: sym.name.clone(),
                    arity: sym.arity,
                });
            }
            if !seen.insert(sym.name.as_str()) {
                return Err(FormulaError::DuplicateSymbol(sym.name.clone()));
            }
        }
        Ok(Signature {
            name: name.into(),
            relations,
            functions,
            allows_literals,
        })
    }

    /// `{mod}`: one binary function, no constants.
    pub fn modulo() -> Self {
        Self::new("mod", vec![], vec![Symbol::new(MOD, 2)], false).expect("valid")
    }

    /// `{<, divides}`.
    pub fn order_divisibility() -> Self {
        Self::new(
            "posdiv",
            vec![Symbol::new(LESS, 2), Symbol::new(DIVIDES, 2)],
            vec![],
            false,
        )
        .expect("valid")
    }

    /// `{<}` alone.
    pub fn order() -> Self {
        Self::new("order", vec![Symbol::new(LESS, 2)], vec![], false).expect("valid")
    }

    /// `{<, succ}`.
    pub fn order_successor() -> Self {
        Self::new(
            "ordsucc",
            vec![Symbol::new(LESS, 2), Symbol::new(SUCC, 2)],
            vec![],
            false,
        )
        .expect("valid")
    }

    /// `{<, divides, succ}`.
    pub fn natfull() -> Self {
        Self::new(
            "natfull",
            vec![
                Symbol::new(LESS, 2),
                Symbol::new(DIVIDES, 2),
                Symbol::new(SUCC, 2),
            ],
            vec![],
            false,
        )
        .expect("valid")
    }

    /// Looks up one of the built-in signatures by name.
    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "mod" => Some(Self::modulo()),
            "posdiv" => Some(Self::order_divisibility()),
            "order" => Some(Self::order()),
            "ordsucc" => Some(Self::order_successor()),
            "natfull" => Some(Self::natfull()),
            _ => None,
        }
    }

    pub fn with_literals(mut self) -> Self {
        self.allows_literals = true;
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_function(mut self, sym: Symbol) -> Result<Self, FormulaError> {
        self.functions.push(sym);
        Self::new(self.name, self.relations, self.functions, self.allows_literals)
    }

    pub fn with_relation(mut self, sym: Symbol) -> Result<Self, FormulaError> {
        self.relations.push(sym);
        Self::new(self.name, self.relations, self.functions, self.allows_literals)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn relations(&self) -> &[Symbol] {
        &self.relations
    }

    pub fn functions(&self) -> &[Symbol] {
        &self.functions
    }

    pub fn allows_literals(&self) -> bool {
        self.allows_literals
    }

    pub fn relation_arity(&self, name: &str) -> Option<usize> {
        self.relations
            .iter()
            .find(|s| s.name == name)
            .map(|s| s.arity)
    }

    pub fn function_arity(&self, name: &str) -> Option<usize> {
        self.functions
            .iter()
            .find(|s| s.name == name)
            .map(|s| s.arity)
    }

    /// Same symbols with the same arities, ignoring names and order.
    pub fn same_symbols(&self, other: &Signature) -> bool {
        type Symbols<'a> = BTreeSet<(&'a str, usize)>;
        fn key(s: &Signature) -> (Symbols<'_>, Symbols<'_>, bool) {
            let rels = s.relations.iter().map(|r| (r.name.as_str(), r.arity)).collect();
            let funs = s.functions.iter().map(|f| (f.name.as_str(), f.arity)).collect();
            (rels, funs, s.allows_literals)
        }
        key(self) == key(other)
    }

    pub fn check_term(&self, t: &Term) -> Result<(), FormulaError> {
        match t {
            Term::Var(v) if !is_identifier(v) => Err(FormulaError::InvalidVariable(v.clone())),
            Term::Var(_) => Ok(()),
            Term::Lit(n) if !self.allows_literals => Err(FormulaError::LiteralNotAllowed(*n)),
            Term::Lit(_) => Ok(()),
            Term::App(f, args) => {
                let arity = self
                    .function_arity(f)
                    .ok_or_else(|| FormulaError::UnknownFunction(f.clone()))?;
                if arity != args.len() {
                    return Err(FormulaError::ArityMismatch {
                        symbol: f.clone(),
                        expected: arity,
                        found: args.len(),
                    });
                }
                args.iter().try_for_each(|a| self.check_term(a))
            }
        }
    }

    /// Checks that every symbol, arity, literal and variable name in `f`
    /// is admissible here.
    pub fn check_formula(&self, f: &Formula) -> Result<(), FormulaError> {
        match f {
            Formula::True | Formula::False => Ok(()),
            Formula::Atom(r, args) => {
                let arity = self
                    .relation_arity(r)
                    .ok_or_else(|| FormulaError::UnknownRelation(r.clone()))?;
                if arity != args.len() {
                    return Err(FormulaError::ArityMismatch {
                        symbol: r.clone(),
                        expected: arity,
                        found: args.len(),
                    });
                }
                args.iter().try_for_each(|a| self.check_term(a))
            }
            Formula::Eq(a, b) => {
                self.check_term(a)?;
                self.check_term(b)
            }
            Formula::Not(g) => self.check_formula(g),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                self.check_formula(a)?;
                self.check_formula(b)
            }
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                if !is_identifier(v) {
                    return Err(FormulaError::InvalidVariable(v.clone()));
                }
                self.check_formula(body)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Lit(u64),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn app(f: impl Into<String>, args: Vec<Term>) -> Self {
        Term::App(f.into(), args)
    }

    /// `a mod b`.
    pub fn modulo(a: Term, b: Term) -> Self {
        Term::App(MOD.to_string(), vec![a, b])
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub(crate) fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Lit(_) => {}
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            Term::Var(_) | Term::Lit(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::node_count).sum::<usize>(),
        }
    }

    pub fn contains_function(&self, f: &str) -> bool {
        match self {
            Term::Var(_) | Term::Lit(_) => false,
            Term::App(g, args) => g == f || args.iter().any(|a| a.contains_function(f)),
        }
    }
}

impl From<&str> for Term {
    fn from(v: &str) -> Self {
        Term::var(v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Atom(String, Vec<Term>),
    Eq(Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

/// Size statistics used for fuzzer sizing and shrink ordering.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Measure {
    /// All AST nodes, terms included.
    pub nodes: usize,
    /// Maximum nesting of quantifiers.
    pub depth: usize,
}

impl Formula {
    pub fn atom(rel: impl Into<String>, args: Vec<Term>) -> Self {
        Formula::Atom(rel.into(), args)
    }

    pub fn less(a: impl Into<Term>, b: impl Into<Term>) -> Self {
        Formula::Atom(LESS.into(), vec![a.into(), b.into()])
    }

    /// `d divides n`.
    pub fn divides(d: impl Into<Term>, n: impl Into<Term>) -> Self {
        Formula::Atom(DIVIDES.into(), vec![d.into(), n.into()])
    }

    pub fn eq(a: impl Into<Term>, b: impl Into<Term>) -> Self {
        Formula::Eq(a.into(), b.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn forall(v: impl Into<String>, body: Formula) -> Self {
        Formula::Forall(v.into(), Box::new(body))
    }

    pub fn exists(v: impl Into<String>, body: Formula) -> Self {
        Formula::Exists(v.into(), Box::new(body))
    }

    /// Variables with at least one free occurrence.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let mut bound = Vec::new();
        self.collect_free(&mut bound, &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let term_free = |t: &Term, bound: &Vec<String>, out: &mut BTreeSet<String>| {
            for v in t.free_vars() {
                if !bound.contains(&v) {
                    out.insert(v);
                }
            }
        };
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(_, args) => args.iter().for_each(|t| term_free(t, bound, out)),
            Formula::Eq(a, b) => {
                term_free(a, bound, out);
                term_free(b, bound, out);
            }
            Formula::Not(g) => g.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                bound.push(v.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_free(&self, v: &str) -> bool {
        self.free_vars().contains(v)
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Every variable name occurring anywhere, bound or free, including binders.
    pub fn all_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_all(&mut out);
        out
    }

    fn collect_all(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(_, args) => args.iter().for_each(|t| t.collect_vars(out)),
            Formula::Eq(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Formula::Not(g) => g.collect_all(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_all(out);
                b.collect_all(out);
            }
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                out.insert(v.clone());
                body.collect_all(out);
            }
        }
    }

    pub fn measure(&self) -> Measure {
        match self {
            Formula::True | Formula::False => Measure { nodes: 1, depth: 0 },
            Formula::Atom(_, args) => Measure {
                nodes: 1 + args.iter().map(Term::node_count).sum::<usize>(),
                depth: 0,
            },
            Formula::Eq(a, b) => Measure {
                nodes: 1 + a.node_count() + b.node_count(),
                depth: 0,
            },
            Formula::Not(g) => {
                let m = g.measure();
                Measure {
                    nodes: m.nodes + 1,
                    depth: m.depth,
                }
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                let (ma, mb) = (a.measure(), b.measure());
                Measure {
                    nodes: 1 + ma.nodes + mb.nodes,
                    depth: ma.depth.max(mb.depth),
                }
            }
            Formula::Forall(_, body) | Formula::Exists(_, body) => {
                let m = body.measure();
                Measure {
                    nodes: m.nodes + 1,
                    depth: m.depth + 1,
                }
            }
        }
    }

    /// Total number of quantifier nodes (not nesting depth).
    pub fn quantifier_count(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Atom(..) | Formula::Eq(..) => 0,
            Formula::Not(g) => g.quantifier_count(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.quantifier_count() + b.quantifier_count()
            }
            Formula::Forall(_, body) | Formula::Exists(_, body) => 1 + body.quantifier_count(),
        }
    }

    pub fn mentions_relation(&self, r: &str) -> bool {
        match self {
            Formula::True | Formula::False | Formula::Eq(..) => false,
            Formula::Atom(s, _) => s == r,
            Formula::Not(g) => g.mentions_relation(r),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.mentions_relation(r) || b.mentions_relation(r)
            }
            Formula::Forall(_, body) | Formula::Exists(_, body) => body.mentions_relation(r),
        }
    }

    pub fn mentions_function(&self, f: &str) -> bool {
        match self {
            Formula::True | Formula::False => false,
            Formula::Atom(_, args) => args.iter().any(|t| t.contains_function(f)),
            Formula::Eq(a, b) => a.contains_function(f) || b.contains_function(f),
            Formula::Not(g) => g.mentions_function(f),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.mentions_function(f) || b.mentions_function(f)
            }
            Formula::Forall(_, body) | Formula::Exists(_, body) => body.mentions_function(f),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print::term_to_string(self))
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print::formula_to_string(self))
    }
}

/// Issues variable names that collide with nothing reserved or issued before.
///
/// Names are `base_k` with the smallest `k >= 1` that is free.
#[derive(Clone, Debug, Default)]
pub struct VariablePool {
    reserved: BTreeSet<String>,
    counter: usize,
}

impl VariablePool {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn seeded<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut pool = Self::new();
        pool.reserve_all(names);
        pool
    }

    pub fn reserve(&mut self, name: impl Into<String>) {
        self.reserved.insert(name.into());
    }

    pub fn reserve_all<I, S>(&mut self, names: I)
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.reserved.extend(names.into_iter().map(Into::into));
    }

    pub fn is_reserved(&self, name: &str) -> bool {
        self.reserved.contains(name)
    }

    /// Number of names issued so far.
    pub fn issued(&self) -> usize {
        self.counter
    }

    pub fn fresh(&mut self, base: &str) -> String {
        self.fresh_avoiding(base, &BTreeSet::new())
    }

    /// Like [`fresh`](Self::fresh), additionally avoiding `extra`.
    pub fn fresh_avoiding(&mut self, base: &str, extra: &BTreeSet<String>) -> String {
        let name = (1..)
            .map(|k| format!("{base}_{k}"))
            .find(|n| !self.reserved.contains(n) && !extra.contains(n))
            .expect("unbounded search");
        self.reserved.insert(name.clone());
        self.counter += 1;
        name
    }
}
