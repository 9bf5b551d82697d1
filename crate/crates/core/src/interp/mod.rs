//! Definitional interpretations and the formula compiler built on them.
//!
//! An [`Interpretation`] carries a universe formula in one designated free
//! variable and one defining formula per source relation symbol. Equality
//! is interpreted as equality. Translation substitutes the defining
//! formulas for atoms and relativizes quantifiers to the universe:
//!
//! ```text
//! forall x. φ   ↦   forall x. (U(x) -> φ')
//! exists x. φ   ↦   exists x. (U(x) & φ')
//! ```

mod definition;
mod manifest;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::formula::{
    parse, substitute_all_with, Formula, FormulaError, Signature, Term, VariablePool, DIVIDES,
    LESS,
};

pub use definition::{expand_definition, Definition, SymbolKind};
pub use manifest::ManifestError;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum InterpError {
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error("relation `{0}` has no translation")]
    UnmappedRelation(String),
    #[error("term `{0}` uses a function symbol absent from the target language; flatten it first")]
    UntranslatableTerm(String),
    #[error("signature mismatch: `{left}` vs `{right}`")]
    SignatureMismatch { left: String, right: String },
    #[error("invalid interpretation: {0}")]
    Invalid(String),
    #[error("definition of `{0}` refers to itself")]
    CyclicDefinition(String),
}

/// A defining formula with its parameters in argument order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomDefinition {
    pub params: Vec<String>,
    pub formula: Formula,
}

impl AtomDefinition {
    pub fn new(params: &[&str], formula: Formula) -> Self {
        AtomDefinition {
            params: params.iter().map(|p| p.to_string()).collect(),
            formula,
        }
    }

    /// The defining formula with `args` substituted for the parameters.
    pub fn instantiate(&self, args: &[Term], pool: &mut VariablePool) -> Formula {
        let map: BTreeMap<String, Term> = self.params.iter().cloned().zip(args.iter().cloned()).collect();
        for t in args {
            pool.reserve_all(t.free_vars());
        }
        substitute_all_with(&self.formula, &map, pool)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interpretation {
    name: String,
    source: Signature,
    target: Signature,
    universe_var: String,
    universe: Formula,
    atoms: BTreeMap<String, AtomDefinition>,
}

impl Interpretation {
    /// Validates free variables, parameter lists and signatures.
    pub fn new(
        name: impl Into<String>,
        source: Signature,
        target: Signature,
        universe_var: impl Into<String>,
        universe: Formula,
        atoms: BTreeMap<String, AtomDefinition>,
    ) -> Result<Self, InterpError> {
        let universe_var = universe_var.into();
        target.check_formula(&universe)?;
        if universe.free_vars() != BTreeSet::from([universe_var.clone()]) {
            return Err(InterpError::Invalid(format!(
                "universe formula `{universe}` must have exactly `{universe_var}` free"
            )));
        }
        for (sym, def) in &atoms {
            let arity = source
                .relation_arity(sym)
                .ok_or_else(|| FormulaError::UnknownRelation(sym.clone()))?;
            if arity != def.params.len() {
                return Err(FormulaError::ArityMismatch {
                    symbol: sym.clone(),
                    expected: arity,
                    found: def.params.len(),
                }
                .into());
            }
            let params: BTreeSet<String> = def.params.iter().cloned().collect();
            if params.len() != def.params.len() {
                return Err(InterpError::Invalid(format!(
                    "repeated parameter in the definition of `{sym}`"
                )));
            }
            target.check_formula(&def.formula)?;
            if def.formula.free_vars() != params {
                return Err(InterpError::Invalid(format!(
                    "definition of `{sym}` must have exactly its parameters free"
                )));
            }
        }
        Ok(Interpretation {
            name: name.into(),
            source,
            target,
            universe_var,
            universe,
            atoms,
        })
    }

    /// Identity on `sig`: universe `u = u`, every relation mapped to itself.
    pub fn identity(sig: &Signature) -> Self {
        let atoms = sig
            .relations()
            .iter()
            .map(|r| {
                let params: Vec<String> = (1..=r.arity).map(|i| format!("p{i}")).collect();
                let args = params.iter().map(|p| Term::var(p.as_str())).collect();
                let def = AtomDefinition {
                    params,
                    formula: Formula::atom(r.name.clone(), args),
                };
                (r.name.clone(), def)
            })
            .collect();
        Interpretation::new(
            format!("identity_{}", sig.name()),
            sig.clone(),
            sig.clone(),
            "u",
            Formula::eq("u", "u"),
            atoms,
        )
        .expect("identity is well formed")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &Signature {
        &self.source
    }

    pub fn target(&self) -> &Signature {
        &self.target
    }

    pub fn universe_var(&self) -> &str {
        &self.universe_var
    }

    pub fn universe(&self) -> &Formula {
        &self.universe
    }

    pub fn atoms(&self) -> &BTreeMap<String, AtomDefinition> {
        &self.atoms
    }

    /// Returns a copy with the entry for `symbol` replaced.
    pub fn with_atom(&self, symbol: &str, def: AtomDefinition) -> Result<Self, InterpError> {
        let mut atoms = self.atoms.clone();
        atoms.insert(symbol.to_string(), def);
        Interpretation::new(
            self.name.clone(),
            self.source.clone(),
            self.target.clone(),
            self.universe_var.clone(),
            self.universe.clone(),
            atoms,
        )
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// The universe formula instantiated at `t`.
    pub fn universe_at(&self, t: &Term, pool: &mut VariablePool) -> Formula {
        let map = BTreeMap::from([(self.universe_var.clone(), t.clone())]);
        pool.reserve_all(t.free_vars());
        substitute_all_with(&self.universe, &map, pool)
    }

    /// A pool seeded with every name this interpretation and `f` use.
    pub fn pool_for(&self, f: &Formula) -> VariablePool {
        let mut pool = VariablePool::seeded(f.all_vars());
        pool.reserve(self.universe_var.clone());
        pool.reserve_all(self.universe.all_vars());
        for def in self.atoms.values() {
            pool.reserve_all(def.formula.all_vars());
        }
        pool
    }

    fn check_term(&self, t: &Term) -> Result<(), InterpError> {
        match t {
            Term::Var(_) => Ok(()),
            Term::Lit(_) if self.target.allows_literals() => Ok(()),
            Term::App(f, args) if self.target.function_arity(f) == Some(args.len()) => {
                args.iter().try_for_each(|a| self.check_term(a))
            }
            _ => Err(InterpError::UntranslatableTerm(t.to_string())),
        }
    }

    /// Compiles a source-language formula into the target language.
    pub fn translate(&self, f: &Formula, pool: &mut VariablePool) -> Result<Formula, InterpError> {
        self.source.check_formula(f)?;
        pool.reserve_all(f.all_vars());
        self.translate_checked(f, pool)
    }

    /// [`translate`](Self::translate) with a pool built by [`pool_for`](Self::pool_for).
    pub fn translate_fresh(&self, f: &Formula) -> Result<Formula, InterpError> {
        let mut pool = self.pool_for(f);
        self.translate(f, &mut pool)
    }

    fn translate_checked(&self, f: &Formula, pool: &mut VariablePool) -> Result<Formula, InterpError> {
        Ok(match f {
            Formula::True | Formula::False => f.clone(),
            Formula::Atom(r, args) => {
                let def = self
                    .atoms
                    .get(r)
                    .ok_or_else(|| InterpError::UnmappedRelation(r.clone()))?;
                args.iter().try_for_each(|t| self.check_term(t))?;
                def.instantiate(args, pool)
            }
            Formula::Eq(a, b) => {
                self.check_term(a)?;
                self.check_term(b)?;
                f.clone()
            }
            Formula::Not(g) => Formula::not(self.translate_checked(g, pool)?),
            Formula::And(a, b) => Formula::and(
                self.translate_checked(a, pool)?,
                self.translate_checked(b, pool)?,
            ),
            Formula::Or(a, b) => Formula::or(
                self.translate_checked(a, pool)?,
                self.translate_checked(b, pool)?,
            ),
            Formula::Implies(a, b) => Formula::implies(
                self.translate_checked(a, pool)?,
                self.translate_checked(b, pool)?,
            ),
            Formula::Iff(a, b) => Formula::iff(
                self.translate_checked(a, pool)?,
                self.translate_checked(b, pool)?,
            ),
            Formula::Forall(x, body) => {
                let guard = self.universe_at(&Term::var(x.as_str()), pool);
                Formula::forall(x.clone(), Formula::implies(guard, self.translate_checked(body, pool)?))
            }
            Formula::Exists(x, body) => {
                let guard = self.universe_at(&Term::var(x.as_str()), pool);
                Formula::exists(x.clone(), Formula::and(guard, self.translate_checked(body, pool)?))
            }
        })
    }

    /// Parses one text manifest.
    pub fn from_manifest(text: &str) -> Result<Self, ManifestError> {
        manifest::parse_manifest(text)
    }

    /// Serializes to the text manifest format.
    pub fn to_manifest(&self) -> String {
        manifest::write_manifest(self)
    }
}

/// `inner ∘ outer`: translates `outer`'s source language into `inner`'s
/// target language in one step.
pub fn compose(outer: &Interpretation, inner: &Interpretation) -> Result<Interpretation, InterpError> {
    if !outer.target.same_symbols(&inner.source) {
        return Err(InterpError::SignatureMismatch {
            left: outer.target.name().into(),
            right: inner.source.name().into(),
        });
    }
    let u = outer.universe_var.clone();
    let mut pool = inner.pool_for(&outer.universe);
    pool.reserve(u.clone());
    let universe = Formula::and(
        inner.translate(&outer.universe, &mut pool)?,
        inner.universe_at(&Term::var(u.as_str()), &mut pool),
    );
    let mut atoms = BTreeMap::new();
    for (sym, def) in &outer.atoms {
        let mut pool = inner.pool_for(&def.formula);
        let formula = inner.translate(&def.formula, &mut pool)?;
        atoms.insert(
            sym.clone(),
            AtomDefinition {
                params: def.params.clone(),
                formula,
            },
        );
    }
    Interpretation::new(
        format!("{}_then_{}", outer.name, inner.name),
        outer.source.clone(),
        inner.target.clone(),
        u,
        universe,
        atoms,
    )
}

fn modulo(a: &str, b: &str) -> Term {
    Term::modulo(Term::var(a), Term::var(b))
}

/// `t = 0` in the language of mod, quantifier-free: `t mod t = t`.
/// Valid because t mod t = 0 for t > 0 and 0 mod 0 = 0.
pub fn zero(t: &Term) -> Formula {
    Formula::Eq(Term::modulo(t.clone(), t.clone()), t.clone())
}

/// `t = 0` as `exists y. y mod y = t`, with `y` fresh.
pub fn zero_exists(t: &Term, pool: &mut VariablePool) -> Formula {
    pool.reserve_all(t.free_vars());
    let y = pool.fresh("y");
    Formula::exists(y.clone(), Formula::Eq(modulo(&y, &y), t.clone()))
}

/// `t ≠ 0`, the universe of ℕ₊ inside ℕ.
pub fn nonzero(t: &Term) -> Formula {
    Formula::not(zero(t))
}

/// (ℕ₊, <, |) interpreted in (ℕ, mod):
///
/// * universe: `not (u mod u = u)`
/// * `a < b`: `a mod b = a`
/// * `b divides a`: `(a mod b) mod (a mod b) = a mod b`
pub fn paper_interpretation() -> Interpretation {
    let atoms = BTreeMap::from([
        (
            LESS.to_string(),
            AtomDefinition::new(&["a", "b"], Formula::Eq(modulo("a", "b"), Term::var("a"))),
        ),
        (
            DIVIDES.to_string(),
            AtomDefinition::new(&["b", "a"], zero(&modulo("a", "b"))),
        ),
    ]);
    Interpretation::new(
        "paper",
        Signature::order_divisibility(),
        Signature::modulo(),
        "u",
        nonzero(&Term::var("u")),
        atoms,
    )
    .expect("well formed")
}

/// Full-ℕ forms of the three characterizations, with Zero in
/// quantifier-free form. Each is a formula over `{mod}` in `x` and `y`.
pub mod lemma {
    use super::*;

    /// `x = 0` iff `exists y. y mod y = x`.
    pub fn zero_exists_form() -> Formula {
        parse("exists y. y mod y = x", &Signature::modulo()).expect("valid")
    }

    /// `x < y` iff `(x = 0 & y ≠ 0) or (x ≠ 0 & y ≠ 0 & x mod y = x)`.
    pub fn order_full_form() -> Formula {
        let (x, y) = (Term::var("x"), Term::var("y"));
        Formula::or(
            Formula::and(zero(&x), nonzero(&y)),
            Formula::and(
                Formula::and(nonzero(&x), nonzero(&y)),
                Formula::Eq(Term::modulo(x.clone(), y), x),
            ),
        )
    }

    /// `y | x` iff `x = 0 or (x ≠ 0 & x mod y = 0)`.
    pub fn divisibility_full_form() -> Formula {
        let x = Term::var("x");
        let r = Term::modulo(x.clone(), Term::var("y"));
        Formula::or(zero(&x), Formula::and(nonzero(&x), zero(&r)))
    }
}
