//! Interpreted structures over the natural numbers and bounded evaluation.
//!
//! Quantifiers range over the structure's universe intersected with
//! `[0, bound]`. Bounded truth is a testing device: a sentence true at every
//! bound tried may still be false in the full structure, and vice versa.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::RangeInclusive;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{Formula, FormulaError, Signature, Term, DIVIDES, LESS, MOD, SUCC};

pub type Value = u64;

/// Native operations of the built-in structures.
pub mod native {
    use super::Value;

    /// `x mod y`, with `x mod 0 = x`.
    pub fn remainder(x: Value, y: Value) -> Value {
        if y == 0 {
            x
        } else {
            x % y
        }
    }

    /// `d | n`: some `k` with `n = k * d`. Zero divides only zero; every
    /// number divides zero.
    pub fn divides(d: Value, n: Value) -> bool {
        match n.checked_div(d) {
            Some(q) => q * d == n,
            None => n == 0,
        }
    }

    pub fn less(x: Value, y: Value) -> bool {
        x < y
    }

    /// `x = y + 1`.
    pub fn successor(x: Value, y: Value) -> bool {
        y.checked_add(1) == Some(x)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Universe {
    /// All of ℕ, including 0.
    Naturals,
    /// ℕ₊ = {1, 2, ...}.
    Positive,
}

impl Universe {
    pub fn min(self) -> Value {
        match self {
            Universe::Naturals => 0,
            Universe::Positive => 1,
        }
    }

    pub fn contains(self, v: Value) -> bool {
        v >= self.min()
    }

    /// Universe elements up to and including `bound`, ascending.
    pub fn elements(self, bound: Value) -> RangeInclusive<Value> {
        self.min()..=bound
    }
}

pub type RelationFn = Arc<dyn Fn(&[Value]) -> bool + Send + Sync>;
/// Returns `None` when the result is not representable.
pub type FunctionFn = Arc<dyn Fn(&[Value]) -> Option<Value> + Send + Sync>;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("symbol `{0}` is not in the structure's signature")]
    NotInSignature(String),
    #[error("symbol `{0}` has no interpretation")]
    Uninterpreted(String),
}

/// An interpreted model: universe plus function and relation tables.
#[derive(Clone)]
pub struct Structure {
    name: String,
    signature: Signature,
    universe: Universe,
    functions: BTreeMap<String, FunctionFn>,
    relations: BTreeMap<String, RelationFn>,
}

impl fmt::Debug for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Structure")
            .field("name", &self.name)
            .field("signature", &self.signature)
            .field("universe", &self.universe)
            .finish_non_exhaustive()
    }
}

impl Structure {
    pub fn new(name: impl Into<String>, signature: Signature, universe: Universe) -> Self {
        Structure {
            name: name.into(),
            signature,
            universe,
            functions: BTreeMap::new(),
            relations: BTreeMap::new(),
        }
    }

    pub fn with_function(
        mut self,
        name: &str,
        f: impl Fn(&[Value]) -> Option<Value> + Send + Sync + 'static,
    ) -> Result<Self, StructureError> {
        if self.signature.function_arity(name).is_none() {
            return Err(StructureError::NotInSignature(name.into()));
        }
        self.functions.insert(name.into(), Arc::new(f));
        Ok(self)
    }

    pub fn with_relation(
        mut self,
        name: &str,
        r: impl Fn(&[Value]) -> bool + Send + Sync + 'static,
    ) -> Result<Self, StructureError> {
        if self.signature.relation_arity(name).is_none() {
            return Err(StructureError::NotInSignature(name.into()));
        }
        self.relations.insert(name.into(), Arc::new(r));
        Ok(self)
    }

    /// Fails if some signature symbol has no interpretation.
    pub fn validate(&self) -> Result<(), StructureError> {
        for s in self.signature.functions() {
            if !self.functions.contains_key(&s.name) {
                return Err(StructureError::Uninterpreted(s.name.clone()));
            }
        }
        for s in self.signature.relations() {
            if !self.relations.contains_key(&s.name) {
                return Err(StructureError::Uninterpreted(s.name.clone()));
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    pub fn function(&self, name: &str) -> Option<&FunctionFn> {
        self.functions.get(name)
    }

    pub fn relation(&self, name: &str) -> Option<&RelationFn> {
        self.relations.get(name)
    }

    /// Looks up `mod`, `posdiv` or `natfull`.
    pub fn builtin(name: &str) -> Option<Structure> {
        match name {
            "mod" => Some(builtin_mod()),
            "posdiv" => Some(builtin_posdiv()),
            "natfull" => Some(builtin_natfull()),
            _ => None,
        }
    }
}

pub const BUILTIN_STRUCTURES: &[&str] = &["mod", "posdiv", "natfull"];

/// (ℕ, mod) with `n mod 0 = n`.
pub fn builtin_mod() -> Structure {
    Structure::new("mod", Signature::modulo(), Universe::Naturals)
        .with_function(MOD, |a| Some(native::remainder(a[0], a[1])))
        .expect("mod in signature")
}

/// (ℕ₊, <, |). The atom `d divides n` means d | n.
pub fn builtin_posdiv() -> Structure {
    Structure::new("posdiv", Signature::order_divisibility(), Universe::Positive)
        .with_relation(LESS, |a| native::less(a[0], a[1]))
        .and_then(|s| s.with_relation(DIVIDES, |a| native::divides(a[0], a[1])))
        .expect("relations in signature")
}

/// (ℕ₊, <, |, succ), the oracle for definition checking.
/// `succ(x, y)` holds iff x = y + 1.
pub fn builtin_natfull() -> Structure {
    Structure::new("natfull", Signature::natfull(), Universe::Positive)
        .with_relation(LESS, |a| native::less(a[0], a[1]))
        .and_then(|s| s.with_relation(DIVIDES, |a| native::divides(a[0], a[1])))
        .and_then(|s| s.with_relation(SUCC, |a| native::successor(a[0], a[1])))
        .expect("relations in signature")
}

/// Finite map from variable names to values.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Assignment(BTreeMap<String, Value>);

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, v: &str) -> Option<Value> {
        self.0.get(v).copied()
    }

    pub fn insert(&mut self, v: impl Into<String>, value: Value) {
        self.0.insert(v.into(), value);
    }

    pub fn remove(&mut self, v: &str) -> Option<Value> {
        self.0.remove(v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Value)> {
        self.0.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Keeps only the bindings whose names satisfy `keep`.
    pub fn retain(&mut self, mut keep: impl FnMut(&str) -> bool) {
        self.0.retain(|k, _| keep(k));
    }

    /// Parses `x=3,y=5`. An empty string is the empty assignment.
    pub fn parse(s: &str) -> Result<Self, String> {
        let mut out = Assignment::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| format!("expected name=value, got `{part}`"))?;
            let (k, v) = (k.trim(), v.trim());
            if !crate::formula::is_identifier(k) {
                return Err(format!("`{k}` is not a variable name"));
            }
            let value = v
                .parse::<Value>()
                .map_err(|_| format!("`{v}` is not a natural number"))?;
            out.insert(k, value);
        }
        Ok(out)
    }
}

impl<S: Into<String>> FromIterator<(S, Value)> for Assignment {
    fn from_iter<I: IntoIterator<Item = (S, Value)>>(iter: I) -> Self {
        Assignment(iter.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, v) in &self.0 {
            if !first {
                f.write_str(", ")?;
            }
            first = false;
            write!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EvalReport {
    pub value: bool,
    pub bound: Value,
    /// Universe elements enumerated by quantifiers, summed over the run.
    pub assignments_visited: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error(transparent)]
    Signature(#[from] FormulaError),
    #[error("variable `{0}` is free but unassigned")]
    Unbound(String),
    #[error("`{var}` = {value} lies outside the universe of `{structure}`")]
    OutsideUniverse {
        var: String,
        value: Value,
        structure: String,
    },
    #[error("symbol `{0}` has no interpretation")]
    Uninterpreted(String),
    #[error("value of `{0}` exceeds the representable range")]
    Overflow(String),
}

enum CTerm {
    Slot(usize),
    Lit(Value),
    App(String, FunctionFn, Vec<CTerm>),
}

enum CFormula {
    Const(bool),
    Rel(RelationFn, Vec<CTerm>),
    Eq(CTerm, CTerm),
    Not(Box<CFormula>),
    And(Box<CFormula>, Box<CFormula>),
    Or(Box<CFormula>, Box<CFormula>),
    Implies(Box<CFormula>, Box<CFormula>),
    Iff(Box<CFormula>, Box<CFormula>),
    Forall(usize, Box<CFormula>),
    Exists(usize, Box<CFormula>),
}

struct Compiler<'s> {
    structure: &'s Structure,
    scope: Vec<(String, usize)>,
    slots: usize,
}

impl Compiler<'_> {
    fn lookup(&self, v: &str) -> Result<usize, EvalError> {
        self.scope
            .iter()
            .rev()
            .find(|(n, _)| n == v)
            .map(|(_, s)| *s)
            .ok_or_else(|| EvalError::Unbound(v.into()))
    }

    fn term(&self, t: &Term) -> Result<CTerm, EvalError> {
        Ok(match t {
            Term::Var(v) => CTerm::Slot(self.lookup(v)?),
            Term::Lit(n) => CTerm::Lit(*n),
            Term::App(f, args) => {
                let fun = self
                    .structure
                    .function(f)
                    .ok_or_else(|| EvalError::Uninterpreted(f.clone()))?;
                let args = args.iter().map(|a| self.term(a)).collect::<Result<_, _>>()?;
                CTerm::App(f.clone(), fun.clone(), args)
            }
        })
    }

    fn formula(&mut self, f: &Formula) -> Result<CFormula, EvalError> {
        let pair = |c: &mut Self, a: &Formula, b: &Formula| -> Result<_, EvalError> {
            Ok((Box::new(c.formula(a)?), Box::new(c.formula(b)?)))
        };
        Ok(match f {
            Formula::True => CFormula::Const(true),
            Formula::False => CFormula::Const(false),
            Formula::Atom(r, args) => {
                let rel = self
                    .structure
                    .relation(r)
                    .ok_or_else(|| EvalError::Uninterpreted(r.clone()))?;
                let args = args.iter().map(|a| self.term(a)).collect::<Result<_, _>>()?;
                CFormula::Rel(rel.clone(), args)
            }
            Formula::Eq(a, b) => CFormula::Eq(self.term(a)?, self.term(b)?),
            Formula::Not(g) => CFormula::Not(Box::new(self.formula(g)?)),
            Formula::And(a, b) => {
                let (a, b) = pair(self, a, b)?;
                CFormula::And(a, b)
            }
            Formula::Or(a, b) => {
                let (a, b) = pair(self, a, b)?;
                CFormula::Or(a, b)
            }
            Formula::Implies(a, b) => {
                let (a, b) = pair(self, a, b)?;
                CFormula::Implies(a, b)
            }
            Formula::Iff(a, b) => {
                let (a, b) = pair(self, a, b)?;
                CFormula::Iff(a, b)
            }
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                let slot = self.slots;
                self.slots += 1;
                self.scope.push((v.clone(), slot));
                let body = Box::new(self.formula(body)?);
                self.scope.pop();
                if matches!(f, Formula::Forall(..)) {
                    CFormula::Forall(slot, body)
                } else {
                    CFormula::Exists(slot, body)
                }
            }
        })
    }
}

struct Machine {
    env: Vec<Value>,
    universe: RangeInclusive<Value>,
    visited: u64,
}

impl Machine {
    fn term(&self, t: &CTerm) -> Result<Value, EvalError> {
        match t {
            CTerm::Slot(s) => Ok(self.env[*s]),
            CTerm::Lit(n) => Ok(*n),
            CTerm::App(name, f, args) => {
                let out = match args.as_slice() {
                    [a, b] => f(&[self.term(a)?, self.term(b)?]),
                    _ => f(&self.terms(args)?),
                };
                out.ok_or_else(|| EvalError::Overflow(name.clone()))
            }
        }
    }

    fn terms(&self, args: &[CTerm]) -> Result<Vec<Value>, EvalError> {
        args.iter().map(|a| self.term(a)).collect()
    }

    fn eval(&mut self, f: &CFormula) -> Result<bool, EvalError> {
        Ok(match f {
            CFormula::Const(b) => *b,
            CFormula::Rel(r, args) => match args.as_slice() {
                [a, b] => r(&[self.term(a)?, self.term(b)?]),
                _ => r(&self.terms(args)?),
            },
            CFormula::Eq(a, b) => self.term(a)? == self.term(b)?,
            CFormula::Not(g) => !self.eval(g)?,
            CFormula::And(a, b) => self.eval(a)? && self.eval(b)?,
            CFormula::Or(a, b) => self.eval(a)? || self.eval(b)?,
            CFormula::Implies(a, b) => !self.eval(a)? || self.eval(b)?,
            CFormula::Iff(a, b) => self.eval(a)? == self.eval(b)?,
            CFormula::Forall(slot, body) => {
                for v in self.universe.clone() {
                    self.visited += 1;
                    self.env[*slot] = v;
                    if !self.eval(body)? {
                        return Ok(false);
                    }
                }
                true
            }
            CFormula::Exists(slot, body) => {
                for v in self.universe.clone() {
                    self.visited += 1;
                    self.env[*slot] = v;
                    if self.eval(body)? {
                        return Ok(true);
                    }
                }
                false
            }
        })
    }
}

/// Bounded Tarskian evaluation of `f` in `s` under `a`.
///
/// Quantifiers enumerate `s.universe() ∩ [0, bound]` in ascending order and
/// short-circuit at the first witness or refutation.
pub fn eval(f: &Formula, s: &Structure, a: &Assignment, bound: Value) -> Result<EvalReport, EvalError> {
    s.signature().check_formula(f)?;
    let mut compiler = Compiler {
        structure: s,
        scope: Vec::new(),
        slots: 0,
    };
    let mut env = Vec::new();
    for v in f.free_vars() {
        let value = a.get(&v).ok_or_else(|| EvalError::Unbound(v.clone()))?;
        if !s.universe().contains(value) {
            return Err(EvalError::OutsideUniverse {
                var: v,
                value,
                structure: s.name().into(),
            });
        }
        compiler.scope.push((v, compiler.slots));
        compiler.slots += 1;
        env.push(value);
    }
    let compiled = compiler.formula(f)?;
    env.resize(compiler.slots, 0);
    let mut machine = Machine {
        env,
        universe: s.universe().elements(bound),
        visited: 0,
    };
    let value = machine.eval(&compiled)?;
    Ok(EvalReport {
        value,
        bound,
        assignments_visited: machine.visited,
    })
}

/// Shorthand for `eval(..).value`.
pub fn holds(f: &Formula, s: &Structure, a: &Assignment, bound: Value) -> Result<bool, EvalError> {
    eval(f, s, a, bound).map(|r| r.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn eval_str(src: &str, s: &Structure, a: &Assignment, bound: Value) -> bool {
        let f = parse(src, s.signature()).unwrap();
        eval(&f, s, a, bound).unwrap().value
    }

    #[test]
    fn remainder_examples() {
        assert_eq!(native::remainder(5, 2), 1);
        assert_eq!(native::remainder(5, 3), 2);
        assert_eq!(native::remainder(6, 3), 0);
        assert_eq!(native::remainder(7, 0), 7);
        assert_eq!(native::remainder(0, 0), 0);
    }

    #[test]
    fn remainder_division_identity() {
        for x in 0..=300u64 {
            for y in 1..=300u64 {
                let r = native::remainder(x, y);
                assert!(r < y);
                assert_eq!(x, (x / y) * y + r);
            }
        }
        for y in 0..=10_000u64 {
            assert_eq!(native::remainder(y, y), 0);
            assert_eq!(native::remainder(y, y) == y, y == 0);
        }
    }

    #[test]
    fn posdiv_and_natfull_relations() {
        let p = builtin_posdiv();
        let lt = p.relation(LESS).unwrap();
        assert!(lt(&[2, 5]));
        assert!(!lt(&[5, 2]));
        let d = p.relation(DIVIDES).unwrap();
        assert!(d(&[3, 6]));
        assert!(!d(&[4, 6]));
        let n = builtin_natfull();
        let succ = n.relation(SUCC).unwrap();
        assert!(succ(&[2, 1]));
        assert!(!succ(&[3, 1]));
        assert!(!succ(&[1, 1]));
        for s in BUILTIN_STRUCTURES {
            Structure::builtin(s).unwrap().validate().unwrap();
        }
    }

    #[test]
    fn eval_examples() {
        let m = builtin_mod();
        let empty = Assignment::new();
        assert!(eval_str("forall y. y mod y = y mod y", &m, &empty, 50));
        let zero: Assignment = [("x", 0)].into_iter().collect();
        let seven: Assignment = [("x", 7)].into_iter().collect();
        assert!(eval_str("exists y. y mod y = x", &m, &zero, 50));
        assert!(!eval_str("exists y. y mod y = x", &m, &seven, 50));
        let p = builtin_posdiv();
        assert!(!eval_str("forall a. exists b. a < b", &p, &empty, 30));
    }

    #[test]
    fn eval_errors() {
        let m = builtin_mod();
        let f = parse("x mod y = x", m.signature()).unwrap();
        assert_eq!(
            eval(&f, &m, &[("x", 1)].into_iter().collect(), 5),
            Err(EvalError::Unbound("y".into()))
        );
        let p = builtin_posdiv();
        let g = parse("x < x", p.signature()).unwrap();
        assert!(matches!(
            eval(&g, &p, &[("x", 0)].into_iter().collect(), 5),
            Err(EvalError::OutsideUniverse { .. })
        ));
        let h = parse("x < x", &Signature::order_divisibility()).unwrap();
        assert!(matches!(
            eval(&h, &m, &[("x", 1)].into_iter().collect(), 5),
            Err(EvalError::Signature(FormulaError::UnknownRelation(_)))
        ));
    }

    #[test]
    fn overflow_is_reported() {
        let sig = Signature::modulo().with_literals();
        let s = Structure::new("broken", sig.clone(), Universe::Naturals)
            .with_function(MOD, |_| None)
            .unwrap();
        let f = parse("0 mod 0 = 0", &sig).unwrap();
        assert_eq!(
            eval(&f, &s, &Assignment::new(), 3),
            Err(EvalError::Overflow(MOD.into()))
        );
    }

    #[test]
    fn visited_counts_enumerated_values() {
        let p = builtin_posdiv();
        let f = parse("forall a. forall b. a = a", p.signature()).unwrap();
        let r = eval(&f, &p, &Assignment::new(), 4).unwrap();
        assert_eq!(r.assignments_visited, 4 + 4 * 4);
        let g = parse("exists a. a = a", p.signature()).unwrap();
        assert_eq!(eval(&g, &p, &Assignment::new(), 4).unwrap().assignments_visited, 1);
    }

    #[test]
    fn shadowing_uses_innermost_binder() {
        let p = builtin_posdiv();
        let a: Assignment = [("x", 3)].into_iter().collect();
        assert!(eval_str("(exists x. forall y. x = y or x < y) & exists y. y < x", &p, &a, 5));
    }

    #[test]
    fn assignment_parsing() {
        let a = Assignment::parse("x=3, y=5").unwrap();
        assert_eq!(a.get("x"), Some(3));
        assert_eq!(a.to_string(), "x=3, y=5");
        assert!(Assignment::parse("x").is_err());
        assert!(Assignment::parse("x=-1").is_err());
        assert!(Assignment::parse("").unwrap().is_empty());
    }
}
