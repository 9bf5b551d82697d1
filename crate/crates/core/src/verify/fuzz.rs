//! Seeded random sentences and differential testing of translations.

use crate::formula::{parse, Formula, Signature, Term};
use crate::interp::{AtomDefinition, Interpretation};
use crate::structures::{eval, Assignment, Structure, Value};

use super::{map_jobs, Counterexample, Evidence, SplitMix64, VerifyError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuzzConfig {
    pub seed: u64,
    pub count: usize,
    pub max_depth: usize,
    pub max_nodes: usize,
    pub bound: Value,
    pub signature: Signature,
}

impl FuzzConfig {
    /// Depth 3, 25 nodes, bound 20.
    pub fn new(seed: u64, count: usize, signature: Signature) -> Self {
        FuzzConfig {
            seed,
            count,
            max_depth: 3,
            max_nodes: 25,
            bound: 20,
            signature,
        }
    }
}

// atom, not, and, or, implies, quantifier
const WEIGHTS: [u64; 6] = [35, 10, 15, 15, 10, 15];
const ATOM: usize = 0;
const NOT: usize = 1;
const AND: usize = 2;
const OR: usize = 3;
const IMPLIES: usize = 4;
const QUANTIFIER: usize = 5;

/// Deterministic stream of closed sentences over a relational signature.
///
/// Every node kind is drawn with fixed weights among the kinds that still
/// fit the remaining node and depth budget. Atoms pick a relation (or
/// equality) uniformly and their arguments uniformly from the variables in
/// scope. Sentences with a quantified variable unused in its body are
/// discarded and redrawn from the same stream.
#[derive(Clone, Debug)]
pub struct SentenceGenerator {
    rng: SplitMix64,
    relations: Vec<(String, usize)>,
    max_depth: usize,
    max_nodes: usize,
}

impl SentenceGenerator {
    pub fn new(cfg: &FuzzConfig) -> Self {
        let mut relations: Vec<(String, usize)> = cfg
            .signature
            .relations()
            .iter()
            .map(|r| (r.name.clone(), r.arity))
            .collect();
        relations.push(("=".into(), 2));
        SentenceGenerator {
            rng: SplitMix64::new(cfg.seed),
            relations,
            max_depth: cfg.max_depth.max(1),
            max_nodes: cfg.max_nodes.max(4),
        }
    }

    fn min_nodes(&self, scope: &[String]) -> usize {
        let smallest_atom = 1 + self.relations.iter().map(|r| r.1).min().unwrap_or(2);
        if scope.is_empty() {
            1 + smallest_atom
        } else {
            smallest_atom
        }
    }

    fn atom(&mut self, scope: &[String]) -> Formula {
        let (rel, arity) = self.relations[self.rng.below(self.relations.len() as u64) as usize].clone();
        let args: Vec<Term> = (0..arity)
            .map(|_| Term::var(scope[self.rng.below(scope.len() as u64) as usize].as_str()))
            .collect();
        if rel == "=" {
            let mut it = args.into_iter();
            Formula::Eq(it.next().unwrap(), it.next().unwrap())
        } else {
            Formula::Atom(rel, args)
        }
    }

    fn formula(&mut self, budget: usize, depth: usize, scope: &mut Vec<String>) -> Formula {
        let min = self.min_nodes(scope);
        let atom_size = 1 + self.relations.iter().map(|r| r.1).max().unwrap_or(2);
        let mut weights = [0u64; 6];
        if !scope.is_empty() && budget >= atom_size {
            weights[ATOM] = WEIGHTS[ATOM];
        }
        if budget > min {
            weights[NOT] = WEIGHTS[NOT];
        }
        if budget > 2 * min {
            weights[AND] = WEIGHTS[AND];
            weights[OR] = WEIGHTS[OR];
            weights[IMPLIES] = WEIGHTS[IMPLIES];
        }
        if depth > 0 && budget > atom_size {
            weights[QUANTIFIER] = WEIGHTS[QUANTIFIER];
        }
        match self.rng.weighted(&weights) {
            ATOM => self.atom(scope),
            NOT => Formula::not(self.formula(budget - 1, depth, scope)),
            kind @ (AND | OR | IMPLIES) => {
                let spare = budget - 1 - 2 * min;
                let left_budget = min + self.rng.below(spare as u64 + 1) as usize;
                let left = self.formula(left_budget, depth, scope);
                let right_budget = budget - 1 - left.measure().nodes;
                let right = self.formula(right_budget, depth, scope);
                match kind {
                    AND => Formula::and(left, right),
                    OR => Formula::or(left, right),
                    _ => Formula::implies(left, right),
                }
            }
            _ => {
                let universal = self.rng.below(2) == 0;
                let var = format!("x{}", scope.len() + 1);
                scope.push(var.clone());
                let body = self.formula(budget - 1, depth - 1, scope);
                scope.pop();
                if universal {
                    Formula::forall(var, body)
                } else {
                    Formula::exists(var, body)
                }
            }
        }
    }

    pub fn next_sentence(&mut self) -> Formula {
        loop {
            let f = self.formula(self.max_nodes, self.max_depth, &mut Vec::new());
            if every_binder_used(&f) {
                return f;
            }
        }
    }
}

impl Iterator for SentenceGenerator {
    type Item = Formula;

    fn next(&mut self) -> Option<Formula> {
        Some(self.next_sentence())
    }
}

fn every_binder_used(f: &Formula) -> bool {
    match f {
        Formula::True | Formula::False | Formula::Atom(..) | Formula::Eq(..) => true,
        Formula::Not(g) => every_binder_used(g),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
            every_binder_used(a) && every_binder_used(b)
        }
        Formula::Forall(v, body) | Formula::Exists(v, body) => body.is_free(v) && every_binder_used(body),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuzzReport {
    pub sentences: usize,
    pub agreements: usize,
    /// Disagreements in iteration order.
    pub counterexamples: Vec<Counterexample>,
}

impl FuzzReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Compares bounded truth of random sentences in `source` with bounded
/// truth of their translations in `target`, at the same bound.
pub fn fuzz_differential(
    interp: &Interpretation,
    source: &Structure,
    target: &Structure,
    cfg: &FuzzConfig,
    jobs: Option<usize>,
) -> Result<FuzzReport, VerifyError> {
    let sentences: Vec<(usize, Formula)> = SentenceGenerator::new(cfg).take(cfg.count).enumerate().collect();
    let empty = Assignment::new();
    let outcomes = map_jobs(sentences, jobs, |(i, f)| -> Result<Option<Counterexample>, VerifyError> {
        let translated = interp.translate_fresh(&f)?;
        let left = eval(&f, source, &empty, cfg.bound)?.value;
        let right = eval(&translated, target, &empty, cfg.bound)?.value;
        Ok((left != right).then(|| Counterexample {
            kind: "differential".into(),
            evidence: Evidence::Translation {
                formula: f,
                translated,
                source: source.name().into(),
                target: target.name().into(),
            },
            assignment: Assignment::new(),
            bound: cfg.bound,
            left_value: left,
            right_value: right,
            seed: Some(cfg.seed),
            iteration: Some(i),
        }))
    })?;
    let mut counterexamples = Vec::new();
    for o in outcomes {
        if let Some(c) = o? {
            counterexamples.push(c);
        }
    }
    Ok(FuzzReport {
        sentences: cfg.count,
        agreements: cfg.count - counterexamples.len(),
        counterexamples,
    })
}

/// A deliberately broken atom map, used to check that the differential
/// suite notices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mutation {
    pub name: &'static str,
    pub description: &'static str,
    symbol: &'static str,
    params: [&'static str; 2],
    formula: &'static str,
}

impl Mutation {
    /// `base` with this mutation's atom entry swapped in.
    pub fn apply(&self, base: &Interpretation) -> Result<Interpretation, VerifyError> {
        let formula = parse(self.formula, base.target()).map_err(|e| {
            VerifyError::Interp(crate::interp::InterpError::Invalid(e.to_string()))
        })?;
        let def = AtomDefinition::new(&self.params, formula);
        Ok(base
            .with_atom(self.symbol, def)?
            .with_name(format!("{}_{}", base.name(), self.name.replace('-', "_"))))
    }
}

/// Corruptions of [`paper_interpretation`](crate::interp::paper_interpretation), one per atom map entry kind.
pub fn mutations() -> Vec<Mutation> {
    vec![
        Mutation {
            name: "order-to-right",
            description: "a < b mapped to `a mod b = b`",
            symbol: "<",
            params: ["a", "b"],
            formula: "a mod b = b",
        },
        Mutation {
            name: "order-reversed",
            description: "a < b mapped to `b mod a = b` (that is, b < a)",
            symbol: "<",
            params: ["a", "b"],
            formula: "b mod a = b",
        },
        Mutation {
            name: "divides-swapped",
            description: "b divides a mapped to Zero(b mod a) (that is, a divides b)",
            symbol: "divides",
            params: ["b", "a"],
            formula: "(b mod a) mod (b mod a) = b mod a",
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interp::paper_interpretation;
    use crate::structures::{builtin_mod, builtin_posdiv};

    fn cfg(seed: u64, count: usize) -> FuzzConfig {
        FuzzConfig::new(seed, count, Signature::order_divisibility())
    }

    #[test]
    fn generator_is_deterministic() {
        let a: Vec<String> = SentenceGenerator::new(&cfg(9, 0)).take(200).map(|f| f.to_string()).collect();
        let b: Vec<String> = SentenceGenerator::new(&cfg(9, 0)).take(200).map(|f| f.to_string()).collect();
        assert_eq!(a, b);
        let c: Vec<String> = SentenceGenerator::new(&cfg(10, 0)).take(200).map(|f| f.to_string()).collect();
        assert_ne!(a, c);
    }

    #[test]
    fn generated_sentences_respect_limits() {
        let config = cfg(3, 0);
        let sig = config.signature.clone();
        for f in SentenceGenerator::new(&config).take(2000) {
            let m = f.measure();
            assert!(m.nodes <= 25, "{f}");
            assert!(m.depth <= 3, "{f}");
            assert!(f.is_sentence(), "{f}");
            assert!(every_binder_used(&f), "{f}");
            sig.check_formula(&f).unwrap();
        }
    }

    #[test]
    fn trivial_sentence_agrees() {
        let f = parse("forall x. x = x", &Signature::order_divisibility()).unwrap();
        let t = paper_interpretation().translate_fresh(&f).unwrap();
        for b in [1, 5, 20] {
            assert!(eval(&f, &builtin_posdiv(), &Assignment::new(), b).unwrap().value);
            assert!(eval(&t, &builtin_mod(), &Assignment::new(), b).unwrap().value);
        }
    }

    #[test]
    fn small_run_agrees() {
        let r = fuzz_differential(&paper_interpretation(), &builtin_posdiv(), &builtin_mod(), &cfg(1, 200), None)
            .unwrap();
        assert!(r.passed(), "{:?}", r.counterexamples.first().map(|c| c.to_json()));
        assert_eq!(r.agreements, 200);
    }

    #[test]
    fn mutations_apply() {
        let base = paper_interpretation();
        for m in mutations() {
            let i = m.apply(&base).unwrap();
            assert_ne!(i, base);
        }
    }
}
