use serde::Serialize;

use crate::formula::Formula;
use crate::structures::{eval, Assignment, Structure, Value};

use super::{oracle_relation, VerifyError};

/// What was compared.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evidence {
    /// A sentence evaluated in `source` against its translation in `target`.
    Translation {
        formula: Formula,
        translated: Formula,
        source: String,
        target: String,
    },
    /// A formula evaluated in `structure` against a native relation of that
    /// structure applied to `args`.
    Native {
        formula: Formula,
        structure: String,
        relation: String,
        args: Vec<String>,
    },
}

/// An assignment on which two sides disagree, with enough context to
/// recompute both.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub kind: String,
    pub evidence: Evidence,
    pub assignment: Assignment,
    pub bound: Value,
    pub left_value: bool,
    pub right_value: bool,
    pub seed: Option<u64>,
    pub iteration: Option<usize>,
}

#[derive(Serialize)]
struct Record<'a> {
    kind: &'a str,
    formula: String,
    translated: String,
    assignment: &'a Assignment,
    bound: Value,
    left: bool,
    right: bool,
    seed: Option<u64>,
    iteration: Option<usize>,
}

fn structure(name: &str) -> Result<Structure, VerifyError> {
    Structure::builtin(name).ok_or_else(|| VerifyError::UnknownStructure(name.into()))
}

impl Counterexample {
    pub fn formula(&self) -> &Formula {
        match &self.evidence {
            Evidence::Translation { formula, .. } | Evidence::Native { formula, .. } => formula,
        }
    }

    pub fn left_description(&self) -> String {
        match &self.evidence {
            Evidence::Translation { formula, source, .. } => format!("{formula} in {source}"),
            Evidence::Native {
                formula, structure, ..
            } => format!("{formula} in {structure}"),
        }
    }

    pub fn right_description(&self) -> String {
        match &self.evidence {
            Evidence::Translation {
                translated, target, ..
            } => format!("{translated} in {target}"),
            Evidence::Native {
                relation,
                args,
                structure,
                ..
            } => format!("native {relation}({}) in {structure}", args.join(", ")),
        }
    }

    /// Evaluates both sides again from scratch.
    pub fn recompute(&self) -> Result<(bool, bool), VerifyError> {
        match &self.evidence {
            Evidence::Translation {
                formula,
                translated,
                source,
                target,
            } => {
                let left = eval(formula, &structure(source)?, &self.assignment, self.bound)?;
                let right = eval(translated, &structure(target)?, &self.assignment, self.bound)?;
                Ok((left.value, right.value))
            }
            Evidence::Native {
                formula,
                structure: name,
                relation,
                args,
            } => {
                let left = eval(formula, &structure(name)?, &self.assignment, self.bound)?;
                let (arity, native) = oracle_relation(name, relation)?;
                if arity != args.len() {
                    return Err(VerifyError::OracleArity {
                        relation: relation.clone(),
                        expected: arity,
                        found: args.len(),
                    });
                }
                let values = args
                    .iter()
                    .map(|a| {
                        self.assignment
                            .get(a)
                            .ok_or_else(|| VerifyError::Irreproducible(format!("`{a}` unassigned")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok((left.value, native(&values)))
            }
        }
    }

    /// Succeeds iff recomputation reproduces the recorded, differing values.
    pub fn revalidate(&self) -> Result<(), VerifyError> {
        let got = self.recompute()?;
        if got != (self.left_value, self.right_value) || got.0 == got.1 {
            return Err(VerifyError::Irreproducible(format!(
                "recorded ({}, {}), recomputed ({}, {})",
                self.left_value, self.right_value, got.0, got.1
            )));
        }
        Ok(())
    }

    /// One-line JSON with keys in the order kind, formula, translated,
    /// assignment, bound, left, right, seed, iteration.
    pub fn to_json(&self) -> String {
        let translated = match &self.evidence {
            Evidence::Translation { translated, .. } => translated.to_string(),
            Evidence::Native { relation, args, .. } => format!("{relation}({})", args.join(", ")),
        };
        let record = Record {
            kind: &self.kind,
            formula: self.formula().to_string(),
            translated,
            assignment: &self.assignment,
            bound: self.bound,
            left: self.left_value,
            right: self.right_value,
            seed: self.seed,
            iteration: self.iteration,
        };
        serde_json::to_string(&record).expect("plain data serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse, Signature};

    fn sample() -> Counterexample {
        let f = parse("x < y", &Signature::order_divisibility()).unwrap();
        let t = parse("x mod y = y", &Signature::modulo()).unwrap();
        Counterexample {
            kind: "differential".into(),
            evidence: Evidence::Translation {
                formula: f,
                translated: t,
                source: "posdiv".into(),
                target: "mod".into(),
            },
            assignment: [("x", 1), ("y", 2)].into_iter().collect(),
            bound: 20,
            left_value: true,
            right_value: false,
            seed: Some(42),
            iteration: Some(7),
        }
    }

    #[test]
    fn json_has_stable_key_order() {
        assert_eq!(
            sample().to_json(),
            r#"{"kind":"differential","formula":"x < y","translated":"x mod y = y","assignment":{"x":1,"y":2},"bound":20,"left":true,"right":false,"seed":42,"iteration":7}"#
        );
    }

    #[test]
    fn revalidation() {
        let c = sample();
        c.revalidate().unwrap();
        let mut forged = c.clone();
        forged.right_value = true;
        assert!(matches!(forged.revalidate(), Err(VerifyError::Irreproducible(_))));
        assert!(c.left_description().contains("posdiv"));
        assert!(c.right_description().contains("mod"));
    }
}
