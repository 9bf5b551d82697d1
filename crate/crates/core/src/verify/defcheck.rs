use crate::interp::Definition;
use crate::structures::{builtin_natfull, eval, Assignment, Structure, Value};
use crate::MAX_BOUND;

use super::{oracle_relation, Counterexample, Evidence, VerifyError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefinitionReport {
    /// Tuples compared before stopping.
    pub tuples: u64,
    /// First disagreement in lexicographic order, if any.
    pub counterexample: Option<Counterexample>,
}

impl DefinitionReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Compares the graph of `d` with the native `oracle` relation of `natfull`
/// on every tuple in `[1, bound]^k`.
pub fn check_definition(d: &Definition, oracle: &str, bound: Value) -> Result<DefinitionReport, VerifyError> {
    check_definition_in(d, &builtin_natfull(), oracle, bound)
}

/// [`check_definition`] over an arbitrary built-in structure. Tuples range
/// over the structure's universe up to `bound`, in lexicographic order with
/// the first parameter most significant.
pub fn check_definition_in(
    d: &Definition,
    structure: &Structure,
    oracle: &str,
    bound: Value,
) -> Result<DefinitionReport, VerifyError> {
    if bound > MAX_BOUND {
        return Err(VerifyError::BoundTooLarge(bound));
    }
    let (arity, native) = oracle_relation(structure.name(), oracle)?;
    let params = d.params();
    if arity != params.len() {
        return Err(VerifyError::OracleArity {
            relation: oracle.into(),
            expected: arity,
            found: params.len(),
        });
    }
    let min = structure.universe().min();
    let mut tuple = vec![min; arity];
    let mut tuples = 0;
    if bound < min {
        return Ok(DefinitionReport {
            tuples,
            counterexample: None,
        });
    }
    loop {
        tuples += 1;
        let assignment: Assignment = params.iter().cloned().zip(tuple.iter().copied()).collect();
        let left = eval(d.graph(), structure, &assignment, bound)?.value;
        let right = native(&tuple);
        if left != right {
            let counterexample = Counterexample {
                kind: "definition".into(),
                evidence: Evidence::Native {
                    formula: d.graph().clone(),
                    structure: structure.name().into(),
                    relation: oracle.into(),
                    args: params.to_vec(),
                },
                assignment,
                bound,
                left_value: left,
                right_value: right,
                seed: None,
                iteration: None,
            };
            return Ok(DefinitionReport {
                tuples,
                counterexample: Some(counterexample),
            });
        }
        // odometer increment, last position fastest
        let mut i = arity;
        loop {
            if i == 0 {
                return Ok(DefinitionReport {
                    tuples,
                    counterexample: None,
                });
            }
            i -= 1;
            if tuple[i] < bound {
                tuple[i] += 1;
                break;
            }
            tuple[i] = min;
        }
    }
}
