//! Verification engine: exhaustive checks of the zero, order and
//! divisibility characterizations, differential fuzzing of translations,
//! candidate-definition checking against native relations, and shrinking.

mod counterexample;
mod defcheck;
mod fuzz;
mod lemma;
mod rng;
mod shrink;

use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::formula::{Formula, DIVIDES, LESS};
use crate::interp::InterpError;
use crate::structures::{native, EvalError, RelationFn, Structure, Value};

pub use counterexample::{Counterexample, Evidence};
pub use defcheck::{check_definition, check_definition_in, DefinitionReport};
pub use fuzz::{fuzz_differential, mutations, FuzzConfig, FuzzReport, Mutation, SentenceGenerator};
pub use lemma::{check_lemma, LemmaReport, LEMMA_ITEMS};
pub use rng::SplitMix64;
pub use shrink::{shrink, ShrinkContext};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Interp(#[from] InterpError),
    #[error("bound {0} is below the minimum of 2")]
    BoundTooSmall(Value),
    #[error("bound {0} exceeds the cap of {cap}", cap = crate::MAX_BOUND)]
    BoundTooLarge(Value),
    #[error("unknown structure `{0}`")]
    UnknownStructure(String),
    #[error("structure `{structure}` has no native relation `{relation}`")]
    UnknownOracle { structure: String, relation: String },
    #[error("native relation `{relation}` has arity {expected}, definition has {found} parameters")]
    OracleArity {
        relation: String,
        expected: usize,
        found: usize,
    },
    #[error("counterexample does not reproduce: {0}")]
    Irreproducible(String),
    #[error("could not start worker pool: {0}")]
    Pool(String),
}

/// Native relations usable as oracles, keyed by structure name.
///
/// For `posdiv` and `natfull` these are the structure's own relations. For
/// `mod`, whose language has none, the oracles are the intended relations
/// on all of ℕ: `zero/1`, `</2` and `divides/2` (with `d divides n` meaning
/// d | n, so every number divides 0).
pub fn oracle_relation(structure: &str, relation: &str) -> Result<(usize, RelationFn), VerifyError> {
    let unknown = || VerifyError::UnknownOracle {
        structure: structure.into(),
        relation: relation.into(),
    };
    if structure == "mod" {
        let f: (usize, RelationFn) = match relation {
            "zero" => (1, Arc::new(|a: &[Value]| a[0] == 0)),
            LESS => (2, Arc::new(|a: &[Value]| native::less(a[0], a[1]))),
            DIVIDES => (2, Arc::new(|a: &[Value]| native::divides(a[0], a[1]))),
            _ => return Err(unknown()),
        };
        return Ok(f);
    }
    let s = Structure::builtin(structure).ok_or_else(|| VerifyError::UnknownStructure(structure.into()))?;
    let arity = s.signature().relation_arity(relation).ok_or_else(unknown)?;
    let f = s.relation(relation).ok_or_else(unknown)?.clone();
    Ok((arity, f))
}

/// Oracle names available for `structure`, in display order.
pub fn oracle_names(structure: &str) -> Vec<String> {
    if structure == "mod" {
        return vec!["zero".into(), LESS.into(), DIVIDES.into()];
    }
    Structure::builtin(structure)
        .map(|s| s.signature().relations().iter().map(|r| r.name.clone()).collect())
        .unwrap_or_default()
}

/// Maps `f` over `items`, on `jobs` worker threads when more than one is
/// requested. Output order always follows input order.
pub(crate) fn map_jobs<T, R, F>(items: Vec<T>, jobs: Option<usize>, f: F) -> Result<Vec<R>, VerifyError>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    match jobs {
        Some(n) if n > 1 => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| VerifyError::Pool(e.to_string()))?;
            Ok(pool.install(|| items.into_par_iter().map(f).collect()))
        }
        _ => Ok(items.into_iter().map(f).collect()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityReport {
    /// Truth value at each requested bound, in request order.
    pub values: Vec<(Value, bool)>,
    /// Same truth value at every bound.
    pub stable: bool,
}

/// Evaluates a sentence at several bounds.
pub fn stability(f: &Formula, s: &Structure, bounds: &[Value]) -> Result<StabilityReport, VerifyError> {
    let empty = crate::structures::Assignment::new();
    let values = bounds
        .iter()
        .map(|&b| crate::structures::eval(f, s, &empty, b).map(|r| (b, r.value)))
        .collect::<Result<Vec<_>, _>>()?;
    let stable = values.windows(2).all(|w| w[0].1 == w[1].1);
    Ok(StabilityReport { values, stable })
}
