//! Exhaustive check of the three characterizations on `[0, bound]²`:
//!
//! 1. `x = 0` iff `exists y. y mod y = x`
//! 2. `x < y` iff `(x = 0 & y ≠ 0) or (x ≠ 0 & y ≠ 0 & x mod y = x)`
//! 3. `y | x` iff `x = 0 or (x ≠ 0 & x mod y = 0)`
//!
//! Right-hand sides use the native remainder; left-hand sides use native
//! order and quotient-based divisibility. Violations carry the formula form
//! of the right-hand side so they can be re-evaluated through `eval`.

use crate::interp::lemma as forms;
use crate::structures::{native, Assignment, Value};
use crate::MAX_BOUND;

use super::{map_jobs, Counterexample, Evidence, VerifyError};

pub const LEMMA_ITEMS: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaReport {
    pub bound: Value,
    /// `(bound + 1)²`.
    pub pairs: u64,
    pub items: usize,
    /// Violations ordered by `x`, then item, then `y`.
    pub counterexamples: Vec<Counterexample>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

fn violation(item: usize, x: Value, y: Option<Value>, bound: Value, left: bool, right: bool) -> Counterexample {
    let (formula, relation, args) = match item {
        1 => (forms::zero_exists_form(), "zero", vec!["x"]),
        2 => (forms::order_full_form(), "<", vec!["x", "y"]),
        _ => (forms::divisibility_full_form(), "divides", vec!["y", "x"]),
    };
    let mut assignment = Assignment::new();
    assignment.insert("x", x);
    if let Some(y) = y {
        assignment.insert("y", y);
    }
    Counterexample {
        kind: format!("lemma{item}"),
        evidence: Evidence::Native {
            formula,
            structure: "mod".into(),
            relation: relation.into(),
            args: args.into_iter().map(String::from).collect(),
        },
        assignment,
        bound,
        left_value: left,
        right_value: right,
        seed: None,
        iteration: None,
    }
}

fn check_row(x: Value, bound: Value) -> Vec<Counterexample> {
    let mut out = Vec::new();
    let rhs1 = (0..=bound).any(|y| native::remainder(y, y) == x);
    if rhs1 != (x == 0) {
        out.push(violation(1, x, None, bound, rhs1, x == 0));
    }
    let mut item3 = Vec::new();
    for y in 0..=bound {
        let r = native::remainder(x, y);
        let rhs2 = (x == 0 && y != 0) || (x != 0 && y != 0 && r == x);
        let lhs2 = native::less(x, y);
        if rhs2 != lhs2 {
            out.push(violation(2, x, Some(y), bound, rhs2, lhs2));
        }
        let rhs3 = x == 0 || (x != 0 && r == 0);
        let lhs3 = native::divides(y, x);
        if rhs3 != lhs3 {
            item3.push(violation(3, x, Some(y), bound, rhs3, lhs3));
        }
    }
    out.extend(item3);
    out
}

/// Checks all three items for every `(x, y)` in `[0, bound]²`.
pub fn check_lemma(bound: Value, jobs: Option<usize>) -> Result<LemmaReport, VerifyError> {
    if bound < 2 {
        return Err(VerifyError::BoundTooSmall(bound));
    }
    if bound > MAX_BOUND {
        return Err(VerifyError::BoundTooLarge(bound));
    }
    let rows: Vec<Value> = (0..=bound).collect();
    let counterexamples = map_jobs(rows, jobs, |x| check_row(x, bound))?
        .into_iter()
        .flatten()
        .collect();
    let side = bound + 1;
    Ok(LemmaReport {
        bound,
        pairs: side * side,
        items: LEMMA_ITEMS,
        counterexamples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn passes_small_bounds() {
        for b in 2..30 {
            let r = check_lemma(b, None).unwrap();
            assert!(r.passed(), "bound {b}");
            assert_eq!(r.pairs, (b + 1) * (b + 1));
        }
    }

    #[test]
    fn probes() {
        // item 2 at (0, 0): 0 < 0 false, no disjunct holds
        let (x, y) = (0u64, 0u64);
        let rhs2 = (x == 0 && y != 0) || (x != 0 && y != 0 && native::remainder(x, y) == x);
        assert!(!rhs2 && !native::less(x, y));
        // item 3 at (5, 0): 0 does not divide 5 and 5 mod 0 = 5 ≠ 0
        let (x, y) = (5u64, 0u64);
        let rhs3 = x == 0 || native::remainder(x, y) == 0;
        assert!(!rhs3 && !native::divides(y, x));
    }

    #[test]
    fn bound_limits() {
        assert_eq!(check_lemma(1, None), Err(VerifyError::BoundTooSmall(1)));
        assert_eq!(
            check_lemma(MAX_BOUND + 1, None),
            Err(VerifyError::BoundTooLarge(MAX_BOUND + 1))
        );
    }

    #[test]
    fn violations_revalidate() {
        // A fabricated item-2 violation at a point where the formula is true
        // but recorded as false must not reproduce.
        let bogus = violation(2, 1, Some(2), 10, false, true);
        assert!(bogus.revalidate().is_err());
        // A genuine disagreement between the item-3 formula and `<` does.
        let mut c = violation(3, 2, Some(2), 10, true, false);
        if let Evidence::Native { relation, .. } = &mut c.evidence {
            *relation = "<".into();
        }
        c.revalidate().unwrap();
    }

    #[test]
    fn parallel_matches_sequential() {
        assert_eq!(check_lemma(60, None), check_lemma(60, Some(4)));
    }
}
