//! First-order logic over the remainder structure (ℕ, mod).
//!
//! The crate parses and prints formulas, evaluates them over bounded
//! initial segments of concrete arithmetic structures, compiles formulas
//! about (ℕ₊, <, |) into formulas about (ℕ, mod) through a definitional
//! interpretation, and searches for counterexamples to candidate
//! definitions and translations.

pub mod cli;
pub mod corpus;
pub mod formula;
pub mod interp;
pub mod structures;
pub mod verify;

pub use formula::{parse, Formula, Measure, Signature, Symbol, Term, VariablePool};
pub use interp::{Definition, Interpretation};
pub use structures::{eval, Assignment, EvalReport, Structure, Universe, Value};

/// Largest bound accepted by the command line and the exhaustive checkers.
pub const MAX_BOUND: Value = 1 << 32;
