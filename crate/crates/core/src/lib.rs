//! Open answer set programming toolkit.
//!
//! Programs with function-free rules, default negation, equality and
//! generalized literals are interpreted over open domains: any universe
//! extending the program constants. The crate provides parsing, grounding,
//! reduct-based answer set checking, a bounded satisfiability solver,
//! program transformations, guardedness analysis, fixed point logic
//! completions with a finite evaluator, stratified Datalog evaluation and a
//! CTL satisfiability encoding.

pub mod ctl;
pub mod datalog;
pub mod error;
pub mod fpl;
pub mod grounder;
pub mod guardedness;
pub mod model;
pub mod parser;
pub mod random;
pub mod selftest;
pub mod semantics;
pub mod solver;
pub mod transforms;

pub use error::{Error, Result, SourceSpan};
pub use model::{
    Atom, BoolFormula, GeneralizedLiteral, Literal, OpenInterpretation, Pred, Program, Rule, Symbol, Term, Universe,
};

/// Padding constant of the single-predicate encoding.
pub const ZERO: &str = "#0";
