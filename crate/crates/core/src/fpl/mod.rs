//! Fixed point logic: formulas, text format, finite evaluation and the
//! completions of p-programs.

mod ast;
mod completion;
mod eval;
mod text;

pub use ast::{FixKind, Fixpoint, Formula};
pub use completion::{
    build, build_comp, build_compg, build_gcomp, build_gcompg, completion_size, sat_formulas, signature, Completion,
    CompletionKind, GlitAtom, RuleAtom,
};
pub use eval::{
    eliminate_gfp, eval, eval_sentence, find_models, is_model, lfp_stages, FiniteStructure, MAX_GUESSED_ATOMS,
};
pub use text::{parse_formula, parse_fpl, render_formula, render_fpl};
