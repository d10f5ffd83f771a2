//! Text syntax for programs, atoms and CTL formulas, plus the inverse renderers.

mod ctl;
mod lexer;
mod program;
mod render;

pub use ctl::{parse_ctl, render_ctl};
pub use lexer::{is_name_char, tokenize, Cursor, Tok};
pub use program::{is_keyword, parse_atom, parse_atoms, parse_constants, parse_program};
pub use render::{
    render_atom, render_atoms, render_const, render_formula, render_glit, render_interpretation, render_literal,
    render_program, render_rule, render_term,
};
