//! Parsing, macro expansion, validation, and pretty-printing.

pub mod ast;
pub mod checked;
pub mod error;
mod expand;
mod lexer;
mod parser;
mod pretty;
mod validate;

pub use expand::expand_macros;
pub use parser::parse_program;
pub use pretty::pretty;
pub use validate::{validate, validate_with_order};
