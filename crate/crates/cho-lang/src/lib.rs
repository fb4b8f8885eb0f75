//! A tiny choreographic language for bit-level multi-party protocols, plus a
//! batched executor that records what each party would see.
//!
//! Programs are lists of single-bit statements: coin flips and secret reads
//! from per-party tapes, local boolean computation, point-to-point sends, a
//! 1-of-2^d oblivious-transfer primitive, and output writes. The [`syntax`]
//! module covers parsing (`.cho` files), macro expansion, validation, and
//! pretty-printing; [`runtime`] executes validated programs over many runs at
//! once (one run per machine-word lane) and extracts real/ideal view tables
//! for security analysis.

pub mod syntax;
pub mod runtime;

pub use syntax::ast::{Expr, MacroDef, OtTable, PartyId, Program, Stmt};
pub use syntax::checked::{CheckedExpr, CheckedProgram, CheckedStmt};
pub use syntax::error::{ExpandError, ParseError, ValidateError};
pub use syntax::{expand_macros, parse_program, pretty, validate, validate_with_order};
pub use runtime::csv::{emit_csv, parse_csv, CsvError};
pub use runtime::exec::{run_batch, run_batch_values, run_output_words, ExecutionRecord, PartyRecord, RuntimeError};
pub use runtime::tape::{TapeSet, TapeWidths};
pub use runtime::view::{collect_views, extract_views, ViewTable};
