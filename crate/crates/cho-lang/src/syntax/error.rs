//! Error types for the syntax pipeline.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{col}: syntax error: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}: duplicate macro `{name}`")]
    DuplicateMacro { line: usize, name: String },
    #[error("{line}: unknown macro `{name}` (macros must be defined before use)")]
    UnknownMacro { line: usize, name: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExpandError {
    #[error("call of `{name}`: arity mismatch ({detail})")]
    ArityMismatch { name: String, detail: String },
    #[error("call of `{name}`: GET renames `{inner}` which is not defined in the macro body")]
    RenameOfUndefinedInnerVar { name: String, inner: String },
    #[error("macro `{name}` references `{var}` which is neither a parameter nor defined in its body")]
    UnboundMacroVar { name: String, var: String },
    #[error("program still contains macro definitions; expand top-down only")]
    NestedMacroDef,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidateError {
    #[error("statement {stmt}: `{var}` used before assignment")]
    UseBeforeAssign { stmt: usize, var: String },
    #[error("statement {stmt}: `{var}` is assigned more than once")]
    Reassignment { stmt: usize, var: String },
    #[error("statement {stmt}: no single party holds every operand of the expression assigned to `{var}`")]
    CrossPartyExpression { stmt: usize, var: String },
    #[error("statement {stmt}: `{var}` is already held by {party}; SEND target must differ from the owner")]
    SendToOwner { stmt: usize, var: String, party: String },
    #[error("statement {stmt}: malformed oblivious table: {msg}")]
    MalformedObliviousTable { stmt: usize, msg: String },
    #[error("program contains macros or macro calls; expand before validating")]
    NotMacroFree,
    #[error("programs are limited to 64 parties")]
    TooManyParties,
}
