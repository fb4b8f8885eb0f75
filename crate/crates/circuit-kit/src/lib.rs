//! Bristol-fashion circuits and their compilation to two-party
//! choreographies, under an OT-based (GMW) or Beaver-triple backend, plus
//! built-in circuit generators and tunable bug injection.

pub mod bristol;
pub mod builtin;
pub mod circuit;
pub mod compile;
pub mod mutate;

pub use bristol::parse_bristol;
pub use builtin::{gen_adder, gen_beaver_triple_gen, gen_less_than};
pub use circuit::{Circuit, CircuitError, Gate, GateKind, OutputGroup, OutputTo};
pub use compile::{compile, compile_beaver, compile_gmw, mutate, CompileError, CompileOptions, FrameworkChoice};
pub use mutate::{mutate_program, MutationError, MutationKind, MutationSpec, SiteSelector};
