//! Batched execution and view extraction.
//!
//! Execution is bit-parallel: 64 independent runs share one pass over the
//! program, with every value held as a machine word of lanes. Lane `i` of
//! every value depends only on lane `i` of the tapes.

pub mod csv;
pub mod exec;
pub mod tape;
pub mod view;
