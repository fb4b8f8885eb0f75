//! Statistical insecurity detection for two-world protocol views.
//!
//! A protocol leaks when the corrupt parties' real-world views (tapes and
//! messages) help predict the honest secrets beyond what the ideal-world
//! views (inputs and outputs) already reveal. This crate tests exactly that:
//! paired decision-tree models are trained with and without the real-only
//! columns over many fresh batches of runs, and their test errors are
//! compared with a one-sided signed-rank test.

pub mod runner;
pub mod tree;
pub mod wilcoxon;

pub use runner::{
    run_test, wilcoxon_less, ProtocolSource, ScorePair, TableSource, TestConfig, TestError,
    TestReport, Verdict, ViewSource, NEGLIGIBLE_ALPHA, SCORE_EPSILON,
};
pub use tree::{score_errors, train_forest, train_tree, DecisionTree, Forest, TrainOptions, TreeError};
pub use wilcoxon::{signed_rank_less, PMode, EXACT_LIMIT};
