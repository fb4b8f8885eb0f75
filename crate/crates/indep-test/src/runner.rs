//! The end-to-end insecurity test.
//!
//! Each iteration draws fresh training rows, fits one model on the full
//! real-world view (I then R columns) and one on the ideal-world view (I
//! columns only), then scores both on fresh test rows by counting
//! mispredicted honest-secret bits. The iteration scores are compared with a
//! one-sided signed-rank test of "real scores are smaller"; a p-value at or
//! below alpha flags the protocol INSECURE.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use cho_lang::{collect_views, CheckedProgram, PartyId, RuntimeError, TapeSet, TapeWidths, ViewTable};

use crate::tree::{score_errors, train_forest, TrainOptions, TreeError};
use crate::wilcoxon::{signed_rank_less, PMode};

/// Additive score inflation, kept for report compatibility with downstream
/// ratio-based tooling; the signed-rank statistic itself works on the raw
/// integer error counts.
pub const SCORE_EPSILON: f64 = 1e-10;

/// Second reporting threshold: protocols with p below this are flagged as
/// negligible-risk-of-fluke detections.
pub const NEGLIGIBLE_ALPHA: f64 = 1.25e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TestConfig {
    pub iters: usize,
    pub train_n: usize,
    pub test_n: usize,
    pub alpha: f64,
    pub seed: u64,
}

impl TestConfig {
    /// The low-power setting used to pre-filter generated protocols.
    pub fn low_power(seed: u64) -> Self {
        TestConfig { iters: 16, train_n: 128, test_n: 32, alpha: 0.05, seed }
    }

    pub fn validate(&self) -> Result<(), TestError> {
        if self.iters < 6 {
            return Err(TestError::BadConfig(
                "iters must be at least 6 (the smallest count with a reachable one-sided p below 0.05)".into(),
            ));
        }
        if self.train_n == 0 || self.test_n == 0 {
            return Err(TestError::BadConfig("trainN and testN must be positive".into()));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(TestError::BadConfig("alpha must lie in (0, 1)".into()));
        }
        Ok(())
    }
}

/// Paired per-iteration scores as raw bit-error counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScorePair {
    pub real_errors: u64,
    pub ideal_errors: u64,
}

impl ScorePair {
    pub fn real_score(&self) -> f64 {
        self.real_errors as f64 + SCORE_EPSILON
    }

    pub fn ideal_score(&self) -> f64 {
        self.ideal_errors as f64 + SCORE_EPSILON
    }

    pub fn diff(&self) -> i64 {
        self.real_errors as i64 - self.ideal_errors as i64
    }
}

/// One-sided signed-rank p-value for "real scores beat ideal scores".
pub fn wilcoxon_less(pairs: &[ScorePair]) -> f64 {
    let diffs: Vec<i64> = pairs.iter().map(ScorePair::diff).collect();
    signed_rank_less(&diffs, PMode::Auto)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "INSECURE")]
    Insecure,
    #[serde(rename = "MAYBE_SECURE")]
    MaybeSecure,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Insecure => "INSECURE",
            Verdict::MaybeSecure => "MAYBE_SECURE",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TestReport {
    pub p_value: f64,
    pub verdict: Verdict,
    /// p under the stricter [`NEGLIGIBLE_ALPHA`] threshold.
    pub negligible: bool,
    pub alpha: f64,
    pub iters: usize,
    pub train_n: usize,
    pub test_n: usize,
    pub seed: u64,
    /// Inflated `(real, ideal)` scores per iteration.
    pub pairs: Vec<[f64; 2]>,
    pub wall_seconds: f64,
}

impl TestReport {
    pub fn score_pairs(&self) -> Vec<ScorePair> {
        self.pairs
            .iter()
            .map(|[r, i]| ScorePair {
                real_errors: (r - SCORE_EPSILON).round() as u64,
                ideal_errors: (i - SCORE_EPSILON).round() as u64,
            })
            .collect()
    }
}

#[derive(Debug, Error)]
pub enum TestError {
    #[error("bad test configuration: {0}")]
    BadConfig(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error(transparent)]
    Runtime(#[from] RuntimeError),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// Supplies fresh view-table rows; every drawn row is consumed exactly once,
/// so train/test blocks and iterations never share data.
pub trait ViewSource {
    fn draw(&mut self, rows: usize) -> Result<ViewTable, TestError>;
}

/// Draws views by running a validated protocol on fresh uniform tapes.
pub struct ProtocolSource {
    program: CheckedProgram,
    corrupt: Vec<PartyId>,
    rng: ChaCha8Rng,
}

impl ProtocolSource {
    pub fn new(program: CheckedProgram, corrupt: Vec<PartyId>, seed: u64) -> Self {
        ProtocolSource { program, corrupt, rng: ChaCha8Rng::seed_from_u64(seed) }
    }
}

impl ViewSource for ProtocolSource {
    fn draw(&mut self, rows: usize) -> Result<ViewTable, TestError> {
        let tapes = TapeSet::random(&TapeWidths::of(&self.program), rows, &mut self.rng);
        Ok(collect_views(&self.program, &tapes, rows, &self.corrupt)?)
    }
}

/// Serves rows of a preloaded table (e.g. parsed from CSV) front to back.
pub struct TableSource {
    table: ViewTable,
    at: usize,
}

impl TableSource {
    pub fn new(table: ViewTable) -> Self {
        TableSource { table, at: 0 }
    }

    pub fn rows_left(&self) -> usize {
        self.table.rows - self.at
    }
}

impl ViewSource for TableSource {
    fn draw(&mut self, rows: usize) -> Result<ViewTable, TestError> {
        if self.at + rows > self.table.rows {
            return Err(TestError::InsufficientData(format!(
                "need {rows} more rows, {} remain (fresh rows are required for every phase)",
                self.rows_left()
            )));
        }
        let out = self.table.slice_rows(self.at, self.at + rows);
        self.at += rows;
        Ok(out)
    }
}

fn feature_refs(table: &ViewTable, with_real: bool) -> Vec<&[u8]> {
    let mut cols: Vec<&[u8]> = table.i.iter().map(Vec::as_slice).collect();
    if with_real {
        cols.extend(table.r.iter().map(Vec::as_slice));
    }
    cols
}

fn label_refs(table: &ViewTable) -> Vec<&[u8]> {
    table.l.iter().map(Vec::as_slice).collect()
}

/// Score one iteration's (train, test) block pair.
fn run_iteration(train: &ViewTable, test: &ViewTable) -> Result<ScorePair, TestError> {
    let opts = TrainOptions::default();
    let real = train_forest(&feature_refs(train, true), &label_refs(train), &opts)?;
    let ideal = train_forest(&feature_refs(train, false), &label_refs(train), &opts)?;
    Ok(ScorePair {
        real_errors: score_errors(&real, &feature_refs(test, true), &label_refs(test))?,
        ideal_errors: score_errors(&ideal, &feature_refs(test, false), &label_refs(test))?,
    })
}

/// Run the full test: `iters` iterations of train-and-score on fresh rows,
/// then the signed-rank comparison and verdict.
pub fn run_test(source: &mut dyn ViewSource, cfg: &TestConfig) -> Result<TestReport, TestError> {
    cfg.validate()?;
    let started = Instant::now();

    let mut blocks = Vec::with_capacity(cfg.iters);
    for _ in 0..cfg.iters {
        let train = source.draw(cfg.train_n)?;
        let test = source.draw(cfg.test_n)?;
        blocks.push((train, test));
    }

    let pairs: Vec<ScorePair> = blocks
        .par_iter()
        .map(|(train, test)| run_iteration(train, test))
        .collect::<Result<Vec<_>, _>>()?;

    let p_value = wilcoxon_less(&pairs);
    Ok(TestReport {
        p_value,
        verdict: if p_value <= cfg.alpha { Verdict::Insecure } else { Verdict::MaybeSecure },
        negligible: p_value < NEGLIGIBLE_ALPHA,
        alpha: cfg.alpha,
        iters: cfg.iters,
        train_n: cfg.train_n,
        test_n: cfg.test_n,
        seed: cfg.seed,
        pairs: pairs.iter().map(|p| [p.real_score(), p.ideal_score()]).collect(),
        wall_seconds: started.elapsed().as_secs_f64(),
    })
}
