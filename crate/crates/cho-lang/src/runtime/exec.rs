//! The batch executor.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::syntax::checked::{CheckedExpr, CheckedProgram, CheckedStmt, PartyIdx};

use super::tape::{words_for, TapeSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuntimeError {
    #[error("{party}'s {kind} tape is too short: program needs {need} bits, tape has {have}")]
    TapeExhausted {
        party: String,
        kind: &'static str,
        need: usize,
        have: usize,
    },
    #[error("tape set covers {have} runs, {need} requested")]
    NotEnoughRuns { need: usize, have: usize },
    #[error("bad corruption set: {0}")]
    BadCorruptionSet(String),
    #[error("unknown party `{0}`")]
    UnknownParty(String),
}

/// One bit received by a party, tagged with its sender.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Message {
    pub from: PartyIdx,
    pub bit: u8,
}

/// Everything one party saw during one run.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PartyRecord {
    pub inputs: Vec<u8>,
    pub randoms: Vec<u8>,
    /// In program order; includes OT deliveries.
    pub messages: Vec<Message>,
    pub outputs: Vec<u8>,
}

/// Per-party records of a single run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExecutionRecord {
    pub parties: Vec<PartyRecord>,
}

/// Raw word-major logs of a whole batch, in the same layout as [`TapeSet`].
pub(crate) struct BatchTrace {
    pub nwords: usize,
    pub inputs: Vec<Vec<u64>>,
    pub randoms: Vec<Vec<u64>>,
    pub messages: Vec<Vec<u64>>,
    pub outputs: Vec<Vec<u64>>,
}

fn check_tapes(p: &CheckedProgram, tapes: &TapeSet, runs: usize) -> Result<(), RuntimeError> {
    if runs > tapes.runs {
        return Err(RuntimeError::NotEnoughRuns {
            need: runs,
            have: tapes.runs,
        });
    }
    for (idx, party) in p.parties.iter().enumerate() {
        if tapes.secret_width[idx] < p.secret_width[idx] {
            return Err(RuntimeError::TapeExhausted {
                party: party.name().to_string(),
                kind: "secret",
                need: p.secret_width[idx],
                have: tapes.secret_width[idx],
            });
        }
        if tapes.random_width[idx] < p.random_width[idx] {
            return Err(RuntimeError::TapeExhausted {
                party: party.name().to_string(),
                kind: "random",
                need: p.random_width[idx],
                have: tapes.random_width[idx],
            });
        }
    }
    Ok(())
}

struct WordCtx<'a> {
    values: &'a mut [u64],
    messages: &'a mut [Vec<u64>],
    msg_base: &'a [usize],
}

fn eval(e: &CheckedExpr, ctx: &mut WordCtx) -> u64 {
    match e {
        CheckedExpr::Const(b) => {
            if *b {
                u64::MAX
            } else {
                0
            }
        }
        CheckedExpr::Var(v) => ctx.values[*v as usize],
        CheckedExpr::Not(a) => !eval(a, ctx),
        CheckedExpr::Xor(a, b) => eval(a, ctx) ^ eval(b, ctx),
        CheckedExpr::And(a, b) => eval(a, ctx) & eval(b, ctx),
        CheckedExpr::Ot {
            selectors,
            leaves,
            receiver,
            delivery_slot,
            ..
        } => {
            // Lane-wise mux down the selection tree, innermost level first.
            let mut vals: Vec<u64> = leaves.iter().map(|v| ctx.values[*v as usize]).collect();
            for sel in selectors.iter().rev() {
                let s = ctx.values[*sel as usize];
                vals = vals
                    .chunks_exact(2)
                    .map(|pair| (pair[0] & !s) | (pair[1] & s))
                    .collect();
            }
            let chosen = vals[0];
            let r = *receiver as usize;
            ctx.messages[r][ctx.msg_base[r] + delivery_slot] = chosen;
            chosen
        }
    }
}

pub(crate) fn exec_trace(p: &CheckedProgram, tapes: &TapeSet, runs: usize) -> BatchTrace {
    let nwords = words_for(runs);
    let nparties = p.parties.len();
    let mut trace = BatchTrace {
        nwords,
        inputs: (0..nparties).map(|i| vec![0; nwords * p.secret_width[i]]).collect(),
        randoms: (0..nparties).map(|i| vec![0; nwords * p.random_width[i]]).collect(),
        messages: (0..nparties).map(|i| vec![0; nwords * p.message_width[i]]).collect(),
        outputs: (0..nparties).map(|i| vec![0; nwords * p.output_width[i]]).collect(),
    };
    let mut values = vec![0u64; p.var_names.len()];
    for w in 0..nwords {
        let msg_base: Vec<usize> = (0..nparties).map(|i| w * p.message_width[i]).collect();
        for stmt in &p.stmts {
            match stmt {
                CheckedStmt::Flip { var, party, slot } => {
                    let pi = *party as usize;
                    let bits = tapes.random[pi][w * tapes.random_width[pi] + slot];
                    values[*var as usize] = bits;
                    trace.randoms[pi][w * p.random_width[pi] + slot] = bits;
                }
                CheckedStmt::Secret { var, party, slot } => {
                    let pi = *party as usize;
                    let bits = tapes.secret[pi][w * tapes.secret_width[pi] + slot];
                    values[*var as usize] = bits;
                    trace.inputs[pi][w * p.secret_width[pi] + slot] = bits;
                }
                CheckedStmt::Compute { var, expr } => {
                    let mut ctx = WordCtx {
                        values: &mut values,
                        messages: &mut trace.messages,
                        msg_base: &msg_base,
                    };
                    let bits = eval(expr, &mut ctx);
                    ctx.values[*var as usize] = bits;
                }
                CheckedStmt::Send { var, to, delivery_slot, .. } => {
                    let t = *to as usize;
                    trace.messages[t][w * p.message_width[t] + delivery_slot] =
                        values[*var as usize];
                }
                CheckedStmt::Output { var, writes } => {
                    let bits = values[*var as usize];
                    for (party, slot) in writes {
                        let pi = *party as usize;
                        trace.outputs[pi][w * p.output_width[pi] + slot] = bits;
                    }
                }
            }
        }
    }
    trace
}

/// Run `runs` executions and return one record per run.
///
/// Tapes may be supplied explicitly or drawn via [`TapeSet::random`]; they
/// must cover the program's declared widths or the call fails with
/// [`RuntimeError::TapeExhausted`].
pub fn run_batch(
    p: &CheckedProgram,
    tapes: &TapeSet,
    runs: usize,
) -> Result<Vec<ExecutionRecord>, RuntimeError> {
    check_tapes(p, tapes, runs)?;
    let trace = exec_trace(p, tapes, runs);
    let nparties = p.parties.len();
    let mut records = Vec::with_capacity(runs);
    for run in 0..runs {
        let (w, lane) = (run / 64, run % 64);
        let take = |words: &Vec<u64>, width: usize| -> Vec<u8> {
            (0..width)
                .map(|slot| (words[w * width + slot] >> lane & 1) as u8)
                .collect()
        };
        let mut parties = Vec::with_capacity(nparties);
        for i in 0..nparties {
            parties.push(PartyRecord {
                inputs: take(&trace.inputs[i], p.secret_width[i]),
                randoms: take(&trace.randoms[i], p.random_width[i]),
                messages: take(&trace.messages[i], p.message_width[i])
                    .into_iter()
                    .zip(&p.message_senders[i])
                    .map(|(bit, &from)| Message { from, bit })
                    .collect(),
                outputs: take(&trace.outputs[i], p.output_width[i]),
            });
        }
        records.push(ExecutionRecord { parties });
    }
    Ok(records)
}

/// Like [`run_batch`], additionally returning the final value of every
/// program variable per run. Intended for tests and debugging.
pub fn run_batch_values(
    p: &CheckedProgram,
    tapes: &TapeSet,
    runs: usize,
) -> Result<(Vec<ExecutionRecord>, BTreeMap<String, Vec<u8>>), RuntimeError> {
    let records = run_batch(p, tapes, runs)?;
    check_tapes(p, tapes, runs)?;
    // Re-run word by word, dumping values. Cold path, clarity over speed.
    let nwords = words_for(runs);
    let mut dump: BTreeMap<String, Vec<u8>> =
        p.var_names.iter().map(|n| (n.clone(), vec![0u8; runs])).collect();
    let mut values = vec![0u64; p.var_names.len()];
    let mut scratch_msgs: Vec<Vec<u64>> =
        (0..p.parties.len()).map(|i| vec![0; p.message_width[i]]).collect();
    let zero_base = vec![0usize; p.parties.len()];
    for w in 0..nwords {
        for stmt in &p.stmts {
            match stmt {
                CheckedStmt::Flip { var, party, slot } => {
                    let pi = *party as usize;
                    values[*var as usize] = tapes.random[pi][w * tapes.random_width[pi] + slot];
                }
                CheckedStmt::Secret { var, party, slot } => {
                    let pi = *party as usize;
                    values[*var as usize] = tapes.secret[pi][w * tapes.secret_width[pi] + slot];
                }
                CheckedStmt::Compute { var, expr } => {
                    let mut ctx = WordCtx {
                        values: &mut values,
                        messages: &mut scratch_msgs,
                        msg_base: &zero_base,
                    };
                    let bits = eval(expr, &mut ctx);
                    ctx.values[*var as usize] = bits;
                }
                CheckedStmt::Send { .. } | CheckedStmt::Output { .. } => {}
            }
        }
        let hi = (64 * (w + 1)).min(runs);
        for (var, name) in p.var_names.iter().enumerate() {
            let bits = values[var];
            let lanes = dump.get_mut(name).expect("var registered");
            for run in 64 * w..hi {
                lanes[run] = (bits >> (run % 64) & 1) as u8;
            }
        }
    }
    Ok((records, dump))
}

/// Fast path for correctness sweeps: execute and return only the output
/// tapes, word-major per party (`[word * output_width + slot]`).
pub fn run_output_words(
    p: &CheckedProgram,
    tapes: &TapeSet,
    runs: usize,
) -> Result<Vec<Vec<u64>>, RuntimeError> {
    check_tapes(p, tapes, runs)?;
    let nwords = words_for(runs);
    let nparties = p.parties.len();
    let mut outputs: Vec<Vec<u64>> =
        (0..nparties).map(|i| vec![0; nwords * p.output_width[i]]).collect();
    let mut values = vec![0u64; p.var_names.len()];
    let mut scratch_msgs: Vec<Vec<u64>> =
        (0..nparties).map(|i| vec![0; p.message_width[i]]).collect();
    let zero_base = vec![0usize; nparties];
    for w in 0..nwords {
        for stmt in &p.stmts {
            match stmt {
                CheckedStmt::Flip { var, party, slot } => {
                    let pi = *party as usize;
                    values[*var as usize] = tapes.random[pi][w * tapes.random_width[pi] + slot];
                }
                CheckedStmt::Secret { var, party, slot } => {
                    let pi = *party as usize;
                    values[*var as usize] = tapes.secret[pi][w * tapes.secret_width[pi] + slot];
                }
                CheckedStmt::Compute { var, expr } => {
                    let mut ctx = WordCtx {
                        values: &mut values,
                        messages: &mut scratch_msgs,
                        msg_base: &zero_base,
                    };
                    let bits = eval(expr, &mut ctx);
                    ctx.values[*var as usize] = bits;
                }
                CheckedStmt::Send { .. } => {}
                CheckedStmt::Output { var, writes } => {
                    let bits = values[*var as usize];
                    for (party, slot) in writes {
                        let pi = *party as usize;
                        outputs[pi][w * p.output_width[pi] + slot] = bits;
                    }
                }
            }
        }
    }
    Ok(outputs)
}
