//! Real- and ideal-world view tables.
//!
//! For a corruption set C, each protocol run contributes one row:
//!   * `L` — the honest parties' secret-input bits (prediction labels),
//!   * `I` — the ideal-world view: corrupt inputs, then corrupt outputs,
//!   * `R` — the real-only view: corrupt random-tape bits, then messages
//!     received by corrupt parties from honest parties. Traffic within C
//!     carries no information the adversary lacks and is excluded.
//!
//! Column order is deterministic given party order and program order.

use crate::syntax::checked::CheckedProgram;
use crate::syntax::ast::PartyId;

use super::exec::{exec_trace, ExecutionRecord, RuntimeError};
use super::tape::TapeSet;

/// Bit matrix of protocol runs, columns partitioned into L, I, and R groups.
/// Columns are stored as `Vec<u8>` of 0/1 values, one entry per run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ViewTable {
    pub rows: usize,
    pub l: Vec<Vec<u8>>,
    pub i: Vec<Vec<u8>>,
    pub r: Vec<Vec<u8>>,
}

impl ViewTable {
    pub fn widths(&self) -> (usize, usize, usize) {
        (self.l.len(), self.i.len(), self.r.len())
    }

    /// Append another table's rows; column widths must match.
    pub fn append(&mut self, other: &ViewTable) {
        assert_eq!(self.widths(), other.widths(), "mismatched view widths");
        for (dst, src) in self.l.iter_mut().zip(&other.l) {
            dst.extend_from_slice(src);
        }
        for (dst, src) in self.i.iter_mut().zip(&other.i) {
            dst.extend_from_slice(src);
        }
        for (dst, src) in self.r.iter_mut().zip(&other.r) {
            dst.extend_from_slice(src);
        }
        self.rows += other.rows;
    }

    /// Rows `[lo, hi)` as a new table.
    pub fn slice_rows(&self, lo: usize, hi: usize) -> ViewTable {
        let cut = |cols: &[Vec<u8>]| cols.iter().map(|c| c[lo..hi].to_vec()).collect();
        ViewTable {
            rows: hi - lo,
            l: cut(&self.l),
            i: cut(&self.i),
            r: cut(&self.r),
        }
    }
}

fn corrupt_mask(p: &CheckedProgram, corrupt: &[PartyId]) -> Result<u64, RuntimeError> {
    let mut mask = 0u64;
    for c in corrupt {
        let idx = p
            .party_index(c)
            .ok_or_else(|| RuntimeError::UnknownParty(c.name().to_string()))?;
        mask |= 1 << idx;
    }
    if mask == 0 {
        return Err(RuntimeError::BadCorruptionSet("empty corruption set".into()));
    }
    let all = u64::MAX >> (64 - p.parties.len());
    if mask == all {
        return Err(RuntimeError::BadCorruptionSet(
            "every party is corrupt; no honest secrets remain".into(),
        ));
    }
    Ok(mask)
}

/// Extract the view table of `corrupt` from per-run records.
pub fn extract_views(
    p: &CheckedProgram,
    records: &[ExecutionRecord],
    corrupt: &[PartyId],
) -> Result<ViewTable, RuntimeError> {
    let mask = corrupt_mask(p, corrupt)?;
    let rows = records.len();
    let nparties = p.parties.len();
    let is_corrupt = |i: usize| mask >> i & 1 == 1;

    let mut table = ViewTable {
        rows,
        l: Vec::new(),
        i: Vec::new(),
        r: Vec::new(),
    };
    let column = |extract: &dyn Fn(&ExecutionRecord) -> u8| -> Vec<u8> {
        records.iter().map(extract).collect()
    };

    for party in 0..nparties {
        if !is_corrupt(party) {
            for slot in 0..p.secret_width[party] {
                table.l.push(column(&|rec| rec.parties[party].inputs[slot]));
            }
        }
    }
    for party in 0..nparties {
        if is_corrupt(party) {
            for slot in 0..p.secret_width[party] {
                table.i.push(column(&|rec| rec.parties[party].inputs[slot]));
            }
        }
    }
    for party in 0..nparties {
        if is_corrupt(party) {
            for slot in 0..p.output_width[party] {
                table.i.push(column(&|rec| rec.parties[party].outputs[slot]));
            }
        }
    }
    for party in 0..nparties {
        if is_corrupt(party) {
            for slot in 0..p.random_width[party] {
                table.r.push(column(&|rec| rec.parties[party].randoms[slot]));
            }
        }
    }
    for party in 0..nparties {
        if is_corrupt(party) {
            for (slot, &sender) in p.message_senders[party].iter().enumerate() {
                if !is_corrupt(sender as usize) {
                    table
                        .r
                        .push(column(&|rec| rec.parties[party].messages[slot].bit));
                }
            }
        }
    }
    Ok(table)
}

/// Execute `runs` runs over `tapes` and build the view table directly,
/// without materialising per-run records. Produces bit-identical output to
/// [`extract_views`] over [`super::exec::run_batch`].
pub fn collect_views(
    p: &CheckedProgram,
    tapes: &TapeSet,
    runs: usize,
    corrupt: &[PartyId],
) -> Result<ViewTable, RuntimeError> {
    let mask = corrupt_mask(p, corrupt)?;
    // Reuse run_batch's tape checks by executing through the same core.
    if runs > tapes.runs() {
        return Err(RuntimeError::NotEnoughRuns {
            need: runs,
            have: tapes.runs(),
        });
    }
    for (idx, party) in p.parties.iter().enumerate() {
        for (kind, need, have) in [
            ("secret", p.secret_width[idx], tapes.secret_width[idx]),
            ("random", p.random_width[idx], tapes.random_width[idx]),
        ] {
            if have < need {
                return Err(RuntimeError::TapeExhausted {
                    party: party.name().to_string(),
                    kind,
                    need,
                    have,
                });
            }
        }
    }

    let trace = exec_trace(p, tapes, runs);
    let nparties = p.parties.len();
    let is_corrupt = |i: usize| mask >> i & 1 == 1;
    let unpack = |words: &[u64], width: usize, slot: usize| -> Vec<u8> {
        let mut col = Vec::with_capacity(runs);
        for w in 0..trace.nwords {
            let bits = words[w * width + slot];
            let hi = (64 * (w + 1)).min(runs);
            for run in 64 * w..hi {
                col.push((bits >> (run % 64) & 1) as u8);
            }
        }
        col
    };

    let mut table = ViewTable {
        rows: runs,
        l: Vec::new(),
        i: Vec::new(),
        r: Vec::new(),
    };
    for party in 0..nparties {
        if !is_corrupt(party) {
            for slot in 0..p.secret_width[party] {
                table.l.push(unpack(&trace.inputs[party], p.secret_width[party], slot));
            }
        }
    }
    for party in 0..nparties {
        if is_corrupt(party) {
            for slot in 0..p.secret_width[party] {
                table.i.push(unpack(&trace.inputs[party], p.secret_width[party], slot));
            }
        }
    }
    for party in 0..nparties {
        if is_corrupt(party) {
            for slot in 0..p.output_width[party] {
                table.i.push(unpack(&trace.outputs[party], p.output_width[party], slot));
            }
        }
    }
    for party in 0..nparties {
        if is_corrupt(party) {
            for slot in 0..p.random_width[party] {
                table.r.push(unpack(&trace.randoms[party], p.random_width[party], slot));
            }
        }
    }
    for party in 0..nparties {
        if is_corrupt(party) {
            for (slot, &sender) in p.message_senders[party].iter().enumerate() {
                if !is_corrupt(sender as usize) {
                    table.r.push(unpack(&trace.messages[party], p.message_width[party], slot));
                }
            }
        }
    }
    Ok(table)
}
