//! Validated, index-resolved programs ready for execution.

use super::ast::PartyId;

/// Index of a party within a [`CheckedProgram`]'s ordered party list.
pub type PartyIdx = u8;
/// Index of a variable within a [`CheckedProgram`]'s variable table.
pub type VarIdx = u32;

/// Expression with variables resolved to indices and oblivious transfers
/// flattened to (selectors, leaves) plus a resolved sender/receiver.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckedExpr {
    Const(bool),
    Var(VarIdx),
    Not(Box<CheckedExpr>),
    Xor(Box<CheckedExpr>, Box<CheckedExpr>),
    And(Box<CheckedExpr>, Box<CheckedExpr>),
    Ot {
        /// One selector per level, outermost first.
        selectors: Vec<VarIdx>,
        /// `2^selectors.len()` leaves in selection-index order (outer
        /// selector contributes the high bit).
        leaves: Vec<VarIdx>,
        sender: PartyIdx,
        receiver: PartyIdx,
        /// Position of the delivered bit in the receiver's message log.
        delivery_slot: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckedStmt {
    Flip {
        var: VarIdx,
        party: PartyIdx,
        /// Index into the party's random tape.
        slot: usize,
    },
    Secret {
        var: VarIdx,
        party: PartyIdx,
        /// Index into the party's secret-input tape.
        slot: usize,
    },
    Compute {
        var: VarIdx,
        expr: CheckedExpr,
    },
    Send {
        var: VarIdx,
        from: PartyIdx,
        to: PartyIdx,
        /// Position of the bit in the recipient's message log.
        delivery_slot: usize,
    },
    Output {
        var: VarIdx,
        /// Every party holding the variable writes it to its output tape,
        /// listed in party order with the slot in that party's tape.
        writes: Vec<(PartyIdx, usize)>,
    },
}

/// A validated program: party-located, singly-assigned, with all tape and
/// message positions resolved statically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckedProgram {
    pub parties: Vec<PartyId>,
    pub var_names: Vec<String>,
    /// Birth party of each variable: the first party (in party order) that
    /// can evaluate its defining statement.
    pub location: Vec<PartyIdx>,
    /// Final scope of each variable as a party bitmask (birth plus sends).
    pub scope: Vec<u64>,
    pub stmts: Vec<CheckedStmt>,
    /// Secret-input tape width per party.
    pub secret_width: Vec<usize>,
    /// Random tape width per party.
    pub random_width: Vec<usize>,
    /// Output tape width per party.
    pub output_width: Vec<usize>,
    /// Message-log width per party (sends plus OT deliveries).
    pub message_width: Vec<usize>,
    /// Sender of each message-log entry, per receiving party.
    pub message_senders: Vec<Vec<PartyIdx>>,
}

impl CheckedProgram {
    pub fn party_index(&self, p: &PartyId) -> Option<PartyIdx> {
        self.parties.iter().position(|q| q == p).map(|i| i as PartyIdx)
    }

    /// Map `var -> birth party` in variable order, as (name, party) pairs.
    pub fn location_map(&self) -> Vec<(&str, &PartyId)> {
        self.var_names
            .iter()
            .zip(&self.location)
            .map(|(name, &p)| (name.as_str(), &self.parties[p as usize]))
            .collect()
    }
}
