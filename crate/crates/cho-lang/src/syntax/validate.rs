//! Static validation: party locations, single assignment, and OT shape.
//!
//! Location rules: `FLIP @P`/`SECRET @P` locate at the annotated party; an
//! assignment locates at every party holding all of its operands (received
//! values count, under the sent name); `SEND` adds the variable to the
//! recipient's scope; an oblivious transfer locates its result at the
//! receiving party only. Constant-only expressions are computable everywhere.

use std::collections::HashMap;

use super::ast::{Expr, OtTable, PartyId, Program, Stmt};
use super::checked::{CheckedExpr, CheckedProgram, CheckedStmt, PartyIdx, VarIdx};
use super::error::ValidateError;

/// Validate a macro-free program, with parties ordered by first use.
pub fn validate(p: &Program) -> Result<CheckedProgram, Vec<ValidateError>> {
    validate_with_order(p, &[])
}

/// Validate with a pinned party order. Pinned parties come first (whether or
/// not the program mentions them); any others follow in first-use order.
pub fn validate_with_order(p: &Program, pinned: &[PartyId]) -> Result<CheckedProgram, Vec<ValidateError>> {
    if !p.is_macro_free() {
        return Err(vec![ValidateError::NotMacroFree]);
    }
    let mut parties: Vec<PartyId> = pinned.to_vec();
    for q in p.parties() {
        if !parties.contains(&q) {
            parties.push(q);
        }
    }
    if parties.len() > 64 {
        return Err(vec![ValidateError::TooManyParties]);
    }
    let all_mask = if parties.is_empty() {
        0
    } else {
        u64::MAX >> (64 - parties.len())
    };

    let mut ck = Checker {
        parties,
        all_mask,
        errors: Vec::new(),
        var_ids: HashMap::new(),
        var_names: Vec::new(),
        location: Vec::new(),
        scope: Vec::new(),
        stmts: Vec::new(),
        secret_width: Vec::new(),
        random_width: Vec::new(),
        output_width: Vec::new(),
        message_width: Vec::new(),
        message_senders: Vec::new(),
    };
    let n = ck.parties.len();
    ck.secret_width.resize(n, 0);
    ck.random_width.resize(n, 0);
    ck.output_width.resize(n, 0);
    ck.message_width.resize(n, 0);
    ck.message_senders.resize(n, Vec::new());

    for (idx, stmt) in p.body.iter().enumerate() {
        ck.stmt(idx, stmt);
    }

    if ck.errors.is_empty() {
        Ok(CheckedProgram {
            parties: ck.parties,
            var_names: ck.var_names,
            location: ck.location,
            scope: ck.scope,
            stmts: ck.stmts,
            secret_width: ck.secret_width,
            random_width: ck.random_width,
            output_width: ck.output_width,
            message_width: ck.message_width,
            message_senders: ck.message_senders,
        })
    } else {
        Err(ck.errors)
    }
}

struct Checker {
    parties: Vec<PartyId>,
    all_mask: u64,
    errors: Vec<ValidateError>,
    var_ids: HashMap<String, VarIdx>,
    var_names: Vec<String>,
    location: Vec<PartyIdx>,
    scope: Vec<u64>,
    stmts: Vec<CheckedStmt>,
    secret_width: Vec<usize>,
    random_width: Vec<usize>,
    output_width: Vec<usize>,
    message_width: Vec<usize>,
    message_senders: Vec<Vec<PartyIdx>>,
}

impl Checker {
    fn party_idx(&self, p: &PartyId) -> PartyIdx {
        self.parties
            .iter()
            .position(|q| q == p)
            .expect("party set precomputed from the same program") as PartyIdx
    }

    /// Register a freshly assigned variable. `scope` is the party mask where
    /// it is computable; on expression errors we pass the full mask to avoid
    /// cascading use-errors.
    fn define(&mut self, stmt: usize, name: &str, scope: u64) -> VarIdx {
        if self.var_ids.contains_key(name) {
            self.errors.push(ValidateError::Reassignment {
                stmt,
                var: name.to_string(),
            });
            return self.var_ids[name];
        }
        let id = self.var_names.len() as VarIdx;
        self.var_ids.insert(name.to_string(), id);
        self.var_names.push(name.to_string());
        self.location.push(scope.trailing_zeros().min(63) as PartyIdx);
        self.scope.push(scope);
        id
    }

    fn lookup(&mut self, stmt: usize, name: &str) -> Option<VarIdx> {
        match self.var_ids.get(name) {
            Some(&id) => Some(id),
            None => {
                self.errors.push(ValidateError::UseBeforeAssign {
                    stmt,
                    var: name.to_string(),
                });
                None
            }
        }
    }

    fn stmt(&mut self, idx: usize, stmt: &Stmt) {
        match stmt {
            Stmt::Assign { var, expr } => self.assign(idx, var, expr),
            Stmt::Send { var, to } => {
                let to_idx = self.party_idx(to);
                let Some(id) = self.lookup(idx, var) else { return };
                let from = self.location[id as usize];
                if from == to_idx {
                    self.errors.push(ValidateError::SendToOwner {
                        stmt: idx,
                        var: var.clone(),
                        party: to.name().to_string(),
                    });
                    return;
                }
                let slot = self.message_width[to_idx as usize];
                self.message_width[to_idx as usize] += 1;
                self.message_senders[to_idx as usize].push(from);
                self.scope[id as usize] |= 1 << to_idx;
                self.stmts.push(CheckedStmt::Send {
                    var: id,
                    from,
                    to: to_idx,
                    delivery_slot: slot,
                });
            }
            Stmt::Output { var } => {
                let Some(id) = self.lookup(idx, var) else { return };
                let mask = self.scope[id as usize];
                let mut writes = Vec::new();
                for p in 0..self.parties.len() {
                    if mask >> p & 1 == 1 {
                        writes.push((p as PartyIdx, self.output_width[p]));
                        self.output_width[p] += 1;
                    }
                }
                self.stmts.push(CheckedStmt::Output { var: id, writes });
            }
            Stmt::MacroCall { .. } => unreachable!("checked by is_macro_free"),
        }
    }

    fn assign(&mut self, idx: usize, var: &str, expr: &Expr) {
        match expr {
            Expr::Flip(p) => {
                let party = self.party_idx(p);
                let slot = self.random_width[party as usize];
                self.random_width[party as usize] += 1;
                let id = self.define(idx, var, 1 << party);
                self.stmts.push(CheckedStmt::Flip { var: id, party, slot });
            }
            Expr::Secret(p) => {
                let party = self.party_idx(p);
                let slot = self.secret_width[party as usize];
                self.secret_width[party as usize] += 1;
                let id = self.define(idx, var, 1 << party);
                self.stmts.push(CheckedStmt::Secret { var: id, party, slot });
            }
            _ => {
                let before = self.errors.len();
                let (cexpr, mask) = self.expr(idx, var, expr);
                if self.errors.len() > before {
                    // Register with full scope so later uses do not cascade.
                    self.define(idx, var, self.all_mask);
                    return;
                }
                if mask == 0 {
                    self.errors.push(ValidateError::CrossPartyExpression {
                        stmt: idx,
                        var: var.to_string(),
                    });
                    self.define(idx, var, self.all_mask);
                    return;
                }
                let id = self.define(idx, var, mask);
                self.stmts.push(CheckedStmt::Compute { var: id, expr: cexpr });
            }
        }
    }

    /// Resolve an expression, returning the mask of parties able to evaluate
    /// it. Errors are pushed and a dummy expression returned.
    fn expr(&mut self, idx: usize, target: &str, e: &Expr) -> (CheckedExpr, u64) {
        match e {
            Expr::Const(b) => (CheckedExpr::Const(*b), self.all_mask),
            Expr::Var(v) => match self.lookup(idx, v) {
                Some(id) => (CheckedExpr::Var(id), self.scope[id as usize]),
                None => (CheckedExpr::Const(false), self.all_mask),
            },
            Expr::Not(a) => {
                let (ca, m) = self.expr(idx, target, a);
                (CheckedExpr::Not(Box::new(ca)), m)
            }
            Expr::Xor(a, b) => {
                let (ca, ma) = self.expr(idx, target, a);
                let (cb, mb) = self.expr(idx, target, b);
                (CheckedExpr::Xor(Box::new(ca), Box::new(cb)), ma & mb)
            }
            Expr::And(a, b) => {
                let (ca, ma) = self.expr(idx, target, a);
                let (cb, mb) = self.expr(idx, target, b);
                (CheckedExpr::And(Box::new(ca), Box::new(cb)), ma & mb)
            }
            Expr::Flip(_) | Expr::Secret(_) => {
                // The grammar only produces these as whole right-hand sides.
                unreachable!("FLIP/SECRET inside an expression")
            }
            Expr::Oblivious { table, receiver } => self.ot(idx, target, table, receiver),
        }
    }

    fn ot(
        &mut self,
        idx: usize,
        target: &str,
        table: &OtTable,
        receiver: &PartyId,
    ) -> (CheckedExpr, u64) {
        let recv = self.party_idx(receiver);
        let dummy = (CheckedExpr::Const(false), self.all_mask);

        // Shape: complete binary tree with one selector per level.
        let mut selectors: Vec<String> = Vec::new();
        let mut leaf_depth = None;
        if let Err(msg) = check_table_shape(table, 0, &mut selectors, &mut leaf_depth) {
            self.errors.push(ValidateError::MalformedObliviousTable { stmt: idx, msg });
            return dummy;
        }
        if selectors.is_empty() {
            self.errors.push(ValidateError::MalformedObliviousTable {
                stmt: idx,
                msg: "table must select on at least one variable".into(),
            });
            return dummy;
        }

        let mut sel_ids = Vec::new();
        for s in &selectors {
            let Some(id) = self.lookup(idx, s) else { return dummy };
            if self.scope[id as usize] >> recv & 1 == 0 {
                self.errors.push(ValidateError::CrossPartyExpression {
                    stmt: idx,
                    var: format!("{target} (selector `{s}` is not held by {receiver})"),
                });
                return dummy;
            }
            sel_ids.push(id);
        }

        let mut leaf_ids = Vec::new();
        let mut common = u64::MAX;
        for leaf in table.leaves() {
            let Some(id) = self.lookup(idx, leaf) else { return dummy };
            common &= self.scope[id as usize];
            leaf_ids.push(id);
        }
        let candidates = common & self.all_mask & !(1 << recv);
        if candidates == 0 {
            self.errors.push(ValidateError::CrossPartyExpression {
                stmt: idx,
                var: format!("{target} (no party other than {receiver} holds every table leaf)"),
            });
            return dummy;
        }
        let sender = candidates.trailing_zeros() as PartyIdx;
        let slot = self.message_width[recv as usize];
        self.message_width[recv as usize] += 1;
        self.message_senders[recv as usize].push(sender);
        (
            CheckedExpr::Ot {
                selectors: sel_ids,
                leaves: leaf_ids,
                sender,
                receiver: recv,
                delivery_slot: slot,
            },
            1 << recv,
        )
    }
}

/// Collect the per-level selectors, requiring uniform leaf depth and a single
/// selector variable per level.
fn check_table_shape(
    t: &OtTable,
    level: usize,
    selectors: &mut Vec<String>,
    leaf_depth: &mut Option<usize>,
) -> Result<(), String> {
    match t {
        OtTable::Leaf(_) => match *leaf_depth {
            None => {
                *leaf_depth = Some(level);
                Ok(())
            }
            Some(d) if d == level => Ok(()),
            Some(_) => Err("leaves must all sit at the same depth".into()),
        },
        OtTable::Select { selector, zero, one } => {
            if level == selectors.len() {
                selectors.push(selector.clone());
            } else if level > selectors.len() || selectors[level] != *selector {
                return Err(format!(
                    "level {level} must select on a single variable (`{}` vs `{selector}`)",
                    selectors.get(level).map(String::as_str).unwrap_or("?"),
                ));
            }
            check_table_shape(zero, level + 1, selectors, leaf_depth)?;
            check_table_shape(one, level + 1, selectors, leaf_depth)
        }
    }
}
