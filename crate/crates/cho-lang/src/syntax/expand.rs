//! Macro expansion.
//!
//! Each call site gets a disjoint fresh namespace for body-local variables;
//! `GET(outer=inner)` binds the listed inner names to outer names instead.
//! Formal party names are substituted positionally by the call's party slots,
//! so the same macro can run "in either direction" between parties.

use std::collections::{HashMap, HashSet};

use super::ast::{Expr, MacroDef, OtTable, PartyId, Program, Stmt};
use super::error::ExpandError;

/// Expand every macro call, returning a macro-free program. Idempotent.
pub fn expand_macros(p: &Program) -> Result<Program, ExpandError> {
    let mut used = collect_identifiers(p);
    let mut counter = 0usize;
    let mut body = Vec::new();
    for stmt in &p.body {
        expand_stmt(stmt, &p.macros, &mut used, &mut counter, &mut body)?;
    }
    Ok(Program { macros: Vec::new(), body })
}

/// Substitution applied to a macro body at one call site.
struct Frame {
    vars: HashMap<String, String>,
    parties: HashMap<PartyId, PartyId>,
}

impl Frame {
    fn var(&self, name: &str) -> String {
        self.vars
            .get(name)
            .cloned()
            .unwrap_or_else(|| name.to_string())
    }

    fn party(&self, p: &PartyId) -> PartyId {
        self.parties.get(p).cloned().unwrap_or_else(|| p.clone())
    }
}

fn expand_stmt(
    stmt: &Stmt,
    macros: &[MacroDef],
    used: &mut HashSet<String>,
    counter: &mut usize,
    out: &mut Vec<Stmt>,
) -> Result<(), ExpandError> {
    match stmt {
        Stmt::MacroCall { name, args, renames } => {
            let def = macros
                .iter()
                .find(|m| m.name == *name)
                .expect("parser guarantees macro exists");
            expand_call(def, macros, args, renames, used, counter, out)
        }
        other => {
            out.push(other.clone());
            Ok(())
        }
    }
}

fn expand_call(
    def: &MacroDef,
    macros: &[MacroDef],
    args: &[(PartyId, Vec<String>)],
    renames: &[(String, String)],
    used: &mut HashSet<String>,
    counter: &mut usize,
    out: &mut Vec<Stmt>,
) -> Result<(), ExpandError> {
    if args.len() != def.params.len() {
        return Err(ExpandError::ArityMismatch {
            name: def.name.clone(),
            detail: format!("expected {} party slots, got {}", def.params.len(), args.len()),
        });
    }

    let mut frame = Frame {
        vars: HashMap::new(),
        parties: HashMap::new(),
    };
    for ((formal_party, formal_vars), (actual_party, actual_vars)) in def.params.iter().zip(args) {
        if formal_vars.len() != actual_vars.len() {
            return Err(ExpandError::ArityMismatch {
                name: def.name.clone(),
                detail: format!(
                    "slot {formal_party} expects {} arguments, got {}",
                    formal_vars.len(),
                    actual_vars.len()
                ),
            });
        }
        frame.parties.insert(formal_party.clone(), actual_party.clone());
        for (formal, actual) in formal_vars.iter().zip(actual_vars) {
            frame.vars.insert(formal.clone(), actual.clone());
        }
    }

    let defined = body_defined_vars(&def.body);
    for (_, inner) in renames {
        if !defined.iter().any(|d| d == inner) {
            return Err(ExpandError::RenameOfUndefinedInnerVar {
                name: def.name.clone(),
                inner: inner.clone(),
            });
        }
    }
    check_bound(def, &defined)?;

    let rename_map: HashMap<&str, &str> = renames
        .iter()
        .map(|(outer, inner)| (inner.as_str(), outer.as_str()))
        .collect();
    let call_id = *counter;
    *counter += 1;
    for var in &defined {
        let target = match rename_map.get(var.as_str()) {
            Some(outer) => (*outer).to_string(),
            None => fresh_name(var, call_id, used),
        };
        frame.vars.insert(var.clone(), target);
    }

    for stmt in &def.body {
        match stmt {
            Stmt::Assign { var, expr } => out.push(Stmt::Assign {
                var: frame.var(var),
                expr: subst_expr(expr, &frame),
            }),
            Stmt::Send { var, to } => out.push(Stmt::Send {
                var: frame.var(var),
                to: frame.party(to),
            }),
            Stmt::Output { var } => out.push(Stmt::Output { var: frame.var(var) }),
            Stmt::MacroCall { name, args, renames } => {
                let inner_args: Vec<(PartyId, Vec<String>)> = args
                    .iter()
                    .map(|(p, vars)| {
                        (frame.party(p), vars.iter().map(|v| frame.var(v)).collect())
                    })
                    .collect();
                let inner_renames: Vec<(String, String)> = renames
                    .iter()
                    .map(|(outer, inner)| (frame.var(outer), inner.clone()))
                    .collect();
                let inner_def = macros
                    .iter()
                    .find(|m| m.name == *name)
                    .expect("parser guarantees macro exists");
                expand_call(inner_def, macros, &inner_args, &inner_renames, used, counter, out)?;
            }
        }
    }
    Ok(())
}

/// Variables a macro body defines: assignment targets plus GET outer names of
/// nested calls.
fn body_defined_vars(body: &[Stmt]) -> Vec<String> {
    let mut out = Vec::new();
    for stmt in body {
        match stmt {
            Stmt::Assign { var, .. } => out.push(var.clone()),
            Stmt::MacroCall { renames, .. } => {
                out.extend(renames.iter().map(|(outer, _)| outer.clone()))
            }
            _ => {}
        }
    }
    out
}

/// Reject references to variables that are neither parameters nor defined in
/// the body; silent capture of caller variables is never intended.
fn check_bound(def: &MacroDef, defined: &[String]) -> Result<(), ExpandError> {
    let mut bound: HashSet<&str> = defined.iter().map(|s| s.as_str()).collect();
    for (_, vars) in &def.params {
        bound.extend(vars.iter().map(|s| s.as_str()));
    }
    let mut err = None;
    let mut check = |v: &str| {
        if err.is_none() && !bound.contains(v) {
            err = Some(ExpandError::UnboundMacroVar {
                name: def.name.clone(),
                var: v.to_string(),
            });
        }
    };
    for stmt in &def.body {
        match stmt {
            Stmt::Assign { expr, .. } => expr.visit_vars(&mut check),
            Stmt::Send { var, .. } | Stmt::Output { var } => check(var),
            Stmt::MacroCall { args, .. } => {
                for (_, vars) in args {
                    for v in vars {
                        check(v);
                    }
                }
            }
        }
    }
    match err {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn fresh_name(base: &str, call_id: usize, used: &mut HashSet<String>) -> String {
    let mut candidate = format!("{base}__{call_id}");
    while used.contains(&candidate) {
        candidate.push('_');
    }
    used.insert(candidate.clone());
    candidate
}

fn collect_identifiers(p: &Program) -> HashSet<String> {
    fn walk_stmt(stmt: &Stmt, out: &mut HashSet<String>) {
        let mut add = |v: &str| {
            out.insert(v.to_string());
        };
        match stmt {
            Stmt::Assign { var, expr } => {
                add(var);
                expr.visit_vars(&mut add);
            }
            Stmt::Send { var, .. } | Stmt::Output { var } => add(var),
            Stmt::MacroCall { args, renames, .. } => {
                for (_, vars) in args {
                    for v in vars {
                        add(v);
                    }
                }
                for (outer, inner) in renames {
                    add(outer);
                    add(inner);
                }
            }
        }
    }

    let mut out = HashSet::new();
    for m in &p.macros {
        for (_, vars) in &m.params {
            for v in vars {
                out.insert(v.clone());
            }
        }
        for stmt in &m.body {
            walk_stmt(stmt, &mut out);
        }
    }
    for stmt in &p.body {
        walk_stmt(stmt, &mut out);
    }
    out
}

fn subst_expr(e: &Expr, frame: &Frame) -> Expr {
    match e {
        Expr::Const(b) => Expr::Const(*b),
        Expr::Var(v) => Expr::Var(frame.var(v)),
        Expr::Not(a) => Expr::not(subst_expr(a, frame)),
        Expr::Xor(a, b) => Expr::xor(subst_expr(a, frame), subst_expr(b, frame)),
        Expr::And(a, b) => Expr::and(subst_expr(a, frame), subst_expr(b, frame)),
        Expr::Flip(p) => Expr::Flip(frame.party(p)),
        Expr::Secret(p) => Expr::Secret(frame.party(p)),
        Expr::Oblivious { table, receiver } => Expr::Oblivious {
            table: subst_table(table, frame),
            receiver: frame.party(receiver),
        },
    }
}

fn subst_table(t: &OtTable, frame: &Frame) -> OtTable {
    match t {
        OtTable::Leaf(v) => OtTable::Leaf(frame.var(v)),
        OtTable::Select { selector, zero, one } => OtTable::Select {
            selector: frame.var(selector),
            zero: Box::new(subst_table(zero, frame)),
            one: Box::new(subst_table(one, frame)),
        },
    }
}
