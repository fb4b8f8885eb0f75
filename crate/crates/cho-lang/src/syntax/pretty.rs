//! Canonical text form. `parse_program(pretty(p)) == p` for valid programs.

use super::ast::{Expr, MacroDef, OtTable, Program, Stmt};
use std::fmt::Write;

/// Render a program as `.cho` source text.
pub fn pretty(p: &Program) -> String {
    let mut out = String::new();
    for m in &p.macros {
        pretty_macro(m, &mut out);
    }
    for s in &p.body {
        pretty_stmt(s, "", &mut out);
    }
    out
}

fn pretty_macro(m: &MacroDef, out: &mut String) {
    let _ = write!(out, "MACRO {}(", m.name);
    push_slots(&m.params, out);
    out.push_str(") AS\n");
    for s in &m.body {
        pretty_stmt(s, "  ", out);
    }
    out.push_str("ENDMACRO\n");
}

fn push_slots(slots: &[(super::ast::PartyId, Vec<String>)], out: &mut String) {
    for (i, (party, vars)) in slots.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        let _ = write!(out, "{}({})", party, vars.join(", "));
    }
}

fn pretty_stmt(s: &Stmt, indent: &str, out: &mut String) {
    out.push_str(indent);
    match s {
        Stmt::Assign { var, expr } => {
            let _ = write!(out, "{var} = ");
            push_expr(expr, 0, out);
        }
        Stmt::Send { var, to } => {
            let _ = write!(out, "SEND {var} TO {to}");
        }
        Stmt::Output { var } => {
            let _ = write!(out, "OUTPUT {var}");
        }
        Stmt::MacroCall { name, args, renames } => {
            let _ = write!(out, "DO {name}(");
            push_slots(args, out);
            out.push(')');
            if !renames.is_empty() {
                out.push_str(" GET(");
                for (i, (outer, inner)) in renames.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    let _ = write!(out, "{outer}={inner}");
                }
                out.push(')');
            }
        }
    }
    out.push('\n');
}

// Precedence levels: 0 = xor (`+`), 1 = and (`^`), 2 = unary/atom.
fn push_expr(e: &Expr, min_prec: u8, out: &mut String) {
    match e {
        Expr::Const(b) => out.push(if *b { '1' } else { '0' }),
        Expr::Var(v) => out.push_str(v),
        Expr::Flip(p) => {
            let _ = write!(out, "FLIP @{p}");
        }
        Expr::Secret(p) => {
            let _ = write!(out, "SECRET @{p}");
        }
        Expr::Not(a) => {
            out.push('~');
            push_expr(a, 2, out);
        }
        Expr::Xor(a, b) => {
            let parens = min_prec > 0;
            if parens {
                out.push('(');
            }
            push_expr(a, 0, out);
            out.push_str(" + ");
            push_expr(b, 1, out);
            if parens {
                out.push(')');
            }
        }
        Expr::And(a, b) => {
            let parens = min_prec > 1;
            if parens {
                out.push('(');
            }
            push_expr(a, 1, out);
            out.push_str(" ^ ");
            push_expr(b, 2, out);
            if parens {
                out.push(')');
            }
        }
        Expr::Oblivious { table, receiver } => {
            // An OT is a primary expression but reads ambiguously when
            // embedded, so always parenthesize it inside larger expressions.
            let parens = min_prec > 0;
            if parens {
                out.push('(');
            }
            out.push_str("OBLIVIOUSLY ");
            push_table(table, out);
            let _ = write!(out, " FOR {receiver}");
            if parens {
                out.push(')');
            }
        }
    }
}

fn push_table(t: &OtTable, out: &mut String) {
    match t {
        OtTable::Leaf(v) => out.push_str(v),
        OtTable::Select { selector, zero, one } => {
            out.push('[');
            push_table(zero, out);
            out.push_str(", ");
            push_table(one, out);
            let _ = write!(out, "]?{selector}");
        }
    }
}
