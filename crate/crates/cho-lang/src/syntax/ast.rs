//! Abstract syntax for choreography programs.

use std::fmt;

/// Name of a participating party, e.g. `P1`, `P2`, `D`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartyId(String);

impl PartyId {
    pub fn new(name: impl Into<String>) -> Self {
        let name = name.into();
        debug_assert!(!name.is_empty(), "party names must be nonempty");
        PartyId(name)
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for PartyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for PartyId {
    fn from(s: &str) -> Self {
        PartyId::new(s)
    }
}

/// Selection tree of an oblivious-transfer expression.
///
/// A table of depth `d` implements 1-of-2^d OT: every internal level selects
/// on one receiver-owned variable and the leaves are sender-owned variables.
/// Selector bit 0 picks the first branch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OtTable {
    Leaf(String),
    Select {
        selector: String,
        zero: Box<OtTable>,
        one: Box<OtTable>,
    },
}

impl OtTable {
    /// Depth of the tree; leaves have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            OtTable::Leaf(_) => 0,
            OtTable::Select { zero, one, .. } => 1 + zero.depth().max(one.depth()),
        }
    }

    /// Leaf variable names in selection-index order.
    pub fn leaves(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            OtTable::Leaf(v) => out.push(v),
            OtTable::Select { zero, one, .. } => {
                zero.collect_leaves(out);
                one.collect_leaves(out);
            }
        }
    }
}

/// A single-bit expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Const(bool),
    Var(String),
    Not(Box<Expr>),
    /// `a + b` in surface syntax.
    Xor(Box<Expr>, Box<Expr>),
    /// `a ^ b` in surface syntax.
    And(Box<Expr>, Box<Expr>),
    /// `FLIP @P`: consume one bit of P's random tape. Grammar restricts this
    /// to the entire right-hand side of an assignment.
    Flip(PartyId),
    /// `SECRET @P`: consume one bit of P's secret-input tape. Whole-RHS only.
    Secret(PartyId),
    /// `OBLIVIOUSLY table FOR P`: the receiver P learns exactly the selected
    /// leaf; the selection path and unselected leaves appear in no view.
    Oblivious { table: OtTable, receiver: PartyId },
}

impl Expr {
    pub fn xor(a: Expr, b: Expr) -> Expr {
        Expr::Xor(Box::new(a), Box::new(b))
    }

    pub fn and(a: Expr, b: Expr) -> Expr {
        Expr::And(Box::new(a), Box::new(b))
    }

    pub fn not(a: Expr) -> Expr {
        Expr::Not(Box::new(a))
    }

    pub fn var(name: impl Into<String>) -> Expr {
        Expr::Var(name.into())
    }

    /// Visit every variable referenced by this expression, in evaluation
    /// order (OT selectors before leaves).
    pub fn visit_vars<'a>(&'a self, f: &mut impl FnMut(&'a str)) {
        match self {
            Expr::Const(_) | Expr::Flip(_) | Expr::Secret(_) => {}
            Expr::Var(v) => f(v),
            Expr::Not(e) => e.visit_vars(f),
            Expr::Xor(a, b) | Expr::And(a, b) => {
                a.visit_vars(f);
                b.visit_vars(f);
            }
            Expr::Oblivious { table, .. } => visit_table_vars(table, f),
        }
    }
}

fn visit_table_vars<'a>(t: &'a OtTable, f: &mut impl FnMut(&'a str)) {
    match t {
        OtTable::Leaf(v) => f(v),
        OtTable::Select { selector, zero, one } => {
            f(selector);
            visit_table_vars(zero, f);
            visit_table_vars(one, f);
        }
    }
}

/// One statement of a program or macro body.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Stmt {
    Assign { var: String, expr: Expr },
    Send { var: String, to: PartyId },
    Output { var: String },
    /// `DO name(P1(a, b), P2()) GET(outer=inner, ...)`.
    MacroCall {
        name: String,
        /// Per-slot actual party and argument variables, positional.
        args: Vec<(PartyId, Vec<String>)>,
        /// `outer = inner` bindings exposing macro-body variables.
        renames: Vec<(String, String)>,
    },
}

/// A macro definition. Bodies may call previously defined macros but cannot
/// define new ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MacroDef {
    pub name: String,
    /// Formal party slots, each with its formal parameter variables.
    pub params: Vec<(PartyId, Vec<String>)>,
    pub body: Vec<Stmt>,
}

/// A parsed program: macro definitions plus a statement body.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Program {
    pub macros: Vec<MacroDef>,
    pub body: Vec<Stmt>,
}

impl Program {
    pub fn is_macro_free(&self) -> bool {
        self.macros.is_empty()
            && self
                .body
                .iter()
                .all(|s| !matches!(s, Stmt::MacroCall { .. }))
    }

    /// The ordered party set: first textual use wins. Macro formals do not
    /// declare parties; only body statements (including macro-call slots) do.
    pub fn parties(&self) -> Vec<PartyId> {
        let mut out: Vec<PartyId> = Vec::new();
        let mut push = |p: &PartyId| {
            if !out.contains(p) {
                out.push(p.clone());
            }
        };
        for stmt in &self.body {
            match stmt {
                Stmt::Assign { expr, .. } => collect_expr_parties(expr, &mut push),
                Stmt::Send { to, .. } => push(to),
                Stmt::Output { .. } => {}
                Stmt::MacroCall { args, .. } => {
                    for (p, _) in args {
                        push(p);
                    }
                }
            }
        }
        out
    }
}

fn collect_expr_parties<'a>(e: &'a Expr, push: &mut impl FnMut(&'a PartyId)) {
    match e {
        Expr::Flip(p) | Expr::Secret(p) => push(p),
        Expr::Oblivious { receiver, .. } => push(receiver),
        Expr::Not(a) => collect_expr_parties(a, push),
        Expr::Xor(a, b) | Expr::And(a, b) => {
            collect_expr_parties(a, push);
            collect_expr_parties(b, push);
        }
        Expr::Const(_) | Expr::Var(_) => {}
    }
}
