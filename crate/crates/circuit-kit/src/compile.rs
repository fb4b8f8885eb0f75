//! Circuit-to-choreography compilers.
//!
//! Both backends hold every wire as additive shares between P1 and P2:
//! x = x_1 XOR x_2. Inputs are shared by the holder (random mask kept,
//! masked bit sent across), XOR gates are share-local, and an INV gate is P1
//! negating its share while P2 copies. The backends differ on AND gates:
//!
//!   * GMW: P2 flips its output share, builds the four maskings of the gate
//!     over its input shares, and P1 picks one by its own two shares via a
//!     depth-2 oblivious transfer.
//!   * Beaver triples: a dealer D flips a, b, computes c = a AND b, and
//!     secret-shares all three; the parties broadcast d = x+a and e = y+b
//!     and combine locally (P1 adds the d AND e term).
//!
//! Output wires are revealed by exchanging shares, to both parties or to the
//! sole recipient of a one-party output group.

use std::collections::HashMap;

use cho_lang::{Expr, OtTable, PartyId, Program, Stmt};

use crate::circuit::{Circuit, CircuitError, GateKind, OutputTo};
use crate::mutate::{emit_coin, MutationError, MutationKind, MutationSpec};

/// Statement sink that mirrors the validator's location rules, so the
/// compiler knows which party holds which variable (a reveal send is only
/// emitted when the recipient cannot already compute the share).
struct Emitter {
    body: Vec<Stmt>,
    scope: HashMap<String, u64>,
}

impl Emitter {
    fn new() -> Self {
        Emitter { body: Vec::new(), scope: HashMap::new() }
    }

    fn party_bit(p: &PartyId) -> u64 {
        match p.name() {
            "P1" => 1,
            "P2" => 2,
            _ => 4,
        }
    }

    fn expr_scope(&self, e: &Expr) -> u64 {
        match e {
            Expr::Const(_) => !0,
            Expr::Var(v) => self.scope[v.as_str()],
            Expr::Not(a) => self.expr_scope(a),
            Expr::Xor(a, b) | Expr::And(a, b) => self.expr_scope(a) & self.expr_scope(b),
            Expr::Flip(p) | Expr::Secret(p) => Self::party_bit(p),
            Expr::Oblivious { receiver, .. } => Self::party_bit(receiver),
        }
    }

    fn push(&mut self, stmt: Stmt) {
        match &stmt {
            Stmt::Assign { var, expr } => {
                let mask = self.expr_scope(expr);
                debug_assert_ne!(mask, 0, "cross-party expression emitted for {var}");
                self.scope.insert(var.clone(), mask);
            }
            Stmt::Send { var, to } => {
                *self.scope.get_mut(var.as_str()).expect("send of known var") |=
                    Self::party_bit(to);
            }
            Stmt::Output { .. } | Stmt::MacroCall { .. } => {}
        }
        self.body.push(stmt);
    }

    fn assign(&mut self, var: impl Into<String>, expr: Expr) {
        self.push(Stmt::Assign { var: var.into(), expr });
    }

    fn send(&mut self, var: impl Into<String>, to: &PartyId) {
        self.push(Stmt::Send { var: var.into(), to: to.clone() });
    }

    /// Send unless the recipient already holds the variable.
    fn send_if_needed(&mut self, var: &str, to: &PartyId) {
        if self.scope[var] & Self::party_bit(to) == 0 {
            self.send(var.to_string(), to);
        }
    }

    fn output(&mut self, var: impl Into<String>) {
        self.push(Stmt::Output { var: var.into() });
    }

    /// Biased coin: single flip at b = 1, AND of b flips otherwise.
    fn coin(&mut self, name: &str, party: &PartyId, bias: u32) {
        let mut tmp = Vec::new();
        emit_coin(&mut tmp, name, party, bias);
        for stmt in tmp {
            self.push(stmt);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameworkChoice {
    Gmw,
    Beaver,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompileOptions {
    pub framework: FrameworkChoice,
    pub mutation: Option<MutationSpec>,
}

impl CompileOptions {
    pub fn gmw() -> Self {
        CompileOptions { framework: FrameworkChoice::Gmw, mutation: None }
    }

    pub fn beaver() -> Self {
        CompileOptions { framework: FrameworkChoice::Beaver, mutation: None }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CompileError {
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Mutation(#[from] MutationError),
}

/// Compile under the OT-based backend. `opts.framework` must be GMW.
pub fn compile_gmw(c: &Circuit, opts: &CompileOptions) -> Result<Program, CompileError> {
    assert!(matches!(opts.framework, FrameworkChoice::Gmw));
    compile(c, opts)
}

/// Compile under the Beaver-triple backend with a dealer party `D`.
pub fn compile_beaver(c: &Circuit, opts: &CompileOptions) -> Result<Program, CompileError> {
    assert!(matches!(opts.framework, FrameworkChoice::Beaver));
    compile(c, opts)
}

/// Compile with a mutation planted; the framework comes from `opts`.
pub fn mutate(c: &Circuit, opts: &CompileOptions, spec: &MutationSpec) -> Result<Program, CompileError> {
    let opts = CompileOptions { framework: opts.framework, mutation: Some(spec.clone()) };
    compile(c, &opts)
}

pub fn compile(c: &Circuit, opts: &CompileOptions) -> Result<Program, CompileError> {
    c.check()?;
    let p1 = PartyId::new("P1");
    let p2 = PartyId::new("P2");
    let dealer = PartyId::new("D");

    if let Some(spec) = &opts.mutation {
        let total = if spec.kind.targets_inputs() {
            c.input_width(0)
        } else {
            c.and_count()
        };
        spec.check_sites(total)?;
    }
    let mutation = opts.mutation.as_ref();

    let mut em = Emitter::new();
    // Share base name per wire: inputs keep their plaintext name's stem.
    let base: Vec<String> = (0..c.wire_count as u32)
        .map(|w| {
            if c.inputs[0].contains(&w) {
                format!("x{w}")
            } else if c.inputs[1].contains(&w) {
                format!("y{w}")
            } else {
                format!("g{w}")
            }
        })
        .collect();
    let share = |w: u32, party: usize| format!("{}_{}", base[w as usize], party + 1);

    // Read and share the inputs. The holder keeps a random mask as its own
    // share and sends the masked bit to the other party.
    let mut input_site = 0usize;
    for (holder, range) in c.inputs.iter().enumerate() {
        let other = 1 - holder;
        let (holder_id, other_id) = if holder == 0 { (&p1, &p2) } else { (&p2, &p1) };
        for w in range.clone() {
            let plain = &base[w as usize];
            em.assign(plain.clone(), Expr::Secret(holder_id.clone()));
            let mask = share(w, holder);
            let masked = share(w, other);
            let mask_bias = if holder == 0
                && mutation.is_some_and(|m| {
                    m.kind == MutationKind::BiasedSharing && m.selects(input_site)
                }) {
                mutation.unwrap().bias
            } else {
                1
            };
            em.coin(&mask, holder_id, mask_bias);
            em.assign(
                masked.clone(),
                Expr::xor(Expr::var(plain.clone()), Expr::var(mask.clone())),
            );
            em.send(masked, other_id);
            if holder == 0 {
                if let Some(spec) = mutation.filter(|m| {
                    m.kind == MutationKind::AccidentalSecret && m.selects(input_site)
                }) {
                    let leak = format!("{plain}_leak");
                    em.coin(&format!("{leak}_r"), &p1, spec.bias);
                    em.assign(
                        leak.clone(),
                        Expr::xor(Expr::var(plain.clone()), Expr::var(format!("{leak}_r"))),
                    );
                    em.send(leak, &p2);
                }
                input_site += 1;
            }
        }
    }

    // Gate evaluation over shares.
    let mut and_site = 0usize;
    for gate in &c.gates {
        let out = gate.out;
        match gate.kind {
            GateKind::Xor => {
                let (a, b) = (gate.in1, gate.in2.unwrap());
                for party in 0..2 {
                    em.assign(
                        share(out, party),
                        Expr::xor(Expr::var(share(a, party)), Expr::var(share(b, party))),
                    );
                }
            }
            GateKind::Inv => {
                let a = gate.in1;
                em.assign(share(out, 0), Expr::not(Expr::var(share(a, 0))));
                em.assign(share(out, 1), Expr::var(share(a, 1)));
            }
            GateKind::And => {
                let (a, b) = (gate.in1, gate.in2.unwrap());
                let and_bias = if mutation
                    .is_some_and(|m| m.kind == MutationKind::BiasedAnd && m.selects(and_site))
                {
                    mutation.unwrap().bias
                } else {
                    1
                };
                match opts.framework {
                    FrameworkChoice::Gmw => {
                        emit_and_gmw(&mut em, &share, out, a, b, &p1, and_bias);
                    }
                    FrameworkChoice::Beaver => {
                        emit_and_beaver(&mut em, &share, out, a, b, &p1, &p2, &dealer, and_bias);
                    }
                }
                if let Some(spec) = mutation
                    .filter(|m| m.kind == MutationKind::AccidentalGate && m.selects(and_site))
                {
                    let leak = format!("g{out}_leak");
                    em.coin(&format!("{leak}_r"), &p1, spec.bias);
                    em.assign(
                        leak.clone(),
                        Expr::xor(Expr::var(share(out, 0)), Expr::var(format!("{leak}_r"))),
                    );
                    em.send(leak, &p2);
                }
                and_site += 1;
            }
        }
    }

    // Reveal outputs: exchange whichever shares the recipients are missing,
    // reconstruct, and write.
    let mut out_idx = 0usize;
    for group in &c.outputs {
        for w in group.wires.clone() {
            let o = format!("o{out_idx}");
            out_idx += 1;
            match group.to {
                OutputTo::Both => {
                    em.send_if_needed(&share(w, 0), &p2);
                    em.send_if_needed(&share(w, 1), &p1);
                }
                OutputTo::Party(0) => em.send_if_needed(&share(w, 1), &p1),
                OutputTo::Party(_) => em.send_if_needed(&share(w, 0), &p2),
            }
            em.assign(
                o.clone(),
                Expr::xor(Expr::var(share(w, 0)), Expr::var(share(w, 1))),
            );
            em.output(o);
        }
    }

    Ok(Program { macros: Vec::new(), body: em.body })
}

/// GMW multiplication: P2 flips its output share and tabulates the four
/// maskings `out2 + ((a2 + i) ^ (b2 + j))`; P1 obliviously selects entry
/// (a1, b1), landing on `out2 + (a ^ b)`.
fn emit_and_gmw(
    em: &mut Emitter,
    share: &impl Fn(u32, usize) -> String,
    out: u32,
    a: u32,
    b: u32,
    p1: &PartyId,
    out2_bias: u32,
) {
    let out2 = share(out, 1);
    let p2 = PartyId::new("P2");
    em.coin(&out2, &p2, out2_bias);
    let entry = |i: u8, j: u8| format!("g{out}_t{i}{j}");
    for i in 0..2u8 {
        for j in 0..2u8 {
            em.assign(
                entry(i, j),
                Expr::xor(
                    Expr::var(out2.clone()),
                    Expr::and(
                        Expr::xor(Expr::var(share(a, 1)), Expr::Const(i == 1)),
                        Expr::xor(Expr::var(share(b, 1)), Expr::Const(j == 1)),
                    ),
                ),
            );
        }
    }
    let leaf = |i: u8, j: u8| OtTable::Leaf(entry(i, j));
    let level = |i: u8| OtTable::Select {
        selector: share(b, 0),
        zero: Box::new(leaf(i, 0)),
        one: Box::new(leaf(i, 1)),
    };
    em.assign(
        share(out, 0),
        Expr::Oblivious {
            table: OtTable::Select {
                selector: share(a, 0),
                zero: Box::new(level(0)),
                one: Box::new(level(1)),
            },
            receiver: p1.clone(),
        },
    );
}

/// Beaver multiplication: the dealer deals shared (a, b, c) with c = a AND b;
/// the parties broadcast d = x + a and e = y + b and combine:
/// z1 = c1 + (d ^ b1) + (e ^ a1) + (d ^ e), z2 = c2 + (d ^ b2) + (e ^ a2).
#[allow(clippy::too_many_arguments)]
fn emit_and_beaver(
    em: &mut Emitter,
    share: &impl Fn(u32, usize) -> String,
    out: u32,
    x: u32,
    y: u32,
    p1: &PartyId,
    p2: &PartyId,
    dealer: &PartyId,
    mask_bias: u32,
) {
    let g = |suffix: &str| format!("g{out}_{suffix}");
    em.assign(g("a"), Expr::Flip(dealer.clone()));
    em.assign(g("b"), Expr::Flip(dealer.clone()));
    em.assign(g("c"), Expr::and(Expr::var(g("a")), Expr::var(g("b"))));
    for v in ["a", "b", "c"] {
        let v1 = g(&format!("{v}1"));
        let v2 = g(&format!("{v}2"));
        em.coin(&v1, dealer, mask_bias);
        em.assign(
            v2.clone(),
            Expr::xor(Expr::var(g(v)), Expr::var(v1.clone())),
        );
        em.send(v1, p1);
        em.send(v2, p2);
    }
    // d_i = x_i + a_i, e_i = y_i + b_i, cross-exchanged so both sides can
    // reconstruct d and e.
    for party in 0..2usize {
        let n = party + 1;
        em.assign(
            g(&format!("d{n}")),
            Expr::xor(Expr::var(share(x, party)), Expr::var(g(&format!("a{n}")))),
        );
        em.assign(
            g(&format!("e{n}")),
            Expr::xor(Expr::var(share(y, party)), Expr::var(g(&format!("b{n}")))),
        );
    }
    em.send(g("d1"), p2);
    em.send(g("e1"), p2);
    em.send(g("d2"), p1);
    em.send(g("e2"), p1);
    em.assign(g("d"), Expr::xor(Expr::var(g("d1")), Expr::var(g("d2"))));
    em.assign(g("e"), Expr::xor(Expr::var(g("e1")), Expr::var(g("e2"))));
    em.assign(
        share(out, 0),
        Expr::xor(
            Expr::xor(
                Expr::xor(
                    Expr::var(g("c1")),
                    Expr::and(Expr::var(g("d")), Expr::var(g("b1"))),
                ),
                Expr::and(Expr::var(g("e")), Expr::var(g("a1"))),
            ),
            Expr::and(Expr::var(g("d")), Expr::var(g("e"))),
        ),
    );
    em.assign(
        share(out, 1),
        Expr::xor(
            Expr::xor(
                Expr::var(g("c2")),
                Expr::and(Expr::var(g("d")), Expr::var(g("b2"))),
            ),
            Expr::and(Expr::var(g("e")), Expr::var(g("a2"))),
        ),
    );
}
