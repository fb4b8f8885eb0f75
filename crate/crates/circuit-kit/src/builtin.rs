//! Built-in circuit generators.
//!
//! Bit convention: every multi-bit value is most-significant-bit first, both
//! on input wires and output wires.

use std::ops::Range;

use crate::circuit::{Circuit, Gate, GateKind, OutputGroup, OutputTo};

struct Builder {
    inputs: Vec<Range<u32>>,
    gates: Vec<Gate>,
    next: u32,
}

impl Builder {
    fn new(input_widths: &[usize]) -> Builder {
        let mut inputs = Vec::new();
        let mut at = 0u32;
        for &w in input_widths {
            inputs.push(at..at + w as u32);
            at += w as u32;
        }
        Builder { inputs, gates: Vec::new(), next: at }
    }

    fn gate(&mut self, kind: GateKind, in1: u32, in2: Option<u32>) -> u32 {
        let out = self.next;
        self.next += 1;
        self.gates.push(Gate { kind, in1, in2, out });
        out
    }

    fn xor(&mut self, a: u32, b: u32) -> u32 {
        self.gate(GateKind::Xor, a, Some(b))
    }

    fn and(&mut self, a: u32, b: u32) -> u32 {
        self.gate(GateKind::And, a, Some(b))
    }

    fn inv(&mut self, a: u32) -> u32 {
        self.gate(GateKind::Inv, a, None)
    }

    /// Renumber so the listed output wires occupy the final positions, in
    /// order, and wrap up. Output wires must be distinct gate outputs.
    fn finish(self, groups: Vec<(Vec<u32>, OutputTo)>) -> Circuit {
        let wire_count = self.next as usize;
        let flat: Vec<u32> = groups.iter().flat_map(|(ws, _)| ws.iter().copied()).collect();
        let input_end: u32 = self.inputs.iter().map(|r| r.len() as u32).sum();
        let mut is_output = vec![false; wire_count];
        for &w in &flat {
            assert!(w >= input_end, "outputs must be gate wires");
            assert!(!is_output[w as usize], "wire listed as output twice");
            is_output[w as usize] = true;
        }
        let mut remap = vec![0u32; wire_count];
        let mut at = 0u32;
        for w in 0..wire_count {
            if !is_output[w] {
                remap[w] = at;
                at += 1;
            }
        }
        for &w in &flat {
            remap[w as usize] = at;
            at += 1;
        }
        let gates = self
            .gates
            .iter()
            .map(|g| Gate {
                kind: g.kind,
                in1: remap[g.in1 as usize],
                in2: g.in2.map(|w| remap[w as usize]),
                out: remap[g.out as usize],
            })
            .collect();
        let mut outputs = Vec::new();
        let mut out_at = (wire_count - flat.len()) as u32;
        for (ws, to) in &groups {
            outputs.push(OutputGroup { wires: out_at..out_at + ws.len() as u32, to: *to });
            out_at += ws.len() as u32;
        }
        let circuit = Circuit { wire_count, inputs: self.inputs, outputs, gates };
        debug_assert!(circuit.check().is_ok());
        circuit
    }
}

/// Ripple-carry adder: both parties contribute an n-bit value; the (n+1)-bit
/// sum (carry first) goes to both parties.
pub fn gen_adder(n: usize) -> Circuit {
    assert!(n >= 1);
    let mut b = Builder::new(&[n, n]);
    let x = |i: usize| i as u32; // P1 bit i, MSB first
    let y = |i: usize| (n + i) as u32;
    let mut sum = vec![0u32; n];
    let mut carry = 0u32;
    for i in (0..n).rev() {
        let t = b.xor(x(i), y(i));
        if i == n - 1 {
            sum[i] = t;
            carry = b.and(x(i), y(i));
        } else {
            sum[i] = b.xor(t, carry);
            let u = b.and(x(i), y(i));
            let v = b.and(t, carry);
            carry = b.xor(u, v);
        }
    }
    let mut outs = vec![carry];
    outs.extend(sum);
    b.finish(vec![(outs, OutputTo::Both)])
}

/// Comparator: reveals to both parties whether P2's n-bit value is less than
/// P1's, via the borrow bit of the subtraction.
pub fn gen_less_than(n: usize) -> Circuit {
    assert!(n >= 1);
    let mut b = Builder::new(&[n, n]);
    let x = |i: usize| i as u32; // P1 bit i, MSB first
    let y = |i: usize| (n + i) as u32;
    let mut borrow = 0u32;
    for i in (0..n).rev() {
        let ny = b.inv(y(i));
        let gt = b.and(ny, x(i)); // x_i > y_i at this bit
        if i == n - 1 {
            borrow = gt;
        } else {
            let eq = {
                let d = b.xor(y(i), x(i));
                b.inv(d)
            };
            let keep = b.and(eq, borrow);
            borrow = b.xor(gt, keep);
        }
    }
    b.finish(vec![(vec![borrow], OutputTo::Both)])
}

/// Multiplication-triple generator: each party feeds 3n mask bits
/// (u, v, w) and receives its n-bit shares of (a, b, c) with
/// a = u1^u2, b = v1^v2, and c = a AND b bitwise. The c-shares are
/// w1^w2 and c^(w1^w2), so neither output reveals the triple.
pub fn gen_beaver_triple_gen(n: usize) -> Circuit {
    assert!(n >= 1);
    let mut b = Builder::new(&[3 * n, 3 * n]);
    let p1 = |k: usize| k as u32;
    let p2 = |k: usize| (3 * n + k) as u32;
    // A constant-zero wire lets input bits pass through as gate outputs.
    let zero = b.xor(p1(0), p1(0));
    let mut g1 = Vec::new(); // P1's outputs: a1*, b1*, c1*
    let mut g2 = Vec::new();
    let mut c1s = Vec::new();
    let mut c2s = Vec::new();
    for i in 0..n {
        let a = b.xor(p1(i), p2(i));
        let bb = b.xor(p1(n + i), p2(n + i));
        let c = b.and(a, bb);
        let c1 = b.xor(p1(2 * n + i), p2(2 * n + i));
        let c2 = b.xor(c, c1);
        c1s.push(c1);
        c2s.push(c2);
    }
    for i in 0..n {
        g1.push(b.xor(p1(i), zero));
    }
    for i in 0..n {
        g1.push(b.xor(p1(n + i), zero));
    }
    g1.extend(c1s);
    for i in 0..n {
        g2.push(b.xor(p2(i), zero));
    }
    for i in 0..n {
        g2.push(b.xor(p2(n + i), zero));
    }
    g2.extend(c2s);
    b.finish(vec![(g1, OutputTo::Party(0)), (g2, OutputTo::Party(1))])
}
