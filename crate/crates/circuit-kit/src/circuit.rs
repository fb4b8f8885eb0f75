//! Boolean circuits over XOR/AND/INV gates in Bristol-fashion layout.

use std::ops::Range;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateKind {
    Xor,
    And,
    Inv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Gate {
    pub kind: GateKind,
    pub in1: u32,
    /// Absent for INV.
    pub in2: Option<u32>,
    pub out: u32,
}

/// Who receives an output group when the circuit runs as a protocol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputTo {
    Both,
    Party(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputGroup {
    pub wires: Range<u32>,
    pub to: OutputTo,
}

/// A two-party circuit: input wires come first (one contiguous range per
/// party), gates are topologically ordered, and each wire is written exactly
/// once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    pub wire_count: usize,
    pub inputs: Vec<Range<u32>>,
    pub outputs: Vec<OutputGroup>,
    pub gates: Vec<Gate>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error("line {line}: unknown gate kind `{kind}` (only XOR, AND, INV)")]
    UnknownGateKind { line: usize, kind: String },
    #[error("{0}")]
    TopologyViolation(String),
    #[error("line {line}: malformed header: {msg}")]
    BadHeader { line: usize, msg: String },
}

impl Circuit {
    pub fn and_count(&self) -> usize {
        self.gates.iter().filter(|g| g.kind == GateKind::And).count()
    }

    pub fn input_width(&self, party: usize) -> usize {
        self.inputs[party].len()
    }

    /// Check single assignment, gate-order topology, and range sanity.
    pub fn check(&self) -> Result<(), CircuitError> {
        let mut written = vec![false; self.wire_count];
        for range in &self.inputs {
            for w in range.clone() {
                let w = w as usize;
                if w >= self.wire_count || written[w] {
                    return Err(CircuitError::TopologyViolation(format!(
                        "input wire {w} out of range or duplicated"
                    )));
                }
                written[w] = true;
            }
        }
        for (i, gate) in self.gates.iter().enumerate() {
            let read = |w: u32| {
                let w = w as usize;
                if w >= self.wire_count || !written[w] {
                    Err(CircuitError::TopologyViolation(format!(
                        "gate {i} reads wire {w} before it is written"
                    )))
                } else {
                    Ok(())
                }
            };
            read(gate.in1)?;
            match (gate.kind, gate.in2) {
                (GateKind::Inv, None) => {}
                (GateKind::Inv, Some(_)) | (_, None) => {
                    return Err(CircuitError::TopologyViolation(format!(
                        "gate {i} has the wrong input arity"
                    )))
                }
                (_, Some(in2)) => read(in2)?,
            }
            let out = gate.out as usize;
            if out >= self.wire_count || written[out] {
                return Err(CircuitError::TopologyViolation(format!(
                    "gate {i} writes wire {out} out of range or twice"
                )));
            }
            written[out] = true;
        }
        for group in &self.outputs {
            for w in group.wires.clone() {
                if w as usize >= self.wire_count || !written[w as usize] {
                    return Err(CircuitError::TopologyViolation(format!(
                        "output wire {w} is never written"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Plaintext evaluation; returns the bits of each output group.
    pub fn eval(&self, inputs: &[&[u8]]) -> Vec<Vec<u8>> {
        assert_eq!(inputs.len(), self.inputs.len());
        let mut wires = vec![0u8; self.wire_count];
        for (range, bits) in self.inputs.iter().zip(inputs) {
            assert_eq!(range.len(), bits.len(), "input width mismatch");
            for (w, &b) in range.clone().zip(bits.iter()) {
                wires[w as usize] = b & 1;
            }
        }
        for gate in &self.gates {
            let a = wires[gate.in1 as usize];
            let v = match gate.kind {
                GateKind::Xor => a ^ wires[gate.in2.unwrap() as usize],
                GateKind::And => a & wires[gate.in2.unwrap() as usize],
                GateKind::Inv => a ^ 1,
            };
            wires[gate.out as usize] = v;
        }
        self.outputs
            .iter()
            .map(|g| g.wires.clone().map(|w| wires[w as usize]).collect())
            .collect()
    }

    /// Lane-parallel plaintext evaluation: every input bit is a 64-lane word.
    pub fn eval_words(&self, inputs: &[&[u64]]) -> Vec<Vec<u64>> {
        assert_eq!(inputs.len(), self.inputs.len());
        let mut wires = vec![0u64; self.wire_count];
        for (range, words) in self.inputs.iter().zip(inputs) {
            assert_eq!(range.len(), words.len(), "input width mismatch");
            for (w, &v) in range.clone().zip(words.iter()) {
                wires[w as usize] = v;
            }
        }
        for gate in &self.gates {
            let a = wires[gate.in1 as usize];
            let v = match gate.kind {
                GateKind::Xor => a ^ wires[gate.in2.unwrap() as usize],
                GateKind::And => a & wires[gate.in2.unwrap() as usize],
                GateKind::Inv => !a,
            };
            wires[gate.out as usize] = v;
        }
        self.outputs
            .iter()
            .map(|g| g.wires.clone().map(|w| wires[w as usize]).collect())
            .collect()
    }
}
