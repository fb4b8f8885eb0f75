//! Reader for Bristol-fashion circuit files.
//!
//! Accepted subset: header `#gates #wires`, then the input widths
//! (`#groups w...`, exactly two groups, one per party), then the output
//! widths (`#groups w...`, one shared group or one group per party), then
//! one gate per line as `#in #out in... out KIND` with KIND in
//! {XOR, AND, INV}. Output wires are the last wires of the circuit, in group
//! order. Blank lines are ignored.

use crate::circuit::{Circuit, CircuitError, Gate, GateKind, OutputGroup, OutputTo};

pub fn parse_bristol(text: &str) -> Result<Circuit, CircuitError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let mut next_nums = |what: &str| -> Result<(usize, Vec<usize>), CircuitError> {
        let (lineno, line) = lines
            .next()
            .ok_or_else(|| CircuitError::BadHeader { line: 0, msg: format!("missing {what}") })?;
        let nums = line
            .split_whitespace()
            .map(|t| t.parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| CircuitError::BadHeader {
                line: lineno,
                msg: format!("{what} must be whitespace-separated integers"),
            })?;
        Ok((lineno, nums))
    };

    let (lineno, header) = next_nums("gate/wire counts")?;
    let [gate_count, wire_count] = header[..] else {
        return Err(CircuitError::BadHeader {
            line: lineno,
            msg: "expected `#gates #wires`".into(),
        });
    };

    let (lineno, inputs_line) = next_nums("input widths")?;
    let parse_groups = |lineno: usize, nums: &[usize], what: &str| -> Result<Vec<usize>, CircuitError> {
        match nums.split_first() {
            Some((&count, widths)) if widths.len() == count => Ok(widths.to_vec()),
            _ => Err(CircuitError::BadHeader {
                line: lineno,
                msg: format!("{what} must be `#groups w...`"),
            }),
        }
    };
    let input_widths = parse_groups(lineno, &inputs_line, "input widths")?;
    if input_widths.len() != 2 {
        return Err(CircuitError::BadHeader {
            line: lineno,
            msg: "exactly two input groups (one per party) are supported".into(),
        });
    }

    let (lineno, outputs_line) = next_nums("output widths")?;
    let output_widths = parse_groups(lineno, &outputs_line, "output widths")?;
    if output_widths.is_empty() || output_widths.len() > 2 {
        return Err(CircuitError::BadHeader {
            line: lineno,
            msg: "one shared output group or one group per party is supported".into(),
        });
    }

    let mut inputs = Vec::new();
    let mut at = 0u32;
    for &w in &input_widths {
        inputs.push(at..at + w as u32);
        at += w as u32;
    }
    let total_out: usize = output_widths.iter().sum();
    let mut outputs = Vec::new();
    let mut out_at = (wire_count - total_out) as u32;
    for (i, &w) in output_widths.iter().enumerate() {
        let to = if output_widths.len() == 1 {
            OutputTo::Both
        } else {
            OutputTo::Party(i)
        };
        outputs.push(OutputGroup { wires: out_at..out_at + w as u32, to });
        out_at += w as u32;
    }

    let mut gates = Vec::with_capacity(gate_count);
    for (lineno, line) in lines {
        let mut toks = line.split_whitespace();
        let nums: Vec<&str> = toks.by_ref().collect();
        let Some((&kind, rest)) = nums.split_last() else {
            return Err(CircuitError::BadHeader { line: lineno, msg: "empty gate line".into() });
        };
        let nums = rest
            .iter()
            .map(|t| t.parse::<u32>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| CircuitError::BadHeader {
                line: lineno,
                msg: "gate wires must be integers".into(),
            })?;
        let gate = match kind {
            "XOR" | "AND" => {
                let [2, 1, in1, in2, out] = nums[..] else {
                    return Err(CircuitError::BadHeader {
                        line: lineno,
                        msg: format!("{kind} takes `2 1 in1 in2 out`"),
                    });
                };
                Gate {
                    kind: if kind == "XOR" { GateKind::Xor } else { GateKind::And },
                    in1,
                    in2: Some(in2),
                    out,
                }
            }
            "INV" | "NOT" => {
                let [1, 1, in1, out] = nums[..] else {
                    return Err(CircuitError::BadHeader {
                        line: lineno,
                        msg: "INV takes `1 1 in out`".into(),
                    });
                };
                Gate { kind: GateKind::Inv, in1, in2: None, out }
            }
            other => {
                return Err(CircuitError::UnknownGateKind {
                    line: lineno,
                    kind: other.to_string(),
                })
            }
        };
        gates.push(gate);
    }
    if gates.len() != gate_count {
        return Err(CircuitError::BadHeader {
            line: 0,
            msg: format!("header promises {gate_count} gates, file has {}", gates.len()),
        });
    }

    let circuit = Circuit { wire_count, inputs, outputs, gates };
    circuit.check()?;
    Ok(circuit)
}
