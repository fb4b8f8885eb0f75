//! Shared helpers for running compiled circuits against plaintext oracles.

use cho_lang::{
    expand_macros, parse_program, pretty, run_batch, validate, CheckedProgram, Program, TapeSet,
    TapeWidths,
};
use circuit_kit::{Circuit, OutputTo};
use rand::Rng;

/// Validate a compiled program (also exercising the text round trip).
pub fn check_compiled(p: &Program) -> CheckedProgram {
    let reparsed = parse_program(&pretty(p)).expect("compiled programs parse");
    assert_eq!(&reparsed, p, "pretty/parse round trip");
    validate(&expand_macros(p).expect("compiled programs are macro-free")).expect("compiled programs validate")
}

/// Expected per-party output bits from the plaintext circuit.
pub fn plaintext_outputs(c: &Circuit, in1: &[u8], in2: &[u8]) -> [Vec<u8>; 2] {
    let groups = c.eval(&[in1, in2]);
    let mut out = [Vec::new(), Vec::new()];
    for (group, bits) in c.outputs.iter().zip(groups) {
        match group.to {
            OutputTo::Both => {
                out[0].extend_from_slice(&bits);
                out[1].extend_from_slice(&bits);
            }
            OutputTo::Party(p) => out[p].extend_from_slice(&bits),
        }
    }
    out
}

/// Run one execution of a compiled two-party protocol on fixed inputs and
/// fresh random tapes; returns (P1 outputs, P2 outputs).
pub fn run_once(
    checked: &CheckedProgram,
    in1: &[u8],
    in2: &[u8],
    rng: &mut impl Rng,
) -> [Vec<u8>; 2] {
    let mut secrets: Vec<Vec<Vec<u8>>> = vec![Vec::new(); checked.parties.len()];
    secrets[0] = vec![in1.to_vec()];
    secrets[1] = vec![in2.to_vec()];
    for party in secrets.iter_mut().skip(2) {
        *party = vec![Vec::new()];
    }
    let tapes = TapeSet::random(&TapeWidths::of(checked), 1, rng).with_secret_bits(&secrets);
    let records = run_batch(checked, &tapes, 1).expect("run");
    [
        records[0].parties[0].outputs.clone(),
        records[0].parties[1].outputs.clone(),
    ]
}

/// Exhaustively compare a compiled protocol against the plaintext circuit on
/// every input assignment, each under `tapes_per_input` fresh random tapes.
pub fn assert_io_equivalent(
    c: &Circuit,
    checked: &CheckedProgram,
    tapes_per_input: usize,
    rng: &mut impl Rng,
) {
    let (w1, w2) = (c.input_width(0), c.input_width(1));
    assert!(w1 + w2 <= 20, "input space too large for exhaustive sweep");
    for assignment in 0u32..1 << (w1 + w2) {
        let bit = |k: usize| (assignment >> k & 1) as u8;
        let in1: Vec<u8> = (0..w1).map(bit).collect();
        let in2: Vec<u8> = (w1..w1 + w2).map(bit).collect();
        let expected = plaintext_outputs(c, &in1, &in2);
        for _ in 0..tapes_per_input {
            let got = run_once(checked, &in1, &in2, rng);
            assert_eq!(got, expected, "inputs {in1:?} {in2:?}");
        }
    }
}
