mod support;

use circuit_kit::{
    gen_adder, gen_beaver_triple_gen, gen_less_than, parse_bristol, CircuitError, GateKind,
};

fn fixture() -> String {
    std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/tests/data/two_bit_less_than.bristol"
    ))
    .unwrap()
}

#[test]
fn parses_a_single_xor_gate() {
    let c = parse_bristol("1 3\n2 1 1\n1 1\n2 1 0 1 2 XOR").unwrap();
    assert_eq!(c.gates.len(), 1);
    assert_eq!(c.wire_count, 3);
    for (a, b) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
        assert_eq!(c.eval(&[&[a], &[b]]), vec![vec![a ^ b]]);
    }
}

#[test]
fn rejects_unknown_gate_kind() {
    assert!(matches!(
        parse_bristol("1 3\n2 1 1\n1 1\n2 1 0 1 2 MAND"),
        Err(CircuitError::UnknownGateKind { .. })
    ));
}

#[test]
fn rejects_reading_unwritten_wires() {
    assert!(matches!(
        parse_bristol("1 4\n2 1 1\n1 1\n2 1 0 2 3 XOR"),
        Err(CircuitError::TopologyViolation(_))
    ));
}

#[test]
fn bristol_two_bit_less_than_matches_integer_comparison() {
    let c = parse_bristol(&fixture()).unwrap();
    assert_eq!(c.gates.len(), 11);
    assert_eq!(c.gates.iter().filter(|g| g.kind == GateKind::And).count(), 5);
    for a in 0u8..4 {
        for b in 0u8..4 {
            let out = c.eval(&[&[a >> 1 & 1, a & 1], &[b >> 1 & 1, b & 1]]);
            assert_eq!(out, vec![vec![u8::from(b < a)]], "a={a} b={b}");
        }
    }
}

#[test]
fn one_bit_adder_truth_table() {
    let c = gen_adder(1);
    // 1 + 1 = 10 (carry, sum).
    assert_eq!(c.eval(&[&[1], &[1]]), vec![vec![1, 0]]);
    assert_eq!(c.eval(&[&[1], &[0]]), vec![vec![0, 1]]);
    assert_eq!(c.eval(&[&[0], &[0]]), vec![vec![0, 0]]);
}

#[test]
fn adders_match_integer_addition() {
    for n in 1..=4usize {
        let c = gen_adder(n);
        c.check().unwrap();
        for a in 0u32..1 << n {
            for b in 0u32..1 << n {
                let bits = |v: u32, w: usize| -> Vec<u8> {
                    (0..w).rev().map(|k| (v >> k & 1) as u8).collect()
                };
                let out = c.eval(&[&bits(a, n), &bits(b, n)]);
                let sum: u32 = out[0]
                    .iter()
                    .fold(0, |acc, &bit| acc << 1 | u32::from(bit));
                assert_eq!(sum, a + b, "n={n} a={a} b={b}");
            }
        }
    }
}

#[test]
fn less_than_matches_integer_comparison() {
    for n in 1..=4usize {
        let c = gen_less_than(n);
        c.check().unwrap();
        for a in 0u32..1 << n {
            for b in 0u32..1 << n {
                let bits = |v: u32| -> Vec<u8> {
                    (0..n).rev().map(|k| (v >> k & 1) as u8).collect()
                };
                // Output is [P2's value < P1's value].
                let out = c.eval(&[&bits(a), &bits(b)]);
                assert_eq!(out, vec![vec![u8::from(b < a)]], "n={n} a={a} b={b}");
            }
        }
    }
}

#[test]
fn generated_less_than_agrees_with_the_bristol_fixture() {
    let generated = gen_less_than(2);
    let parsed = parse_bristol(&fixture()).unwrap();
    for assignment in 0u8..16 {
        let bit = |k: u8| assignment >> k & 1;
        let in1 = [bit(3), bit(2)];
        let in2 = [bit(1), bit(0)];
        assert_eq!(generated.eval(&[&in1, &in2]), parsed.eval(&[&in1, &in2]));
    }
}

#[test]
fn triple_generator_reconstructs_a_and_b() {
    for n in 1..=2usize {
        let c = gen_beaver_triple_gen(n);
        c.check().unwrap();
        // Exhaustive over both parties' 3n mask bits.
        for assignment in 0u32..1 << (6 * n) {
            let bit = |k: usize| (assignment >> k & 1) as u8;
            let in1: Vec<u8> = (0..3 * n).map(bit).collect();
            let in2: Vec<u8> = (3 * n..6 * n).map(bit).collect();
            let out = c.eval(&[&in1, &in2]);
            let (s1, s2) = (&out[0], &out[1]);
            for i in 0..n {
                let a = s1[i] ^ s2[i];
                let b = s1[n + i] ^ s2[n + i];
                let cc = s1[2 * n + i] ^ s2[2 * n + i];
                assert_eq!(cc, a & b, "bit {i} of {assignment:#x}");
            }
        }
    }
}

#[test]
fn word_eval_matches_scalar_eval() {
    let c = gen_less_than(3);
    let words: Vec<Vec<u64>> = (0..2)
        .map(|p| (0..3).map(|k| 0x9e3779b97f4a7c15u64.rotate_left(p * 3 + k)).collect())
        .collect();
    let fast = c.eval_words(&[&words[0], &words[1]]);
    for lane in 0..64 {
        let bits = |p: usize| -> Vec<u8> {
            (0..3).map(|k| (words[p][k] >> lane & 1) as u8).collect()
        };
        let slow = c.eval(&[&bits(0), &bits(1)]);
        for (g, group) in slow.iter().enumerate() {
            for (k, &bit) in group.iter().enumerate() {
                assert_eq!((fast[g][k] >> lane & 1) as u8, bit, "lane {lane}");
            }
        }
    }
}
