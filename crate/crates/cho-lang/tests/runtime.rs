use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cho_lang::{
    collect_views, emit_csv, expand_macros, extract_views, parse_csv, parse_program, run_batch,
    run_batch_values, validate, CheckedProgram, CsvError, PartyId, RuntimeError, TapeSet,
    TapeWidths, ViewTable,
};

fn appendix() -> CheckedProgram {
    let text = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/tests/data/two_bit_less_than.cho"
    ))
    .unwrap();
    validate(&expand_macros(&parse_program(&text).unwrap()).unwrap()).unwrap()
}

fn check(text: &str) -> CheckedProgram {
    validate(&expand_macros(&parse_program(text).unwrap()).unwrap()).unwrap()
}

/// Appendix-listing convention: each party's first secret bit is the high
/// bit of its 2-bit value, and the protocol reveals [P2's value < P1's].
#[test]
fn two_bit_less_than_matches_integer_comparison() {
    let p = appendix();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for a in 0u8..4 {
        for b in 0u8..4 {
            let expected = u8::from(b < a);
            for _ in 0..32 {
                let tapes = TapeSet::random(&TapeWidths::of(&p), 1, &mut rng).with_secret_bits(&[
                    vec![vec![a >> 1 & 1, a & 1]],
                    vec![vec![b >> 1 & 1, b & 1]],
                ]);
                let records = run_batch(&p, &tapes, 1).unwrap();
                assert_eq!(records[0].parties[0].outputs, vec![expected], "a={a} b={b}");
                assert_eq!(records[0].parties[1].outputs, vec![expected], "a={a} b={b}");
            }
        }
    }
}

#[test]
fn flip_is_tape_passthrough() {
    let p = check("a = FLIP @P1\nOUTPUT a");
    let tapes = TapeSet::from_run_bits(&[vec![vec![]], vec![]], &[vec![vec![1]], vec![]]);
    let records = run_batch(&p, &tapes, 1).unwrap();
    assert_eq!(records[0].parties[0].outputs, vec![1]);
    assert_eq!(records[0].parties[0].randoms, vec![1]);
}

#[test]
fn ot_selects_leaf_and_logs_one_message() {
    let text = "s = SECRET @P1\na = SECRET @P2\nb = SECRET @P2\n\
                r = OBLIVIOUSLY [a, b]?s FOR P1\nOUTPUT r";
    let p = check(text);
    for (s, a, b) in [(0, 1, 0), (1, 1, 0), (0, 0, 1), (1, 0, 1)] {
        let tapes = TapeSet::from_run_bits(&[vec![vec![s]], vec![vec![a, b]]], &[vec![], vec![]]);
        let records = run_batch(&p, &tapes, 1).unwrap();
        let expected = if s == 0 { a } else { b };
        assert_eq!(records[0].parties[0].outputs, vec![expected]);
        let msgs = &records[0].parties[0].messages;
        assert_eq!(msgs.len(), 1);
        assert_eq!(msgs[0].bit, expected);
        assert_eq!(msgs[0].from, 1);
        assert!(records[0].parties[1].messages.is_empty());
    }
}

#[test]
fn depth_two_ot_selects_by_index() {
    let text = "s0 = SECRET @P1\ns1 = SECRET @P1\n\
                a = SECRET @P2\nb = SECRET @P2\nc = SECRET @P2\nd = SECRET @P2\n\
                r = OBLIVIOUSLY [[a, b]?s1, [c, d]?s1]?s0 FOR P1\nOUTPUT r";
    let p = check(text);
    for idx in 0..4u8 {
        let (s0, s1) = (idx >> 1 & 1, idx & 1);
        let leaves = [0u8, 1, 1, 0];
        let tapes = TapeSet::from_run_bits(
            &[vec![vec![s0, s1]], vec![leaves.to_vec()]],
            &[vec![], vec![]],
        );
        let records = run_batch(&p, &tapes, 1).unwrap();
        assert_eq!(records[0].parties[0].outputs, vec![leaves[idx as usize]]);
    }
}

#[test]
fn lanes_are_independent() {
    let p = appendix();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let tapes = TapeSet::random(&TapeWidths::of(&p), 64, &mut rng);
    let batch = run_batch(&p, &tapes, 64).unwrap();
    for run in 0..64 {
        let single = run_batch(&p, &tapes.slice_run(run), 1).unwrap();
        assert_eq!(single[0], batch[run], "lane {run} diverges");
    }
}

#[test]
fn identical_tapes_give_identical_views() {
    let p = appendix();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let tapes = TapeSet::random(&TapeWidths::of(&p), 100, &mut rng);
    let corrupt = [PartyId::new("P2")];
    let v1 = collect_views(&p, &tapes, 100, &corrupt).unwrap();
    let v2 = collect_views(&p, &tapes, 100, &corrupt).unwrap();
    assert_eq!(v1, v2);
}

#[test]
fn secret_sharing_identity_holds_on_every_run() {
    let p = appendix();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let tapes = TapeSet::random(&TapeWidths::of(&p), 256, &mut rng);
    let (records, values) = run_batch_values(&p, &tapes, 256).unwrap();
    for run in 0..records.len() {
        let x0 = records[run].parties[0].inputs[0];
        assert_eq!(values["x0_1"][run] ^ values["x0_2"][run], x0, "run {run}");
    }
}

#[test]
fn views_partition_appendix_columns() {
    let p = appendix();
    // Static oracle: count FLIP @P2 and deliveries to P2 in the checked AST.
    let p2 = 1usize;
    assert_eq!(p.random_width[p2], 7);
    let msgs_from_honest = p.message_senders[p2].iter().filter(|&&s| s != p2 as u8).count();
    assert_eq!(msgs_from_honest, 3);

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let tapes = TapeSet::random(&TapeWidths::of(&p), 128, &mut rng);
    let records = run_batch(&p, &tapes, 128).unwrap();
    let v = extract_views(&p, &records, &[PartyId::new("P2")]).unwrap();
    assert_eq!(v.widths(), (2, 3, 10)); // L: 2 inputs; I: 2 inputs + 1 output; R: 7 flips + 3 msgs
    assert_eq!(v.rows, 128);

    // The batch fast path produces the identical table.
    let fast = collect_views(&p, &tapes, 128, &[PartyId::new("P2")]).unwrap();
    assert_eq!(fast, v);
}

#[test]
fn intra_corrupt_messages_are_excluded() {
    let text = "x = SECRET @D\nSEND x TO P2\ny = SECRET @P1\nSEND y TO P2\nOUTPUT x";
    let p = check(text);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let tapes = TapeSet::random(&TapeWidths::of(&p), 16, &mut rng);
    let records = run_batch(&p, &tapes, 16).unwrap();
    // C = {P2, D}: the D->P2 send contributes nothing; only P1->P2 remains.
    let v = extract_views(&p, &records, &[PartyId::new("P2"), PartyId::new("D")]).unwrap();
    assert_eq!(v.l.len(), 1); // P1's secret
    assert_eq!(v.r.len(), 1); // the y message only
}

#[test]
fn corruption_set_must_be_proper_and_nonempty() {
    let p = appendix();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let tapes = TapeSet::random(&TapeWidths::of(&p), 4, &mut rng);
    let records = run_batch(&p, &tapes, 4).unwrap();
    assert!(matches!(
        extract_views(&p, &records, &[]),
        Err(RuntimeError::BadCorruptionSet(_))
    ));
    assert!(matches!(
        extract_views(&p, &records, &[PartyId::new("P1"), PartyId::new("P2")]),
        Err(RuntimeError::BadCorruptionSet(_))
    ));
}

#[test]
fn short_tapes_are_rejected() {
    let p = check("a = FLIP @P1\nb = FLIP @P1\nc = a + b\nOUTPUT c");
    let tapes = TapeSet::from_run_bits(&[vec![vec![]]], &[vec![vec![1]]]);
    match run_batch(&p, &tapes, 1) {
        Err(RuntimeError::TapeExhausted { kind: "random", need: 2, have: 1, .. }) => {}
        other => panic!("expected TapeExhausted, got {other:?}"),
    }
}

#[test]
fn csv_emits_the_documented_format() {
    let v = ViewTable {
        rows: 1,
        l: vec![vec![1]],
        i: vec![vec![0], vec![1]],
        r: vec![vec![1]],
    };
    let mut out = Vec::new();
    emit_csv(&v, &mut out).unwrap();
    assert_eq!(String::from_utf8(out).unwrap(), "L0,I0,I1,R0\n1,0,1,1\n");
}

#[test]
fn csv_round_trips() {
    let p = appendix();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let tapes = TapeSet::random(&TapeWidths::of(&p), 33, &mut rng);
    let v = collect_views(&p, &tapes, 33, &[PartyId::new("P2")]).unwrap();
    let mut buf = Vec::new();
    emit_csv(&v, &mut buf).unwrap();
    let parsed = parse_csv(buf.as_slice()).unwrap();
    assert_eq!(parsed, v);
}

#[test]
fn csv_accepts_permuted_headers() {
    let parsed = parse_csv("L0,R0,I0\n1,0,1\n0,1,0\n".as_bytes()).unwrap();
    assert_eq!(parsed.rows, 2);
    assert_eq!(parsed.l, vec![vec![1, 0]]);
    assert_eq!(parsed.i, vec![vec![1, 0]]);
    assert_eq!(parsed.r, vec![vec![0, 1]]);
}

#[test]
fn csv_rejects_bad_input() {
    assert!(matches!(
        parse_csv("L0,Q0\n1,1\n".as_bytes()),
        Err(CsvError::HeaderMismatch(_))
    ));
    assert!(matches!(
        parse_csv("L0,L2\n1,1\n".as_bytes()),
        Err(CsvError::HeaderMismatch(_))
    ));
    assert!(matches!(
        parse_csv("L0,I0\n1,2\n".as_bytes()),
        Err(CsvError::NonBitValue { line: 2, .. })
    ));
    assert!(matches!(
        parse_csv("L0,I0\n1,1\n0\n".as_bytes()),
        Err(CsvError::RaggedRow { line: 3, .. })
    ));
}
