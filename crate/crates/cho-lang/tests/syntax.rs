use cho_lang::{
    expand_macros, parse_program, pretty, validate, Expr, ExpandError, ParseError, PartyId,
    Program, Stmt, ValidateError,
};

fn appendix_listing() -> String {
    std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/tests/data/two_bit_less_than.cho"
    ))
    .unwrap()
}

#[test]
fn parses_the_two_bit_less_than_listing() {
    let p = parse_program(&appendix_listing()).unwrap();
    assert_eq!(p.macros.len(), 3);
    // 4 secret reads, 4 sharing calls, 12 local assignments, 5 AND calls,
    // 1 reveal call, 1 output; macro calls count as one statement each.
    assert_eq!(p.body.len(), 27);
    assert_eq!(
        p.macros.iter().map(|m| m.name.as_str()).collect::<Vec<_>>(),
        ["secret_share", "and_gmw", "reveal"]
    );
    assert_eq!(p.parties(), vec![PartyId::new("P1"), PartyId::new("P2")]);
}

#[test]
fn parses_empty_text() {
    let p = parse_program("").unwrap();
    assert_eq!(p.macros.len(), 0);
    assert_eq!(p.body.len(), 0);
}

#[test]
fn parses_minimal_program() {
    let p = parse_program("x = SECRET @P1\nOUTPUT x").unwrap();
    assert_eq!(p.body.len(), 2);
    let checked = validate(&expand_macros(&p).unwrap()).unwrap();
    assert_eq!(checked.location_map(), vec![("x", &PartyId::new("P1"))]);
}

#[test]
fn precedence_not_over_and_over_xor() {
    let p = parse_program("a = FLIP @P1\nb = FLIP @P1\nc = FLIP @P1\nd = ~a ^ b + c").unwrap();
    let Stmt::Assign { expr, .. } = &p.body[3] else { panic!() };
    // ~a ^ b + c == ((~a) ^ b) + c
    assert_eq!(
        *expr,
        Expr::xor(
            Expr::and(Expr::not(Expr::var("a")), Expr::var("b")),
            Expr::var("c")
        )
    );
}

#[test]
fn parens_override_precedence() {
    let p = parse_program("a = FLIP @P1\nb = FLIP @P1\nc = a ^ (a + b)").unwrap();
    let Stmt::Assign { expr, .. } = &p.body[2] else { panic!() };
    assert_eq!(
        *expr,
        Expr::and(Expr::var("a"), Expr::xor(Expr::var("a"), Expr::var("b")))
    );
}

#[test]
fn statements_continue_while_brackets_unbalanced() {
    let text = "a = FLIP @P1\nb = (a\n + a\n)\nSEND b TO P2";
    let p = parse_program(text).unwrap();
    assert_eq!(p.body.len(), 3);
}

#[test]
fn syntax_error_carries_position() {
    let err = parse_program("x = SECRET @P1\ny = ((x)\nOUTPUT x").unwrap_err();
    match err {
        ParseError::Syntax { line, .. } => assert_eq!(line, 3),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn duplicate_macro_rejected() {
    let text = "MACRO m(P1(x)) AS\n  y = x + x\nENDMACRO\nMACRO m(P1(x)) AS\n  y = x\nENDMACRO";
    assert!(matches!(
        parse_program(text),
        Err(ParseError::DuplicateMacro { .. })
    ));
}

#[test]
fn unknown_macro_rejected() {
    assert!(matches!(
        parse_program("DO nope(P1(a)) GET(b=y)"),
        Err(ParseError::UnknownMacro { .. })
    ));
}

#[test]
fn macro_must_be_defined_before_use() {
    let text = "DO m(P1()) GET()\nMACRO m(P1()) AS\n  z = 0\nENDMACRO";
    assert!(matches!(
        parse_program(text),
        Err(ParseError::UnknownMacro { .. })
    ));
}

#[test]
fn expanding_reveal_yields_two_sends_and_one_xor() {
    let text = "MACRO reveal(P1(x1), P2(x2)) AS\n  SEND x1 TO P2\n  SEND x2 TO P1\n  y = x1 + x2\nENDMACRO\n\
                a = SECRET @P1\nb = SECRET @P2\nDO reveal(P1(a), P2(b)) GET(r=y)\nOUTPUT r";
    let p = expand_macros(&parse_program(text).unwrap()).unwrap();
    assert!(p.is_macro_free());
    assert_eq!(p.body.len(), 6);
    assert_eq!(
        p.body[2],
        Stmt::Send { var: "a".into(), to: PartyId::new("P2") }
    );
    assert_eq!(
        p.body[3],
        Stmt::Send { var: "b".into(), to: PartyId::new("P1") }
    );
    assert_eq!(
        p.body[4],
        Stmt::Assign { var: "r".into(), expr: Expr::xor(Expr::var("a"), Expr::var("b")) }
    );
}

#[test]
fn expansion_is_identity_without_calls() {
    let p = parse_program("x = SECRET @P1\ny = ~x\nOUTPUT y").unwrap();
    assert_eq!(expand_macros(&p).unwrap(), p);
}

#[test]
fn two_calls_get_disjoint_fresh_names() {
    let text = "MACRO m(P1(x)) AS\n  t = x + x\n  u = ~t\nENDMACRO\n\
                a = SECRET @P1\nDO m(P1(a)) GET(r1=u)\nDO m(P1(a)) GET(r2=u)\nOUTPUT r1";
    let p = expand_macros(&parse_program(text).unwrap()).unwrap();
    let mut targets = Vec::new();
    for stmt in &p.body {
        if let Stmt::Assign { var, .. } = stmt {
            targets.push(var.clone());
        }
    }
    let unique: std::collections::HashSet<_> = targets.iter().collect();
    assert_eq!(unique.len(), targets.len(), "fresh names collide: {targets:?}");
}

#[test]
fn expansion_is_idempotent() {
    let p = expand_macros(&parse_program(&appendix_listing()).unwrap()).unwrap();
    assert_eq!(expand_macros(&p).unwrap(), p);
}

#[test]
fn arity_mismatch_detected() {
    let text = "MACRO m(P1(x, y)) AS\n  t = x + y\nENDMACRO\na = SECRET @P1\nDO m(P1(a)) GET(r=t)";
    assert!(matches!(
        expand_macros(&parse_program(text).unwrap()),
        Err(ExpandError::ArityMismatch { .. })
    ));
}

#[test]
fn rename_of_undefined_inner_var_detected() {
    let text = "MACRO m(P1(x)) AS\n  t = x + x\nENDMACRO\na = SECRET @P1\nDO m(P1(a)) GET(r=nope)";
    assert!(matches!(
        expand_macros(&parse_program(text).unwrap()),
        Err(ExpandError::RenameOfUndefinedInnerVar { .. })
    ));
}

#[test]
fn appendix_program_validates_with_expected_locations() {
    let checked = validate(&expand_macros(&parse_program(&appendix_listing()).unwrap()).unwrap())
        .unwrap();
    let find = |name: &str| {
        checked
            .location_map()
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, p)| p.name().to_string())
            .unwrap()
    };
    assert_eq!(find("g13_1"), "P1");
    assert_eq!(find("g13_2"), "P2");
    assert_eq!(checked.random_width, vec![2, 7]);
    assert_eq!(checked.message_width, vec![8, 3]);
    // Both parties learn the revealed output bit.
    assert_eq!(checked.output_width, vec![1, 1]);
}

#[test]
fn cross_party_expression_rejected() {
    let p = parse_program("a = SECRET @P1\nb = SECRET @P2\nc = a + b").unwrap();
    let errs = validate(&p).unwrap_err();
    assert!(errs
        .iter()
        .any(|e| matches!(e, ValidateError::CrossPartyExpression { .. })));
}

#[test]
fn output_of_unassigned_var_rejected() {
    let errs = validate(&parse_program("OUTPUT z").unwrap()).unwrap_err();
    assert!(errs
        .iter()
        .any(|e| matches!(e, ValidateError::UseBeforeAssign { .. })));
}

#[test]
fn reassignment_rejected() {
    let errs = validate(&parse_program("a = FLIP @P1\na = FLIP @P1").unwrap()).unwrap_err();
    assert!(errs.iter().any(|e| matches!(e, ValidateError::Reassignment { .. })));
}

#[test]
fn send_to_owner_rejected() {
    let errs = validate(&parse_program("a = FLIP @P1\nSEND a TO P1").unwrap()).unwrap_err();
    assert!(errs.iter().any(|e| matches!(e, ValidateError::SendToOwner { .. })));
}

#[test]
fn sending_grants_scope_to_recipient() {
    let text = "a = SECRET @P1\nb = SECRET @P2\nSEND a TO P2\nc = a + b\nOUTPUT c";
    let checked = validate(&parse_program(text).unwrap()).unwrap();
    let idx = checked.var_names.iter().position(|n| n == "c").unwrap();
    assert_eq!(checked.parties[checked.location[idx] as usize].name(), "P2");
}

#[test]
fn ragged_ot_table_rejected() {
    let text = "s = SECRET @P1\na = SECRET @P2\nb = SECRET @P2\nc = SECRET @P2\n\
                r = OBLIVIOUSLY [a, [b, c]?s]?s FOR P1\nOUTPUT r";
    let errs = validate(&parse_program(text).unwrap()).unwrap_err();
    assert!(errs
        .iter()
        .any(|e| matches!(e, ValidateError::MalformedObliviousTable { .. })));
}

#[test]
fn ot_levels_must_share_a_selector() {
    let text = "s = SECRET @P1\nt = SECRET @P1\na = SECRET @P2\nb = SECRET @P2\nc = SECRET @P2\nd = SECRET @P2\n\
                r = OBLIVIOUSLY [[a, b]?s, [c, d]?t]?s FOR P1\nOUTPUT r";
    let errs = validate(&parse_program(text).unwrap()).unwrap_err();
    assert!(errs
        .iter()
        .any(|e| matches!(e, ValidateError::MalformedObliviousTable { .. })));
}

#[test]
fn ot_selector_must_be_held_by_receiver() {
    let text = "s = SECRET @P2\na = SECRET @P2\nb = SECRET @P2\n\
                r = OBLIVIOUSLY [a, b]?s FOR P1\nOUTPUT r";
    let errs = validate(&parse_program(text).unwrap()).unwrap_err();
    assert!(errs
        .iter()
        .any(|e| matches!(e, ValidateError::CrossPartyExpression { .. })));
}

#[test]
fn pretty_round_trips_the_appendix_ast() {
    let p = parse_program(&appendix_listing()).unwrap();
    assert_eq!(parse_program(&pretty(&p)).unwrap(), p);
    let expanded = expand_macros(&p).unwrap();
    assert_eq!(parse_program(&pretty(&expanded)).unwrap(), expanded);
}

mod roundtrip_prop {
    use super::*;
    use cho_lang::OtTable;
    use proptest::prelude::*;

    fn ident() -> impl Strategy<Value = String> {
        // Avoid keywords; a leading lowercase letter suffices.
        "[a-z][a-z0-9_]{0,6}".prop_filter("keywords are uppercase", |s| !s.is_empty())
    }

    fn party() -> impl Strategy<Value = PartyId> {
        prop_oneof![Just(PartyId::new("P1")), Just(PartyId::new("P2")), Just(PartyId::new("D"))]
    }

    fn table(depth: u32) -> impl Strategy<Value = OtTable> {
        // Entries may be leaves or nested tables, but the top level must
        // select on something: a bare leaf is not a table.
        let entry = ident().prop_map(OtTable::Leaf).prop_recursive(depth, 8, 2, |inner| {
            (ident(), inner.clone(), inner).prop_map(|(selector, zero, one)| OtTable::Select {
                selector,
                zero: Box::new(zero),
                one: Box::new(one),
            })
        });
        (ident(), entry.clone(), entry).prop_map(|(selector, zero, one)| OtTable::Select {
            selector,
            zero: Box::new(zero),
            one: Box::new(one),
        })
    }

    fn expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            any::<bool>().prop_map(Expr::Const),
            ident().prop_map(Expr::Var),
            (table(2), party()).prop_map(|(table, receiver)| Expr::Oblivious { table, receiver }),
        ];
        leaf.prop_recursive(5, 32, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(Expr::not),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::xor(a, b)),
                (inner.clone(), inner).prop_map(|(a, b)| Expr::and(a, b)),
            ]
        })
    }

    fn stmt() -> impl Strategy<Value = Stmt> {
        prop_oneof![
            (ident(), expr()).prop_map(|(var, expr)| Stmt::Assign { var, expr }),
            (ident(), party()).prop_map(|(var, to)| Stmt::Send { var, to }),
            ident().prop_map(|var| Stmt::Output { var }),
            (ident(), party()).prop_map(|(var, p)| Stmt::Assign { var, expr: Expr::Flip(p) }),
            (ident(), party()).prop_map(|(var, p)| Stmt::Assign { var, expr: Expr::Secret(p) }),
        ]
    }

    proptest! {
        #[test]
        fn parse_pretty_parse_is_identity(body in proptest::collection::vec(stmt(), 0..20)) {
            let program = Program { macros: vec![], body };
            let text = pretty(&program);
            let reparsed = parse_program(&text).unwrap();
            prop_assert_eq!(reparsed, program);
        }
    }
}
