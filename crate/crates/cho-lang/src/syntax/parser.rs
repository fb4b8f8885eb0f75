//! Recursive-descent parser.
//!
//! Programs are newline-separated statements; a statement continues onto the
//! following lines while brackets or parentheses are unbalanced. Precedence
//! is `~` over `^` over `+`, with parentheses overriding.

use super::ast::{Expr, MacroDef, OtTable, PartyId, Program, Stmt};
use super::error::ParseError;
use super::lexer::{lex, Spanned, Tok};

/// Parse source text into a [`Program`]. Statement order is preserved;
/// macro calls must reference macros defined earlier in the file.
pub fn parse_program(text: &str) -> Result<Program, ParseError> {
    let toks = lex(text)?;
    let stmts = logical_statements(toks);
    let mut program = Program::default();
    let mut macro_names: Vec<String> = Vec::new();

    let mut iter = stmts.into_iter().peekable();
    while let Some(stmt_toks) = iter.next() {
        if matches!(stmt_toks[0].tok, Tok::Macro) {
            let (line, def_header) = (stmt_toks[0].line, parse_macro_header(&stmt_toks)?);
            if macro_names.iter().any(|n| *n == def_header.0) {
                return Err(ParseError::DuplicateMacro { line, name: def_header.0 });
            }
            let mut body = Vec::new();
            loop {
                let Some(body_toks) = iter.next() else {
                    return Err(ParseError::Syntax {
                        line,
                        col: 1,
                        msg: format!("macro `{}` is missing ENDMACRO", def_header.0),
                    });
                };
                match body_toks[0].tok {
                    Tok::EndMacro => {
                        expect_len(&body_toks, 1)?;
                        break;
                    }
                    Tok::Macro => {
                        return Err(ParseError::Syntax {
                            line: body_toks[0].line,
                            col: body_toks[0].col,
                            msg: "macro definitions cannot nest".into(),
                        })
                    }
                    _ => body.push(parse_stmt(&body_toks, &macro_names)?),
                }
            }
            macro_names.push(def_header.0.clone());
            program.macros.push(MacroDef {
                name: def_header.0,
                params: def_header.1,
                body,
            });
        } else if matches!(stmt_toks[0].tok, Tok::EndMacro) {
            return Err(ParseError::Syntax {
                line: stmt_toks[0].line,
                col: stmt_toks[0].col,
                msg: "ENDMACRO outside a macro definition".into(),
            });
        } else {
            program.body.push(parse_stmt(&stmt_toks, &macro_names)?);
        }
    }
    Ok(program)
}

/// Group tokens into logical statements, joining lines while `(`/`[` depth
/// is positive.
fn logical_statements(toks: Vec<Spanned>) -> Vec<Vec<Spanned>> {
    let mut out = Vec::new();
    let mut cur: Vec<Spanned> = Vec::new();
    let mut depth = 0usize;
    for t in toks {
        match t.tok {
            Tok::Newline => {
                if depth == 0 && !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
            }
            ref tok => {
                match tok {
                    Tok::LParen | Tok::LBracket => depth += 1,
                    Tok::RParen | Tok::RBracket => depth = depth.saturating_sub(1),
                    _ => {}
                }
                cur.push(t);
            }
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

struct Cursor<'a> {
    toks: &'a [Spanned],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(toks: &'a [Spanned]) -> Self {
        Cursor { toks, pos: 0 }
    }

    fn peek(&self) -> Option<&'a Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn bump(&mut self) -> Option<&'a Spanned> {
        let t = self.toks.get(self.pos);
        self.pos += 1;
        t
    }

    fn here(&self) -> (usize, usize) {
        match self.toks.get(self.pos.min(self.toks.len() - 1)) {
            Some(s) if self.pos < self.toks.len() => (s.line, s.col),
            Some(s) => (s.line, s.col + 1),
            None => (0, 0),
        }
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        let (line, col) = self.here();
        ParseError::Syntax {
            line,
            col,
            msg: msg.into(),
        }
    }

    fn expect(&mut self, want: &Tok, what: &str) -> Result<&'a Spanned, ParseError> {
        match self.toks.get(self.pos) {
            Some(s) if s.tok == *want => {
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.err(format!("expected {what}"))),
        }
    }

    fn expect_ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.toks.get(self.pos) {
            Some(Spanned { tok: Tok::Ident(name), .. }) => {
                self.pos += 1;
                Ok(name.clone())
            }
            _ => Err(self.err(format!("expected {what}"))),
        }
    }

    fn at_end(&self) -> bool {
        self.pos == self.toks.len()
    }

    fn expect_end(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.err("unexpected trailing tokens"))
        }
    }
}

fn expect_len(toks: &[Spanned], len: usize) -> Result<(), ParseError> {
    if toks.len() == len {
        Ok(())
    } else {
        let extra = &toks[len];
        Err(ParseError::Syntax {
            line: extra.line,
            col: extra.col,
            msg: "unexpected trailing tokens".into(),
        })
    }
}

/// `MACRO name(P1(a, b), P2()) AS`
fn parse_macro_header(toks: &[Spanned]) -> Result<(String, Vec<(PartyId, Vec<String>)>), ParseError> {
    let mut c = Cursor::new(toks);
    c.expect(&Tok::Macro, "MACRO")?;
    let name = c.expect_ident("macro name")?;
    let params = parse_party_slots(&mut c)?;
    c.expect(&Tok::As, "AS")?;
    c.expect_end()?;
    Ok((name, params))
}

/// `(P1(a, b), P2())` — used for both macro headers and DO calls.
fn parse_party_slots(c: &mut Cursor) -> Result<Vec<(PartyId, Vec<String>)>, ParseError> {
    c.expect(&Tok::LParen, "`(`")?;
    let mut slots = Vec::new();
    loop {
        let party = PartyId::new(c.expect_ident("party name")?);
        c.expect(&Tok::LParen, "`(`")?;
        let mut vars = Vec::new();
        if !matches!(c.peek(), Some(Tok::RParen)) {
            loop {
                vars.push(c.expect_ident("variable name")?);
                if matches!(c.peek(), Some(Tok::Comma)) {
                    c.bump();
                } else {
                    break;
                }
            }
        }
        c.expect(&Tok::RParen, "`)`")?;
        slots.push((party, vars));
        match c.peek() {
            Some(Tok::Comma) => {
                c.bump();
            }
            _ => break,
        }
    }
    c.expect(&Tok::RParen, "`)`")?;
    Ok(slots)
}

fn parse_stmt(toks: &[Spanned], macro_names: &[String]) -> Result<Stmt, ParseError> {
    let mut c = Cursor::new(toks);
    match c.peek() {
        Some(Tok::Send) => {
            c.bump();
            let var = c.expect_ident("variable name after SEND")?;
            c.expect(&Tok::To, "TO")?;
            let to = PartyId::new(c.expect_ident("party name after TO")?);
            c.expect_end()?;
            Ok(Stmt::Send { var, to })
        }
        Some(Tok::Output) => {
            c.bump();
            let var = c.expect_ident("variable name after OUTPUT")?;
            c.expect_end()?;
            Ok(Stmt::Output { var })
        }
        Some(Tok::Do) => {
            let line = toks[0].line;
            c.bump();
            let name = c.expect_ident("macro name after DO")?;
            if !macro_names.iter().any(|n| *n == name) {
                return Err(ParseError::UnknownMacro { line, name });
            }
            let args = parse_party_slots(&mut c)?;
            let mut renames = Vec::new();
            if matches!(c.peek(), Some(Tok::Get)) {
                c.bump();
                c.expect(&Tok::LParen, "`(` after GET")?;
                if !matches!(c.peek(), Some(Tok::RParen)) {
                    loop {
                        let outer = c.expect_ident("outer name in GET")?;
                        c.expect(&Tok::Eq, "`=` in GET binding")?;
                        let inner = c.expect_ident("inner name in GET")?;
                        renames.push((outer, inner));
                        if matches!(c.peek(), Some(Tok::Comma)) {
                            c.bump();
                        } else {
                            break;
                        }
                    }
                }
                c.expect(&Tok::RParen, "`)` closing GET")?;
            }
            c.expect_end()?;
            Ok(Stmt::MacroCall { name, args, renames })
        }
        Some(Tok::Ident(_)) => {
            let var = c.expect_ident("variable name")?;
            c.expect(&Tok::Eq, "`=`")?;
            let expr = match c.peek() {
                Some(Tok::Flip) => {
                    c.bump();
                    c.expect(&Tok::At, "`@` after FLIP")?;
                    let p = PartyId::new(c.expect_ident("party name")?);
                    Expr::Flip(p)
                }
                Some(Tok::Secret) => {
                    c.bump();
                    c.expect(&Tok::At, "`@` after SECRET")?;
                    let p = PartyId::new(c.expect_ident("party name")?);
                    Expr::Secret(p)
                }
                _ => parse_xor(&mut c)?,
            };
            c.expect_end()?;
            Ok(Stmt::Assign { var, expr })
        }
        _ => Err(c.err("expected a statement")),
    }
}

fn parse_xor(c: &mut Cursor) -> Result<Expr, ParseError> {
    let mut lhs = parse_and(c)?;
    while matches!(c.peek(), Some(Tok::Plus)) {
        c.bump();
        let rhs = parse_and(c)?;
        lhs = Expr::xor(lhs, rhs);
    }
    Ok(lhs)
}

fn parse_and(c: &mut Cursor) -> Result<Expr, ParseError> {
    let mut lhs = parse_unary(c)?;
    while matches!(c.peek(), Some(Tok::Caret)) {
        c.bump();
        let rhs = parse_unary(c)?;
        lhs = Expr::and(lhs, rhs);
    }
    Ok(lhs)
}

fn parse_unary(c: &mut Cursor) -> Result<Expr, ParseError> {
    if matches!(c.peek(), Some(Tok::Tilde)) {
        c.bump();
        Ok(Expr::not(parse_unary(c)?))
    } else {
        parse_primary(c)
    }
}

fn parse_primary(c: &mut Cursor) -> Result<Expr, ParseError> {
    match c.peek() {
        Some(Tok::Bit(b)) => {
            let b = *b;
            c.bump();
            Ok(Expr::Const(b))
        }
        Some(Tok::Ident(_)) => Ok(Expr::Var(c.expect_ident("variable")?)),
        Some(Tok::LParen) => {
            c.bump();
            let e = parse_xor(c)?;
            c.expect(&Tok::RParen, "`)`")?;
            Ok(e)
        }
        Some(Tok::Obliviously) => {
            c.bump();
            let table = parse_ot_table(c)?;
            c.expect(&Tok::For, "FOR")?;
            let receiver = PartyId::new(c.expect_ident("receiving party")?);
            Ok(Expr::Oblivious { table, receiver })
        }
        _ => Err(c.err("expected an expression")),
    }
}

/// `[entry, entry]?selector` where an entry is a variable or a nested table.
fn parse_ot_table(c: &mut Cursor) -> Result<OtTable, ParseError> {
    c.expect(&Tok::LBracket, "`[`")?;
    let zero = parse_ot_entry(c)?;
    c.expect(&Tok::Comma, "`,` between table entries")?;
    let one = parse_ot_entry(c)?;
    c.expect(&Tok::RBracket, "`]`")?;
    c.expect(&Tok::Question, "`?` before selector")?;
    let selector = c.expect_ident("selector variable")?;
    Ok(OtTable::Select {
        selector,
        zero: Box::new(zero),
        one: Box::new(one),
    })
}

fn parse_ot_entry(c: &mut Cursor) -> Result<OtTable, ParseError> {
    match c.peek() {
        Some(Tok::LBracket) => parse_ot_table(c),
        Some(Tok::Ident(_)) => Ok(OtTable::Leaf(c.expect_ident("table leaf")?)),
        _ => Err(c.err("expected a table entry (variable or nested table)")),
    }
}
