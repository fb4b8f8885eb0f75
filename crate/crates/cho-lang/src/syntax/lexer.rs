//! Hand-rolled lexer. `--` starts a comment running to end of line.

use super::error::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    // Keywords.
    Macro,
    As,
    EndMacro,
    Send,
    To,
    Output,
    Do,
    Get,
    Flip,
    Secret,
    Obliviously,
    For,
    // Punctuation and literals.
    At,
    Eq,
    Plus,
    Caret,
    Tilde,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Question,
    Comma,
    Bit(bool),
    Newline,
}

#[derive(Debug, Clone)]
pub struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

fn keyword(word: &str) -> Option<Tok> {
    Some(match word {
        "MACRO" => Tok::Macro,
        "AS" => Tok::As,
        "ENDMACRO" => Tok::EndMacro,
        "SEND" => Tok::Send,
        "TO" => Tok::To,
        "OUTPUT" => Tok::Output,
        "DO" => Tok::Do,
        "GET" => Tok::Get,
        "FLIP" => Tok::Flip,
        "SECRET" => Tok::Secret,
        "OBLIVIOUSLY" => Tok::Obliviously,
        "FOR" => Tok::For,
        _ => return None,
    })
}

pub fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    for (lineno, raw_line) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = match raw_line.find("--") {
            Some(i) => &raw_line[..i],
            None => raw_line,
        };
        let bytes = content.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i] as char;
            let col = i + 1;
            let mut push = |tok: Tok| out.push(Spanned { tok, line, col });
            match c {
                ' ' | '\t' | '\r' => {
                    i += 1;
                    continue;
                }
                '@' => push(Tok::At),
                '=' => push(Tok::Eq),
                '+' => push(Tok::Plus),
                '^' => push(Tok::Caret),
                '~' => push(Tok::Tilde),
                '(' => push(Tok::LParen),
                ')' => push(Tok::RParen),
                '[' => push(Tok::LBracket),
                ']' => push(Tok::RBracket),
                '?' => push(Tok::Question),
                ',' => push(Tok::Comma),
                '0' => push(Tok::Bit(false)),
                '1' => push(Tok::Bit(true)),
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let start = i;
                    while i < bytes.len() {
                        let c = bytes[i] as char;
                        if c.is_ascii_alphanumeric() || c == '_' {
                            i += 1;
                        } else {
                            break;
                        }
                    }
                    let word = &content[start..i];
                    out.push(Spanned {
                        tok: keyword(word).unwrap_or_else(|| Tok::Ident(word.to_string())),
                        line,
                        col: start + 1,
                    });
                    continue;
                }
                other => {
                    return Err(ParseError::Syntax {
                        line,
                        col,
                        msg: format!("unexpected character `{other}`"),
                    })
                }
            }
            i += 1;
        }
        out.push(Spanned {
            tok: Tok::Newline,
            line,
            col: content.len() + 1,
        });
    }
    Ok(out)
}
