//! Tokenizer for the expression and realization-file grammars.

use crate::error::{Error, Result, SourceSpan};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Int(String),
    Ident(String),
    /// A run of prime marks immediately following an identifier.
    Primes(u32),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Int(s) => format!("integer `{s}`"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Primes(n) => format!("{n} prime mark(s)"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

pub fn tokenize(text: &str) -> Result<Vec<Token>> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    let mut line = 1usize;
    let mut col = 1usize;
    let mut prev_was_ident = false;
    while i < bytes.len() {
        let start = i;
        let (sline, scol) = (line, col);
        let c = bytes[i] as char;
        let advance = |i: &mut usize, line: &mut usize, col: &mut usize| {
            if bytes[*i] == b'\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
            *i += 1;
        };
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut col);
            prev_was_ident = false;
            continue;
        }
        if c == '#' {
            while i < bytes.len() && bytes[i] != b'\n' {
                advance(&mut i, &mut line, &mut col);
            }
            prev_was_ident = false;
            continue;
        }
        let span_to = |end: usize| SourceSpan::new(start, end, sline, scol);
        if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                advance(&mut i, &mut line, &mut col);
            }
            toks.push(Token { tok: Tok::Int(text[start..i].into()), span: span_to(i) });
            prev_was_ident = false;
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            while i < bytes.len() && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_') {
                advance(&mut i, &mut line, &mut col);
            }
            toks.push(Token { tok: Tok::Ident(text[start..i].into()), span: span_to(i) });
            prev_was_ident = true;
            continue;
        }
        if c == '\'' {
            if !prev_was_ident {
                return Err(Error::parse(span_to(i + 1), "prime mark must follow an identifier", &["identifier"]));
            }
            let mut n = 0u32;
            while i < bytes.len() && bytes[i] == b'\'' {
                n += 1;
                advance(&mut i, &mut line, &mut col);
            }
            toks.push(Token { tok: Tok::Primes(n), span: span_to(i) });
            prev_was_ident = false;
            continue;
        }
        let simple = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            ',' => Tok::Comma,
            other => {
                return Err(Error::parse(
                    span_to(i + 1),
                    format!("unexpected character `{other}`"),
                    &["expression token"],
                ))
            }
        };
        advance(&mut i, &mut line, &mut col);
        toks.push(Token { tok: simple, span: span_to(i) });
        prev_was_ident = false;
    }
    let end = SourceSpan::new(bytes.len(), bytes.len(), line, col);
    toks.push(Token { tok: Tok::Eof, span: end });
    Ok(toks)
}
