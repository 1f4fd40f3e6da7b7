//! Recursive-descent parser for the ASCII formula grammar.
//!
//! ```text
//! formula  := or ( "->" formula )?
//! or       := and ( "\/" and )*
//! and      := unary ( "/\" unary )*
//! unary    := "~" unary | "_|_" | "(" formula ")" | ATOM | term ":" unary
//! term     := CONST | VAR | "[" term ( "." term )+ "]"
//! ```
//!
//! An identifier is read as a term exactly when it is followed by `:`.
//! The Unicode connectives `¬ ∧ ∨ → ⊥ ·` are accepted as aliases.

use num_bigint::BigUint;
use thiserror::Error;

use super::{is_constant_name, Formula, Term};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("syntax error at offset {position}: {kind}")]
pub struct ParseError {
    /// Byte offset into the input.
    pub position: usize,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unknown token starting with {0:?}")]
    UnknownToken(char),
    #[error("expected {expected}, found {found}")]
    Unexpected { expected: &'static str, found: String },
    #[error("expected {expected}, found end of input")]
    UnexpectedEnd { expected: &'static str },
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Falsum,
    Not,
    And,
    Or,
    Implies,
    Colon,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Dot,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(name) => format!("identifier `{name}`"),
            Tok::Falsum => "`_|_`".into(),
            Tok::Not => "`~`".into(),
            Tok::And => "`/\\`".into(),
            Tok::Or => "`\\/`".into(),
            Tok::Implies => "`->`".into(),
            Tok::Colon => "`:`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Dot => "`.`".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let mut rest = text.char_indices().peekable();
    while let Some(&(pos, c)) = rest.peek() {
        if c.is_whitespace() {
            rest.next();
            continue;
        }
        let fixed: &[(&str, Tok)] = &[
            ("_|_", Tok::Falsum),
            ("->", Tok::Implies),
            ("/\\", Tok::And),
            ("\\/", Tok::Or),
            ("~", Tok::Not),
            (":", Tok::Colon),
            ("(", Tok::LParen),
            (")", Tok::RParen),
            ("[", Tok::LBracket),
            ("]", Tok::RBracket),
            (".", Tok::Dot),
            ("⊥", Tok::Falsum),
            ("→", Tok::Implies),
            ("∧", Tok::And),
            ("∨", Tok::Or),
            ("¬", Tok::Not),
            ("·", Tok::Dot),
        ];
        if let Some((sym, tok)) = fixed.iter().find(|(sym, _)| text[pos..].starts_with(sym)) {
            out.push((pos, tok.clone()));
            for _ in 0..sym.chars().count() {
                rest.next();
            }
            continue;
        }
        if c.is_ascii_alphabetic() {
            let mut name = String::new();
            while let Some(&(_, c)) = rest.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    name.push(c);
                    rest.next();
                } else {
                    break;
                }
            }
            out.push((pos, Tok::Ident(name)));
            continue;
        }
        return Err(ParseError { position: pos, kind: ParseErrorKind::UnknownToken(c) });
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.at + 1).map(|(_, t)| t)
    }

    fn position(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn error(&self, expected: &'static str) -> ParseError {
        let kind = match self.peek() {
            Some(tok) => ParseErrorKind::Unexpected { expected, found: tok.describe() },
            None => ParseErrorKind::UnexpectedEnd { expected },
        };
        ParseError { position: self.position(), kind }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok, expected: &'static str) -> Result<(), ParseError> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(self.error(expected))
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let left = self.disjunction()?;
        if self.eat(&Tok::Implies) {
            let right = self.formula()?;
            return Ok(left.implies(right));
        }
        Ok(left)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.conjunction()?;
        while self.eat(&Tok::Or) {
            acc = acc.or(self.conjunction()?);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.unary()?;
        while self.eat(&Tok::And) {
            acc = acc.and(self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::Not) => {
                self.at += 1;
                Ok(self.unary()?.not())
            }
            Some(Tok::Falsum) => {
                self.at += 1;
                Ok(Formula::Falsum)
            }
            Some(Tok::LParen) => {
                self.at += 1;
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Some(Tok::Ident(name)) if self.peek2() != Some(&Tok::Colon) => {
                let atom = Formula::Atom(name.clone());
                self.at += 1;
                Ok(atom)
            }
            Some(Tok::Ident(_)) | Some(Tok::LBracket) => {
                let t = self.term()?;
                self.expect(Tok::Colon, "`:`")?;
                let body = self.unary()?;
                Ok(Formula::just(t, body))
            }
            _ => Err(self.error("a formula")),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Some(Tok::Ident(name)) => {
                let t = if is_constant_name(name) {
                    let digits = &name[1..];
                    Term::Constant(digits.parse::<BigUint>().expect("digits"))
                } else {
                    Term::Variable(name.clone())
                };
                self.at += 1;
                Ok(t)
            }
            Some(Tok::LBracket) => {
                self.at += 1;
                let mut acc = self.term()?;
                self.expect(Tok::Dot, "`.`")?;
                acc = acc.app(&self.term()?);
                while self.eat(&Tok::Dot) {
                    acc = acc.app(&self.term()?);
                }
                self.expect(Tok::RBracket, "`]`")?;
                Ok(acc)
            }
            _ => Err(self.error("a term")),
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.at == self.toks.len() {
            Ok(())
        } else {
            Err(self.error("end of input"))
        }
    }
}

/// Parses a formula from its ASCII (or Unicode) text.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut parser = Parser { toks: lex(text)?, at: 0, end: text.len() };
    let f = parser.formula()?;
    parser.finish()?;
    Ok(f)
}

/// Parses a single justification term.
pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let mut parser = Parser { toks: lex(text)?, at: 0, end: text.len() };
    let t = parser.term()?;
    parser.finish()?;
    Ok(t)
}
