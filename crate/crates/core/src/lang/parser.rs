//! Lexer and recursive-descent parser for `.pcf` sources.
//!
//! Grammar notes: `->` in types is right-associative and `*` binds
//! tighter than `+`; term-level arithmetic gives `*` and `/` precedence
//! over `+` and `-`, with comparisons (`<`, `=`) loosest and
//! non-associative. A slash directly between digits lexes as one
//! rational literal (`1/2`); with spacing it is the division primitive.
//! Comments run from `--` to the end of the line.

use super::ast::{Span, Term, TermKind, Type};
use super::prims;
use crate::rat::{parse_rat, Rat};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("syntax error at {span}: {message}")]
pub struct SyntaxError {
    pub span: Span,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number(Rat),
    Lambda,
    Dot,
    LParen,
    RParen,
    Comma,
    Semi,
    Arrow,
    Plus,
    Minus,
    Star,
    Slash,
    Less,
    Equals,
    Eof,
}

impl std::fmt::Display for Tok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Number(_) => write!(f, "number"),
            Tok::Lambda => write!(f, "`\\`"),
            Tok::Dot => write!(f, "`.`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::Semi => write!(f, "`;`"),
            Tok::Arrow => write!(f, "`->`"),
            Tok::Plus => write!(f, "`+`"),
            Tok::Minus => write!(f, "`-`"),
            Tok::Star => write!(f, "`*`"),
            Tok::Slash => write!(f, "`/`"),
            Tok::Less => write!(f, "`<`"),
            Tok::Equals => write!(f, "`=`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

const KEYWORDS: &[&str] =
    &["fix", "eval", "as", "in", "match", "with", "if", "then", "else", "L", "R"];

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { chars: src.chars().peekable(), line: 1, col: 1 }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn span(&self) -> Span {
        Span { line: self.line, col: self.col }
    }

    fn tokens(mut self) -> Result<Vec<(Tok, Span)>, SyntaxError> {
        let mut out = Vec::new();
        loop {
            while let Some(&c) = self.chars.peek() {
                if c.is_whitespace() {
                    self.bump();
                } else if c == '-' {
                    // comment or minus: lookahead for a second dash
                    let mut clone = self.chars.clone();
                    clone.next();
                    if clone.peek() == Some(&'-') {
                        while let Some(&c2) = self.chars.peek() {
                            if c2 == '\n' {
                                break;
                            }
                            self.bump();
                        }
                    } else {
                        break;
                    }
                } else {
                    break;
                }
            }
            let span = self.span();
            let Some(&c) = self.chars.peek() else {
                out.push((Tok::Eof, span));
                return Ok(out);
            };
            let tok = match c {
                '\\' => {
                    self.bump();
                    Tok::Lambda
                }
                '.' => {
                    self.bump();
                    Tok::Dot
                }
                '(' => {
                    self.bump();
                    Tok::LParen
                }
                ')' => {
                    self.bump();
                    Tok::RParen
                }
                ',' => {
                    self.bump();
                    Tok::Comma
                }
                ';' => {
                    self.bump();
                    Tok::Semi
                }
                '+' => {
                    self.bump();
                    Tok::Plus
                }
                '*' => {
                    self.bump();
                    Tok::Star
                }
                '/' => {
                    self.bump();
                    Tok::Slash
                }
                '<' => {
                    self.bump();
                    Tok::Less
                }
                '=' => {
                    self.bump();
                    Tok::Equals
                }
                '-' => {
                    self.bump();
                    if self.chars.peek() == Some(&'>') {
                        self.bump();
                        Tok::Arrow
                    } else {
                        Tok::Minus
                    }
                }
                d if d.is_ascii_digit() => {
                    let text = self.lex_number();
                    match parse_rat(&text) {
                        Some(r) => Tok::Number(r),
                        None => {
                            return Err(SyntaxError {
                                span,
                                message: format!("malformed number `{text}`"),
                            })
                        }
                    }
                }
                a if a.is_ascii_alphabetic() || a == '_' => {
                    let mut name = String::new();
                    while let Some(&c2) = self.chars.peek() {
                        if c2.is_ascii_alphanumeric() || c2 == '_' {
                            name.push(c2);
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    Tok::Ident(name)
                }
                other => {
                    return Err(SyntaxError {
                        span,
                        message: format!("unexpected character `{other}`"),
                    })
                }
            };
            out.push((tok, span));
        }
    }

    /// Digits, optionally `.digits` or `/digits` with no spacing.
    fn lex_number(&mut self) -> String {
        let mut text = String::new();
        while let Some(&c) = self.chars.peek() {
            if c.is_ascii_digit() {
                text.push(c);
                self.bump();
            } else {
                break;
            }
        }
        if let Some(&sep) = self.chars.peek() {
            if sep == '.' || sep == '/' {
                let mut clone = self.chars.clone();
                clone.next();
                if clone.peek().map(|c| c.is_ascii_digit()).unwrap_or(false) {
                    text.push(sep);
                    self.bump();
                    while let Some(&c) = self.chars.peek() {
                        if c.is_ascii_digit() {
                            text.push(c);
                            self.bump();
                        } else {
                            break;
                        }
                    }
                }
            }
        }
        text
    }
}

pub struct Parser {
    tokens: Vec<(Tok, Span)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].0
    }

    fn peek_span(&self) -> Span {
        self.tokens[self.pos].1
    }

    fn bump(&mut self) -> (Tok, Span) {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: &Tok) -> Result<Span, SyntaxError> {
        if self.peek() == want {
            Ok(self.bump().1)
        } else {
            Err(self.unexpected(&format!("expected {want}")))
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<Span, SyntaxError> {
        match self.peek() {
            Tok::Ident(s) if s == kw => Ok(self.bump().1),
            _ => Err(self.unexpected(&format!("expected `{kw}`"))),
        }
    }

    fn expect_ident(&mut self) -> Result<(String, Span), SyntaxError> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                let span = self.bump().1;
                Ok((s, span))
            }
            _ => Err(self.unexpected("expected an identifier")),
        }
    }

    fn unexpected(&self, wanted: &str) -> SyntaxError {
        SyntaxError {
            span: self.peek_span(),
            message: format!("{wanted}, found {}", self.peek()),
        }
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn term(&mut self) -> Result<Term, SyntaxError> {
        let span = self.peek_span();
        if *self.peek() == Tok::Lambda {
            self.bump();
            let (var, _) = self.expect_ident()?;
            self.expect(&Tok::Dot)?;
            let body = self.term()?;
            return Ok(Term::new(TermKind::Lam(var, Box::new(body)), span));
        }
        if self.at_keyword("fix") {
            self.bump();
            let (var, _) = self.expect_ident()?;
            self.expect(&Tok::Dot)?;
            let body = self.term()?;
            return Ok(Term::new(TermKind::Fix(var, Box::new(body)), span));
        }
        if self.at_keyword("eval") {
            self.bump();
            let scrutinee = self.term()?;
            self.expect_keyword("as")?;
            let (var, _) = self.expect_ident()?;
            self.expect_keyword("in")?;
            let body = self.term()?;
            return Ok(Term::new(
                TermKind::Eval {
                    scrutinee: Box::new(scrutinee),
                    var,
                    body: Box::new(body),
                },
                span,
            ));
        }
        if self.at_keyword("match") {
            self.bump();
            let scrutinee = self.term()?;
            self.expect_keyword("with")?;
            if *self.peek() == Tok::LParen {
                self.bump();
                let (x, _) = self.expect_ident()?;
                self.expect(&Tok::Comma)?;
                let (y, _) = self.expect_ident()?;
                self.expect(&Tok::RParen)?;
                self.expect(&Tok::Arrow)?;
                let body = self.term()?;
                return Ok(Term::new(
                    TermKind::MatchPair {
                        scrutinee: Box::new(scrutinee),
                        left_var: x,
                        right_var: y,
                        body: Box::new(body),
                    },
                    span,
                ));
            }
            self.expect_keyword("L")?;
            let (x, _) = self.expect_ident()?;
            self.expect(&Tok::Arrow)?;
            let left_body = self.term()?;
            self.expect(&Tok::Semi)?;
            self.expect_keyword("R")?;
            let (y, _) = self.expect_ident()?;
            self.expect(&Tok::Arrow)?;
            let right_body = self.term()?;
            return Ok(Term::new(
                TermKind::MatchSum {
                    scrutinee: Box::new(scrutinee),
                    left_var: x,
                    left_body: Box::new(left_body),
                    right_var: y,
                    right_body: Box::new(right_body),
                },
                span,
            ));
        }
        if self.at_keyword("if") {
            self.bump();
            let cond = self.term()?;
            self.expect_keyword("then")?;
            let then_branch = self.term()?;
            self.expect_keyword("else")?;
            let else_branch = self.term()?;
            return Ok(Term::new(
                TermKind::If {
                    cond: Box::new(cond),
                    then_branch: Box::new(then_branch),
                    else_branch: Box::new(else_branch),
                },
                span,
            ));
        }
        self.comparison()
    }

    fn comparison(&mut self) -> Result<Term, SyntaxError> {
        let left = self.additive()?;
        let (prim, span) = match self.peek() {
            Tok::Less => ("lt", self.peek_span()),
            Tok::Equals => ("eq", self.peek_span()),
            _ => return Ok(left),
        };
        self.bump();
        let right = self.additive()?;
        Ok(Term::new(TermKind::Prim(prim.to_string(), vec![left, right]), span))
    }

    fn additive(&mut self) -> Result<Term, SyntaxError> {
        let mut acc = self.multiplicative()?;
        loop {
            let prim = match self.peek() {
                Tok::Plus => "add",
                Tok::Minus => "sub",
                _ => return Ok(acc),
            };
            let span = self.bump().1;
            let rhs = self.multiplicative()?;
            acc = Term::new(TermKind::Prim(prim.to_string(), vec![acc, rhs]), span);
        }
    }

    fn multiplicative(&mut self) -> Result<Term, SyntaxError> {
        let mut acc = self.application()?;
        loop {
            let prim = match self.peek() {
                Tok::Star => "mul",
                Tok::Slash => "div",
                _ => return Ok(acc),
            };
            let span = self.bump().1;
            let rhs = self.application()?;
            acc = Term::new(TermKind::Prim(prim.to_string(), vec![acc, rhs]), span);
        }
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Tok::Ident(s) => !KEYWORDS.contains(&s.as_str()) || s == "L" || s == "R",
            Tok::Number(_) | Tok::LParen | Tok::Lambda => true,
            _ => false,
        }
    }

    fn application(&mut self) -> Result<Term, SyntaxError> {
        let mut acc = self.atom()?;
        while self.starts_atom() {
            // a lambda here would swallow the rest of the term; treat it
            // as an argument only when parenthesised
            if *self.peek() == Tok::Lambda {
                break;
            }
            let span = self.peek_span();
            let arg = self.atom()?;
            acc = Term::new(TermKind::App(Box::new(acc), Box::new(arg)), span);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Term, SyntaxError> {
        let span = self.peek_span();
        match self.peek().clone() {
            Tok::Number(r) => {
                self.bump();
                Ok(Term::new(TermKind::Lit(r), span))
            }
            Tok::LParen => {
                self.bump();
                let first = self.term()?;
                if *self.peek() == Tok::Comma {
                    self.bump();
                    let second = self.term()?;
                    self.expect(&Tok::RParen)?;
                    Ok(Term::new(TermKind::Pair(Box::new(first), Box::new(second)), span))
                } else {
                    self.expect(&Tok::RParen)?;
                    Ok(first)
                }
            }
            Tok::Ident(name) if name == "L" => {
                self.bump();
                let payload = self.atom()?;
                Ok(Term::new(TermKind::InL(Box::new(payload)), span))
            }
            Tok::Ident(name) if name == "R" => {
                self.bump();
                let payload = self.atom()?;
                Ok(Term::new(TermKind::InR(Box::new(payload)), span))
            }
            Tok::Ident(name) if !KEYWORDS.contains(&name.as_str()) => {
                self.bump();
                if prims::lookup(&name).is_some() && *self.peek() == Tok::LParen {
                    self.bump();
                    let mut args = vec![self.term()?];
                    while *self.peek() == Tok::Comma {
                        self.bump();
                        args.push(self.term()?);
                    }
                    self.expect(&Tok::RParen)?;
                    Ok(Term::new(TermKind::Prim(name, args), span))
                } else {
                    Ok(Term::new(TermKind::Var(name), span))
                }
            }
            _ => Err(self.unexpected("expected a term")),
        }
    }

    fn type_expr(&mut self) -> Result<Type, SyntaxError> {
        let left = self.type_sum()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let right = self.type_expr()?;
            return Ok(Type::Arrow(Box::new(left), Box::new(right)));
        }
        Ok(left)
    }

    fn type_sum(&mut self) -> Result<Type, SyntaxError> {
        let mut acc = self.type_prod()?;
        while *self.peek() == Tok::Plus {
            self.bump();
            let rhs = self.type_prod()?;
            acc = Type::Sum(Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn type_prod(&mut self) -> Result<Type, SyntaxError> {
        let mut acc = self.type_atom()?;
        while *self.peek() == Tok::Star {
            self.bump();
            let rhs = self.type_atom()?;
            acc = Type::Prod(Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn type_atom(&mut self) -> Result<Type, SyntaxError> {
        match self.peek().clone() {
            Tok::Ident(s) if s == "R" => {
                self.bump();
                Ok(Type::Real)
            }
            Tok::LParen => {
                self.bump();
                let t = self.type_expr()?;
                self.expect(&Tok::RParen)?;
                Ok(t)
            }
            _ => Err(self.unexpected("expected a type")),
        }
    }
}

/// Parses a closed or open term; scoping is checked separately.
pub fn parse(src: &str) -> Result<Term, SyntaxError> {
    let tokens = Lexer::new(src).tokens()?;
    let mut p = Parser { tokens, pos: 0 };
    let t = p.term()?;
    p.expect(&Tok::Eof)?;
    Ok(t)
}

/// Parses a closed program, rejecting free variables.
pub fn parse_program(src: &str) -> Result<Term, SyntaxError> {
    let t = parse(src)?;
    let free = t.free_vars();
    if let Some(v) = free.iter().next() {
        return Err(SyntaxError {
            span: t.span,
            message: format!("unbound variable `{v}`"),
        });
    }
    Ok(t)
}

/// Parses a type expression.
pub fn parse_type(src: &str) -> Result<Type, SyntaxError> {
    let tokens = Lexer::new(src).tokens()?;
    let mut p = Parser { tokens, pos: 0 };
    let t = p.type_expr()?;
    p.expect(&Tok::Eof)?;
    Ok(t)
}
