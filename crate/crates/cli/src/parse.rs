//! Lexer and recursive-descent parser for `.jac` scripts.
//!
//! One statement per line; a line break inside parentheses continues the
//! statement. `#` starts a comment.

use std::fmt;

use crate::ast::{BinOp, DeclKind, Expr, GraphForm, Script, Span, Stmt, StmtKind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub span: Span,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.span, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(String),
    Sym(char),
    Newline,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{}`", s),
            Tok::Num(s) => write!(f, "number {}", s),
            Tok::Sym(c) => write!(f, "`{}`", c),
            Tok::Newline => f.write_str("end of line"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

fn err<T>(span: Span, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { span, message: message.into() })
}

fn lex(src: &str) -> Result<Vec<(Tok, Span)>, ParseError> {
    let mut out = Vec::new();
    let mut depth: Vec<Span> = Vec::new();
    for (ln, line) in src.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let span = Span { line: ln + 1, col: i + 1 };
            if c == '#' {
                break;
            } else if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push((Tok::Ident(chars[start..i].iter().collect()), span));
            } else if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((Tok::Num(chars[start..i].iter().collect()), span));
            } else if "()+-*/^,=".contains(c) {
                match c {
                    '(' => depth.push(span),
                    ')' => {
                        if depth.pop().is_none() {
                            return err(span, "unmatched `)`");
                        }
                    }
                    _ => {}
                }
                out.push((Tok::Sym(c), span));
                i += 1;
            } else {
                return err(span, format!("unexpected character `{}`", c));
            }
        }
        if depth.is_empty() {
            out.push((Tok::Newline, Span { line: ln + 1, col: chars.len() + 1 }));
        }
    }
    if let Some(open) = depth.pop() {
        return err(open, "unclosed `(`");
    }
    let end = Span { line: src.lines().count() + 1, col: 1 };
    out.push((Tok::Eof, end));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].0
    }

    fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            err(self.span(), format!("expected `{}`, found {}", c, self.peek()))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            t => err(self.span(), format!("expected {}, found {}", what, t)),
        }
    }

    fn end_of_statement(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Newline => {
                self.bump();
                Ok(())
            }
            Tok::Eof => Ok(()),
            t => err(self.span(), format!("expected end of line, found {}", t)),
        }
    }

    fn script(&mut self) -> Result<Script, ParseError> {
        let mut stmts = Vec::new();
        loop {
            match self.peek() {
                Tok::Eof => break,
                Tok::Newline => {
                    self.bump();
                }
                _ => stmts.push(self.statement()?),
            }
        }
        Ok(Script { stmts })
    }

    fn statement(&mut self) -> Result<Stmt, ParseError> {
        let span = self.span();
        let head = self.ident("a statement keyword")?;
        let kind = if let Some(kind) = DeclKind::from_keyword(&head) {
            let name = self.ident("a name")?;
            let on = if *self.peek() == Tok::Ident("on".into()) {
                self.bump();
                Some(self.ident("an algebroid name")?)
            } else {
                None
            };
            self.expect('=')?;
            let value = self.expr()?;
            StmtKind::Decl { kind, name, on, value }
        } else if head == "use" {
            StmtKind::Use(self.ident("an algebroid name")?)
        } else if head == "check" {
            let what = self.ident("a check name")?;
            let mut args = Vec::new();
            let mut opts = Vec::new();
            while !matches!(self.peek(), Tok::Newline | Tok::Eof) {
                if let (Tok::Ident(key), Tok::Sym('=')) = (self.peek().clone(), self.peek_at(1)) {
                    self.bump();
                    self.bump();
                    opts.push((key, self.atom()?));
                } else if opts.is_empty() {
                    args.push(self.atom()?);
                } else {
                    return err(self.span(), "positional argument after options");
                }
            }
            StmtKind::Check { what, args, opts }
        } else {
            return err(span, format!("unknown statement `{}`", head));
        };
        self.end_of_statement()?;
        Ok(Stmt { span, kind })
    }

    pub fn expr(&mut self) -> Result<Expr, ParseError> {
        self.binary(1)
    }

    fn op_at(&self, min: u8) -> Option<BinOp> {
        let op = match self.peek() {
            Tok::Sym('+') => BinOp::Add,
            Tok::Sym('-') => BinOp::Sub,
            Tok::Sym('*') => BinOp::Mul,
            Tok::Sym('/') => BinOp::Div,
            Tok::Sym('^') => BinOp::Wedge,
            _ => return None,
        };
        (op.precedence() >= min).then_some(op)
    }

    fn binary(&mut self, min: u8) -> Result<Expr, ParseError> {
        let operand = |p: &mut Self| if min == 1 { p.binary(2) } else { p.unary() };
        let mut lhs = operand(self)?;
        while let Some(op) = self.op_at(min) {
            if op.precedence() != min {
                break;
            }
            self.bump();
            let rhs = operand(self)?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat('-') {
            Ok(Expr::Neg(Box::new(self.unary()?)))
        } else {
            self.wedge()
        }
    }

    fn wedge(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.atom()?;
        while self.eat('^') {
            let rhs = self.atom()?;
            lhs = Expr::Bin(BinOp::Wedge, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn starts_atom(t: &Tok) -> bool {
        matches!(t, Tok::Ident(_) | Tok::Num(_) | Tok::Sym('('))
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let span = self.span();
        match self.bump() {
            Tok::Num(n) => Ok(Expr::Num(n)),
            Tok::Ident(name) => {
                let next = self.span();
                let touching = next.line == span.line && next.col == span.col + name.chars().count();
                if touching && self.eat('(') {
                    let mut args = Vec::new();
                    if !self.eat(')') {
                        loop {
                            args.push(self.expr()?);
                            if self.eat(')') {
                                break;
                            }
                            self.expect(',')?;
                        }
                    }
                    Ok(Expr::Call(name, args))
                } else {
                    Ok(Expr::Ident(name))
                }
            }
            Tok::Sym('(') => {
                if let Tok::Ident(k) = self.peek().clone() {
                    if let Some(form) = GraphForm::from_keyword(&k) {
                        if Self::starts_atom(self.peek_at(1)) {
                            self.bump();
                            let inner = self.atom()?;
                            self.expect(')')?;
                            return Ok(Expr::Graph(form, Box::new(inner)));
                        }
                    }
                }
                let first = self.expr()?;
                if self.eat(')') {
                    return Ok(first);
                }
                let mut items = vec![first];
                while self.eat(',') {
                    items.push(self.expr()?);
                }
                self.expect(')')?;
                Ok(Expr::Tuple(items))
            }
            t => err(span, format!("expected an expression, found {}", t)),
        }
    }
}

pub fn parse(src: &str) -> Result<Script, ParseError> {
    let toks = lex(src)?;
    Parser { toks, pos: 0 }.script()
}

/// Parses a single expression.
pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    let mut toks = lex(src)?;
    toks.retain(|(t, _)| *t != Tok::Newline);
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    match p.peek() {
        Tok::Eof => Ok(e),
        t => err(p.span(), format!("unexpected {}", t)),
    }
}
