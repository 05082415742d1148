//! Syntax tree of `.jac` scripts.

use std::fmt;

/// 1-based source position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Wedge,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Wedge => "^",
        }
    }

    pub fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
            BinOp::Wedge => 3,
        }
    }
}

/// Graph literals `(sharp e)`, `(sharp_bar e)`, `(flat e)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphForm {
    Sharp,
    SharpBar,
    Flat,
}

impl GraphForm {
    pub fn keyword(self) -> &'static str {
        match self {
            GraphForm::Sharp => "sharp",
            GraphForm::SharpBar => "sharp_bar",
            GraphForm::Flat => "flat",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Self> {
        match s {
            "sharp" => Some(GraphForm::Sharp),
            "sharp_bar" => Some(GraphForm::SharpBar),
            "flat" => Some(GraphForm::Flat),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    /// Non-negative integer literal, kept as written.
    Num(String),
    Ident(String),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(String, Vec<Expr>),
    /// At least two entries.
    Tuple(Vec<Expr>),
    Graph(GraphForm, Box<Expr>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeclKind {
    Patch,
    Algebroid,
    Jacobi,
    Bialgebroid,
    Lift,
    Let,
    Form,
    Vector,
    Map,
}

impl DeclKind {
    pub const ALL: [DeclKind; 9] = [
        DeclKind::Patch,
        DeclKind::Algebroid,
        DeclKind::Jacobi,
        DeclKind::Bialgebroid,
        DeclKind::Lift,
        DeclKind::Let,
        DeclKind::Form,
        DeclKind::Vector,
        DeclKind::Map,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            DeclKind::Patch => "patch",
            DeclKind::Algebroid => "algebroid",
            DeclKind::Jacobi => "jacobi",
            DeclKind::Bialgebroid => "bialgebroid",
            DeclKind::Lift => "lift",
            DeclKind::Let => "let",
            DeclKind::Form => "form",
            DeclKind::Vector => "vector",
            DeclKind::Map => "map",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.keyword() == s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StmtKind {
    /// `KIND name [on space] = value`
    Decl { kind: DeclKind, name: String, on: Option<String>, value: Expr },
    /// `use space`
    Use(String),
    /// `check what arg* key=value*`
    Check { what: String, args: Vec<Expr>, opts: Vec<(String, Expr)> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stmt {
    pub span: Span,
    pub kind: StmtKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Script {
    pub stmts: Vec<Stmt>,
}

impl Script {
    /// The statements without positions, for comparing reformatted scripts.
    pub fn shape(&self) -> Vec<&StmtKind> {
        self.stmts.iter().map(|s| &s.kind).collect()
    }
}
