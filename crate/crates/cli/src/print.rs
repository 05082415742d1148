//! Canonical text of scripts and expressions; re-parses to the same tree.

use std::fmt::Write;

use crate::ast::{BinOp, Expr, Script, Stmt, StmtKind};

/// Binding strength of an expression's outermost node.
fn level(e: &Expr) -> u8 {
    match e {
        Expr::Bin(op, ..) => match op {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
            BinOp::Wedge => 4,
        },
        Expr::Neg(_) => 3,
        _ => 5,
    }
}

fn wrapped(e: &Expr, min: u8, out: &mut String) {
    if level(e) < min {
        out.push('(');
        write_expr(e, out);
        out.push(')');
    } else {
        write_expr(e, out);
    }
}

fn write_expr(e: &Expr, out: &mut String) {
    match e {
        Expr::Num(n) => out.push_str(n),
        Expr::Ident(s) => out.push_str(s),
        Expr::Neg(inner) => {
            out.push('-');
            wrapped(inner, 3, out);
        }
        Expr::Bin(op, a, b) => {
            let (la, lb) = match op {
                BinOp::Add | BinOp::Sub => (1, 2),
                BinOp::Mul | BinOp::Div => (2, 3),
                BinOp::Wedge => (4, 5),
            };
            wrapped(a, la, out);
            match op {
                BinOp::Add | BinOp::Sub => {
                    let _ = write!(out, " {} ", op.symbol());
                }
                _ => out.push_str(op.symbol()),
            }
            wrapped(b, lb, out);
        }
        Expr::Call(name, args) => {
            out.push_str(name);
            out.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_expr(a, out);
            }
            out.push(')');
        }
        Expr::Tuple(items) => {
            out.push('(');
            for (i, a) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_expr(a, out);
            }
            out.push(')');
        }
        Expr::Graph(form, inner) => {
            let _ = write!(out, "({} ", form.keyword());
            write_atom(inner, out);
            out.push(')');
        }
    }
}

/// Writes `e` so that it parses back as a single atom.
fn write_atom(e: &Expr, out: &mut String) {
    wrapped(e, 5, out);
}

pub fn expr_to_string(e: &Expr) -> String {
    let mut s = String::new();
    write_expr(e, &mut s);
    s
}

pub fn atom_to_string(e: &Expr) -> String {
    let mut s = String::new();
    write_atom(e, &mut s);
    s
}

/// `what arg* key=value*`, the text after `check`.
pub fn check_text(what: &str, args: &[Expr], opts: &[(String, Expr)]) -> String {
    let mut s = what.to_string();
    for a in args {
        s.push(' ');
        write_atom(a, &mut s);
    }
    for (k, v) in opts {
        let _ = write!(s, " {}=", k);
        write_atom(v, &mut s);
    }
    s
}

pub fn stmt_to_string(stmt: &Stmt) -> String {
    match &stmt.kind {
        StmtKind::Decl { kind, name, on, value } => {
            let on = on.as_ref().map(|o| format!(" on {}", o)).unwrap_or_default();
            format!("{} {}{} = {}", kind.keyword(), name, on, expr_to_string(value))
        }
        StmtKind::Use(name) => format!("use {}", name),
        StmtKind::Check { what, args, opts } => format!("check {}", check_text(what, args, opts)),
    }
}

pub fn script_to_string(script: &Script) -> String {
    let mut out = String::new();
    for s in &script.stmts {
        out.push_str(&stmt_to_string(s));
        out.push('\n');
    }
    out
}
