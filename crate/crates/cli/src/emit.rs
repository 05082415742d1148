//! Report rendering: JSON for machines, an aligned table for people.

use std::fmt::Write;

use jacalg::{Scope, Status};
use serde::Serialize;

use crate::eval::Run;

#[derive(Serialize)]
struct JsonWitness<'a> {
    context: &'a str,
    value: &'a str,
}

#[derive(Serialize)]
struct JsonCheck<'a> {
    name: &'a str,
    line: usize,
    status: String,
    strategy: &'a str,
    scope: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<JsonWitness<'a>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<&'a str>,
}

#[derive(Serialize, Default, Debug, Clone, Copy, PartialEq, Eq)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub not_decided: usize,
    pub error: usize,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    version: u32,
    checks: Vec<JsonCheck<'a>>,
    summary: Summary,
}

fn scope_name(s: Scope) -> &'static str {
    match s {
        Scope::Complete => "complete",
        Scope::TestFamily => "test-family",
    }
}

pub fn summary(run: &Run) -> Summary {
    let mut s = Summary::default();
    for r in &run.records {
        match r.report.status {
            Status::Pass => s.pass += 1,
            Status::Fail => s.fail += 1,
            Status::Inconclusive => s.not_decided += 1,
            Status::Error => s.error += 1,
        }
    }
    s
}

/// Pretty JSON ending in a newline; identical runs give identical bytes.
pub fn emit_json(run: &Run) -> String {
    let checks = run
        .records
        .iter()
        .map(|r| JsonCheck {
            name: &r.name,
            line: r.line,
            status: r.report.status.to_string(),
            strategy: &r.report.strategy,
            scope: scope_name(r.report.scope),
            witness: r.report.witness.as_ref().map(|w| JsonWitness { context: &w.context, value: &w.rendered }),
            note: r.report.note.as_deref(),
        })
        .collect();
    let doc = JsonReport { version: 1, checks, summary: summary(run) };
    let mut out = serde_json::to_string_pretty(&doc).expect("report serializes");
    out.push('\n');
    out
}

fn paint(text: &str, status: Status, color: bool) -> String {
    if !color {
        return text.to_string();
    }
    let code = match status {
        Status::Pass => "32",
        Status::Fail => "31",
        Status::Inconclusive => "33",
        Status::Error => "35",
    };
    format!("\x1b[{}m{}\x1b[0m", code, text)
}

/// One row per check, then a summary line.
pub fn emit_text(run: &Run, color: bool) -> String {
    let width = run.records.iter().map(|r| r.name.len()).max().unwrap_or(0);
    let mut out = String::new();
    for r in &run.records {
        let status = r.report.status.to_string();
        let padded = format!("{:<11}", status);
        let _ = write!(out, "{:>4}  {}  {:<w$}  {}", r.line, paint(&padded, r.report.status, color), r.name, r.report.strategy, w = width);
        if r.report.scope == Scope::TestFamily {
            out.push_str(" [test family]");
        }
        out.push('\n');
        if let Some(w) = &r.report.witness {
            let _ = writeln!(out, "      witness: {}", w);
        }
        if let Some(n) = &r.report.note {
            let _ = writeln!(out, "      note: {}", n);
        }
    }
    let s = summary(run);
    let _ = writeln!(out, "{} pass, {} fail, {} not decided, {} error", s.pass, s.fail, s.not_decided, s.error);
    out
}

/// 2 on any error, else 1 on any failure, else 3 when strict and something was not decided.
pub fn exit_code(run: &Run, strict: bool) -> i32 {
    let s = summary(run);
    if s.error > 0 {
        2
    } else if s.fail > 0 {
        1
    } else if strict && s.not_decided > 0 {
        3
    } else {
        0
    }
}
