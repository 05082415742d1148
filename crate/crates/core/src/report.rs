//! Check outcomes shared by every predicate in the crate.

use std::fmt;

use crate::algebroid::AlgebroidPatch;
use crate::calculus::Graded;
use crate::coeff::{ExpPoly, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Pass,
    Fail,
    /// No complete strategy applied; neither pass nor fail is claimed.
    Inconclusive,
    Error,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "not-decided",
            Status::Error => "error",
        })
    }
}

/// How much a passing verdict covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scope {
    /// The identity was decided for all sections.
    Complete,
    /// The identity was verified on a finite test family only.
    TestFamily,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Residue<S> {
    Scalar(ExpPoly<S>),
    Section(Graded<S>),
    Matrix(Vec<Vec<ExpPoly<S>>>),
}

impl<S: Scalar> Residue<S> {
    pub fn is_zero(&self) -> bool {
        match self {
            Residue::Scalar(f) => f.is_zero(),
            Residue::Section(g) => g.is_zero(),
            Residue::Matrix(m) => m.iter().flatten().all(|f| f.is_zero()),
        }
    }
}

/// A failing instance: what was evaluated and the nonzero value it produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness<S> {
    pub context: String,
    pub residue: Residue<S>,
    pub rendered: String,
}

impl<S> fmt::Display for Witness<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.context, self.rendered)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report<S> {
    pub status: Status,
    pub strategy: String,
    pub scope: Scope,
    pub witness: Option<Witness<S>>,
    pub note: Option<String>,
}

impl<S: Scalar> Report<S> {
    pub fn pass(strategy: impl Into<String>) -> Self {
        Report { status: Status::Pass, strategy: strategy.into(), scope: Scope::Complete, witness: None, note: None }
    }

    pub fn inconclusive(strategy: impl Into<String>, note: impl Into<String>) -> Self {
        Report {
            status: Status::Inconclusive,
            strategy: strategy.into(),
            scope: Scope::Complete,
            witness: None,
            note: Some(note.into()),
        }
    }

    pub fn error(strategy: impl Into<String>, note: impl Into<String>) -> Self {
        Report {
            status: Status::Error,
            strategy: strategy.into(),
            scope: Scope::Complete,
            witness: None,
            note: Some(note.into()),
        }
    }

    pub fn fail_with(
        strategy: impl Into<String>,
        context: impl Into<String>,
        residue: Residue<S>,
        alg: &AlgebroidPatch<S>,
    ) -> Self {
        let rendered = alg.show_residue(&residue);
        Report {
            status: Status::Fail,
            strategy: strategy.into(),
            scope: Scope::Complete,
            witness: Some(Witness { context: context.into(), residue, rendered }),
            note: None,
        }
    }

    pub fn on_test_family(mut self) -> Self {
        self.scope = Scope::TestFamily;
        if self.status == Status::Pass && self.note.is_none() {
            self.note = Some("verified on test family".into());
        }
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }

    /// Pass when `residue` vanishes, otherwise fail with it as witness.
    pub fn from_residue(
        strategy: impl Into<String>,
        context: impl Into<String>,
        residue: Residue<S>,
        alg: &AlgebroidPatch<S>,
    ) -> Self {
        if residue.is_zero() {
            Report::pass(strategy)
        } else {
            Report::fail_with(strategy, context, residue, alg)
        }
    }

    /// Combines reports of sub-conditions: the first non-pass decides.
    pub fn all(strategy: impl Into<String>, parts: impl IntoIterator<Item = Report<S>>) -> Self {
        let strategy = strategy.into();
        let mut scope = Scope::Complete;
        let mut pending: Option<Report<S>> = None;
        for p in parts {
            if p.scope == Scope::TestFamily {
                scope = Scope::TestFamily;
            }
            match p.status {
                Status::Pass => {}
                Status::Fail | Status::Error => {
                    let mut p = p;
                    p.strategy = format!("{}/{}", strategy, p.strategy);
                    return p;
                }
                Status::Inconclusive => {
                    if pending.is_none() {
                        pending = Some(p);
                    }
                }
            }
        }
        if let Some(mut p) = pending {
            p.strategy = format!("{}/{}", strategy, p.strategy);
            return p;
        }
        let r = Report::pass(strategy);
        if scope == Scope::TestFamily {
            r.on_test_family()
        } else {
            r
        }
    }
}
