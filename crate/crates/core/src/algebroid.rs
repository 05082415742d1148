//! Lie and Jacobi algebroids over one coordinate patch.
//!
//! An algebroid is stored by its anchor `ρ^a_i` and the frame brackets
//! `[e_i, e_j] = c^k_{ij} e_k`; brackets of arbitrary sections follow from the
//! Leibniz rule. Because of that, checking the Jacobi identity on frame
//! triples (together with the anchor morphism) validates the whole structure.
//!
//! Dual algebroids (structures on `A*`) reuse the same type with
//! [`Kind::Form`] as their section kind.

use std::fmt;

use thiserror::Error;

use crate::calculus::{self, CalcError, Graded, Kind};
use crate::coeff::{CoeffError, ExpPoly, Scalar, Var};
use crate::report::{Report, Residue};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebroidError {
    #[error("invalid patch: {0}")]
    Patch(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("structure functions are not antisymmetric at ({0}, {1})")]
    NotAntisymmetric(usize, usize),
    #[error("structure on the base patch must not depend on t")]
    TimeDependent,
    #[error("invalid algebroid: {0}")]
    Invalid(String),
    #[error("phi0 is not closed")]
    NotClosed,
    #[error("algebroid is already lifted")]
    AlreadyLifted,
    #[error("bialgebroid sides are not dual: {0}")]
    NotDual(String),
    #[error(transparent)]
    Calc(#[from] CalcError),
}

impl From<CoeffError> for AlgebroidError {
    fn from(e: CoeffError) -> Self {
        AlgebroidError::Calc(e.into())
    }
}

/// Coordinate patch; a lifted patch additionally carries the coordinate `t`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Patch {
    coords: Vec<String>,
    lifted: bool,
}

impl Patch {
    pub fn new<I: IntoIterator<Item = T>, T: Into<String>>(coords: I) -> Result<Self, AlgebroidError> {
        let coords: Vec<String> = coords.into_iter().map(Into::into).collect();
        for (i, c) in coords.iter().enumerate() {
            if c.is_empty() {
                return Err(AlgebroidError::Patch("empty coordinate name".into()));
            }
            if c == "t" {
                return Err(AlgebroidError::Patch("`t` is reserved for the lift coordinate".into()));
            }
            if coords[..i].contains(c) {
                return Err(AlgebroidError::Patch(format!("duplicate coordinate `{}`", c)));
            }
        }
        Ok(Patch { coords, lifted: false })
    }

    /// The patch `M × R`.
    pub fn lifted(&self) -> Self {
        Patch { coords: self.coords.clone(), lifted: true }
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    pub fn n(&self) -> usize {
        self.coords.len()
    }

    pub fn is_lifted(&self) -> bool {
        self.lifted
    }

    /// Names of every ring variable, ending with `t`.
    pub fn ring_names(&self) -> Vec<String> {
        let mut v = self.coords.clone();
        v.push("t".into());
        v
    }

    pub fn coord_index(&self, name: &str) -> Option<Var> {
        if name == "t" {
            return Some(Var::T);
        }
        self.coords.iter().position(|c| c == name).map(Var::X)
    }

    /// Anchor directions: every coordinate, plus `t` when lifted.
    pub(crate) fn directions(&self) -> Vec<Var> {
        let mut v: Vec<Var> = (0..self.n()).map(Var::X).collect();
        if self.lifted {
            v.push(Var::T);
        }
        v
    }
}

/// Frame labels used for printing and for DSL tokens.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labels {
    pub vector: Vec<String>,
    pub form: Vec<String>,
}

impl Labels {
    pub fn numbered(rank: usize) -> Self {
        Labels {
            vector: (1..=rank).map(|i| format!("e{}", i)).collect(),
            form: (1..=rank).map(|i| format!("eps{}", i)).collect(),
        }
    }

    pub fn of(&self, kind: Kind) -> &[String] {
        match kind {
            Kind::Vector => &self.vector,
            Kind::Form => &self.form,
        }
    }
}

/// A rank-`r` algebroid on a patch, given by anchor and frame brackets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebroidPatch<S> {
    patch: Patch,
    rank: usize,
    section_kind: Kind,
    /// `anchor[i][a]`: coefficient of `∂_a` in `ρ(e_i)`; slot `n` is `∂_t`.
    anchor: Vec<Vec<ExpPoly<S>>>,
    /// `brackets[i][j] = [e_i, e_j]`.
    brackets: Vec<Vec<Graded<S>>>,
    labels: Labels,
    extension_of: Option<usize>,
}

impl<S: Scalar> AlgebroidPatch<S> {
    /// Builds from an anchor matrix `anchor[a][i] = ρ^a_i` (rows: coordinates,
    /// then `t` for lifted patches) and structure functions `structure[i][j][k] = c^k_{ij}`.
    pub fn new(
        patch: Patch,
        section_kind: Kind,
        anchor: Vec<Vec<ExpPoly<S>>>,
        structure: Vec<Vec<Vec<ExpPoly<S>>>>,
    ) -> Result<Self, AlgebroidError> {
        let rank = structure.len();
        let n = patch.n();
        let rows = if patch.is_lifted() { n + 1 } else { n };
        if anchor.len() != rows {
            return Err(AlgebroidError::Shape(format!("anchor has {} rows, expected {}", anchor.len(), rows)));
        }
        if anchor.iter().any(|r| r.len() != rank) {
            return Err(AlgebroidError::Shape(format!("anchor rows must have {} entries", rank)));
        }
        let mut anc = vec![vec![ExpPoly::zero(n); n + 1]; rank];
        for (a, row) in anchor.into_iter().enumerate() {
            for (i, v) in row.into_iter().enumerate() {
                if v.nvars() != n {
                    return Err(CoeffError::VariableMismatch(v.nvars(), n).into());
                }
                anc[i][a] = v;
            }
        }
        let mut brackets = vec![vec![Graded::zero(section_kind, rank, n, 1); rank]; rank];
        for (i, row) in structure.iter().enumerate() {
            if row.len() != rank || row.iter().any(|c| c.len() != rank) {
                return Err(AlgebroidError::Shape("structure must be r x r x r".into()));
            }
            for (j, c) in row.iter().enumerate() {
                if c.iter().any(|v| v.nvars() != n) {
                    return Err(CoeffError::VariableMismatch(c[0].nvars(), n).into());
                }
                brackets[i][j] = Graded::from_vector(section_kind, rank, n, c.clone());
            }
        }
        for i in 0..rank {
            for j in 0..=i {
                if brackets[i][j] != -&brackets[j][i] {
                    return Err(AlgebroidError::NotAntisymmetric(i + 1, j + 1));
                }
            }
        }
        let alg = AlgebroidPatch {
            patch,
            rank,
            section_kind,
            anchor: anc,
            brackets,
            labels: Labels::numbered(rank),
            extension_of: None,
        };
        if !alg.patch.is_lifted() {
            let timeless = alg.anchor.iter().flatten().all(|v| v.is_time_independent())
                && alg.brackets.iter().flatten().all(|b| b.is_time_independent());
            if !timeless {
                return Err(AlgebroidError::TimeDependent);
            }
        }
        Ok(alg)
    }

    pub fn with_labels(mut self, labels: Labels) -> Result<Self, AlgebroidError> {
        if labels.vector.len() != self.rank || labels.form.len() != self.rank {
            return Err(AlgebroidError::Shape("label count must equal the rank".into()));
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn patch(&self) -> &Patch {
        &self.patch
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn nvars(&self) -> usize {
        self.patch.n()
    }

    /// Kind of the sections of this algebroid.
    pub fn section_kind(&self) -> Kind {
        self.section_kind
    }

    /// Kind of the forms of this algebroid (sections of its dual).
    pub fn form_kind(&self) -> Kind {
        self.section_kind.dual()
    }

    pub fn labels(&self) -> &Labels {
        &self.labels
    }

    pub fn section_label(&self, i: usize) -> &str {
        &self.labels.of(self.section_kind)[i]
    }

    /// Base rank when this algebroid was produced by [`extend_with_r`].
    pub fn extension_of(&self) -> Option<usize> {
        self.extension_of
    }

    /// `ρ^a_i` for a direction `a` (coordinate or `t`).
    pub fn anchor_entry(&self, i: usize, a: Var) -> &ExpPoly<S> {
        let slot = match a {
            Var::X(k) => k,
            Var::T => self.nvars(),
        };
        &self.anchor[i][slot]
    }

    /// Anchor matrix in `[a][i]` layout.
    pub fn anchor_matrix(&self) -> Vec<Vec<ExpPoly<S>>> {
        self.patch
            .directions()
            .into_iter()
            .map(|a| (0..self.rank).map(|i| self.anchor_entry(i, a).clone()).collect())
            .collect()
    }

    /// Structure functions `[i][j][k] = c^k_{ij}`.
    pub fn structure(&self) -> Vec<Vec<Vec<ExpPoly<S>>>> {
        self.brackets
            .iter()
            .map(|row| row.iter().map(|b| b.as_vector().expect("degree 1")).collect())
            .collect()
    }

    pub fn frame_bracket(&self, i: usize, j: usize) -> &Graded<S> {
        &self.brackets[i][j]
    }

    /// `ρ(e_i) f`.
    pub fn anchor_frame(&self, i: usize, f: &ExpPoly<S>) -> ExpPoly<S> {
        let mut acc = ExpPoly::zero(self.nvars());
        for a in self.patch.directions() {
            let r = self.anchor_entry(i, a);
            if r.is_zero() {
                continue;
            }
            let d = f.differentiate(a).expect("direction belongs to the ring");
            if !d.is_zero() {
                acc += &(r * &d);
            }
        }
        acc
    }

    pub fn frame(&self, i: usize) -> Graded<S> {
        Graded::basis(self.section_kind, self.rank, self.nvars(), &[i])
    }

    pub fn coframe(&self, i: usize) -> Graded<S> {
        Graded::basis(self.form_kind(), self.rank, self.nvars(), &[i])
    }

    pub fn function(&self, f: ExpPoly<S>) -> Graded<S> {
        Graded::scalar(self.section_kind, self.rank, f)
    }

    pub fn zero_section(&self, degree: usize) -> Graded<S> {
        Graded::zero(self.section_kind, self.rank, self.nvars(), degree)
    }

    pub fn zero_form(&self, degree: usize) -> Graded<S> {
        Graded::zero(self.form_kind(), self.rank, self.nvars(), degree)
    }

    pub fn one(&self) -> ExpPoly<S> {
        ExpPoly::one(self.nvars())
    }

    /// Checks that `g` is a section (`kind = section_kind`) or form of this algebroid.
    pub(crate) fn accepts(&self, g: &Graded<S>, kind: Kind) -> Result<(), CalcError> {
        if g.kind() != kind {
            return Err(CalcError::KindMismatch(kind, g.kind()));
        }
        if g.rank() != self.rank {
            return Err(CalcError::RankMismatch(self.rank, g.rank()));
        }
        if g.nvars() != self.nvars() {
            return Err(CoeffError::VariableMismatch(self.nvars(), g.nvars()).into());
        }
        Ok(())
    }

    /// Renders a section, form or scalar with this algebroid's names.
    pub fn show(&self, g: &Graded<S>) -> String {
        let names = self.patch.ring_names();
        let out = g.display_with(&names, self.labels.of(g.kind())).to_string();
        out
    }

    pub fn show_scalar(&self, f: &ExpPoly<S>) -> String {
        f.display_with(&self.patch.ring_names()).to_string()
    }

    pub fn show_residue(&self, r: &Residue<S>) -> String {
        match r {
            Residue::Scalar(f) => self.show_scalar(f),
            Residue::Section(g) => self.show(g),
            Residue::Matrix(m) => {
                let rows: Vec<String> = m
                    .iter()
                    .map(|row| format!("[{}]", row.iter().map(|f| self.show_scalar(f)).collect::<Vec<_>>().join(", ")))
                    .collect();
                format!("[{}]", rows.join(", "))
            }
        }
    }
}

impl<S: Scalar> fmt::Display for AlgebroidPatch<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "algebroid of rank {} over ({})", self.rank, self.patch.coords.join(", "))?;
        if self.patch.is_lifted() {
            write!(f, " x R")?;
        }
        Ok(())
    }
}

/// `ρ(X) f = Σ X^i ρ^a_i ∂f/∂x_a`.
pub fn anchor_apply<S: Scalar>(
    alg: &AlgebroidPatch<S>,
    x: &Graded<S>,
    f: &ExpPoly<S>,
) -> Result<ExpPoly<S>, CalcError> {
    alg.accepts(x, alg.section_kind())?;
    if x.degree() != 1 {
        return Err(CalcError::DegreeMismatch { expected: 1, got: x.degree() });
    }
    let mut acc = ExpPoly::zero(alg.nvars());
    for (i, xi) in x.as_vector().expect("degree 1").iter().enumerate() {
        if !xi.is_zero() {
            acc += &(xi * &alg.anchor_frame(i, f));
        }
    }
    Ok(acc)
}

/// `[X, Y]` for degree-1 sections: `X^i Y^j c^k_{ij} e_k + X^i ρ_i(Y^j) e_j − Y^j ρ_j(X^i) e_i`.
pub fn bracket_sections<S: Scalar>(
    alg: &AlgebroidPatch<S>,
    x: &Graded<S>,
    y: &Graded<S>,
) -> Result<Graded<S>, CalcError> {
    for s in [x, y] {
        alg.accepts(s, alg.section_kind())?;
        if s.degree() != 1 {
            return Err(CalcError::DegreeMismatch { expected: 1, got: s.degree() });
        }
    }
    let xs = x.as_vector().expect("degree 1");
    let ys = y.as_vector().expect("degree 1");
    let mut out = alg.zero_section(1);
    for (i, xi) in xs.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (j, yj) in ys.iter().enumerate() {
            let d = alg.anchor_frame(i, yj);
            if !d.is_zero() {
                out = &out + &alg.frame(j).scale(&(xi * &d));
            }
            if !yj.is_zero() {
                out = &out + &alg.frame_bracket(i, j).scale(&(xi * yj));
            }
        }
    }
    for (j, yj) in ys.iter().enumerate() {
        if yj.is_zero() {
            continue;
        }
        for (i, xi) in xs.iter().enumerate() {
            let d = alg.anchor_frame(j, xi);
            if !d.is_zero() {
                out = &out - &alg.frame(i).scale(&(yj * &d));
            }
        }
    }
    Ok(out)
}

/// Checks the anchor morphism on every coordinate and the Jacobi identity on frame triples.
pub fn validate_algebroid<S: Scalar>(alg: &AlgebroidPatch<S>) -> Report<S> {
    let r = alg.rank();
    let dirs = alg.patch().directions();
    let names = alg.patch().ring_names();
    for i in 0..r {
        for j in (i + 1)..r {
            let c = alg.frame_bracket(i, j).as_vector().expect("degree 1");
            for &a in &dirs {
                let mut lhs = ExpPoly::zero(alg.nvars());
                for (k, ck) in c.iter().enumerate() {
                    if !ck.is_zero() {
                        lhs += &(ck * alg.anchor_entry(k, a));
                    }
                }
                let rhs = alg.anchor_frame(i, alg.anchor_entry(j, a)) - alg.anchor_frame(j, alg.anchor_entry(i, a));
                let res = lhs - rhs;
                if !res.is_zero() {
                    let coord = match a {
                        Var::X(k) => names[k].clone(),
                        Var::T => "t".into(),
                    };
                    return Report::fail_with(
                        "axioms",
                        format!(
                            "anchor morphism rho([{0},{1}]) - [rho({0}),rho({1})] applied to {2}",
                            alg.section_label(i),
                            alg.section_label(j),
                            coord
                        ),
                        Residue::Scalar(res),
                        alg,
                    );
                }
            }
        }
    }
    for i in 0..r {
        for j in (i + 1)..r {
            for k in (j + 1)..r {
                match jacobiator(alg, i, j, k) {
                    Ok(res) if res.is_zero() => {}
                    Ok(res) => {
                        let l = |m| alg.section_label(m);
                        return Report::fail_with(
                            "axioms",
                            format!("Jacobi identity on ({}, {}, {})", l(i), l(j), l(k)),
                            Residue::Section(res),
                            alg,
                        );
                    }
                    Err(e) => return Report::error("axioms", e.to_string()),
                }
            }
        }
    }
    Report::pass("axioms")
}

/// `[[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j]`.
pub fn jacobiator<S: Scalar>(alg: &AlgebroidPatch<S>, i: usize, j: usize, k: usize) -> Result<Graded<S>, CalcError> {
    let t1 = bracket_sections(alg, alg.frame_bracket(i, j), &alg.frame(k))?;
    let t2 = bracket_sections(alg, alg.frame_bracket(j, k), &alg.frame(i))?;
    let t3 = bracket_sections(alg, alg.frame_bracket(k, i), &alg.frame(j))?;
    Ok(&(&t1 + &t2) + &t3)
}

/// Tangent algebroid: frame `∂/∂x_a`, identity anchor, zero brackets.
pub fn make_tangent<S: Scalar>(patch: &Patch) -> AlgebroidPatch<S> {
    let n = patch.n();
    let anchor = (0..n)
        .map(|a| (0..n).map(|i| ExpPoly::int(n, (a == i) as i64)).collect())
        .collect();
    let structure = vec![vec![vec![ExpPoly::zero(n); n]; n]; n];
    let labels = Labels {
        vector: patch.coords().iter().map(|c| format!("dd{}", c)).collect(),
        form: patch.coords().iter().map(|c| format!("d{}", c)).collect(),
    };
    AlgebroidPatch::new(patch.clone(), Kind::Vector, anchor, structure)
        .and_then(|a| a.with_labels(labels))
        .expect("tangent algebroid is well formed")
}

/// Zero anchor and zero brackets in rank `r`.
pub fn make_trivial<S: Scalar>(patch: &Patch, rank: usize) -> AlgebroidPatch<S> {
    make_trivial_kind(patch, rank, Kind::Vector)
}

fn make_trivial_kind<S: Scalar>(patch: &Patch, rank: usize, kind: Kind) -> AlgebroidPatch<S> {
    let n = patch.n();
    let rows = if patch.is_lifted() { n + 1 } else { n };
    let anchor = vec![vec![ExpPoly::zero(n); rank]; rows];
    let structure = vec![vec![vec![ExpPoly::zero(n); rank]; rank]; rank];
    AlgebroidPatch::new(patch.clone(), kind, anchor, structure).expect("trivial algebroid is well formed")
}

/// The trivial structure `A*_0` on the dual of `alg`, with matching labels.
pub fn trivial_dual<S: Scalar>(alg: &AlgebroidPatch<S>) -> AlgebroidPatch<S> {
    make_trivial_kind(alg.patch(), alg.rank(), alg.form_kind())
        .with_labels(alg.labels().clone())
        .expect("same rank")
}

/// An algebroid on the dual frame of `alg`, given by anchor and structure functions.
pub fn dual_structure<S: Scalar>(
    alg: &AlgebroidPatch<S>,
    anchor: Vec<Vec<ExpPoly<S>>>,
    structure: Vec<Vec<Vec<ExpPoly<S>>>>,
) -> Result<AlgebroidPatch<S>, AlgebroidError> {
    AlgebroidPatch::new(alg.patch().clone(), alg.form_kind(), anchor, structure)?.with_labels(alg.labels().clone())
}

/// A Jacobi algebroid `(A, φ0)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacobiAlgebroid<S> {
    algebroid: AlgebroidPatch<S>,
    phi0: Graded<S>,
}

impl<S: Scalar> JacobiAlgebroid<S> {
    /// Requires `d_A φ0 = 0`.
    pub fn new(algebroid: AlgebroidPatch<S>, phi0: Graded<S>) -> Result<Self, AlgebroidError> {
        algebroid.accepts(&phi0, algebroid.form_kind())?;
        if phi0.degree() != 1 {
            return Err(CalcError::DegreeMismatch { expected: 1, got: phi0.degree() }.into());
        }
        if !calculus::differential(&algebroid, &phi0)?.is_zero() {
            return Err(AlgebroidError::NotClosed);
        }
        Ok(JacobiAlgebroid { algebroid, phi0 })
    }

    /// Skips the closedness check; used for negative controls.
    pub fn new_unchecked(algebroid: AlgebroidPatch<S>, phi0: Graded<S>) -> Self {
        JacobiAlgebroid { algebroid, phi0 }
    }

    /// `(A, 0)`.
    pub fn untwisted(algebroid: AlgebroidPatch<S>) -> Self {
        let phi0 = algebroid.zero_form(1);
        JacobiAlgebroid { algebroid, phi0 }
    }

    pub fn algebroid(&self) -> &AlgebroidPatch<S> {
        &self.algebroid
    }

    pub fn phi0(&self) -> &Graded<S> {
        &self.phi0
    }

    /// `⟨φ0, e_i⟩`.
    pub fn phi0_at(&self, i: usize) -> ExpPoly<S> {
        self.phi0.get(&[i])
    }
}

/// `(A ⊕ R, (0,1))` with frame `(e_1..e_r, ê)`.
pub fn extend_with_r<S: Scalar>(alg: &AlgebroidPatch<S>) -> Result<JacobiAlgebroid<S>, AlgebroidError> {
    if let Report { status: crate::report::Status::Fail, .. } = validate_algebroid(alg) {
        return Err(AlgebroidError::Invalid("input algebroid fails its axioms".into()));
    }
    let r = alg.rank();
    let n = alg.nvars();
    let mut anchor = alg.anchor_matrix();
    for row in &mut anchor {
        row.push(ExpPoly::zero(n));
    }
    let mut structure = alg.structure();
    for row in &mut structure {
        for c in row.iter_mut() {
            c.push(ExpPoly::zero(n));
        }
        row.push(vec![ExpPoly::zero(n); r + 1]);
    }
    structure.push(vec![vec![ExpPoly::zero(n); r + 1]; r + 1]);
    let mut labels = alg.labels().clone();
    labels.vector.push("ehat".into());
    labels.form.push("epshat".into());
    let mut ext = AlgebroidPatch::new(alg.patch().clone(), alg.section_kind(), anchor, structure)?.with_labels(labels)?;
    ext.extension_of = Some(r);
    let phi0 = ext.coframe(r);
    JacobiAlgebroid::new(ext, phi0)
}

fn lift_checked<S: Scalar>(j: &JacobiAlgebroid<S>) -> Result<(), AlgebroidError> {
    if j.algebroid.patch.is_lifted() {
        return Err(AlgebroidError::AlreadyLifted);
    }
    if let Report { status: crate::report::Status::Fail, .. } = validate_algebroid(&j.algebroid) {
        return Err(AlgebroidError::Invalid("input algebroid fails its axioms".into()));
    }
    Ok(())
}

/// `Ā`: same frame brackets, anchor `ρ + ⟨φ0,·⟩ ∂/∂t`.
pub fn lift_bar<S: Scalar>(j: &JacobiAlgebroid<S>) -> Result<AlgebroidPatch<S>, AlgebroidError> {
    lift_checked(j)?;
    let a = &j.algebroid;
    let mut anchor = a.anchor_matrix();
    anchor.push((0..a.rank).map(|i| j.phi0_at(i)).collect());
    let mut out = AlgebroidPatch::new(a.patch.lifted(), a.section_kind, anchor, a.structure())?
        .with_labels(a.labels.clone())?;
    out.extension_of = a.extension_of;
    Ok(out)
}

/// `Â`: brackets `e^{-t}(c^k_{ij} e_k − φ_i e_j + φ_j e_i)`, anchor `e^{-t}(ρ + ⟨φ0,·⟩ ∂/∂t)`.
pub fn lift_hat<S: Scalar>(j: &JacobiAlgebroid<S>) -> Result<AlgebroidPatch<S>, AlgebroidError> {
    lift_checked(j)?;
    let a = &j.algebroid;
    let r = a.rank;
    let mut anchor = a.anchor_matrix();
    anchor.push((0..r).map(|i| j.phi0_at(i)).collect());
    for row in &mut anchor {
        for v in row.iter_mut() {
            *v = v.shift(-1);
        }
    }
    let mut structure = a.structure();
    for (i, row) in structure.iter_mut().enumerate() {
        for (jj, c) in row.iter_mut().enumerate() {
            c[jj] = &c[jj] - &j.phi0_at(i);
            c[i] = &c[i] + &j.phi0_at(jj);
            for v in c.iter_mut() {
                *v = v.shift(-1);
            }
        }
    }
    let mut out =
        AlgebroidPatch::new(a.patch.lifted(), a.section_kind, anchor, structure)?.with_labels(a.labels.clone())?;
    out.extension_of = a.extension_of;
    Ok(out)
}

/// A pair of Jacobi algebroids in duality: `(A, φ0)` and `(A*, X0)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacobiBialgebroid<S> {
    a: JacobiAlgebroid<S>,
    dual: JacobiAlgebroid<S>,
}

impl<S: Scalar> JacobiBialgebroid<S> {
    pub fn new(a: JacobiAlgebroid<S>, dual: JacobiAlgebroid<S>) -> Result<Self, AlgebroidError> {
        let (p, q) = (a.algebroid(), dual.algebroid());
        if p.patch() != q.patch() {
            return Err(AlgebroidError::NotDual("different patches".into()));
        }
        if p.rank() != q.rank() {
            return Err(AlgebroidError::NotDual("different ranks".into()));
        }
        if q.section_kind() != p.form_kind() {
            return Err(AlgebroidError::NotDual("dual side must act on forms".into()));
        }
        Ok(JacobiBialgebroid { a, dual })
    }

    /// `((A, φ0), (A*_0, 0))`.
    pub fn standard(a: JacobiAlgebroid<S>) -> Self {
        let d = trivial_dual(a.algebroid());
        let dual = JacobiAlgebroid::untwisted(d);
        JacobiBialgebroid { a, dual }
    }

    pub fn a(&self) -> &JacobiAlgebroid<S> {
        &self.a
    }

    pub fn dual(&self) -> &JacobiAlgebroid<S> {
        &self.dual
    }

    pub fn x0(&self) -> &Graded<S> {
        self.dual.phi0()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Status;
    use num_rational::BigRational;

    type Q = BigRational;
    type E = ExpPoly<Q>;

    fn plane() -> AlgebroidPatch<Q> {
        make_tangent(&Patch::new(["x", "y"]).unwrap())
    }

    #[test]
    fn tangent_bracket_textbook() {
        let a = plane();
        let x = E::var(2, Var::X(0)).unwrap();
        let lhs = bracket_sections(&a, &a.frame(0), &a.frame(1).scale(&x)).unwrap();
        assert_eq!(lhs, a.frame(1));
        let z = bracket_sections(&a, &a.frame(0), &a.frame(0)).unwrap();
        assert!(z.is_zero());
        assert_eq!(validate_algebroid(&a).status, Status::Pass);
    }

    #[test]
    fn anchor_examples() {
        let a = plane();
        let x = E::var(2, Var::X(0)).unwrap();
        assert_eq!(anchor_apply(&a, &a.frame(0), &x.pow(2)).unwrap(), E::int(2, 2) * x.clone());
        let triv = make_trivial::<Q>(&Patch::new(["x", "y"]).unwrap(), 3);
        assert!(anchor_apply(&triv, &triv.frame(2), &x).unwrap().is_zero());
    }

    #[test]
    fn su2_over_a_point() {
        let p = Patch::new(Vec::<String>::new()).unwrap();
        let mut c = vec![vec![vec![E::zero(0); 3]; 3]; 3];
        for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            c[i][j][k] = E::one(0);
            c[j][i][k] = E::int(0, -1);
        }
        let a = AlgebroidPatch::new(p, Kind::Vector, vec![], c).unwrap();
        assert_eq!(validate_algebroid(&a).status, Status::Pass);
    }

    #[test]
    fn anchor_morphism_failure_names_residue() {
        // c^1_{12} = x1 with zero anchor closes trivially; a nonzero anchor on e1 does not
        let p = Patch::new(["x1"]).unwrap();
        let x = E::var(1, Var::X(0)).unwrap();
        let mut c = vec![vec![vec![E::zero(1); 2]; 2]; 2];
        c[0][1][0] = x.clone();
        c[1][0][0] = -x.clone();
        let zero_anchor = vec![vec![E::zero(1), E::zero(1)]];
        let a = AlgebroidPatch::new(p.clone(), Kind::Vector, zero_anchor, c.clone()).unwrap();
        assert_eq!(validate_algebroid(&a).status, Status::Pass);
        let anchor = vec![vec![E::one(1), E::zero(1)]];
        let b = AlgebroidPatch::new(p, Kind::Vector, anchor, c).unwrap();
        let rep = validate_algebroid(&b);
        assert_eq!(rep.status, Status::Fail);
        let w = rep.witness.unwrap();
        assert_eq!(w.residue, Residue::Scalar(x));
    }

    #[test]
    fn antisymmetry_is_enforced() {
        let p = Patch::new(Vec::<String>::new()).unwrap();
        let mut c = vec![vec![vec![E::zero(0); 2]; 2]; 2];
        c[0][1][0] = E::one(0);
        assert_eq!(
            AlgebroidPatch::new(p, Kind::Vector, vec![], c).unwrap_err(),
            AlgebroidError::NotAntisymmetric(2, 1)
        );
    }

    #[test]
    fn lifts_with_zero_phi0() {
        let j = JacobiAlgebroid::untwisted(plane());
        let bar = lift_bar(&j).unwrap();
        let hat = lift_hat(&j).unwrap();
        assert!(bar.patch().is_lifted());
        assert_eq!(bar.structure(), plane().structure());
        assert!(bar.anchor_entry(0, Var::T).is_zero());
        assert_eq!(hat.anchor_entry(0, Var::X(0)), &E::exp(2, -1));
        assert_eq!(validate_algebroid(&bar).status, Status::Pass);
        assert_eq!(validate_algebroid(&hat).status, Status::Pass);
    }

    #[test]
    fn reserved_and_duplicate_names() {
        assert!(Patch::new(["t"]).is_err());
        assert!(Patch::new(["x", "x"]).is_err());
        assert!(Patch::new([""]).is_err());
    }
}
