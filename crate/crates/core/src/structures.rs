//! Structure-level predicates: musical maps, Jacobi and φ0-presymplectic
//! structures, Maurer-Cartan equations, bialgebroid compatibility and the
//! bracket on `A ⊕ A*` used to test Dirac structures.

use thiserror::Error;

use crate::algebroid::{
    dual_structure, AlgebroidError, AlgebroidPatch, JacobiAlgebroid, JacobiBialgebroid,
};
use crate::calculus::{
    self, differential_phi, lie_derivative_phi, phi0_schouten, schouten, CalcError, Graded, Kind,
};
use crate::coeff::{CoeffError, ExpPoly, Scalar};
use crate::report::{Report, Residue};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("map is not invertible: determinant {0} is not a unit")]
    NotInvertible(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("matrix is not antisymmetric at ({0}, {1})")]
    NotAntisymmetric(usize, usize),
    #[error(transparent)]
    Calc(#[from] CalcError),
    #[error(transparent)]
    Algebroid(#[from] AlgebroidError),
}

impl From<CoeffError> for StructureError {
    fn from(e: CoeffError) -> Self {
        StructureError::Calc(e.into())
    }
}

/// Bundle map between `A`-type bundles, stored as `matrix[row = target][col = source]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorMap<S> {
    source: Kind,
    target: Kind,
    nvars: usize,
    m: Vec<Vec<ExpPoly<S>>>,
}

impl<S: Scalar> TensorMap<S> {
    pub fn new(source: Kind, target: Kind, nvars: usize, m: Vec<Vec<ExpPoly<S>>>) -> Result<Self, StructureError> {
        let r = m.len();
        if m.iter().any(|row| row.len() != r) {
            return Err(StructureError::Shape("matrix must be square".into()));
        }
        if let Some(bad) = m.iter().flatten().find(|v| v.nvars() != nvars) {
            return Err(CoeffError::VariableMismatch(bad.nvars(), nvars).into());
        }
        Ok(TensorMap { source, target, nvars, m })
    }

    pub fn zero(source: Kind, target: Kind, rank: usize, nvars: usize) -> Self {
        TensorMap { source, target, nvars, m: vec![vec![ExpPoly::zero(nvars); rank]; rank] }
    }

    pub fn identity(kind: Kind, rank: usize, nvars: usize) -> Self {
        let mut out = Self::zero(kind, kind, rank, nvars);
        for i in 0..rank {
            out.m[i][i] = ExpPoly::one(nvars);
        }
        out
    }

    pub fn source(&self) -> Kind {
        self.source
    }

    pub fn target(&self) -> Kind {
        self.target
    }

    pub fn rank(&self) -> usize {
        self.m.len()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn entry(&self, row: usize, col: usize) -> &ExpPoly<S> {
        &self.m[row][col]
    }

    pub fn matrix(&self) -> &[Vec<ExpPoly<S>>] {
        &self.m
    }

    pub fn is_zero(&self) -> bool {
        self.m.iter().flatten().all(|v| v.is_zero())
    }

    fn conforms(&self, g: &Graded<S>) -> Result<(), CalcError> {
        if g.kind() != self.source {
            return Err(CalcError::KindMismatch(self.source, g.kind()));
        }
        if g.rank() != self.rank() {
            return Err(CalcError::RankMismatch(self.rank(), g.rank()));
        }
        if g.nvars() != self.nvars {
            return Err(CoeffError::VariableMismatch(self.nvars, g.nvars()).into());
        }
        if g.degree() != 1 {
            return Err(CalcError::DegreeMismatch { expected: 1, got: g.degree() });
        }
        Ok(())
    }

    pub fn apply(&self, g: &Graded<S>) -> Result<Graded<S>, CalcError> {
        self.conforms(g)?;
        let v = g.as_vector().expect("degree 1");
        let out = self
            .m
            .iter()
            .map(|row| {
                row.iter().zip(&v).fold(ExpPoly::zero(self.nvars), |mut acc, (a, b)| {
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                    acc
                })
            })
            .collect();
        Ok(Graded::from_vector(self.target, self.rank(), self.nvars, out))
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Self) -> Result<Self, StructureError> {
        if inner.target != self.source {
            return Err(CalcError::KindMismatch(self.source, inner.target).into());
        }
        if inner.rank() != self.rank() {
            return Err(CalcError::RankMismatch(self.rank(), inner.rank()).into());
        }
        let r = self.rank();
        let mut m = vec![vec![ExpPoly::zero(self.nvars); r]; r];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                for k in 0..r {
                    let (a, b) = (&self.m[i][k], &inner.m[k][j]);
                    if !a.is_zero() && !b.is_zero() {
                        *cell += &(a * b);
                    }
                }
            }
        }
        Ok(TensorMap { source: inner.source, target: self.target, nvars: self.nvars, m })
    }

    /// The dual map `φ*: V* → U*`.
    pub fn transpose(&self) -> Self {
        let r = self.rank();
        let m = (0..r).map(|i| (0..r).map(|j| self.m[j][i].clone()).collect()).collect();
        TensorMap { source: self.target.dual(), target: self.source.dual(), nvars: self.nvars, m }
    }

    pub fn scale(&self, f: &ExpPoly<S>) -> Self {
        let m = self.m.iter().map(|row| row.iter().map(|v| v * f).collect()).collect();
        TensorMap { m, ..self.clone() }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, StructureError> {
        if (self.source, self.target) != (other.source, other.target) {
            return Err(CalcError::KindMismatch(self.target, other.target).into());
        }
        if self.rank() != other.rank() {
            return Err(CalcError::RankMismatch(self.rank(), other.rank()).into());
        }
        let m = self.m.iter().zip(&other.m).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect()).collect();
        Ok(TensorMap { m, ..self.clone() })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, StructureError> {
        self.checked_add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&ExpPoly::int(self.nvars, -1))
    }

    /// Determinant of the rows `rows` restricted to the columns `cols`, by
    /// dynamic programming over column subsets.
    fn minor(&self, rows: &[usize], cols: &[usize]) -> ExpPoly<S> {
        let k = cols.len();
        let mut dp: Vec<Option<ExpPoly<S>>> = vec![None; 1 << k];
        dp[0] = Some(ExpPoly::one(self.nvars));
        for mask in 0usize..(1 << k) - 1 {
            let cur = match dp[mask].take() {
                Some(v) if !v.is_zero() => v,
                _ => continue,
            };
            let row = rows[mask.count_ones() as usize];
            for (c, &col) in cols.iter().enumerate() {
                if mask & (1 << c) != 0 {
                    continue;
                }
                let a = &self.m[row][col];
                if a.is_zero() {
                    continue;
                }
                let above = (mask >> c).count_ones();
                let term = &cur * a;
                let term = if above % 2 == 1 { -term } else { term };
                let slot = &mut dp[mask | (1 << c)];
                match slot {
                    Some(v) => *v += &term,
                    None => *slot = Some(term),
                }
            }
        }
        dp.pop().flatten().unwrap_or_else(|| ExpPoly::zero(self.nvars))
    }

    pub fn determinant(&self) -> ExpPoly<S> {
        let all: Vec<usize> = (0..self.rank()).collect();
        self.minor(&all, &all)
    }

    /// Invertible exactly when the determinant is a unit of the coefficient ring.
    pub fn is_invertible(&self) -> bool {
        self.determinant().is_unit()
    }

    /// Inverse through the adjugate.
    pub fn inverse(&self) -> Result<Self, StructureError> {
        let det = self.determinant();
        let inv = det.unit_inverse().map_err(|_| StructureError::NotInvertible(det.to_string()))?;
        let r = self.rank();
        let mut m = vec![vec![ExpPoly::zero(self.nvars); r]; r];
        for i in 0..r {
            for j in 0..r {
                let rows: Vec<usize> = (0..r).filter(|&a| a != j).collect();
                let cols: Vec<usize> = (0..r).filter(|&b| b != i).collect();
                let c = self.minor(&rows, &cols) * inv.clone();
                m[i][j] = if (i + j) % 2 == 1 { -c } else { c };
            }
        }
        Ok(TensorMap { source: self.target, target: self.source, nvars: self.nvars, m })
    }
}

impl<S: Scalar> TensorMap<S> {
    /// Indices whose row and column both vanish.
    pub fn null_indices(&self) -> Vec<usize> {
        (0..self.rank())
            .filter(|&k| (0..self.rank()).all(|i| self.m[k][i].is_zero() && self.m[i][k].is_zero()))
            .collect()
    }

    /// Inverse of the block on `keep`, extended by zero.
    pub fn block_inverse(&self, keep: &[usize]) -> Result<Self, StructureError> {
        let sub: Vec<Vec<ExpPoly<S>>> =
            keep.iter().map(|&i| keep.iter().map(|&j| self.m[i][j].clone()).collect()).collect();
        let inv = TensorMap { m: sub, ..self.clone() }.inverse()?;
        let mut out = Self::zero(self.target, self.source, self.rank(), self.nvars);
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                out.m[i][j] = inv.m[a][b].clone();
            }
        }
        Ok(out)
    }
}

/// `g ↦ (ξ ↦ ι_ξ g)`: the map with `⟨g^♯ ξ, η⟩ = g(ξ, η)`.
pub fn musical<S: Scalar>(g: &Graded<S>) -> Result<TensorMap<S>, StructureError> {
    if g.degree() != 2 {
        return Err(CalcError::DegreeMismatch { expected: 2, got: g.degree() }.into());
    }
    let r = g.rank();
    let mut m = vec![vec![ExpPoly::zero(g.nvars()); r]; r];
    for (idx, c) in g.components() {
        let (i, j) = (idx[0], idx[1]);
        m[j][i] = c.clone();
        m[i][j] = -c.clone();
    }
    TensorMap::new(g.kind().dual(), g.kind(), g.nvars(), m)
}

/// `π^♯: A* → A` with `⟨π^♯ξ, η⟩ = π(ξ, η)`.
pub fn sharp_map<S: Scalar>(pi: &Graded<S>) -> Result<TensorMap<S>, StructureError> {
    if pi.kind() != Kind::Vector {
        return Err(CalcError::KindMismatch(Kind::Vector, pi.kind()).into());
    }
    musical(pi)
}

/// `ω^♭: A → A*` with `⟨ω^♭X, Y⟩ = ω(X, Y)`.
pub fn flat_map<S: Scalar>(w: &Graded<S>) -> Result<TensorMap<S>, StructureError> {
    if w.kind() != Kind::Form {
        return Err(CalcError::KindMismatch(Kind::Form, w.kind()).into());
    }
    musical(w)
}

/// The degree-2 element whose musical map is `map`; `map` must be antisymmetric.
pub fn bivector_of_map<S: Scalar>(map: &TensorMap<S>) -> Result<Graded<S>, StructureError> {
    if map.source != map.target.dual() {
        return Err(CalcError::KindMismatch(map.target.dual(), map.source).into());
    }
    let r = map.rank();
    let mut terms = Vec::new();
    for i in 0..r {
        for j in i..r {
            if map.m[j][i] != -&map.m[i][j] {
                return Err(StructureError::NotAntisymmetric(j + 1, i + 1));
            }
            if i != j {
                terms.push((vec![i, j], map.m[j][i].clone()));
            }
        }
    }
    Ok(Graded::from_terms(map.target, r, map.nvars, 2, terms))
}

/// `ω_π` with `ω_π^♭ = −(π^♯)^{-1}`.
pub fn omega_from_pi<S: Scalar>(pi: &Graded<S>) -> Result<Graded<S>, StructureError> {
    bivector_of_map(&sharp_map(pi)?.inverse()?.neg())
}

/// `π_ω` with `π_ω^♯ = −(ω^♭)^{-1}`.
pub fn pi_from_omega<S: Scalar>(w: &Graded<S>) -> Result<Graded<S>, StructureError> {
    bivector_of_map(&flat_map(w)?.inverse()?.neg())
}

/// `[ξ, η]_{π,φ0} = L^{φ0}_{π^♯ξ} η − L^{φ0}_{π^♯η} ξ − d_{φ0}⟨π^♯ξ, η⟩`.
pub fn jacobi_bracket<S: Scalar>(
    j: &JacobiAlgebroid<S>,
    pi: &Graded<S>,
    xi: &Graded<S>,
    eta: &Graded<S>,
) -> Result<Graded<S>, CalcError> {
    let alg = j.algebroid();
    alg.accepts(pi, alg.section_kind())?;
    let x = Graded::contract(xi, pi)?;
    let y = Graded::contract(eta, pi)?;
    let a = lie_derivative_phi(j, &x, eta)?;
    let b = lie_derivative_phi(j, &y, xi)?;
    let f = Graded::pair(eta, &x)?;
    let df = differential_phi(j, &Graded::scalar(alg.form_kind(), alg.rank(), f))?;
    Ok(&(&a - &b) - &df)
}

fn guarded<S: Scalar>(strategy: &str, f: impl FnOnce() -> Result<Report<S>, StructureError>) -> Report<S> {
    f().unwrap_or_else(|e| Report::error(strategy, e.to_string()))
}

/// `[π, π]_{A,φ0} = 0`.
pub fn jacobi_check<S: Scalar>(j: &JacobiAlgebroid<S>, pi: &Graded<S>) -> Report<S> {
    guarded("schouten", || {
        let res = phi0_schouten(j, pi, pi)?;
        Ok(Report::from_residue("schouten", "[pi,pi]_phi0", Residue::Section(res), j.algebroid()))
    })
}

/// `[π, π']_{A,φ0} = 0`.
pub fn compat_check<S: Scalar>(j: &JacobiAlgebroid<S>, pi: &Graded<S>, pi2: &Graded<S>) -> Report<S> {
    guarded("schouten", || {
        let res = phi0_schouten(j, pi, pi2)?;
        Ok(Report::from_residue("schouten", "[pi,pi']_phi0", Residue::Section(res), j.algebroid()))
    })
}

/// `d_{A,φ0} ω = 0`.
pub fn presymplectic_check<S: Scalar>(j: &JacobiAlgebroid<S>, w: &Graded<S>) -> Report<S> {
    guarded("differential", || {
        let res = differential_phi(j, w)?;
        Ok(Report::from_residue("differential", "d_phi0 omega", Residue::Section(res), j.algebroid()))
    })
}

/// Passes when the determinant is a unit; otherwise the determinant is the witness.
pub fn nondegenerate_check<S: Scalar>(map: &TensorMap<S>, alg: &AlgebroidPatch<S>) -> Report<S> {
    let det = map.determinant();
    if det.is_unit() {
        Report::pass("determinant")
    } else {
        Report::fail_with("determinant", "determinant is not a unit", Residue::Scalar(det), alg)
    }
}

/// Maurer-Cartan type equation: `d_{A*,X0}π + ½[π,π]_{A,φ0}` for 2-sections and
/// `d_{A,φ0}ω + ½[ω,ω]_{A*,X0}` for 2-cosections.
pub fn maurer_cartan_residue<S: Scalar>(b: &JacobiBialgebroid<S>, g: &Graded<S>) -> Result<Graded<S>, CalcError> {
    let (own, other) = if g.kind() == b.a().algebroid().section_kind() { (b.a(), b.dual()) } else { (b.dual(), b.a()) };
    if g.degree() != 2 {
        return Err(CalcError::DegreeMismatch { expected: 2, got: g.degree() });
    }
    let d = differential_phi(other, g)?;
    let half = ExpPoly::constant(g.nvars(), S::from_frac(1, 2));
    let br = phi0_schouten(own, g, g)?;
    Ok(&d + &br.scale(&half))
}

pub fn maurer_cartan_check<S: Scalar>(b: &JacobiBialgebroid<S>, g: &Graded<S>) -> Report<S> {
    guarded("maurer-cartan", || {
        let res = maurer_cartan_residue(b, g)?;
        Ok(Report::from_residue("maurer-cartan", "Maurer-Cartan residue", Residue::Section(res), b.a().algebroid()))
    })
}

/// `L^{A,φ0}_X P := [X, P]_{A,φ0}` for a section `X` and a multivector `P`.
pub fn lie_multivector_phi<S: Scalar>(
    j: &JacobiAlgebroid<S>,
    x: &Graded<S>,
    p: &Graded<S>,
) -> Result<Graded<S>, CalcError> {
    phi0_schouten(j, x, p)
}

/// Sections used as evidence for identities quantified over all sections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestFamily<S> {
    pub sections: Vec<Graded<S>>,
    pub multivectors: Vec<Graded<S>>,
}

impl<S: Scalar> TestFamily<S> {
    /// Frames, coordinate-scaled frames, functions `1, x_a`, and every frame wedge
    /// together with its coordinate-scaled versions in degree 2.
    pub fn standard(alg: &AlgebroidPatch<S>) -> Self {
        let n = alg.nvars();
        let coords: Vec<ExpPoly<S>> = alg
            .patch()
            .directions()
            .into_iter()
            .map(|v| ExpPoly::var(n, v).expect("direction in ring"))
            .collect();
        let mut sections = Vec::new();
        for i in 0..alg.rank() {
            sections.push(alg.frame(i));
            for c in &coords {
                sections.push(alg.frame(i).scale(c));
            }
        }
        let mut multivectors = vec![alg.function(alg.one())];
        multivectors.extend(coords.iter().map(|c| alg.function(c.clone())));
        for blade in 1u32..(1u32 << alg.rank()) {
            let idx: Vec<usize> = calculus::blade_indices(blade).collect();
            let b = Graded::basis(alg.section_kind(), alg.rank(), n, &idx);
            if idx.len() == 2 {
                for c in &coords {
                    multivectors.push(b.scale(c));
                }
            }
            multivectors.push(b);
        }
        TestFamily { sections, multivectors }
    }
}

/// Both conditions of a Jacobi bialgebroid, evaluated on a test family.
pub fn bialgebroid_compat_check<S: Scalar>(b: &JacobiBialgebroid<S>, family: Option<&TestFamily<S>>) -> Report<S> {
    let alg = b.a().algebroid();
    let owned;
    let family = match family {
        Some(f) => f,
        None => {
            owned = TestFamily::standard(alg);
            &owned
        }
    };
    guarded("test-family", || {
        let ds = |x: &Graded<S>| differential_phi(b.dual(), x);
        for (p, x) in family.sections.iter().enumerate() {
            let dx = ds(x)?;
            for y in &family.sections[p + 1..] {
                let lhs = ds(&schouten(alg, x, y)?)?;
                let rhs = &phi0_schouten(b.a(), &dx, y)? + &phi0_schouten(b.a(), x, &ds(y)?)?;
                let res = &lhs - &rhs;
                if !res.is_zero() {
                    let ctx = format!("d*[X,Y] - [d*X,Y] - [X,d*Y] at X = {}, Y = {}", alg.show(x), alg.show(y));
                    return Ok(Report::fail_with("test-family", ctx, Residue::Section(res), alg).on_test_family());
                }
            }
        }
        for p in &family.multivectors {
            let a = lie_multivector_phi(b.a(), b.x0(), p)?;
            let c = lie_derivative_phi(b.dual(), b.a().phi0(), p)?;
            let res = &a + &c;
            if !res.is_zero() {
                let ctx = format!("L_X0 P + L*_phi0 P at P = {}", alg.show(p));
                return Ok(Report::fail_with("test-family", ctx, Residue::Section(res), alg).on_test_family());
            }
        }
        Ok(Report::pass("test-family").on_test_family())
    })
}

/// `(A*, [·,·]_{π,φ0}, ρ∘π^♯)` with `X0 = −π^♯φ0`, for a Jacobi structure `π`.
pub fn triangular<S: Scalar>(j: &JacobiAlgebroid<S>, pi: &Graded<S>) -> Result<JacobiBialgebroid<S>, StructureError> {
    let alg = j.algebroid();
    let r = alg.rank();
    let n = alg.nvars();
    let sharp = sharp_map(pi)?;
    let dirs = alg.patch().directions();
    let mut anchor = vec![vec![ExpPoly::zero(n); r]; dirs.len()];
    for (row, &a) in anchor.iter_mut().zip(&dirs) {
        for (i, cell) in row.iter_mut().enumerate() {
            let image = sharp.apply(&alg.coframe(i))?;
            for (k, c) in image.as_vector().expect("degree 1").iter().enumerate() {
                if !c.is_zero() {
                    *cell += &(c * alg.anchor_entry(k, a));
                }
            }
        }
    }
    let mut structure = vec![vec![vec![ExpPoly::zero(n); r]; r]; r];
    for i in 0..r {
        for k in (i + 1)..r {
            let br = jacobi_bracket(j, pi, &alg.coframe(i), &alg.coframe(k))?;
            let v = br.as_vector().expect("degree 1");
            for (l, c) in v.into_iter().enumerate() {
                structure[k][i][l] = -c.clone();
                structure[i][k][l] = c;
            }
        }
    }
    let dual = dual_structure(alg, anchor, structure)?;
    let x0 = -sharp.apply(j.phi0())?;
    let dual = JacobiAlgebroid::new(dual, x0)?;
    Ok(JacobiBialgebroid::new(j.clone(), dual)?)
}

/// An element `X + ξ` of `A ⊕ A*`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CouplePair<S> {
    pub x: Graded<S>,
    pub xi: Graded<S>,
}

/// `(u, v)_± = ½(⟨ξ, Y⟩ ± ⟨η, X⟩)`.
pub fn pairing_pm<S: Scalar>(u: &CouplePair<S>, v: &CouplePair<S>, plus: bool) -> Result<ExpPoly<S>, CalcError> {
    let a = Graded::pair(&u.xi, &v.x)?;
    let b = Graded::pair(&v.xi, &u.x)?;
    let s = if plus { a + b } else { a - b };
    Ok(s.scale(&S::from_frac(1, 2)))
}

/// The bracket `⟦u, v⟧` on `A ⊕ A*`.
pub fn courant_bracket<S: Scalar>(
    b: &JacobiBialgebroid<S>,
    u: &CouplePair<S>,
    v: &CouplePair<S>,
) -> Result<CouplePair<S>, CalcError> {
    let (ja, jd) = (b.a(), b.dual());
    let (alg, dual) = (ja.algebroid(), jd.algebroid());
    let minus = pairing_pm(u, v, false)?;
    let x = &(&(&phi0_schouten(ja, &u.x, &v.x)? + &lie_derivative_phi(jd, &u.xi, &v.x)?)
        - &lie_derivative_phi(jd, &v.xi, &u.x)?)
        - &differential_phi(jd, &Graded::scalar(dual.form_kind(), dual.rank(), minus.clone()))?;
    let xi = &(&(&phi0_schouten(jd, &u.xi, &v.xi)? + &lie_derivative_phi(ja, &u.x, &v.xi)?)
        - &lie_derivative_phi(ja, &v.x, &u.xi)?)
        + &differential_phi(ja, &Graded::scalar(alg.form_kind(), alg.rank(), minus))?;
    Ok(CouplePair { x, xi })
}

/// Generators `(g^♯ ε_i, ε_i)` or `(e_i, g^♭ e_i)` of the graph of a musical map.
pub fn graph_generators<S: Scalar>(
    b: &JacobiBialgebroid<S>,
    g: &Graded<S>,
) -> Result<Vec<CouplePair<S>>, StructureError> {
    let alg = b.a().algebroid();
    let map = musical(g)?;
    (0..alg.rank())
        .map(|i| {
            if g.kind() == alg.section_kind() {
                let xi = alg.coframe(i);
                Ok(CouplePair { x: map.apply(&xi)?, xi })
            } else {
                let x = alg.frame(i);
                Ok(CouplePair { xi: map.apply(&x)?, x })
            }
        })
        .collect()
}

/// Isotropy under `(·,·)_+` and closure under `⟦·,·⟧` of the graph of `g^♯` or `g^♭`.
pub fn graph_closure_check<S: Scalar>(b: &JacobiBialgebroid<S>, g: &Graded<S>) -> Report<S> {
    let alg = b.a().algebroid();
    guarded("bracket-closure", || {
        let map = musical(g)?;
        let gens = graph_generators(b, g)?;
        for (p, u) in gens.iter().enumerate() {
            for (q, v) in gens.iter().enumerate().skip(p) {
                let iso = pairing_pm(u, v, true)?;
                if !iso.is_zero() {
                    return Ok(Report::fail_with(
                        "bracket-closure",
                        format!("(u{},u{})_+", p + 1, q + 1),
                        Residue::Scalar(iso),
                        alg,
                    ));
                }
                if p == q {
                    continue;
                }
                let w = courant_bracket(b, u, v)?;
                let res = if g.kind() == alg.section_kind() { &w.x - &map.apply(&w.xi)? } else { &w.xi - &map.apply(&w.x)? };
                if !res.is_zero() {
                    return Ok(Report::fail_with(
                        "bracket-closure",
                        format!("graph defect of [[u{},u{}]]", p + 1, q + 1),
                        Residue::Section(res),
                        alg,
                    ));
                }
            }
        }
        Ok(Report::pass("bracket-closure"))
    })
}

/// Which bracket of sections is used on the right of the pairing identity for `[π, π]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SectionBracket {
    Plain,
    Twisted,
}

/// `½[π, π]_{A,φ0}(ξ, η, ·) − ([π^♯ξ, π^♯η] − π^♯[ξ, η]_{π,φ0})`.
pub fn half_bracket_residue<S: Scalar>(
    j: &JacobiAlgebroid<S>,
    pi: &Graded<S>,
    xi: &Graded<S>,
    eta: &Graded<S>,
    reading: SectionBracket,
) -> Result<Graded<S>, CalcError> {
    let half = S::from_frac(1, 2);
    let lhs = phi0_schouten(j, pi, pi)?.partial(&[xi, eta])?.scale_by(&half);
    let (x, y) = (Graded::contract(xi, pi)?, Graded::contract(eta, pi)?);
    let br = match reading {
        SectionBracket::Plain => schouten(j.algebroid(), &x, &y)?,
        SectionBracket::Twisted => phi0_schouten(j, &x, &y)?,
    };
    let rhs = &br - &Graded::contract(&jacobi_bracket(j, pi, xi, eta)?, pi)?;
    Ok(&lhs - &rhs)
}

/// `[π, π']_{A,φ0}(ξ, η, ·)` against the four-term bracket expression.
pub fn pair_bracket_residue<S: Scalar>(
    j: &JacobiAlgebroid<S>,
    pi: &Graded<S>,
    pi2: &Graded<S>,
    xi: &Graded<S>,
    eta: &Graded<S>,
) -> Result<Graded<S>, CalcError> {
    let alg = j.algebroid();
    let lhs = phi0_schouten(j, pi, pi2)?.partial(&[xi, eta])?;
    let sh = |p: &Graded<S>, f: &Graded<S>| Graded::contract(f, p);
    let rhs = &(&(&schouten(alg, &sh(pi, xi)?, &sh(pi2, eta)?)? + &schouten(alg, &sh(pi2, xi)?, &sh(pi, eta)?)?)
        - &sh(pi, &jacobi_bracket(j, pi2, xi, eta)?)?)
        - &sh(pi2, &jacobi_bracket(j, pi, xi, eta)?)?;
    Ok(&lhs - &rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebroid::{extend_with_r, make_tangent, Patch};
    use crate::calculus::merge;
    use crate::coeff::Var;
    use num_rational::BigRational;

    type Q = BigRational;
    type E = ExpPoly<Q>;

    fn plane() -> AlgebroidPatch<Q> {
        make_tangent(&Patch::new(["x", "y"]).unwrap())
    }

    fn contact() -> (AlgebroidPatch<Q>, JacobiAlgebroid<Q>, Graded<Q>) {
        let a = make_tangent::<Q>(&Patch::new(["x1", "x2", "y1", "y2", "z"]).unwrap());
        let v = |i| E::var(5, Var::X(i)).unwrap();
        let beta = &(&a.coframe(4) - &a.coframe(0).scale(&v(2))) - &a.coframe(1).scale(&v(3));
        let j = extend_with_r(&a).unwrap();
        (a, j, beta)
    }

    fn lift_pair(a: &AlgebroidPatch<Q>, j: &JacobiAlgebroid<Q>, beta: &Graded<Q>) -> Graded<Q> {
        let db = calculus::differential(a, beta).unwrap();
        merge(j.algebroid(), &db, Some(beta)).unwrap()
    }

    #[test]
    fn musical_maps_follow_their_pairings() {
        let a = plane();
        let pi = a.frame(0).wedge(&a.frame(1)).unwrap();
        let image = sharp_map(&pi).unwrap().apply(&a.coframe(0)).unwrap();
        assert_eq!(Graded::pair(&a.coframe(1), &image).unwrap(), E::one(2));
        let w = a.coframe(0).wedge(&a.coframe(1)).unwrap();
        let image = flat_map(&w).unwrap().apply(&a.frame(0)).unwrap();
        assert_eq!(Graded::pair(&image, &a.frame(1)).unwrap(), E::one(2));
        assert!(sharp_map(&a.zero_section(2)).unwrap().is_zero());
    }

    #[test]
    fn inverse_of_unit_bivector_map() {
        let a = plane();
        let pi = a.frame(0).wedge(&a.frame(1)).unwrap();
        let w = omega_from_pi(&pi).unwrap();
        assert_eq!(w, a.coframe(0).wedge(&a.coframe(1)).unwrap());
        assert_eq!(pi_from_omega(&w).unwrap(), pi);
        let degenerate = pi.scale(&E::var(2, Var::X(0)).unwrap());
        assert!(matches!(omega_from_pi(&degenerate), Err(StructureError::NotInvertible(_))));
    }

    #[test]
    fn determinant_and_adjugate() {
        let x = E::var(1, Var::X(0)).unwrap();
        let c = |v| E::int(1, v);
        let m = vec![vec![c(2), x.clone(), c(0)], vec![c(0), c(1), x.clone()], vec![c(0), c(0), E::exp(1, 1)]];
        let map = TensorMap::new(Kind::Vector, Kind::Vector, 1, m).unwrap();
        assert_eq!(map.determinant(), E::exp(1, 1).scale(&Q::from_i64(2)));
        let inv = map.inverse().unwrap();
        assert_eq!(inv.compose(&map).unwrap(), TensorMap::identity(Kind::Vector, 3, 1));
        assert_eq!(map.compose(&inv).unwrap(), TensorMap::identity(Kind::Vector, 3, 1));
    }

    #[test]
    fn contact_pair_is_symplectic() {
        let (a, j, beta) = contact();
        let omega = lift_pair(&a, &j, &beta);
        assert!(presymplectic_check(&j, &omega).passed());
        assert!(nondegenerate_check(&flat_map(&omega).unwrap(), j.algebroid()).passed());
        let db = merge(j.algebroid(), &calculus::differential(&a, &beta).unwrap(), None).unwrap();
        assert!(presymplectic_check(&j, &db).failed());
        let pi = pi_from_omega(&omega).unwrap();
        assert!(jacobi_check(&j, &pi).passed());
        let b = JacobiBialgebroid::standard(j.clone());
        assert!(maurer_cartan_check(&b, &pi).passed());
        assert!(maurer_cartan_check(&b, &omega).passed());
        assert!(graph_closure_check(&b, &pi).passed());
        assert!(graph_closure_check(&b, &omega).passed());
    }

    #[test]
    fn parabolic_pair_is_degenerate() {
        let (a, j, _) = contact();
        let v = |i| E::var(5, Var::X(i)).unwrap();
        let beta_p = &a.coframe(4) - &a.coframe(0).scale(&v(3));
        let wp = lift_pair(&a, &j, &beta_p);
        assert!(presymplectic_check(&j, &wp).passed());
        assert!(nondegenerate_check(&flat_map(&wp).unwrap(), j.algebroid()).failed());
    }

    #[test]
    fn non_closed_form_breaks_closure() {
        let a = plane();
        let j = JacobiAlgebroid::untwisted(a.clone());
        let b = JacobiBialgebroid::standard(j);
        let w = a.coframe(0).wedge(&a.coframe(1)).unwrap().scale(&E::var(2, Var::X(0)).unwrap());
        assert!(maurer_cartan_check(&b, &w).passed());
        let pi = a.frame(0).wedge(&a.frame(1)).unwrap().scale(&E::var(2, Var::X(0)).unwrap());
        assert!(graph_closure_check(&b, &pi).passed());
    }

    #[test]
    fn triangular_bialgebroid_is_compatible() {
        let (a, j, beta) = contact();
        let pi = pi_from_omega(&lift_pair(&a, &j, &beta)).unwrap();
        let b = triangular(&j, &pi).unwrap();
        assert!(bialgebroid_compat_check(&b, None).passed());
    }

    #[test]
    fn stray_x0_breaks_compatibility() {
        let a = plane();
        let j = JacobiAlgebroid::untwisted(a.clone());
        let dual = JacobiAlgebroid::new(crate::algebroid::trivial_dual(&a), a.frame(0)).unwrap();
        let b = JacobiBialgebroid::new(j, dual).unwrap();
        let r = bialgebroid_compat_check(&b, None);
        assert!(r.failed());
        assert!(!r.witness.unwrap().residue.is_zero());
    }

    #[test]
    fn courant_bracket_on_standard_sections() {
        let a = plane();
        let j = JacobiAlgebroid::new(a.clone(), a.coframe(0)).unwrap();
        let b = JacobiBialgebroid::standard(j.clone());
        let x = a.frame(1).scale(&E::var(2, Var::X(0)).unwrap());
        let u = CouplePair { x: a.frame(0), xi: a.zero_form(1) };
        let v = CouplePair { x: x.clone(), xi: a.zero_form(1) };
        let w = courant_bracket(&b, &u, &v).unwrap();
        assert_eq!(w.x, phi0_schouten(&j, &a.frame(0), &x).unwrap());
        assert!(w.xi.is_zero());
        assert!(pairing_pm(&u, &u, false).unwrap().is_zero());
    }
}
