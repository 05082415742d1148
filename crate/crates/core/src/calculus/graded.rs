use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::coeff::{CoeffError, ExpPoly, Scalar};

use super::CalcError;

/// Which bundle a graded section lives in: `ΛA` (vectors) or `ΛA*` (forms).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Vector,
    Form,
}

impl Kind {
    pub fn dual(self) -> Kind {
        match self {
            Kind::Vector => Kind::Form,
            Kind::Form => Kind::Vector,
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Vector => "multivector",
            Kind::Form => "form",
        })
    }
}

/// Bit set of frame indices; bit `i` is the 0-based frame index `i`.
pub type Blade = u32;

pub(crate) fn blade_indices(b: Blade) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| b & (1 << i) != 0)
}

/// Sign of `e_a ∧ e_b` relative to `e_{a ∪ b}` for disjoint blades.
pub(crate) fn wedge_sign(a: Blade, b: Blade) -> bool {
    let mut parity = 0u32;
    for j in blade_indices(b) {
        parity += (a >> (j + 1)).count_ones();
    }
    parity % 2 == 1
}

/// Sorts `idx` into a blade; `None` when an index repeats. The flag is true for an odd permutation.
pub(crate) fn blade_of(idx: &[usize]) -> Option<(Blade, bool)> {
    let mut blade = 0u32;
    let mut neg = false;
    for &i in idx {
        if blade & (1 << i) != 0 {
            return None;
        }
        neg ^= wedge_sign(blade, 1 << i);
        blade |= 1 << i;
    }
    Some((blade, neg))
}

/// Homogeneous section of `Λ^k A` or `Λ^k A*` in frame components.
///
/// Components are keyed by strictly increasing index sets; zero components are
/// never stored, so the zero section is the empty map.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graded<S> {
    kind: Kind,
    rank: usize,
    nvars: usize,
    degree: usize,
    comps: BTreeMap<Blade, ExpPoly<S>>,
}

/// Section of `Λ^k A`.
pub type MultiVector<S> = Graded<S>;
/// Section of `Λ^k A*`.
pub type Form<S> = Graded<S>;

impl<S: Scalar> Graded<S> {
    pub fn zero(kind: Kind, rank: usize, nvars: usize, degree: usize) -> Self {
        assert!(rank <= 32, "rank above 32 is not supported");
        Graded { kind, rank, nvars, degree, comps: BTreeMap::new() }
    }

    pub fn scalar(kind: Kind, rank: usize, f: ExpPoly<S>) -> Self {
        let mut out = Self::zero(kind, rank, f.nvars(), 0);
        out.add_blade(0, f);
        out
    }

    /// `e_{i_1} ∧ ... ∧ e_{i_k}` (0-based indices, any order).
    pub fn basis(kind: Kind, rank: usize, nvars: usize, idx: &[usize]) -> Self {
        let mut out = Self::zero(kind, rank, nvars, idx.len());
        assert!(idx.iter().all(|&i| i < rank), "frame index out of range");
        if let Some((b, neg)) = blade_of(idx) {
            let one = ExpPoly::int(nvars, if neg { -1 } else { 1 });
            out.add_blade(b, one);
        }
        out
    }

    pub fn from_vector(kind: Kind, rank: usize, nvars: usize, comps: Vec<ExpPoly<S>>) -> Self {
        assert_eq!(comps.len(), rank);
        let mut out = Self::zero(kind, rank, nvars, 1);
        for (i, c) in comps.into_iter().enumerate() {
            out.add_blade(1 << i, c);
        }
        out
    }

    /// Builds from `(indices, coefficient)` pairs, reordering indices with sign.
    pub fn from_terms(
        kind: Kind,
        rank: usize,
        nvars: usize,
        degree: usize,
        terms: impl IntoIterator<Item = (Vec<usize>, ExpPoly<S>)>,
    ) -> Self {
        let mut out = Self::zero(kind, rank, nvars, degree);
        for (idx, c) in terms {
            assert_eq!(idx.len(), degree);
            if let Some((b, neg)) = blade_of(&idx) {
                out.add_blade(b, if neg { -c } else { c });
            }
        }
        out
    }

    pub(crate) fn add_blade(&mut self, b: Blade, f: ExpPoly<S>) {
        debug_assert_eq!(b.count_ones() as usize, self.degree);
        if f.is_zero() {
            return;
        }
        match self.comps.get_mut(&b) {
            Some(v) => {
                *v += &f;
                if v.is_zero() {
                    self.comps.remove(&b);
                }
            }
            None => {
                self.comps.insert(b, f);
            }
        }
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn len(&self) -> usize {
        self.comps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    pub(crate) fn blades(&self) -> impl Iterator<Item = (Blade, &ExpPoly<S>)> {
        self.comps.iter().map(|(b, f)| (*b, f))
    }

    pub(crate) fn blade(&self, b: Blade) -> ExpPoly<S> {
        self.comps.get(&b).cloned().unwrap_or_else(|| ExpPoly::zero(self.nvars))
    }

    /// Component along `e_{i_1} ∧ ... ∧ e_{i_k}`, with the sign of the reordering.
    pub fn get(&self, idx: &[usize]) -> ExpPoly<S> {
        match blade_of(idx) {
            Some((b, neg)) if idx.len() == self.degree => {
                let v = self.blade(b);
                if neg {
                    -v
                } else {
                    v
                }
            }
            _ => ExpPoly::zero(self.nvars),
        }
    }

    /// Components in lexicographic order of their index tuples.
    pub fn components(&self) -> Vec<(Vec<usize>, &ExpPoly<S>)> {
        let mut out: Vec<_> = self.comps.iter().map(|(b, f)| (blade_indices(*b).collect::<Vec<_>>(), f)).collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    /// The degree-0 value.
    pub fn as_scalar(&self) -> Option<ExpPoly<S>> {
        (self.degree == 0).then(|| self.blade(0))
    }

    /// The components of a degree-1 value.
    pub fn as_vector(&self) -> Option<Vec<ExpPoly<S>>> {
        (self.degree == 1).then(|| (0..self.rank).map(|i| self.blade(1 << i)).collect())
    }

    pub fn map_coeffs<E>(&self, mut f: impl FnMut(&ExpPoly<S>) -> Result<ExpPoly<S>, E>) -> Result<Self, E> {
        let mut out = Self::zero(self.kind, self.rank, self.nvars, self.degree);
        for (b, c) in &self.comps {
            out.add_blade(*b, f(c)?);
        }
        Ok(out)
    }

    pub fn scale(&self, f: &ExpPoly<S>) -> Self {
        let mut out = Self::zero(self.kind, self.rank, self.nvars, self.degree);
        if f.is_zero() {
            return out;
        }
        for (b, c) in &self.comps {
            out.add_blade(*b, c * f);
        }
        out
    }

    pub fn scale_by(&self, c: &S) -> Self {
        self.scale(&ExpPoly::constant(self.nvars, c.clone()))
    }

    /// Multiplies every component by `e^{kt}`.
    pub fn shift(&self, k: i32) -> Self {
        let mut out = self.clone();
        for v in out.comps.values_mut() {
            *v = v.shift(k);
        }
        out
    }

    pub fn is_time_independent(&self) -> bool {
        self.comps.values().all(|c| c.is_time_independent())
    }

    fn same_space(&self, other: &Self) -> Result<(), CalcError> {
        if self.kind != other.kind {
            return Err(CalcError::KindMismatch(self.kind, other.kind));
        }
        self.same_frame(other)
    }

    pub(crate) fn same_frame(&self, other: &Self) -> Result<(), CalcError> {
        if self.rank != other.rank {
            return Err(CalcError::RankMismatch(self.rank, other.rank));
        }
        if self.nvars != other.nvars {
            return Err(CoeffError::VariableMismatch(self.nvars, other.nvars).into());
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, CalcError> {
        self.same_space(other)?;
        if self.degree != other.degree {
            return Err(CalcError::DegreeMismatch { expected: self.degree, got: other.degree });
        }
        let mut out = self.clone();
        for (b, c) in &other.comps {
            out.add_blade(*b, c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, CalcError> {
        self.checked_add(&-other)
    }

    /// Graded-commutative exterior product.
    pub fn wedge(&self, other: &Self) -> Result<Self, CalcError> {
        self.same_space(other)?;
        let degree = self.degree + other.degree;
        let mut out = Self::zero(self.kind, self.rank, self.nvars, degree);
        if degree > self.rank {
            return Ok(out);
        }
        for (a, fa) in &self.comps {
            for (b, fb) in &other.comps {
                if a & b != 0 {
                    continue;
                }
                let v = fa * fb;
                out.add_blade(a | b, if wedge_sign(*a, *b) { -v } else { v });
            }
        }
        Ok(out)
    }

    /// Left contraction `ι_u self`, for `u` of degree 1 and opposite kind.
    ///
    /// `(ι_u v)(a_2, ..) = v(u, a_2, ..)`. Contracting a degree-0 value is an error.
    pub fn contract(u: &Self, v: &Self) -> Result<Self, CalcError> {
        if v.degree == 0 {
            return Err(CalcError::ZeroDegreeContraction);
        }
        Self::contract_or_zero(u, v)
    }

    pub(crate) fn contract_or_zero(u: &Self, v: &Self) -> Result<Self, CalcError> {
        if u.kind == v.kind {
            return Err(CalcError::KindMismatch(u.kind.dual(), v.kind));
        }
        u.same_frame(v)?;
        if u.degree != 1 {
            return Err(CalcError::DegreeMismatch { expected: 1, got: u.degree });
        }
        let mut out = Self::zero(v.kind, v.rank, v.nvars, v.degree.saturating_sub(1));
        if v.degree == 0 {
            return Ok(out);
        }
        for (b, f) in &v.comps {
            for i in blade_indices(*b) {
                let ui = match u.comps.get(&(1 << i)) {
                    Some(c) => c,
                    None => continue,
                };
                let below = (b & ((1 << i) - 1)).count_ones();
                let w = ui * f;
                out.add_blade(b & !(1 << i), if below % 2 == 1 { -w } else { w });
            }
        }
        Ok(out)
    }

    /// Determinant pairing `⟨ω, P⟩` with `⟨ε_I, e_J⟩ = δ_{IJ}`.
    pub fn pair(a: &Self, b: &Self) -> Result<ExpPoly<S>, CalcError> {
        if a.kind == b.kind {
            return Err(CalcError::KindMismatch(a.kind.dual(), b.kind));
        }
        a.same_frame(b)?;
        if a.degree != b.degree {
            return Err(CalcError::DegreeMismatch { expected: a.degree, got: b.degree });
        }
        let mut acc = ExpPoly::zero(a.nvars);
        for (blade, f) in &a.comps {
            if let Some(g) = b.comps.get(blade) {
                acc += &(f * g);
            }
        }
        Ok(acc)
    }

    /// `self(a_1, .., a_j, ·)`: successive left contractions by the arguments.
    pub fn partial(&self, args: &[&Self]) -> Result<Self, CalcError> {
        let mut cur = self.clone();
        for a in args {
            cur = Self::contract(a, &cur)?;
        }
        Ok(cur)
    }

    /// Full evaluation `self(a_1, .., a_k)`.
    pub fn eval(&self, args: &[&Self]) -> Result<ExpPoly<S>, CalcError> {
        if args.len() != self.degree {
            return Err(CalcError::DegreeMismatch { expected: self.degree, got: args.len() });
        }
        let r = self.partial(args)?;
        Ok(r.as_scalar().expect("degree 0 after full contraction"))
    }

    /// Formats with the given coordinate names and frame labels.
    pub fn display_with<'a>(&'a self, names: &'a [String], labels: &'a [String]) -> impl fmt::Display + 'a {
        Shown { g: self, names, labels }
    }
}

struct Shown<'a, S> {
    g: &'a Graded<S>,
    names: &'a [String],
    labels: &'a [String],
}

impl<S: Scalar> fmt::Display for Shown<'_, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = self.g;
        if g.degree == 0 {
            return write!(f, "{}", g.blade(0).display_with(self.names));
        }
        let comps = g.components();
        if comps.is_empty() {
            return write!(f, "0");
        }
        for (n, (idx, c)) in comps.iter().enumerate() {
            let frame = idx.iter().map(|&i| self.labels[i].as_str()).collect::<Vec<_>>().join("^");
            let (neg, mag) = match c.as_constant() {
                Some(v) if v.is_negative() => (true, ExpPoly::constant(c.nvars(), -v)),
                _ => (false, (*c).clone()),
            };
            let sep = match (n, neg) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            };
            write!(f, "{}", sep)?;
            if mag.is_one() {
                write!(f, "{}", frame)?;
            } else if mag.as_constant().is_some() {
                write!(f, "{}*{}", mag.display_with(self.names), frame)?;
            } else {
                write!(f, "({})*{}", mag.display_with(self.names), frame)?;
            }
        }
        Ok(())
    }
}

impl<S: Scalar> fmt::Display for Graded<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut names: Vec<String> = (1..=self.nvars).map(|i| format!("x{}", i)).collect();
        names.push("t".into());
        let prefix = match self.kind {
            Kind::Vector => "e",
            Kind::Form => "eps",
        };
        let labels: Vec<String> = (1..=self.rank).map(|i| format!("{}{}", prefix, i)).collect();
        Shown { g: self, names: &names, labels: &labels }.fmt(f)
    }
}

impl<S: Scalar> Neg for &Graded<S> {
    type Output = Graded<S>;
    fn neg(self) -> Graded<S> {
        let mut out = self.clone();
        for v in out.comps.values_mut() {
            *v = -&*v;
        }
        out
    }
}

impl<S: Scalar> Neg for Graded<S> {
    type Output = Graded<S>;
    fn neg(self) -> Graded<S> {
        -&self
    }
}

impl<S: Scalar> Add for &Graded<S> {
    type Output = Graded<S>;
    fn add(self, rhs: &Graded<S>) -> Graded<S> {
        self.checked_add(rhs).expect("graded sum of incompatible sections")
    }
}

impl<S: Scalar> Add for Graded<S> {
    type Output = Graded<S>;
    fn add(self, rhs: Graded<S>) -> Graded<S> {
        &self + &rhs
    }
}

impl<S: Scalar> Sub for &Graded<S> {
    type Output = Graded<S>;
    fn sub(self, rhs: &Graded<S>) -> Graded<S> {
        self.checked_sub(rhs).expect("graded difference of incompatible sections")
    }
}

impl<S: Scalar> Sub for Graded<S> {
    type Output = Graded<S>;
    fn sub(self, rhs: Graded<S>) -> Graded<S> {
        &self - &rhs
    }
}

impl<S: Scalar> Mul<&Graded<S>> for &ExpPoly<S> {
    type Output = Graded<S>;
    fn mul(self, rhs: &Graded<S>) -> Graded<S> {
        rhs.scale(self)
    }
}
