//! Exact coefficient ring: finite sums of `e^{kt} p(x_1..x_n, t)` with `p` a
//! sparse polynomial over an exact scalar field.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::Hash;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{Num, Signed, Zero};
use thiserror::Error;

/// Exact scalar field used for polynomial coefficients.
pub trait Scalar:
    Clone + fmt::Debug + fmt::Display + Eq + Hash + Num + Signed + Neg<Output = Self> + Send + Sync + 'static
{
    fn from_i64(v: i64) -> Self;

    fn from_frac(n: i64, d: i64) -> Self {
        Self::from_i64(n) / Self::from_i64(d)
    }

    /// Parses `a` or `a/b` with decimal integers.
    fn parse_literal(s: &str) -> Option<Self>;
}

impl Scalar for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn parse_literal(s: &str) -> Option<Self> {
        match s.split_once('/') {
            Some((n, d)) => {
                let d: BigInt = d.trim().parse().ok()?;
                if d.is_zero() {
                    return None;
                }
                Some(BigRational::new(n.trim().parse().ok()?, d))
            }
            None => Some(BigRational::from_integer(s.trim().parse().ok()?)),
        }
    }
}

impl Scalar for Ratio<i64> {
    fn from_i64(v: i64) -> Self {
        Ratio::from_integer(v)
    }

    fn parse_literal(s: &str) -> Option<Self> {
        match s.split_once('/') {
            Some((n, d)) => {
                let d: i64 = d.trim().parse().ok()?;
                if d == 0 {
                    return None;
                }
                Some(Ratio::new(n.trim().parse().ok()?, d))
            }
            None => Some(Ratio::from_integer(s.trim().parse().ok()?)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoeffError {
    #[error("variable-set mismatch: {0} vs {1} base coordinates")]
    VariableMismatch(usize, usize),
    #[error("unknown variable x{0} (ring has {1} base coordinates)")]
    UnknownVariable(usize, usize),
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("missing assignment: expected {expected} values, got {got}")]
    MissingAssignment { expected: usize, got: usize },
    #[error("e^t stand-in must be nonzero")]
    ZeroExp,
}

/// A ring variable: base coordinate `X(i)` (0-based) or the time coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X(usize),
    T,
}

/// Exponent vector over `x_1..x_n, t` (last slot is `t`).
///
/// Ordered graded-lexicographically with `x_1 < ... < x_n < t`: total degree
/// first, then the exponent of `t`, then `x_n`, down to `x_1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Box<[u32]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars + 1].into_boxed_slice())
    }

    pub fn from_exponents(exps: Vec<u32>) -> Self {
        assert!(!exps.is_empty(), "monomial needs at least the t slot");
        Monomial(exps.into_boxed_slice())
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.iter().rev().cmp(other.0.iter().rev()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

type Poly<S> = BTreeMap<Monomial, S>;

/// Canonical element of `Q[x_1..x_n, t][e^t, e^-t]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExpPoly<S> {
    nvars: usize,
    terms: BTreeMap<i32, Poly<S>>,
}

fn poly_add_term<S: Scalar>(p: &mut Poly<S>, m: Monomial, c: S) {
    if c.is_zero() {
        return;
    }
    match p.get_mut(&m) {
        Some(v) => {
            *v = v.clone() + c;
            if v.is_zero() {
                p.remove(&m);
            }
        }
        None => {
            p.insert(m, c);
        }
    }
}

impl<S: Scalar> ExpPoly<S> {
    pub fn zero(nvars: usize) -> Self {
        ExpPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, S::one())
    }

    pub fn constant(nvars: usize, c: S) -> Self {
        Self::term(nvars, 0, Monomial::one(nvars), c)
    }

    pub fn int(nvars: usize, v: i64) -> Self {
        Self::constant(nvars, S::from_i64(v))
    }

    /// `c * e^{kt} * m`.
    pub fn term(nvars: usize, k: i32, m: Monomial, c: S) -> Self {
        assert_eq!(m.0.len(), nvars + 1, "monomial arity");
        let mut out = Self::zero(nvars);
        if !c.is_zero() {
            let mut p = Poly::new();
            p.insert(m, c);
            out.terms.insert(k, p);
        }
        out
    }

    pub fn var(nvars: usize, v: Var) -> Result<Self, CoeffError> {
        let slot = Self::slot(nvars, v)?;
        let mut e = vec![0; nvars + 1];
        e[slot] = 1;
        Ok(Self::term(nvars, 0, Monomial(e.into_boxed_slice()), S::one()))
    }

    /// `e^{kt}`.
    pub fn exp(nvars: usize, k: i32) -> Self {
        Self::term(nvars, k, Monomial::one(nvars), S::one())
    }

    fn slot(nvars: usize, v: Var) -> Result<usize, CoeffError> {
        match v {
            Var::X(i) if i < nvars => Ok(i),
            Var::X(i) => Err(CoeffError::UnknownVariable(i, nvars)),
            Var::T => Ok(nvars),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    /// The rational value when `self` is a weight-0 constant (including 0).
    pub fn as_constant(&self) -> Option<S> {
        if self.terms.is_empty() {
            return Some(S::zero());
        }
        let p = self.terms.get(&0)?;
        if self.terms.len() != 1 || p.len() != 1 {
            return None;
        }
        let (m, c) = p.iter().next()?;
        m.is_one().then(|| c.clone())
    }

    /// Iterates `(k, monomial, coefficient)` in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (i32, &Monomial, &S)> {
        self.terms.iter().flat_map(|(k, p)| p.iter().map(move |(m, c)| (*k, m, c)))
    }

    pub fn weights(&self) -> impl Iterator<Item = i32> + '_ {
        self.terms.keys().copied()
    }

    /// True when no `t` and no `e^{kt}` with `k != 0` occurs.
    pub fn is_time_independent(&self) -> bool {
        self.terms.keys().all(|&k| k == 0)
            && self.iter().all(|(_, m, _)| m.0[self.nvars] == 0)
    }

    pub fn max_degree(&self) -> u32 {
        self.iter().map(|(_, m, _)| m.degree()).max().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.terms.values().map(|p| p.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn check(&self, other: &Self) -> Result<(), CoeffError> {
        if self.nvars == other.nvars {
            Ok(())
        } else {
            Err(CoeffError::VariableMismatch(self.nvars, other.nvars))
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, CoeffError> {
        self.check(other)?;
        let mut out = self.clone();
        out.add_in_place(other);
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, CoeffError> {
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, CoeffError> {
        self.check(other)?;
        let mut out = Self::zero(self.nvars);
        for (ka, pa) in &self.terms {
            for (kb, pb) in &other.terms {
                let entry = out.terms.entry(ka + kb).or_default();
                for (ma, ca) in pa {
                    for (mb, cb) in pb {
                        poly_add_term(entry, ma.mul(mb), ca.clone() * cb.clone());
                    }
                }
            }
        }
        out.terms.retain(|_, p| !p.is_empty());
        Ok(out)
    }

    fn add_in_place(&mut self, other: &Self) {
        for (k, p) in &other.terms {
            let entry = self.terms.entry(*k).or_default();
            for (m, c) in p {
                poly_add_term(entry, m.clone(), c.clone());
            }
            if entry.is_empty() {
                self.terms.remove(k);
            }
        }
    }

    fn neg_ref(&self) -> Self {
        self.map_coeffs(|c| -c.clone())
    }

    fn map_coeffs(&self, f: impl Fn(&S) -> S) -> Self {
        let mut out = Self::zero(self.nvars);
        for (k, p) in &self.terms {
            let q: Poly<S> = p
                .iter()
                .map(|(m, c)| (m.clone(), f(c)))
                .filter(|(_, c)| !c.is_zero())
                .collect();
            if !q.is_empty() {
                out.terms.insert(*k, q);
            }
        }
        out
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        self.map_coeffs(|v| v.clone() * c.clone())
    }

    /// Multiplies by `e^{kt}`.
    pub fn shift(&self, k: i32) -> Self {
        ExpPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(w, p)| (w + k, p.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Partial derivative; `d/dt (e^{kt} p) = e^{kt} (k p + dp/dt)`.
    pub fn differentiate(&self, v: Var) -> Result<Self, CoeffError> {
        let slot = Self::slot(self.nvars, v)?;
        let mut out = Self::zero(self.nvars);
        for (k, p) in &self.terms {
            let entry = out.terms.entry(*k).or_default();
            for (m, c) in p {
                let e = m.0[slot];
                if e > 0 {
                    let mut d = m.0.clone();
                    d[slot] -= 1;
                    poly_add_term(entry, Monomial(d), c.clone() * S::from_i64(e as i64));
                }
                if v == Var::T && *k != 0 {
                    poly_add_term(entry, m.clone(), c.clone() * S::from_i64(*k as i64));
                }
            }
        }
        out.terms.retain(|_, p| !p.is_empty());
        Ok(out)
    }

    /// True for `c e^{kt}` with `c` a nonzero constant.
    pub fn is_unit(&self) -> bool {
        self.unit_parts().is_some()
    }

    fn unit_parts(&self) -> Option<(i32, S)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (k, p) = self.terms.iter().next()?;
        if p.len() != 1 {
            return None;
        }
        let (m, c) = p.iter().next()?;
        m.is_one().then(|| (*k, c.clone()))
    }

    pub fn unit_inverse(&self) -> Result<Self, CoeffError> {
        let (k, c) = self
            .unit_parts()
            .ok_or_else(|| CoeffError::NotInvertible(self.to_string()))?;
        Ok(Self::term(self.nvars, -k, Monomial::one(self.nvars), S::one() / c))
    }

    /// Substitutes `point = (x_1..x_n, t)` and `exp_t` for `e^t`.
    pub fn evaluate(&self, point: &[S], exp_t: &S) -> Result<S, CoeffError> {
        if point.len() != self.nvars + 1 {
            return Err(CoeffError::MissingAssignment { expected: self.nvars + 1, got: point.len() });
        }
        if exp_t.is_zero() {
            return Err(CoeffError::ZeroExp);
        }
        let mut total = S::zero();
        for (k, m, c) in self.iter() {
            let mut v = c.clone();
            for (x, &e) in point.iter().zip(m.0.iter()) {
                for _ in 0..e {
                    v = v * x.clone();
                }
            }
            let base = if k >= 0 { exp_t.clone() } else { S::one() / exp_t.clone() };
            for _ in 0..k.unsigned_abs() {
                v = v * base.clone();
            }
            total = total + v;
        }
        Ok(total)
    }

    /// Canonical text with the given variable names (`names.len() == nvars + 1`).
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        Shown { e: self, names: Some(names) }
    }
}

struct Shown<'a, S> {
    e: &'a ExpPoly<S>,
    names: Option<&'a [String]>,
}

fn fmt_poly<S: Scalar>(
    f: &mut fmt::Formatter<'_>,
    p: &Poly<S>,
    names: &dyn Fn(usize) -> String,
) -> fmt::Result {
    for (idx, (m, c)) in p.iter().rev().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        match (idx, neg) {
            (0, true) => write!(f, "-")?,
            (0, false) => {}
            (_, true) => write!(f, " - ")?,
            (_, false) => write!(f, " + ")?,
        }
        let mut parts = Vec::new();
        if !a.is_one() || m.is_one() {
            parts.push(a.to_string());
        }
        for (slot, &e) in m.0.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(names(slot)),
                _ => parts.push(format!("{}^{}", names(slot), e)),
            }
        }
        write!(f, "{}", parts.join("*"))?;
    }
    Ok(())
}

impl<S: Scalar> fmt::Display for Shown<'_, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.e.nvars;
        let names = |slot: usize| match self.names {
            Some(ns) => ns[slot].clone(),
            None if slot == n => "t".to_string(),
            None => format!("x{}", slot + 1),
        };
        if self.e.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (k, p)) in self.e.terms.iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            if *k == 0 {
                if self.e.terms.len() > 1 && p.len() > 1 {
                    write!(f, "(")?;
                    fmt_poly(f, p, &names)?;
                    write!(f, ")")?;
                } else {
                    fmt_poly(f, p, &names)?;
                }
                continue;
            }
            let ex = match k {
                1 => "exp(t)".to_string(),
                -1 => "exp(-t)".to_string(),
                _ => format!("exp({}*t)", k),
            };
            let single_one = p.len() == 1 && p.iter().next().is_some_and(|(m, c)| m.is_one() && c.is_one());
            if single_one {
                write!(f, "{}", ex)?;
            } else {
                write!(f, "{}*(", ex)?;
                fmt_poly(f, p, &names)?;
                write!(f, ")")?;
            }
        }
        Ok(())
    }
}

impl<S: Scalar> fmt::Display for ExpPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Shown { e: self, names: None }.fmt(f)
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<S: Scalar> $tr<&ExpPoly<S>> for &ExpPoly<S> {
            type Output = ExpPoly<S>;
            fn $method(self, rhs: &ExpPoly<S>) -> ExpPoly<S> {
                self.$checked(rhs).expect("coefficient ring mismatch")
            }
        }
        impl<S: Scalar> $tr<ExpPoly<S>> for ExpPoly<S> {
            type Output = ExpPoly<S>;
            fn $method(self, rhs: ExpPoly<S>) -> ExpPoly<S> {
                (&self).$method(&rhs)
            }
        }
        impl<S: Scalar> $tr<&ExpPoly<S>> for ExpPoly<S> {
            type Output = ExpPoly<S>;
            fn $method(self, rhs: &ExpPoly<S>) -> ExpPoly<S> {
                (&self).$method(rhs)
            }
        }
        impl<S: Scalar> $tr<ExpPoly<S>> for &ExpPoly<S> {
            type Output = ExpPoly<S>;
            fn $method(self, rhs: ExpPoly<S>) -> ExpPoly<S> {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl<S: Scalar> AddAssign<&ExpPoly<S>> for ExpPoly<S> {
    fn add_assign(&mut self, rhs: &ExpPoly<S>) {
        self.check(rhs).expect("coefficient ring mismatch");
        self.add_in_place(rhs);
    }
}

impl<S: Scalar> Neg for ExpPoly<S> {
    type Output = ExpPoly<S>;
    fn neg(self) -> ExpPoly<S> {
        self.neg_ref()
    }
}

impl<S: Scalar> Neg for &ExpPoly<S> {
    type Output = ExpPoly<S>;
    fn neg(self) -> ExpPoly<S> {
        self.neg_ref()
    }
}
