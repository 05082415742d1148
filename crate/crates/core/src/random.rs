//! Seeded generators of coefficients, sections and small algebroid instances.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebroid::{
    bracket_sections, dual_structure, extend_with_r, make_tangent, trivial_dual, AlgebroidPatch, JacobiAlgebroid,
    JacobiBialgebroid, Patch,
};
use crate::calculus::{blade_indices, differential, differential_fn, differential_phi, merge, schouten, Graded, Kind};
use crate::coeff::{ExpPoly, Monomial, Scalar};
use crate::structures::{flat_map, pi_from_omega, TensorMap};

/// Families of Jacobi algebroids with a supply of unit-determinant `φ0`-symplectic forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymplecticFamily {
    /// `T R^4`, `φ0 = 0`, pullbacks of `dx1∧dx2 + dx3∧dx4` by triangular maps.
    Darboux,
    /// `(T R^3 ⊕ R, (0,1))` with `(dβ, β)` for `β = dz − y dx + dg(x, y)`.
    Contact,
    /// A four-dimensional Lie algebra with exact forms `d_{φ0} θ`.
    Lie,
}

/// Deterministic source of random test data.
#[derive(Debug, Clone)]
pub struct Gen {
    rng: ChaCha8Rng,
}

/// A Lie algebra presented in a skewed basis, with the change of basis kept
/// so elements of the original factors can be located.
#[derive(Debug, Clone)]
pub struct LieInstance<S> {
    pub jacobi: JacobiAlgebroid<S>,
    /// Blocks of original basis vectors that span commuting subalgebras.
    pub blocks: Vec<Vec<usize>>,
    /// Coordinates in the skewed basis of each original basis vector.
    pub original: Vec<Graded<S>>,
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn coin(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    pub fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        items.choose(&mut self.rng).expect("nonempty")
    }

    /// A small rational `n/d` with `|n| ≤ 3`, `d ∈ {1, 2}`.
    pub fn rational<S: Scalar>(&mut self) -> S {
        S::from_frac(self.int(-3, 3), self.int(1, 2))
    }

    fn nonzero_rational<S: Scalar>(&mut self) -> S {
        loop {
            let v: S = self.rational();
            if !v.is_zero() {
                return v;
            }
        }
    }

    /// A polynomial in the patch coordinates of total degree at most `max_deg`.
    pub fn poly<S: Scalar>(&mut self, alg: &AlgebroidPatch<S>, max_deg: u32, terms: usize) -> ExpPoly<S> {
        self.exp_poly(alg, max_deg, terms, false)
    }

    /// As [`Gen::poly`]; with `time`, monomials may involve `t` and weights `e^{kt}`, `|k| ≤ 1`.
    pub fn exp_poly<S: Scalar>(&mut self, alg: &AlgebroidPatch<S>, max_deg: u32, terms: usize, time: bool) -> ExpPoly<S> {
        let n = alg.nvars();
        let coords = alg.patch().n();
        let mut out = ExpPoly::zero(n);
        for _ in 0..terms {
            let mut exps = vec![0u32; n + 1];
            let deg = self.int(0, max_deg as i64) as u32;
            let slots = if time { coords + 1 } else { coords };
            if slots > 0 {
                for _ in 0..deg {
                    let s = self.int(0, slots as i64 - 1) as usize;
                    exps[if s == coords { n } else { s }] += 1;
                }
            }
            let k = if time { self.int(-1, 1) as i32 } else { 0 };
            let c: S = self.nonzero_rational();
            out += &ExpPoly::term(n, k, Monomial::from_exponents(exps), c);
        }
        out
    }

    /// A section or form of the given degree with random polynomial coefficients.
    pub fn graded<S: Scalar>(
        &mut self,
        alg: &AlgebroidPatch<S>,
        kind: Kind,
        degree: usize,
        max_deg: u32,
        time: bool,
    ) -> Graded<S> {
        let r = alg.rank();
        let mut terms = Vec::new();
        for blade in 0u32..(1u32 << r) {
            if blade.count_ones() as usize != degree || self.coin(0.4) {
                continue;
            }
            let idx: Vec<usize> = blade_indices(blade).collect();
            let nterms = self.int(1, 2) as usize;
            terms.push((idx, self.exp_poly(alg, max_deg, nterms, time)));
        }
        Graded::from_terms(kind, r, alg.nvars(), degree, terms)
    }

    /// An upper unitriangular matrix with small rational entries.
    pub fn unitriangular<S: Scalar>(&mut self, r: usize) -> Vec<Vec<S>> {
        (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| match i.cmp(&j) {
                        std::cmp::Ordering::Equal => S::one(),
                        std::cmp::Ordering::Less if self.coin(0.5) => self.rational(),
                        _ => S::zero(),
                    })
                    .collect()
            })
            .collect()
    }

    /// `aff(1) ⊕ aff(1)`, `aff(1) ⊕ R²` or `aff(1) ⊕ R` over a point, in a skewed basis,
    /// with a random closed `φ0` (zero when `twisted` is false).
    pub fn lie_algebra<S: Scalar>(&mut self, twisted: bool) -> LieInstance<S> {
        let choice = self.int(0, 2);
        let (r, brackets, blocks): (usize, Vec<(usize, usize, usize)>, Vec<Vec<usize>>) = match choice {
            0 => (4, vec![(0, 1, 1), (2, 3, 3)], vec![vec![0, 1], vec![2, 3]]),
            1 => (4, vec![(0, 1, 1)], vec![vec![0, 1], vec![2, 3]]),
            _ => (3, vec![(0, 1, 1)], vec![vec![0, 1], vec![2]]),
        };
        let derived: Vec<usize> = brackets.iter().map(|b| b.2).collect();
        let patch = Patch::new(Vec::<String>::new()).expect("empty patch");
        let c = |v: S| ExpPoly::constant(0, v);
        let mut structure = vec![vec![vec![ExpPoly::zero(0); r]; r]; r];
        for &(i, j, k) in &brackets {
            structure[i][j][k] = c(S::one());
            structure[j][i][k] = c(-S::one());
        }
        let base = AlgebroidPatch::new(patch.clone(), Kind::Vector, vec![], structure).expect("valid");
        let t: Vec<Vec<S>> = self.unitriangular(r);
        let tm = TensorMap::new(
            Kind::Vector,
            Kind::Vector,
            0,
            (0..r).map(|a| (0..r).map(|i| c(t[i][a].clone())).collect()).collect(),
        )
        .expect("square");
        let back = tm.inverse().expect("unitriangular");
        let f: Vec<Graded<S>> = (0..r).map(|i| tm.apply(&base.frame(i)).expect("vector")).collect();
        let mut structure = vec![vec![vec![ExpPoly::zero(0); r]; r]; r];
        for i in 0..r {
            for j in 0..r {
                let v = bracket_sections(&base, &f[i], &f[j]).expect("bracket");
                structure[i][j] = back.apply(&v).expect("vector").as_vector().expect("degree 1");
            }
        }
        let alg = AlgebroidPatch::new(patch, Kind::Vector, vec![], structure).expect("valid");
        let original: Vec<Graded<S>> = (0..r)
            .map(|a| {
                let v = back.apply(&base.frame(a)).expect("vector");
                Graded::from_vector(Kind::Vector, r, 0, v.as_vector().expect("degree 1"))
            })
            .collect();
        let mut phi = vec![S::zero(); r];
        if twisted {
            for (a, slot) in phi.iter_mut().enumerate() {
                if !derived.contains(&a) {
                    *slot = self.rational();
                }
            }
        }
        let comps = (0..r)
            .map(|i| c((0..r).fold(S::zero(), |acc, a| acc + t[i][a].clone() * phi[a].clone())))
            .collect();
        let phi0 = Graded::from_vector(Kind::Form, r, 0, comps);
        let jacobi = JacobiAlgebroid::new(alg, phi0).expect("closed");
        LieInstance { jacobi, blocks, original }
    }

    /// Tangent algebroid of `R^n` with `φ0 = d f`.
    pub fn tangent<S: Scalar>(&mut self, n: usize) -> JacobiAlgebroid<S> {
        let names: Vec<String> = (1..=n).map(|i| format!("x{}", i)).collect();
        let a = make_tangent(&Patch::new(names).expect("distinct"));
        let f = self.poly(&a, 2, 2);
        let phi0 = differential_fn(&a, &f);
        JacobiAlgebroid::new(a, phi0).expect("exact")
    }

    /// `(T R^n ⊕ R, (0,1))`.
    pub fn extension<S: Scalar>(&mut self, n: usize) -> JacobiAlgebroid<S> {
        let names: Vec<String> = (1..=n).map(|i| format!("x{}", i)).collect();
        extend_with_r(&make_tangent(&Patch::new(names).expect("distinct"))).expect("valid")
    }

    /// A random Jacobi algebroid of rank at most 4.
    pub fn jacobi_algebroid<S: Scalar>(&mut self) -> JacobiAlgebroid<S> {
        match self.int(0, 3) {
            0 => {
                let n = self.int(2, 3) as usize;
                self.tangent(n)
            }
            1 => {
                let n = self.int(2, 3) as usize;
                self.extension(n)
            }
            _ => self.lie_algebra(true).jacobi,
        }
    }

    /// `(A*, X0)`, independent of any compatibility with `A`: a Lie algebra over a
    /// point when `A` lives over a point, else the trivial structure.
    pub fn dual_side<S: Scalar>(&mut self, j: &JacobiAlgebroid<S>) -> JacobiAlgebroid<S> {
        let alg = j.algebroid();
        if alg.patch().n() == 0 && alg.rank() >= 3 {
            for _ in 0..20 {
                let other = self.lie_algebra::<S>(true).jacobi;
                if other.algebroid().rank() != alg.rank() {
                    continue;
                }
                let d = dual_structure(alg, vec![], other.algebroid().structure()).expect("shape");
                let x0 = Graded::from_vector(Kind::Vector, alg.rank(), 0, other.phi0().as_vector().expect("1"));
                return JacobiAlgebroid::new(d, x0).expect("closed");
            }
        }
        let x0 = self.graded(alg, alg.section_kind(), 1, 1, false);
        JacobiAlgebroid::new(trivial_dual(alg), x0).expect("trivial differential")
    }

    pub fn bialgebroid<S: Scalar>(&mut self) -> JacobiBialgebroid<S> {
        let a = self.jacobi_algebroid();
        let d = self.dual_side(&a);
        JacobiBialgebroid::new(a, d).expect("dual pair")
    }

    /// `ω = d_{φ0} θ` with unit determinant, if found within a few tries.
    pub fn symplectic<S: Scalar>(&mut self, j: &JacobiAlgebroid<S>) -> Option<Graded<S>> {
        let alg = j.algebroid();
        for _ in 0..40 {
            let theta = self.graded(alg, alg.form_kind(), 1, 0, false);
            let w = differential_phi(j, &theta).ok()?;
            if flat_map(&w).ok()?.is_invertible() {
                return Some(w);
            }
        }
        None
    }

    /// A non-degenerate Jacobi structure `π_ω` for a random `φ0`-symplectic `ω`.
    pub fn nondegenerate_jacobi<S: Scalar>(&mut self, j: &JacobiAlgebroid<S>) -> Option<Graded<S>> {
        let w = self.symplectic(j)?;
        pi_from_omega(&w).ok()
    }

    /// `X ∧ Y` with `X`, `Y` drawn from different commuting blocks.
    pub fn decomposable_jacobi<S: Scalar>(&mut self, inst: &LieInstance<S>) -> Graded<S> {
        let pick = |g: &mut Gen, block: &[usize]| {
            block.iter().fold(Graded::zero(Kind::Vector, inst.original.len(), 0, 1), |acc, &a| {
                let c: S = g.rational();
                &acc + &inst.original[a].scale_by(&c)
            })
        };
        let x = pick(self, &inst.blocks[0]);
        let y = pick(self, &inst.blocks[1]);
        debug_assert!(schouten(inst.jacobi.algebroid(), &x, &y).map(|b| b.is_zero()).unwrap_or(false));
        x.wedge(&y).expect("vectors")
    }

    /// A Jacobi algebroid of the given family.
    pub fn symplectic_base<S: Scalar>(&mut self, family: SymplecticFamily) -> JacobiAlgebroid<S> {
        match family {
            SymplecticFamily::Darboux => {
                JacobiAlgebroid::untwisted(make_tangent(&Patch::new(["x1", "x2", "x3", "x4"]).expect("distinct")))
            }
            SymplecticFamily::Contact => {
                extend_with_r(&make_tangent(&Patch::new(["x", "y", "z"]).expect("distinct"))).expect("valid")
            }
            SymplecticFamily::Lie => loop {
                let inst = self.lie_algebra::<S>(true);
                if inst.jacobi.algebroid().rank() == 4 && self.symplectic(&inst.jacobi).is_some() {
                    return inst.jacobi;
                }
            },
        }
    }

    /// A unit-determinant `φ0`-symplectic form on a base built by [`Gen::symplectic_base`].
    pub fn symplectic_in<S: Scalar>(&mut self, family: SymplecticFamily, j: &JacobiAlgebroid<S>) -> Option<Graded<S>> {
        let alg = j.algebroid();
        let n = alg.nvars();
        let x = |i: usize| ExpPoly::var(n, crate::coeff::Var::X(i)).expect("coordinate");
        match family {
            SymplecticFamily::Darboux => {
                let mut f: Vec<ExpPoly<S>> = Vec::new();
                for i in 0..4 {
                    let mut c = x(i);
                    for _ in 0..self.int(0, 2) {
                        if i == 0 {
                            break;
                        }
                        let a = self.int(0, i as i64 - 1) as usize;
                        let b = self.int(0, i as i64 - 1) as usize;
                        let k: S = self.nonzero_rational();
                        let m = if self.coin(0.5) { &x(a) * &x(b) } else { x(a) };
                        c += &m.scale(&k);
                    }
                    f.push(c);
                }
                let d = |p: &ExpPoly<S>| differential_fn(alg, p);
                let w = &d(&f[0]).wedge(&d(&f[1])).ok()? + &d(&f[2]).wedge(&d(&f[3])).ok()?;
                Some(w)
            }
            SymplecticFamily::Contact => {
                let ext = alg;
                let base = make_tangent::<S>(ext.patch());
                let mut g2 = ExpPoly::zero(n);
                for _ in 0..3 {
                    let (a, b) = (self.int(0, 2) as u32, self.int(0, 1) as u32);
                    let k: S = self.nonzero_rational();
                    g2 += &ExpPoly::term(n, 0, Monomial::from_exponents(vec![a, b, 0, 0]), k);
                }
                let beta = &(&base.coframe(2) - &base.coframe(0).scale(&x(1))) + &differential_fn(&base, &g2);
                merge(ext, &differential(&base, &beta).ok()?, Some(&beta)).ok()
            }
            SymplecticFamily::Lie => self.symplectic(j),
        }
    }
}
