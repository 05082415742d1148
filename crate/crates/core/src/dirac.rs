//! Nijenhuis torsions of bundle maps and of graph relations, Dirac pairs made of
//! graphs of musical maps, and the pair structures they characterize.
//!
//! A relation `R ⊂ A × A` is represented by module generators of its sections
//! together with, when they can be found, module generators of `R* ◇ R*`. The
//! torsion is tensorial in all three arguments, so vanishing on generators is a
//! complete verdict.

use crate::algebroid::{bracket_sections, AlgebroidPatch, JacobiAlgebroid, JacobiBialgebroid};
use crate::calculus::{phi0_schouten, CalcError, Graded, Kind};
use crate::coeff::{ExpPoly, Scalar};
use crate::report::{Report, Residue, Status};
use crate::structures::{
    bivector_of_map, flat_map, jacobi_check, maurer_cartan_check, nondegenerate_check, presymplectic_check,
    sharp_map, StructureError, TensorMap,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphKind {
    /// `graph π^♯ ⊂ A* × A`.
    Sharp,
    /// `graph ω^♭ ⊂ A × A*`.
    Flat,
    /// `graph N ⊂ A × A`.
    Tensor,
}

/// The graph of a bundle map, possibly inverted (the overline of a relation).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphRelation<S> {
    kind: GraphKind,
    element: Option<Graded<S>>,
    map: TensorMap<S>,
    inverse: bool,
}

impl<S: Scalar> GraphRelation<S> {
    pub fn sharp(pi: &Graded<S>) -> Result<Self, StructureError> {
        Ok(GraphRelation { kind: GraphKind::Sharp, map: sharp_map(pi)?, element: Some(pi.clone()), inverse: false })
    }

    pub fn flat(w: &Graded<S>) -> Result<Self, StructureError> {
        Ok(GraphRelation { kind: GraphKind::Flat, map: flat_map(w)?, element: Some(w.clone()), inverse: false })
    }

    pub fn tensor(n: &TensorMap<S>) -> Result<Self, StructureError> {
        if n.source() != Kind::Vector || n.target() != Kind::Vector {
            return Err(CalcError::KindMismatch(Kind::Vector, n.source()).into());
        }
        Ok(GraphRelation { kind: GraphKind::Tensor, map: n.clone(), element: None, inverse: false })
    }

    /// `overline(graph π^♯) ⊂ A × A*`, the form in which sharp graphs enter Dirac pairs.
    pub fn sharp_bar(pi: &Graded<S>) -> Result<Self, StructureError> {
        Ok(Self::sharp(pi)?.overline())
    }

    pub fn overline(mut self) -> Self {
        self.inverse = !self.inverse;
        self
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn map(&self) -> &TensorMap<S> {
        &self.map
    }

    pub fn element(&self) -> Option<&Graded<S>> {
        self.element.as_ref()
    }

    pub fn is_inverse(&self) -> bool {
        self.inverse
    }

    /// Whether the relation lies in `A × A*`.
    pub fn in_a_times_dual(&self) -> bool {
        matches!((self.kind, self.inverse), (GraphKind::Sharp, true) | (GraphKind::Flat, false))
    }
}

pub type Pair<S> = (Graded<S>, Graded<S>);
pub type Triple<S> = (Graded<S>, Graded<S>, Graded<S>);

/// Generators of a relation `R ⊂ A × A` and, when known, of `R* ◇ R*`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationModel<S> {
    pub generators: Vec<Pair<S>>,
    pub domain: Option<Vec<Triple<S>>>,
    /// Why no complete domain is available.
    pub gap: Option<String>,
}

impl<S: Scalar> RelationModel<S> {
    /// `R̄`: pairs swapped, triples reversed.
    pub fn overline(self) -> Self {
        RelationModel {
            generators: self.generators.into_iter().map(|(x, y)| (y, x)).collect(),
            domain: self.domain.map(|d| d.into_iter().map(|(a, b, c)| (c, b, a)).collect()),
            gap: self.gap,
        }
    }

    /// `(α, β, γ) ∈ R* ◇ R*`: `⟨β, X⟩ = ⟨α, Y⟩` and `⟨γ, X⟩ = ⟨β, Y⟩` on every generator.
    pub fn in_domain(&self, t: &Triple<S>) -> Result<bool, CalcError> {
        for (x, y) in &self.generators {
            if Graded::pair(&t.1, x)? != Graded::pair(&t.0, y)? || Graded::pair(&t.2, x)? != Graded::pair(&t.1, y)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `T_R((X1,Y1),(X2,Y2),(α,β,γ)) = ⟨α,[Y1,Y2]⟩ − ⟨β,[Y1,X2]+[X1,Y2]⟩ + ⟨γ,[X1,X2]⟩`.
pub fn relation_torsion<S: Scalar>(
    alg: &AlgebroidPatch<S>,
    u: &Pair<S>,
    v: &Pair<S>,
    t: &Triple<S>,
) -> Result<ExpPoly<S>, CalcError> {
    let br = |p: &Graded<S>, q: &Graded<S>| bracket_sections(alg, p, q);
    let yy = br(&u.1, &v.1)?;
    let mixed = &br(&u.1, &v.0)? + &br(&u.0, &v.1)?;
    let xx = br(&u.0, &v.0)?;
    Ok(Graded::pair(&t.0, &yy)? - Graded::pair(&t.1, &mixed)? + Graded::pair(&t.2, &xx)?)
}

/// `T_N(X,Y) = [NX,NY] − N[NX,Y] − N[X,NY] + N²[X,Y]`.
pub fn torsion_tensor<S: Scalar>(
    alg: &AlgebroidPatch<S>,
    n: &TensorMap<S>,
    x: &Graded<S>,
    y: &Graded<S>,
) -> Result<Graded<S>, StructureError> {
    if n.source() != alg.section_kind() || n.target() != alg.section_kind() {
        return Err(CalcError::KindMismatch(alg.section_kind(), n.source()).into());
    }
    let (nx, ny) = (n.apply(x)?, n.apply(y)?);
    let br = |p: &Graded<S>, q: &Graded<S>| bracket_sections(alg, p, q);
    let a = br(&nx, &ny)?;
    let b = n.apply(&br(&nx, y)?)?;
    let c = n.apply(&br(x, &ny)?)?;
    let d = n.apply(&n.apply(&br(x, y)?)?)?;
    Ok(&(&(&a - &b) - &c) + &d)
}

fn frame_pairs(r: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..r).flat_map(move |i| ((i + 1)..r).map(move |j| (i, j)))
}

/// `T_N` on all frame pairs; complete because `T_N` is a tensor.
pub fn torsion_tensor_check<S: Scalar>(alg: &AlgebroidPatch<S>, n: &TensorMap<S>) -> Report<S> {
    torsion_with(alg, n, None)
}

fn torsion_with<S: Scalar>(alg: &AlgebroidPatch<S>, n: &TensorMap<S>, flatten: Option<&TensorMap<S>>) -> Report<S> {
    let strategy = if flatten.is_some() { "flattened-torsion" } else { "torsion" };
    let run = || -> Result<Report<S>, StructureError> {
        for (i, j) in frame_pairs(alg.rank()) {
            let t = torsion_tensor(alg, n, &alg.frame(i), &alg.frame(j))?;
            let t = match flatten {
                Some(w) => w.apply(&t)?,
                None => t,
            };
            if !t.is_zero() {
                let ctx = format!(
                    "T_N({}, {})",
                    alg.section_label(i),
                    alg.section_label(j)
                );
                return Ok(Report::fail_with(strategy, ctx, Residue::Section(t), alg));
            }
        }
        Ok(Report::pass(strategy))
    };
    run().unwrap_or_else(|e| Report::error(strategy, e.to_string()))
}

/// The bracket expression `[π1,π1](ξ1,ξ2,ξ) + [π2,π2](ξ1,ξ2,ξ'') − 2[π1,π2](ξ1,ξ2,ξ')`
/// with `φ0`-brackets.
pub fn torsion_triple<S: Scalar>(
    j: &JacobiAlgebroid<S>,
    pi1: &Graded<S>,
    pi2: &Graded<S>,
    xi1: &Graded<S>,
    xi2: &Graded<S>,
    t: &Triple<S>,
) -> Result<ExpPoly<S>, CalcError> {
    let a = phi0_schouten(j, pi1, pi1)?.eval(&[xi1, xi2, &t.0])?;
    let b = phi0_schouten(j, pi2, pi2)?.eval(&[xi1, xi2, &t.2])?;
    let c = phi0_schouten(j, pi1, pi2)?.eval(&[xi1, xi2, &t.1])?;
    Ok(a + b - c.scale(&S::from_i64(2)))
}

/// The same torsion evaluated from the definition on
/// `(π2^♯ξ1, π1^♯ξ1), (π2^♯ξ2, π1^♯ξ2)`.
pub fn torsion_triple_raw<S: Scalar>(
    alg: &AlgebroidPatch<S>,
    pi1: &Graded<S>,
    pi2: &Graded<S>,
    xi1: &Graded<S>,
    xi2: &Graded<S>,
    t: &Triple<S>,
) -> Result<ExpPoly<S>, CalcError> {
    let sh = |p: &Graded<S>, f: &Graded<S>| Graded::contract(f, p);
    let u = (sh(pi2, xi1)?, sh(pi1, xi1)?);
    let v = (sh(pi2, xi2)?, sh(pi1, xi2)?);
    relation_torsion(alg, &u, &v, t)
}

fn frames_of<S: Scalar>(alg: &AlgebroidPatch<S>, kind: Kind) -> Vec<Graded<S>> {
    (0..alg.rank())
        .map(|i| if kind == alg.section_kind() { alg.frame(i) } else { alg.coframe(i) })
        .collect()
}

fn complement(r: usize, k: &[usize]) -> Vec<usize> {
    (0..r).filter(|i| !k.contains(i)).collect()
}

fn free_triples<S: Scalar>(alg: &AlgebroidPatch<S>, k: &[usize]) -> Vec<Triple<S>> {
    let z = alg.zero_form(1);
    k.iter()
        .flat_map(|&i| {
            let e = alg.coframe(i);
            vec![(e.clone(), z.clone(), z.clone()), (z.clone(), e.clone(), z.clone()), (z.clone(), z.clone(), e)]
        })
        .collect()
}

/// `R = {(P u, Q u)}` for maps `P, Q: U → A`.
fn image_model<S: Scalar>(
    alg: &AlgebroidPatch<S>,
    p: &TensorMap<S>,
    q: &TensorMap<S>,
) -> Result<RelationModel<S>, StructureError> {
    let generators = frames_of(alg, p.source())
        .iter()
        .map(|u| Ok((p.apply(u)?, q.apply(u)?)))
        .collect::<Result<Vec<_>, CalcError>>()?;
    let k: Vec<usize> = p.null_indices().into_iter().filter(|i| q.null_indices().contains(i)).collect();
    let c = complement(alg.rank(), &k);
    let (pt, qt) = (p.transpose(), q.transpose());
    let mut domain = free_triples(alg, &k);
    if let Ok(pinv) = pt.block_inverse(&c) {
        let step = |a: &Graded<S>| -> Result<Graded<S>, CalcError> { pinv.apply(&qt.apply(a)?) };
        for &i in &c {
            let a = alg.coframe(i);
            let b = step(&a)?;
            let cc = step(&b)?;
            domain.push((a, b, cc));
        }
    } else if let Ok(qinv) = qt.block_inverse(&c) {
        let step = |a: &Graded<S>| -> Result<Graded<S>, CalcError> { qinv.apply(&pt.apply(a)?) };
        for &i in &c {
            let cc = alg.coframe(i);
            let b = step(&cc)?;
            let a = step(&b)?;
            domain.push((a, b, cc));
        }
    } else {
        let gap = "neither map is invertible off its common kernel".to_string();
        return Ok(RelationModel { generators, domain: None, gap: Some(gap) });
    }
    Ok(RelationModel { generators, domain: Some(domain), gap: None })
}

/// `R = {(X, Y) : ω2^♭X = ω1^♭Y}`.
fn kernel_model<S: Scalar>(
    alg: &AlgebroidPatch<S>,
    w1: &TensorMap<S>,
    w2: &TensorMap<S>,
) -> Result<RelationModel<S>, StructureError> {
    let k: Vec<usize> = w1.null_indices().into_iter().filter(|i| w2.null_indices().contains(i)).collect();
    let c = complement(alg.rank(), &k);
    let zero = alg.zero_section(1);
    let mut generators: Vec<Pair<S>> = Vec::new();
    for &i in &k {
        generators.push((alg.frame(i), zero.clone()));
        generators.push((zero.clone(), alg.frame(i)));
    }
    let mut domain = Vec::new();
    if let Ok(inv) = w1.block_inverse(&c) {
        let n = inv.compose(w2)?;
        let nt = n.transpose();
        for &i in &c {
            generators.push((alg.frame(i), n.apply(&alg.frame(i))?));
            let a = alg.coframe(i);
            let b = nt.apply(&a)?;
            let cc = nt.apply(&b)?;
            domain.push((a, b, cc));
        }
    } else if let Ok(inv) = w2.block_inverse(&c) {
        let n = inv.compose(w1)?;
        let nt = n.transpose();
        for &i in &c {
            generators.push((n.apply(&alg.frame(i))?, alg.frame(i)));
            let cc = alg.coframe(i);
            let b = nt.apply(&cc)?;
            let a = nt.apply(&b)?;
            domain.push((a, b, cc));
        }
    } else {
        let gap = "relation is not the graph of a map on the complement of the common kernel".to_string();
        return Ok(RelationModel { generators, domain: None, gap: Some(gap) });
    }
    Ok(RelationModel { generators, domain: Some(domain), gap: None })
}

/// Model of a single graph relation.
pub fn graph_model<S: Scalar>(
    alg: &AlgebroidPatch<S>,
    g: &GraphRelation<S>,
) -> Result<RelationModel<S>, StructureError> {
    if g.kind != GraphKind::Tensor {
        return Err(StructureError::Shape("only graphs of endomorphisms are relations on A".into()));
    }
    let id = TensorMap::identity(Kind::Vector, alg.rank(), alg.nvars());
    let model = image_model(alg, &id, &g.map)?;
    Ok(if g.inverse { model.overline() } else { model })
}

/// `N_{L,L'} = overline(L) ∗ L'` for `L, L' ⊂ A × A*`.
pub fn pair_relation<S: Scalar>(
    alg: &AlgebroidPatch<S>,
    l: &GraphRelation<S>,
    l2: &GraphRelation<S>,
) -> Result<RelationModel<S>, StructureError> {
    if !l.in_a_times_dual() || !l2.in_a_times_dual() {
        return Err(StructureError::Shape("Dirac pair members must be overline(graph pi#) or graph omega_flat".into()));
    }
    let id = TensorMap::identity(Kind::Vector, alg.rank(), alg.nvars());
    match (l.kind, l2.kind) {
        (GraphKind::Sharp, GraphKind::Sharp) => image_model(alg, &l2.map, &l.map),
        (GraphKind::Sharp, GraphKind::Flat) => image_model(alg, &id, &l.map.compose(&l2.map)?),
        (GraphKind::Flat, GraphKind::Sharp) => image_model(alg, &l2.map.compose(&l.map)?, &id),
        _ => kernel_model(alg, &l.map, &l2.map),
    }
}

/// Evaluates `T_R` on all generator pairs and the given triples; the first
/// nonzero value is the witness.
pub fn relation_torsion_check<S: Scalar>(
    alg: &AlgebroidPatch<S>,
    model: &RelationModel<S>,
    triples: &[Triple<S>],
    strategy: &str,
) -> Result<Option<Report<S>>, CalcError> {
    let g = &model.generators;
    for (p, u) in g.iter().enumerate() {
        for (q, v) in g.iter().enumerate().skip(p + 1) {
            for (k, t) in triples.iter().enumerate() {
                let val = relation_torsion(alg, u, v, t)?;
                if !val.is_zero() {
                    let ctx = format!(
                        "T_R(r{}, r{}, triple {}) with r{} = ({}, {}), r{} = ({}, {}), triple = ({}, {}, {})",
                        p + 1,
                        q + 1,
                        k + 1,
                        p + 1,
                        alg.show(&u.0),
                        alg.show(&u.1),
                        q + 1,
                        alg.show(&v.0),
                        alg.show(&v.1),
                        alg.show(&t.0),
                        alg.show(&t.1),
                        alg.show(&t.2)
                    );
                    return Ok(Some(Report::fail_with(strategy, ctx, Residue::Scalar(val), alg)));
                }
            }
        }
    }
    Ok(None)
}

/// How a Dirac-pair verdict is reached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Strategy<S> {
    /// For two sharp graphs: `[π1,π2]_{A,φ0} = 0` implies a pair.
    CompatibilitySufficient,
    /// Complete: torsion on module generators of the relation and its dual domain.
    InvertibleReduction,
    /// Torsion on explicit triples; a pass needs complete generators as well.
    WitnessTriples(Vec<Triple<S>>),
}

impl<S> Strategy<S> {
    pub fn name(&self) -> &'static str {
        match self {
            Strategy::CompatibilitySufficient => "compatibility",
            Strategy::InvertibleReduction => "invertible-reduction",
            Strategy::WitnessTriples(_) => "witness-triples",
        }
    }
}

/// Triples over `{0} ∪ frames` that lie in the dual domain.
pub fn default_triples<S: Scalar>(
    alg: &AlgebroidPatch<S>,
    model: &RelationModel<S>,
) -> Result<Vec<Triple<S>>, CalcError> {
    let mut cands = vec![alg.zero_form(1)];
    cands.extend((0..alg.rank()).map(|i| alg.coframe(i)));
    let mut out = Vec::new();
    for a in &cands {
        for b in &cands {
            for c in &cands {
                if a.is_zero() && b.is_zero() && c.is_zero() {
                    continue;
                }
                let t = (a.clone(), b.clone(), c.clone());
                if model.in_domain(&t)? {
                    out.push(t);
                }
            }
        }
    }
    Ok(out)
}

fn member_is_dirac<S: Scalar>(b: &JacobiBialgebroid<S>, l: &GraphRelation<S>) -> Report<S> {
    match l.element() {
        Some(e) => maurer_cartan_check(b, e),
        None => Report::error("dirac-structure", "member is not a Dirac structure candidate"),
    }
}

/// Whether `(L, L')` is a Dirac pair on `B`.
pub fn dirac_pair_check<S: Scalar>(
    b: &JacobiBialgebroid<S>,
    l: &GraphRelation<S>,
    l2: &GraphRelation<S>,
    strategy: &Strategy<S>,
) -> Report<S> {
    let name = strategy.name();
    let alg = b.a().algebroid();
    if !l.in_a_times_dual() || !l2.in_a_times_dual() {
        return Report::error(name, "unsupported kind combination");
    }
    for (which, m) in [("first", l), ("second", l2)] {
        let r = member_is_dirac(b, m);
        if r.status != Status::Pass {
            let mut r = r.with_note(format!("{} member is not a Dirac structure", which));
            r.strategy = format!("{}/{}", name, r.strategy);
            return r;
        }
    }
    let run = || -> Result<Report<S>, StructureError> {
        match strategy {
            Strategy::CompatibilitySufficient => {
                if (l.kind, l2.kind) != (GraphKind::Sharp, GraphKind::Sharp) {
                    return Ok(Report::error(name, "compatibility applies to two sharp graphs"));
                }
                let (p1, p2) = (l.element().expect("sharp"), l2.element().expect("sharp"));
                let br = phi0_schouten(b.a(), p1, p2)?;
                let jac = jacobi_check(b.a(), p1).passed() && jacobi_check(b.a(), p2).passed();
                Ok(if br.is_zero() && jac {
                    Report::pass(name)
                } else {
                    Report::inconclusive(name, "structures are not compatible Jacobi structures")
                })
            }
            Strategy::InvertibleReduction => {
                let model = pair_relation(alg, l, l2)?;
                match &model.domain {
                    Some(d) => Ok(relation_torsion_check(alg, &model, d, name)?.unwrap_or_else(|| Report::pass(name))),
                    None => Ok(Report::inconclusive(name, model.gap.clone().unwrap_or_default())),
                }
            }
            Strategy::WitnessTriples(list) => {
                let model = pair_relation(alg, l, l2)?;
                let mut valid = Vec::new();
                for t in list {
                    if model.in_domain(t)? {
                        valid.push(t.clone());
                    }
                }
                if list.is_empty() {
                    valid = default_triples(alg, &model)?;
                }
                if let Some(f) = relation_torsion_check(alg, &model, &valid, name)? {
                    return Ok(f);
                }
                let skipped = list.len().saturating_sub(valid.len());
                match &model.domain {
                    Some(d) => {
                        Ok(relation_torsion_check(alg, &model, d, name)?.unwrap_or_else(|| Report::pass(name)))
                    }
                    None => Ok(Report::inconclusive(
                        name,
                        format!("{} triples vanish, {} outside the domain; evidence only", valid.len(), skipped),
                    )),
                }
            }
        }
    };
    run().unwrap_or_else(|e| Report::error(name, e.to_string()))
}

/// `N = π^♯ ∘ ω^♭` and `ω_N` with `ω_N^♭ = ω^♭ ∘ N`.
pub fn omega_n<S: Scalar>(w: &Graded<S>, n: &TensorMap<S>) -> Result<Graded<S>, StructureError> {
    bivector_of_map(&flat_map(w)?.compose(n)?)
}

/// `π` Jacobi, `ω` and `ω_N` closed, with `N = π^♯ ∘ ω^♭`.
pub fn jomega_check<S: Scalar>(j: &JacobiAlgebroid<S>, pi: &Graded<S>, w: &Graded<S>) -> Report<S> {
    let run = || -> Result<Report<S>, StructureError> {
        let n = sharp_map(pi)?.compose(&flat_map(w)?)?;
        let wn = omega_n(w, &n)?;
        Ok(Report::all(
            "jomega",
            [jacobi_check(j, pi), presymplectic_check(j, w), presymplectic_check(j, &wn).with_note("omega_N")],
        ))
    };
    run().unwrap_or_else(|e| Report::error("jomega", e.to_string()))
}

/// `ω^♭ N = N* ω^♭`, torsion (flattened by `ω^♭` when `weak`), and closedness of `ω`, `ω_N`.
pub fn omegan_check<S: Scalar>(j: &JacobiAlgebroid<S>, w: &Graded<S>, n: &TensorMap<S>, weak: bool) -> Report<S> {
    let alg = j.algebroid();
    let run = || -> Result<Report<S>, StructureError> {
        let flat = flat_map(w)?;
        let lhs = flat.compose(n)?;
        let rhs = n.transpose().compose(&flat)?;
        let diff = lhs.checked_sub(&rhs)?;
        let comm = Report::from_residue(
            "commutation",
            "omega_flat N - N* omega_flat",
            Residue::Matrix(diff.matrix().to_vec()),
            alg,
        );
        if !comm.passed() {
            return Ok(Report::all("omegan", [comm]));
        }
        let wn = bivector_of_map(&lhs)?;
        let torsion = torsion_with(alg, n, weak.then_some(&flat));
        Ok(Report::all("omegan", [comm, torsion, presymplectic_check(j, w), presymplectic_check(j, &wn)]))
    };
    run().unwrap_or_else(|e| Report::error("omegan", e.to_string()))
}

/// Jacobi pair: `(overline graph π1^♯, overline graph π2^♯)` on `(A, φ0)`.
pub fn jacobi_pair<S: Scalar>(
    j: &JacobiAlgebroid<S>,
    pi1: &Graded<S>,
    pi2: &Graded<S>,
    strategy: &Strategy<S>,
) -> Report<S> {
    let b = JacobiBialgebroid::standard(j.clone());
    match (GraphRelation::sharp_bar(pi1), GraphRelation::sharp_bar(pi2)) {
        (Ok(l), Ok(l2)) => dirac_pair_check(&b, &l, &l2, strategy),
        (Err(e), _) | (_, Err(e)) => Report::error(strategy.name(), e.to_string()),
    }
}

/// Poisson pair on a Lie algebroid: a Jacobi pair with `φ0 = 0`.
pub fn poisson_pair<S: Scalar>(
    alg: &AlgebroidPatch<S>,
    pi1: &Graded<S>,
    pi2: &Graded<S>,
    strategy: &Strategy<S>,
) -> Report<S> {
    jacobi_pair(&JacobiAlgebroid::untwisted(alg.clone()), pi1, pi2, strategy)
}

/// `φ0`-presymplectic pair: `(graph ω1^♭, graph ω2^♭)` on `(A, φ0)`.
pub fn presymplectic_pair<S: Scalar>(
    j: &JacobiAlgebroid<S>,
    w1: &Graded<S>,
    w2: &Graded<S>,
    strategy: &Strategy<S>,
) -> Report<S> {
    let b = JacobiBialgebroid::standard(j.clone());
    match (GraphRelation::flat(w1), GraphRelation::flat(w2)) {
        (Ok(l), Ok(l2)) => dirac_pair_check(&b, &l, &l2, strategy),
        (Err(e), _) | (_, Err(e)) => Report::error(strategy.name(), e.to_string()),
    }
}

/// A presymplectic pair of two non-degenerate forms.
pub fn symplectic_pair<S: Scalar>(
    j: &JacobiAlgebroid<S>,
    w1: &Graded<S>,
    w2: &Graded<S>,
    strategy: &Strategy<S>,
) -> Report<S> {
    let alg = j.algebroid();
    let nd = |w: &Graded<S>| match flat_map(w) {
        Ok(m) => nondegenerate_check(&m, alg),
        Err(e) => Report::error("determinant", e.to_string()),
    };
    Report::all("symplectic-pair", [nd(w1), nd(w2), presymplectic_pair(j, w1, w2, strategy)])
}

/// Two compatible Jacobi structures, the sufficient condition for a pair.
pub fn hamiltonian_pair<S: Scalar>(j: &JacobiAlgebroid<S>, pi1: &Graded<S>, pi2: &Graded<S>) -> Report<S> {
    Report::all(
        "hamiltonian",
        [jacobi_check(j, pi1), jacobi_check(j, pi2), crate::structures::compat_check(j, pi1, pi2)],
    )
}

/// `A* = (π1^♯)^{-1}(Im π2^♯) ∩ (π2^♯)^{-1}(Im π1^♯)`, decided only for unit determinants.
pub fn condition_31<S: Scalar>(pi1: &Graded<S>, pi2: &Graded<S>) -> Report<S> {
    match (sharp_map(pi1), sharp_map(pi2)) {
        (Ok(a), Ok(b)) if a.is_invertible() && b.is_invertible() => Report::pass("unit-determinant"),
        (Ok(_), Ok(_)) => {
            Report::inconclusive("unit-determinant", "image membership is not decidable for degenerate maps")
        }
        (Err(e), _) | (_, Err(e)) => Report::error("unit-determinant", e.to_string()),
    }
}
