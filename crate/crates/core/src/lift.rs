//! The `e^{±t}` dictionary between Jacobi data over `M` and Lie data over `M × R`.
//!
//! Sections of `A` are lifted with weight `e^{-t}`, sections of `A*` with
//! weight `e^{t}`. The lifted bialgebroid is `(Ā, Â*)` with both twists zero.

use crate::algebroid::{lift_bar, lift_hat, AlgebroidError, AlgebroidPatch, JacobiAlgebroid, JacobiBialgebroid};
use crate::calculus::{differential, differential_fn, differential_phi, phi0_schouten, schouten, CalcError, Graded};
use crate::coeff::{ExpPoly, Scalar, Var};
use crate::dirac::{dirac_pair_check, GraphRelation, Strategy, Triple};
use crate::report::{Report, Residue, Status};
use crate::structures::{
    bialgebroid_compat_check, flat_map, jacobi_check, presymplectic_check, sharp_map, StructureError,
};

#[derive(Debug, thiserror::Error)]
pub enum LiftError {
    #[error(transparent)]
    Algebroid(#[from] AlgebroidError),
    #[error(transparent)]
    Calc(#[from] CalcError),
    #[error(transparent)]
    Coeff(#[from] crate::coeff::CoeffError),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error("section {0} is neither a section of A nor of A*")]
    Kind(String),
}

/// A named section together with its lift.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftedSection<S> {
    pub name: String,
    pub source: Graded<S>,
    pub lifted: Graded<S>,
    pub weight: i32,
}

/// Jacobi bialgebroid data over `M` and its Lie bialgebroid over `M × R`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftedInstance<S> {
    source: JacobiBialgebroid<S>,
    lifted: JacobiBialgebroid<S>,
    sections: Vec<LiftedSection<S>>,
}

/// `(Ā, Â*)` for `((A, φ0), (A*, X0))`.
pub fn lifted_bialgebroid<S: Scalar>(b: &JacobiBialgebroid<S>) -> Result<JacobiBialgebroid<S>, AlgebroidError> {
    let bar = JacobiAlgebroid::untwisted(lift_bar(b.a())?);
    let hat = JacobiAlgebroid::untwisted(lift_hat(b.dual())?);
    JacobiBialgebroid::new(bar, hat)
}

/// `e^{-t} g` for sections of `A`, `e^{t} g` for sections of `A*`.
pub fn lift_section<S: Scalar>(b: &JacobiBialgebroid<S>, g: &Graded<S>) -> Result<(Graded<S>, i32), LiftError> {
    let alg = b.a().algebroid();
    if g.rank() != alg.rank() || g.nvars() != alg.nvars() {
        return Err(LiftError::Kind(format!("{:?} of rank {}", g.kind(), g.rank())));
    }
    let w = if g.kind() == alg.section_kind() { -1 } else { 1 };
    Ok((g.shift(w), w))
}

/// Lifts `b` together with the named sections.
pub fn lift_instance<S: Scalar>(
    b: &JacobiBialgebroid<S>,
    sections: &[(String, Graded<S>)],
) -> Result<LiftedInstance<S>, LiftError> {
    let lifted = lifted_bialgebroid(b)?;
    let sections = sections
        .iter()
        .map(|(name, g)| {
            let (l, weight) = lift_section(b, g).map_err(|_| LiftError::Kind(name.clone()))?;
            Ok(LiftedSection { name: name.clone(), source: g.clone(), lifted: l, weight })
        })
        .collect::<Result<_, LiftError>>()?;
    Ok(LiftedInstance { source: b.clone(), lifted, sections })
}

impl<S: Scalar> LiftedInstance<S> {
    pub fn source(&self) -> &JacobiBialgebroid<S> {
        &self.source
    }

    pub fn lifted(&self) -> &JacobiBialgebroid<S> {
        &self.lifted
    }

    /// `Ā`.
    pub fn bar(&self) -> &AlgebroidPatch<S> {
        self.lifted.a().algebroid()
    }

    /// `Â*`.
    pub fn hat(&self) -> &AlgebroidPatch<S> {
        self.lifted.dual().algebroid()
    }

    pub fn sections(&self) -> &[LiftedSection<S>] {
        &self.sections
    }

    pub fn section(&self, name: &str) -> Option<&LiftedSection<S>> {
        self.sections.iter().find(|s| s.name == name)
    }

    /// Lifts a further section with the weight of its kind.
    pub fn lift(&self, g: &Graded<S>) -> Result<Graded<S>, LiftError> {
        Ok(lift_section(&self.source, g)?.0)
    }

    /// Whether `g` is a section of `A` rather than of `A*`.
    fn on_a(&self, g: &Graded<S>) -> bool {
        g.kind() == self.source.a().algebroid().section_kind()
    }
}

fn guarded<S: Scalar>(strategy: &str, f: impl FnOnce() -> Result<Report<S>, LiftError>) -> Report<S> {
    f().unwrap_or_else(|e| Report::error(strategy, e.to_string()))
}

fn compare<S: Scalar>(
    strategy: &str,
    context: &str,
    lhs: &Graded<S>,
    rhs: &Graded<S>,
    alg: &AlgebroidPatch<S>,
) -> Result<Report<S>, LiftError> {
    let res = lhs.checked_sub(rhs)?;
    Ok(Report::from_residue(strategy, context, Residue::Section(res), alg))
}

/// The two scaling identities that apply to `g`:
/// for a 2-section `[π̃,π̃]‾ = e^{-2t}[π,π]_{A,φ0}` and `d̂π̃ = e^{-2t} d_{A*,X0}π`;
/// for a 2-cosection `[ω̃,ω̃]̂ = e^{t}[ω,ω]_{A*,X0}` and `d̄ω̃ = e^{t} d_{A,φ0}ω`.
pub fn verify_bracket_scaling<S: Scalar>(inst: &LiftedInstance<S>, g: &Graded<S>) -> Report<S> {
    guarded("lift-scaling", || {
        let b = &inst.source;
        let lifted = inst.lift(g)?;
        let (own, other, up_own, up_other, w) = if inst.on_a(g) {
            (b.a(), b.dual(), inst.bar(), inst.hat(), -2)
        } else {
            (b.dual(), b.a(), inst.hat(), inst.bar(), 1)
        };
        let alg = b.a().algebroid();
        let bracket = compare(
            "lift-scaling",
            "lifted bracket minus weighted bracket",
            &schouten(up_own, &lifted, &lifted)?,
            &phi0_schouten(own, g, g)?.shift(w),
            alg,
        )?;
        let diff = compare(
            "lift-scaling",
            "lifted differential minus weighted differential",
            &differential(up_other, &lifted)?,
            &differential_phi(other, g)?.shift(w),
            alg,
        )?;
        Ok(Report::all("lift-scaling", [bracket, diff]))
    })
}

/// Every scaling identity for the sections recorded in the instance.
pub fn verify_instance_scaling<S: Scalar>(inst: &LiftedInstance<S>) -> Report<S> {
    Report::all(
        "lift-scaling",
        inst.sections.iter().filter(|s| s.source.degree() == 2).map(|s| verify_bracket_scaling(inst, &s.source)),
    )
}

fn dt<S: Scalar>(g: &Graded<S>) -> Result<Graded<S>, LiftError> {
    Ok(g.map_coeffs(|c| c.differentiate(Var::T))?)
}

/// Compares the closed formulas for `d̂` and `d̄` on a function and a cosection
/// over `M × R` with the invariant formula on `Â` and `Ā`.
///
/// On a `k`-cosection `d̂φ̃ = e^{-t}(d_A φ̃ + k φ0∧φ̃ + φ0∧∂_t φ̃)`, which is
/// `e^{-t}(d_{A,φ0}φ̃ + φ0∧∂_t φ̃)` for `k = 1`.
pub fn verify_hat_bar_differentials<S: Scalar>(j: &JacobiAlgebroid<S>, f: &ExpPoly<S>, phi: &Graded<S>) -> Report<S> {
    guarded("hat-bar", || {
        let alg = j.algebroid();
        let hat = lift_hat(j)?;
        let bar = lift_bar(j)?;
        let df = &differential_fn(alg, f) + &j.phi0().scale(&f.differentiate(Var::T)?);
        let dphi_plain = &differential(alg, phi)? + &j.phi0().wedge(&dt(phi)?)?;
        let k = S::from_i64(phi.degree() as i64);
        let dphi_twisted = &dphi_plain + &j.phi0().wedge(phi)?.scale_by(&k);
        let parts = [
            compare("hat-bar", "hat differential of the function", &differential_fn(&hat, f), &df.shift(-1), alg)?,
            compare("hat-bar", "hat differential of the cosection", &differential(&hat, phi)?, &dphi_twisted.shift(-1), alg)?,
            compare("hat-bar", "bar differential of the function", &differential_fn(&bar, f), &df, alg)?,
            compare("hat-bar", "bar differential of the cosection", &differential(&bar, phi)?, &dphi_plain, alg)?,
        ];
        Ok(Report::all("hat-bar", parts))
    })
}

/// `π` Jacobi over `M` against `π̃` Poisson on `Ā`.
pub fn jacobi_crosscheck<S: Scalar>(inst: &LiftedInstance<S>, pi: &Graded<S>) -> Report<S> {
    guarded("lift-jacobi", || {
        let down = jacobi_check(inst.source.a(), pi);
        let up = jacobi_check(inst.lifted.a(), &inst.lift(pi)?);
        Ok(agree("lift-jacobi", down, up, inst.source.a().algebroid()))
    })
}

/// `d_{A,φ0} ω = 0` over `M` against `d_Ā ω̃ = 0`.
pub fn closedness_crosscheck<S: Scalar>(inst: &LiftedInstance<S>, w: &Graded<S>) -> Report<S> {
    guarded("lift-closed", || {
        let down = presymplectic_check(inst.source.a(), w);
        let up = presymplectic_check(inst.lifted.a(), &inst.lift(w)?);
        Ok(agree("lift-closed", down, up, inst.source.a().algebroid()))
    })
}

/// `π^♯ ∘ ω^♭ = π̃^♯ ∘ ω̃^♭` entrywise.
pub fn recursion_operator_check<S: Scalar>(inst: &LiftedInstance<S>, pi: &Graded<S>, w: &Graded<S>) -> Report<S> {
    guarded("lift-recursion", || {
        let run = |p: &Graded<S>, o: &Graded<S>| -> Result<_, StructureError> { sharp_map(p)?.compose(&flat_map(o)?) };
        let down = run(pi, w)?;
        let up = run(&inst.lift(pi)?, &inst.lift(w)?)?;
        let diff = up.checked_sub(&down)?;
        Ok(Report::from_residue(
            "lift-recursion",
            "lifted minus original recursion operator",
            Residue::Matrix(diff.matrix().to_vec()),
            inst.source.a().algebroid(),
        ))
    })
}

/// The bracket expression of the pair torsion upstairs equals `e^{-2t}` times
/// the one downstairs on every frame triple `(ξ1, ξ2, (ξ, ξ', ξ''))`.
pub fn torsion_scaling_check<S: Scalar>(inst: &LiftedInstance<S>, pi1: &Graded<S>, pi2: &Graded<S>) -> Report<S> {
    guarded("lift-torsion", || {
        let alg = inst.source.a().algebroid();
        let (l1, l2) = (inst.lift(pi1)?, inst.lift(pi2)?);
        let brackets = |j: &JacobiAlgebroid<S>, p: &Graded<S>, q: &Graded<S>| -> Result<_, CalcError> {
            Ok([phi0_schouten(j, p, p)?, phi0_schouten(j, q, q)?, phi0_schouten(j, p, q)?])
        };
        let down_br = brackets(inst.source.a(), pi1, pi2)?;
        let up_br = brackets(inst.lifted.a(), &l1, &l2)?;
        let two = S::from_i64(2);
        let value = |br: &[Graded<S>; 3], x1: &Graded<S>, x2: &Graded<S>, t: &Triple<S>| -> Result<ExpPoly<S>, CalcError> {
            Ok(br[0].eval(&[x1, x2, &t.0])? + br[1].eval(&[x1, x2, &t.2])? - br[2].eval(&[x1, x2, &t.1])?.scale(&two))
        };
        let co: Vec<Graded<S>> = (0..alg.rank()).map(|i| alg.coframe(i)).collect();
        let mut args = vec![alg.zero_form(1)];
        args.extend(co.iter().cloned());
        for (p, x1) in co.iter().enumerate() {
            for x2 in &co[p + 1..] {
                for a in &args {
                    for c in &args {
                        for e in &args {
                            let t = (a.clone(), c.clone(), e.clone());
                            let down = value(&down_br, x1, x2, &t)?;
                            let up = value(&up_br, x1, x2, &t)?;
                            let res = up - down.shift(-2);
                            if !res.is_zero() {
                                let ctx = format!(
                                    "torsion at ({}, {}; {}, {}, {})",
                                    alg.show(x1),
                                    alg.show(x2),
                                    alg.show(a),
                                    alg.show(c),
                                    alg.show(e)
                                );
                                return Ok(Report::fail_with("lift-torsion", ctx, Residue::Scalar(res), alg));
                            }
                        }
                    }
                }
            }
        }
        Ok(Report::pass("lift-torsion"))
    })
}

/// The lifted pair is a Lie bialgebroid: both compatibility identities on the test family.
pub fn lifted_bialgebroid_check<S: Scalar>(inst: &LiftedInstance<S>) -> Report<S> {
    bialgebroid_compat_check(&inst.lifted, None)
}

/// The three kinds of pair related by the lift.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PairCase<S> {
    Bivectors(Graded<S>, Graded<S>),
    Mixed(Graded<S>, Graded<S>),
    Forms(Graded<S>, Graded<S>),
}

impl<S: Scalar> PairCase<S> {
    pub fn name(&self) -> &'static str {
        match self {
            PairCase::Bivectors(..) => "(pi,pi)",
            PairCase::Mixed(..) => "(pi,omega)",
            PairCase::Forms(..) => "(omega,omega)",
        }
    }

    fn relations(&self, lift: impl Fn(&Graded<S>) -> Result<Graded<S>, LiftError>) -> Result<(GraphRelation<S>, GraphRelation<S>), LiftError> {
        Ok(match self {
            PairCase::Bivectors(a, b) => (GraphRelation::sharp_bar(&lift(a)?)?, GraphRelation::sharp_bar(&lift(b)?)?),
            PairCase::Mixed(a, b) => (GraphRelation::sharp_bar(&lift(a)?)?, GraphRelation::flat(&lift(b)?)?),
            PairCase::Forms(a, b) => (GraphRelation::flat(&lift(a)?)?, GraphRelation::flat(&lift(b)?)?),
        })
    }
}

fn verdict<S>(r: &Report<S>) -> String {
    match &r.witness {
        Some(w) => format!("{} ({})", r.status, w),
        None => r.status.to_string(),
    }
}

fn agree<S: Scalar>(strategy: &str, down: Report<S>, up: Report<S>, alg: &AlgebroidPatch<S>) -> Report<S> {
    let decided = |r: &Report<S>| matches!(r.status, Status::Pass | Status::Fail);
    if down.status == Status::Error || up.status == Status::Error {
        let note = down.note.clone().or(up.note.clone()).unwrap_or_default();
        return Report::error(strategy, note);
    }
    if !decided(&down) || !decided(&up) {
        return Report::inconclusive(strategy, format!("over M: {}, over M x R: {}", down.status, up.status));
    }
    if down.status == up.status {
        return Report::pass(strategy).with_note(format!("both levels: {}", down.status));
    }
    let ctx = format!("over M: {}; over M x R: {}", verdict(&down), verdict(&up));
    let res = up.witness.or(down.witness).map(|w| w.residue).unwrap_or(Residue::Scalar(ExpPoly::zero(alg.nvars())));
    let mut r = Report::fail_with(strategy, ctx.clone(), res, alg);
    if let Some(w) = r.witness.as_mut() {
        w.rendered = ctx;
    }
    r
}

/// Dirac-pair verdict over `M` against the verdict for the lifted pair on the
/// lifted bialgebroid, both with `strategy`.
pub fn theorem_main1_crosscheck<S: Scalar>(b: &JacobiBialgebroid<S>, case: &PairCase<S>, strategy: &Strategy<S>) -> Report<S> {
    let name = format!("main1 {}", case.name());
    guarded(&name, || {
        let lifted = lifted_bialgebroid(b)?;
        let (l, l2) = case.relations(|g| Ok(g.clone()))?;
        let (u, u2) = case.relations(|g| Ok(lift_section(b, g)?.0))?;
        let down = dirac_pair_check(b, &l, &l2, strategy);
        let up = dirac_pair_check(&lifted, &u, &u2, strategy);
        Ok(agree(&name, down, up, b.a().algebroid()))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebroid::{extend_with_r, make_tangent, validate_algebroid, Patch};
    use crate::calculus::{differential, merge};
    use crate::coeff::Var;
    use crate::structures::pi_from_omega;
    use num_rational::BigRational;

    type Q = BigRational;
    type E = ExpPoly<Q>;

    fn contact() -> (JacobiBialgebroid<Q>, Graded<Q>, Graded<Q>) {
        let a = make_tangent::<Q>(&Patch::new(["x1", "x2", "y1", "y2", "z"]).unwrap());
        let v = |i| E::var(5, Var::X(i)).unwrap();
        let j = extend_with_r(&a).unwrap();
        let lift = |beta: Graded<Q>| merge(j.algebroid(), &differential(&a, &beta).unwrap(), Some(&beta)).unwrap();
        let omega = lift(&(&a.coframe(4) - &a.coframe(0).scale(&v(2))) - &a.coframe(1).scale(&v(3)));
        let hyper = lift(&(&a.coframe(4) - &a.coframe(0).scale(&v(2))) + &a.coframe(1).scale(&v(3)));
        (JacobiBialgebroid::standard(j), omega, hyper)
    }

    #[test]
    fn weights_follow_the_kind() {
        let (b, omega, _) = contact();
        let pi = pi_from_omega(&omega).unwrap();
        let inst = lift_instance(&b, &[("pi".into(), pi.clone()), ("omega".into(), omega.clone())]).unwrap();
        assert_eq!(inst.section("pi").unwrap().weight, -1);
        assert_eq!(inst.section("omega").unwrap().weight, 1);
        assert_eq!(inst.section("pi").unwrap().lifted, pi.shift(-1));
        assert!(inst.section("missing").is_none());
    }

    #[test]
    fn lifted_algebroids_are_valid() {
        let (b, _, _) = contact();
        let inst = lift_instance(&b, &[]).unwrap();
        assert!(validate_algebroid(inst.bar()).passed());
        assert!(validate_algebroid(inst.hat()).passed());
        assert!(lifted_bialgebroid_check(&inst).passed());
    }

    #[test]
    fn untwisted_lift_is_a_product() {
        let a = make_tangent::<Q>(&Patch::new(["x"]).unwrap());
        let b = JacobiBialgebroid::standard(JacobiAlgebroid::untwisted(a));
        let inst = lift_instance(&b, &[]).unwrap();
        let bar = inst.bar();
        for i in 0..bar.rank() {
            for k in 0..bar.rank() {
                assert!(bar.frame_bracket(i, k).is_zero());
            }
        }
    }

    #[test]
    fn contact_scaling_and_differentials() {
        let (b, omega, hyper) = contact();
        let pi = pi_from_omega(&omega).unwrap();
        let inst = lift_instance(&b, &[("pi".into(), pi.clone()), ("h".into(), hyper)]).unwrap();
        assert!(verify_instance_scaling(&inst).passed());
        assert!(verify_bracket_scaling(&inst, &omega).passed());
        assert!(jacobi_crosscheck(&inst, &pi).passed());
        let j = b.a();
        let n = j.algebroid().nvars();
        let t = E::var(n, Var::T).unwrap();
        assert!(verify_hat_bar_differentials(j, &t, &omega).passed());
        assert!(verify_hat_bar_differentials(j, &E::exp(n, 1), &j.algebroid().coframe(5)).passed());
    }

    #[test]
    fn recursion_operator_is_unchanged() {
        let (b, omega, hyper) = contact();
        let pi = pi_from_omega(&omega).unwrap();
        let inst = lift_instance(&b, &[]).unwrap();
        assert!(recursion_operator_check(&inst, &pi, &hyper).passed());
        assert!(torsion_scaling_check(&inst, &pi, &pi).passed());
    }

    #[test]
    fn main_correspondence_on_contact_data() {
        let (b, omega, hyper) = contact();
        let pi = pi_from_omega(&omega).unwrap();
        let s = Strategy::InvertibleReduction;
        for case in [
            PairCase::Forms(omega.clone(), hyper.clone()),
            PairCase::Mixed(pi.clone(), hyper.clone()),
            PairCase::Bivectors(pi.clone(), pi_from_omega(&hyper).unwrap()),
        ] {
            let r = theorem_main1_crosscheck(&b, &case, &s);
            assert!(r.passed(), "{}: {:?}", case.name(), r);
        }
    }

    #[test]
    fn perturbation_fails_at_both_levels() {
        let (b, _, hyper) = contact();
        let alg = b.a().algebroid();
        let x1 = E::var(alg.nvars(), Var::X(0)).unwrap();
        let bad = &hyper + &alg.coframe(0).wedge(&alg.coframe(1)).unwrap().scale(&x1);
        let inst = lift_instance(&b, &[]).unwrap();
        let r = closedness_crosscheck(&inst, &bad);
        assert!(r.passed());
        assert_eq!(r.note.as_deref(), Some("both levels: fail"));
    }
}
