//! Acceptance criteria 1 to 9, one line each, plus sub-lines where a
//! criterion has several parts. Exits nonzero on any unexpected red line.

use std::path::PathBuf;
use std::process::Command;

use jacalg::algebroid::{extend_with_r, make_tangent, Patch};
use jacalg::calculus::{differential, differential_phi, merge, phi0_schouten, schouten, split};
use jacalg::dirac::{dirac_pair_check, jacobi_pair, jomega_check, omegan_check, poisson_pair, torsion_tensor_check};
use jacalg::lift::{
    closedness_crosscheck, lift_instance, theorem_main1_crosscheck, verify_bracket_scaling,
    verify_hat_bar_differentials, PairCase,
};
use jacalg::random::{Gen, SymplecticFamily};
use jacalg::structures::{
    bivector_of_map, flat_map, graph_closure_check, half_bracket_residue, maurer_cartan_check, nondegenerate_check,
    pair_bracket_residue, pi_from_omega, presymplectic_check, SectionBracket,
};
use jacalg::{
    Graded, GraphRelation, JacobiAlgebroid, JacobiBialgebroid, QAlgebroid, QBialgebroid, QExpPoly, QGraded,
    QJacobi, QTensorMap, Rational, Status, Strategy, Var,
};

/// Sub-lines known to be red, with the reason printed next to them.
const EXPECTED_RED: &[(&str, &str)] = &[(
    "4c",
    "with pi# xi = pi(xi, .) and contraction into the first slot, Jacobi is equivalent to [L,L] = -2 E^L",
)];

struct Tally {
    unexpected: Vec<String>,
    red: usize,
    green: usize,
}

impl Tally {
    fn line(&mut self, id: &str, what: &str, outcome: Result<String, String>) {
        match outcome {
            Ok(detail) => {
                self.green += 1;
                println!("PASS  {:<3} {} ({})", id, what, detail);
            }
            Err(detail) => {
                self.red += 1;
                println!("FAIL  {:<3} {}: {}", id, what, detail);
                match EXPECTED_RED.iter().find(|(k, _)| *k == id) {
                    Some((_, why)) => println!("      expected: {}", why),
                    None => self.unexpected.push(id.to_string()),
                }
            }
        }
    }
}

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn cube(w: &QGraded) -> QGraded {
    w.wedge(w).unwrap().wedge(w).unwrap()
}

/// `T R^5 + R` over `(x1, x2, y1, y2, z)` with the four contact forms.
struct Contact {
    base: QAlgebroid,
    j: QJacobi,
}

impl Contact {
    fn new() -> Self {
        let base = make_tangent(&Patch::new(["x1", "x2", "y1", "y2", "z"]).unwrap());
        let j = extend_with_r(&base).unwrap();
        Contact { base, j }
    }

    fn var(&self, i: usize) -> QExpPoly {
        QExpPoly::var(5, Var::X(i)).unwrap()
    }

    /// `dz + sum s * x_coord * d(dir)`.
    fn beta(&self, terms: &[(i64, usize, usize)]) -> QGraded {
        let mut b = self.base.coframe(4);
        for &(s, coord, dir) in terms {
            b = &b + &self.base.coframe(dir).scale(&self.var(coord).scale(&q(s)));
        }
        b
    }

    /// Canonical, hyperbolic, elliptic, parabolic.
    fn betas(&self) -> [QGraded; 4] {
        [
            self.beta(&[(-1, 2, 0), (-1, 3, 1)]),
            self.beta(&[(-1, 2, 0), (1, 3, 1)]),
            self.beta(&[(-1, 3, 0), (1, 2, 1)]),
            self.beta(&[(-1, 3, 0)]),
        ]
    }

    fn pair(&self, beta: &QGraded) -> QGraded {
        merge(self.j.algebroid(), &differential(&self.base, beta).unwrap(), Some(beta)).unwrap()
    }

    fn forms(&self) -> [QGraded; 4] {
        self.betas().map(|b| self.pair(&b))
    }
}

fn recursion(omega: &QGraded, w: &QGraded) -> QTensorMap {
    flat_map(omega).unwrap().inverse().unwrap().compose(&flat_map(w).unwrap()).unwrap()
}

const NAMES: [&str; 3] = ["H", "E", "P"];

fn criterion_1(t: &mut Tally) {
    let c = Contact::new();
    let ext = c.j.algebroid();
    let run = || -> Result<String, String> {
        let mut n = 0;
        for k in 1..=3 {
            for seed in 0..8u64 {
                let mut g = Gen::new(100 * k as u64 + seed);
                let alpha = g.graded(&c.base, c.base.form_kind(), k, 2, false);
                let beta = g.graded(&c.base, c.base.form_kind(), k - 1, 2, false);
                let lhs = differential_phi(&c.j, &merge(ext, &alpha, Some(&beta)).unwrap()).unwrap();
                let da = differential(&c.base, &alpha).unwrap();
                let rhs = merge(ext, &da, Some(&(&alpha - &differential(&c.base, &beta).unwrap()))).unwrap();
                let r = lhs.checked_sub(&rhs).unwrap();
                ensure(r.is_zero(), format!("degree {} seed {}: residue {}", k, seed, ext.show(&r)))?;
                n += 1;
            }
        }
        let closed = differential_phi(&c.j, &c.pair(&c.betas()[0])).unwrap();
        ensure(closed.is_zero(), format!("d(dbeta, beta) = {}", ext.show(&closed)))?;
        Ok(format!("{} random pairs, contact pair closed", n))
    };
    t.line("1", "d(a, b) = (da, a - db) on T R^5 + R", run());
}

fn criterion_2(t: &mut Tally) {
    let c = Contact::new();
    let forms = c.forms();
    let b = JacobiBialgebroid::standard(c.j.clone());
    let a = || -> Result<String, String> {
        for (i, w) in forms.iter().enumerate() {
            let r = presymplectic_check(&c.j, w);
            ensure(r.passed(), format!("form {}: {:?}", i, r.witness.map(|w| w.to_string())))?;
        }
        Ok("4 of 4 closed".into())
    };
    t.line("2a", "contact pairs are presymplectic", a());
    let bb = || -> Result<String, String> {
        let omega3 = cube(&forms[0]);
        ensure(!omega3.is_zero(), "Omega^3 vanishes")?;
        ensure(cube(&forms[1]) == omega3.scale_by(&q(-1)), "w_H^3 != -Omega^3")?;
        ensure(cube(&forms[2]) == omega3, "w_E^3 != Omega^3")?;
        ensure(cube(&forms[3]).is_zero(), "w_P^3 != 0")?;
        Ok(format!("Omega^3 = {}", c.j.algebroid().show(&omega3)))
    };
    t.line("2b", "cubes: w_P^3 = 0, w_H^3 = -Omega^3, w_E^3 = Omega^3 != 0", bb());
    let cc = || -> Result<String, String> {
        for (i, w) in forms[1..].iter().enumerate() {
            let r = torsion_tensor_check(c.j.algebroid(), &recursion(&forms[0], w));
            ensure(r.passed(), format!("N_{}: {:?}", NAMES[i], r.witness.map(|w| w.to_string())))?;
        }
        Ok("N_H, N_E, N_P".into())
    };
    t.line("2c", "recursion operators are torsion free", cc());
    let d = || -> Result<String, String> {
        let big = GraphRelation::flat(&forms[0]).unwrap();
        for (i, w) in forms[1..].iter().enumerate() {
            let r = dirac_pair_check(&b, &big, &GraphRelation::flat(w).unwrap(), &Strategy::InvertibleReduction);
            ensure(r.passed(), format!("(Omega, w_{}): {} {:?}", NAMES[i], r.status, r.note))?;
        }
        Ok("3 of 3 via invertible reduction".into())
    };
    t.line("2d", "(Omega, w) are Dirac pairs", d());
}

fn criterion_3(t: &mut Tally) {
    let c = Contact::new();
    let forms = c.forms();
    let run = || -> Result<String, String> {
        let flat = flat_map(&forms[0]).unwrap();
        ensure(flat.determinant().is_unit(), "det Omega-flat is not a unit")?;
        ensure(nondegenerate_check(&flat, c.j.algebroid()).passed(), "nondegenerate check")?;
        let big_pi = bivector_of_map(&flat.inverse().unwrap()).unwrap();
        for (i, w) in forms[1..].iter().enumerate() {
            let r = jomega_check(&c.j, &big_pi, w);
            ensure(r.passed(), format!("(Pi, w_{}): {} {:?}", NAMES[i], r.status, r.note))?;
            let r = omegan_check(&c.j, &forms[0], &recursion(&forms[0], w), false);
            ensure(r.passed(), format!("(Omega, N_{}): {} {:?}", NAMES[i], r.status, r.note))?;
        }
        Ok(format!("det = {}, 3 J-Omega and 3 full Omega-N structures", flat.determinant()))
    };
    t.line("3", "Pi = inverse of Omega-flat; J-Omega and Omega-N structures", run());
}

fn criterion_4(t: &mut Tally) {
    let c = Contact::new();
    let ext = c.j.algebroid();
    let pi = pi_from_omega(&c.forms()[0]).unwrap();
    let (lambda, e) = split(ext, &pi).unwrap();
    let e = e.unwrap();
    let full = phi0_schouten(&c.j, &pi, &pi).unwrap();
    t.line(
        "4a",
        "[(L,E),(L,E)] = 0 on T R^5 + R",
        ensure(full.is_zero(), ext.show(&full)).map(|_| format!("E = {}", c.base.show(&e))),
    );
    let el = schouten(&c.base, &e, &lambda).unwrap();
    t.line("4b", "[E,L] = 0", ensure(el.is_zero(), c.base.show(&el)).map(|_| "exact".into()));
    let ll = schouten(&c.base, &lambda, &lambda).unwrap();
    let wedge = e.wedge(&lambda).unwrap();
    let literal = ll.checked_sub(&wedge.scale_by(&q(2))).unwrap();
    t.line(
        "4c",
        "[L,L] = 2 E^L as printed",
        if literal.is_zero() {
            Ok("exact".into())
        } else {
            Err(format!(
                "residue [L,L] - 2 E^L = {} (= -4 E^L: {})",
                c.base.show(&literal),
                literal == wedge.scale_by(&q(-4))
            ))
        },
    );
    let signed = ll.checked_add(&wedge.scale_by(&q(2))).unwrap();
    t.line(
        "4d",
        "[L,L] = -2 E^L, the equivalent form under these conventions",
        ensure(signed.is_zero(), c.base.show(&signed)).map(|_| "exact".into()),
    );
}

fn criterion_5(t: &mut Tally) {
    let run = || -> Result<String, String> {
        for seed in 0..20u64 {
            let mut g = Gen::new(5000 + seed);
            let b: QBialgebroid = g.bialgebroid();
            let alg = b.a().algebroid();
            ensure(alg.rank() <= 4, format!("seed {}: rank {}", seed, alg.rank()))?;
            let pi = g.graded(alg, alg.section_kind(), 2, 2, false);
            let w = g.graded(alg, alg.form_kind(), 2, 2, false);
            let inst = lift_instance(&b, &[]).map_err(|e| e.to_string())?;
            for x in [&pi, &w] {
                let r = verify_bracket_scaling(&inst, x);
                ensure(r.passed(), format!("seed {}: {:?}", seed, r.witness.map(|w| w.to_string())))?;
            }
            let f = g.exp_poly(alg, 2, 3, true);
            let k = g.int(1, 2) as usize;
            let phi = g.graded(alg, alg.form_kind(), k, 1, true);
            let r = verify_hat_bar_differentials(b.a(), &f, &phi);
            ensure(r.passed(), format!("seed {}: {:?}", seed, r.witness.map(|w| w.to_string())))?;
        }
        Ok("20 seeds, 4 scaling identities and 4 hat/bar formulas each".into())
    };
    t.line("5", "lift scaling and hat/bar differentials", run());
}

const FAMILIES: [SymplecticFamily; 3] = [SymplecticFamily::Darboux, SymplecticFamily::Contact, SymplecticFamily::Lie];

fn symplectic_instance(seed: u64) -> (QJacobi, QGraded, QGraded) {
    let mut g = Gen::new(seed);
    let family = FAMILIES[seed as usize % 3];
    let j: QJacobi = g.symplectic_base(family);
    let w1 = g.symplectic_in(family, &j).unwrap();
    let w2 = g.symplectic_in(family, &j).unwrap();
    (j, w1, w2)
}

fn decided(s: Status) -> bool {
    matches!(s, Status::Pass | Status::Fail)
}

fn all_cases(b: &QBialgebroid, w1: &QGraded, w2: &QGraded, ctx: &str) -> Result<(usize, usize), String> {
    let (p1, p2) = (pi_from_omega(w1).unwrap(), pi_from_omega(w2).unwrap());
    let mut seen = (0, 0);
    for case in [
        PairCase::Forms(w1.clone(), w2.clone()),
        PairCase::Mixed(p1.clone(), w2.clone()),
        PairCase::Bivectors(p1, p2),
    ] {
        let r = theorem_main1_crosscheck(b, &case, &Strategy::InvertibleReduction);
        ensure(r.passed(), format!("{} {}: {} {:?}", ctx, case.name(), r.status, r.note))?;
        match r.note.as_deref() {
            Some("both levels: pass") => seen.0 += 1,
            _ => seen.1 += 1,
        }
    }
    Ok(seen)
}

fn criterion_6(t: &mut Tally) {
    let a = || -> Result<String, String> {
        let (mut pass, mut fail) = (0, 0);
        for seed in 0..20u64 {
            let (j, w, _) = symplectic_instance(seed);
            let mut g = Gen::new(6000 + seed);
            let alg = j.algebroid();
            let b = JacobiBialgebroid::standard(j.clone());
            let cand = if seed % 2 == 0 {
                pi_from_omega(&w).unwrap()
            } else {
                g.graded(alg, alg.form_kind(), 2, 1, false)
            };
            let (mc, cl) = (maurer_cartan_check(&b, &cand), graph_closure_check(&b, &cand));
            ensure(decided(mc.status), format!("seed {}: undecided", seed))?;
            ensure(mc.status == cl.status, format!("seed {}: {} vs {}", seed, mc.status, cl.status))?;
            if mc.passed() {
                pass += 1
            } else {
                fail += 1
            }
        }
        Ok(format!("20 graphs, {} Maurer-Cartan, {} not", pass, fail))
    };
    t.line("6a", "Maurer-Cartan equation iff graph is closed", a());
    let bb = || -> Result<String, String> {
        let c = Contact::new();
        let forms = c.forms();
        let b = JacobiBialgebroid::standard(c.j.clone());
        let mut seen = (0, 0);
        for (i, w) in forms[1..3].iter().enumerate() {
            let s = all_cases(&b, &forms[0], w, &format!("(Omega, w_{})", NAMES[i]))?;
            seen = (seen.0 + s.0, seen.1 + s.1);
        }
        let r = theorem_main1_crosscheck(
            &b,
            &PairCase::Forms(forms[0].clone(), forms[3].clone()),
            &Strategy::InvertibleReduction,
        );
        ensure(r.passed(), format!("(Omega, w_P): {:?}", r.note))?;
        for seed in 0..10u64 {
            let (j, w1, w2) = symplectic_instance(seed);
            let s = all_cases(&JacobiBialgebroid::standard(j), &w1, &w2, &format!("seed {}", seed))?;
            seen = (seen.0 + s.0, seen.1 + s.1);
        }
        Ok(format!("levels agree: {} both pass, {} both fail", seen.0, seen.1))
    };
    t.line("6b", "pair verdict over M equals the lifted verdict, three cases", bb());
    let cc = || -> Result<String, String> {
        let mut verdicts = Vec::new();
        for seed in 0..10u64 {
            let mut g = Gen::new(3000 + seed);
            let j: QJacobi = g.symplectic_base(SymplecticFamily::Darboux);
            let pi1 = pi_from_omega(&g.symplectic_in(SymplecticFamily::Darboux, &j).unwrap()).unwrap();
            let pi2 = if g.coin(0.3) {
                pi1.scale_by(&q(2))
            } else {
                pi_from_omega(&g.symplectic_in(SymplecticFamily::Darboux, &j).unwrap()).unwrap()
            };
            let alg = j.algebroid();
            let ext = extend_with_r(alg).unwrap();
            let s = Strategy::InvertibleReduction;
            let down = poisson_pair(alg, &pi1, &pi2, &s);
            let lift = |p: &QGraded| merge(ext.algebroid(), p, None).unwrap();
            let up = jacobi_pair(&ext, &lift(&pi1), &lift(&pi2), &s);
            ensure(decided(down.status), format!("seed {}: undecided", seed))?;
            ensure(down.status == up.status, format!("seed {}: {} vs {}", seed, down.status, up.status))?;
            verdicts.push(down.status.to_string());
        }
        Ok(format!("10 instances: {}", verdicts.join(" ")))
    };
    t.line("6c", "Poisson pair iff ((p1,0),(p2,0)) is a Jacobi pair", cc());
}

fn criterion_7(t: &mut Tally) {
    const SEEDS: u64 = 25;
    let sign = |e: usize| q(if e % 2 == 0 { 1 } else { -1 });
    let run = || -> Result<String, String> {
        let witness = |seed: u64, what: &str, alg: &QAlgebroid, r: &QGraded| {
            ensure(r.is_zero(), format!("seed {}: {} = {}", seed, what, alg.show(r)))
        };
        for seed in 0..SEEDS {
            let mut g = Gen::new(7000 + seed);
            let j: QJacobi = g.jacobi_algebroid();
            let alg = j.algebroid();
            for k in 0..3 {
                let time = g.coin(0.3);
                let w = g.graded(alg, alg.form_kind(), k, 2, time);
                witness(seed, "d d w", alg, &differential(alg, &differential(alg, &w).unwrap()).unwrap())?;
                witness(seed, "d_phi d_phi w", alg, &differential_phi(&j, &differential_phi(&j, &w).unwrap()).unwrap())?;
            }
            let (p, qd) = (g.int(0, 3) as usize, g.int(0, 3) as usize);
            let a = g.graded(alg, alg.section_kind(), p, 2, false);
            let b = g.graded(alg, alg.section_kind(), qd, 2, false);
            let anti = schouten(alg, &a, &b).unwrap().checked_add(
                &schouten(alg, &b, &a).unwrap().scale_by(&sign((p + 1) * (qd + 1))),
            );
            witness(seed, "graded antisymmetry", alg, &anti.unwrap())?;
            let (a1, a2) = (g.int(1, 3) as usize, g.int(0, 2) as usize);
            let d1 = g.graded(alg, alg.section_kind(), a1, 2, false);
            let d2 = g.graded(alg, alg.section_kind(), a2, 2, false);
            let d3 = g.graded(alg, alg.section_kind(), 1, 2, false);
            let lhs = schouten(alg, &d1, &d2.wedge(&d3).unwrap()).unwrap();
            let first = schouten(alg, &d1, &d2).unwrap().wedge(&d3).unwrap();
            let second = d2.wedge(&schouten(alg, &d1, &d3).unwrap()).unwrap().scale_by(&sign((a1 + 1) * a2));
            witness(seed, "Leibniz residue", alg, &lhs.checked_sub(&(&first + &second)).unwrap())?;
            let pi = g.graded(alg, alg.section_kind(), 2, 2, false);
            let xi = g.graded(alg, alg.form_kind(), 1, 2, false);
            let eta = g.graded(alg, alg.form_kind(), 1, 2, false);
            for reading in [SectionBracket::Plain, SectionBracket::Twisted] {
                let r = half_bracket_residue(&j, &pi, &xi, &eta, reading).unwrap();
                witness(seed, &format!("{:?} bracket-of-forms residue", reading), alg, &r)?;
            }
            let (j2, w1, w2) = symplectic_instance(7100 + seed);
            let (p1, p2) = (pi_from_omega(&w1).unwrap(), pi_from_omega(&w2).unwrap());
            let alg2 = j2.algebroid();
            let xi = g.graded(alg2, alg2.form_kind(), 1, 2, false);
            let eta = g.graded(alg2, alg2.form_kind(), 1, 2, false);
            witness(seed, "pair bracket residue", alg2, &pair_bracket_residue(&j2, &p1, &p2, &xi, &eta).unwrap())?;
        }
        Ok(format!("{} seeds x 10 identities", SEEDS))
    };
    t.line("7", "calculus property suite", run());
}

fn criterion_8(t: &mut Tally) {
    let a = || -> Result<String, String> {
        let alg: QAlgebroid = make_tangent(&Patch::new(["x", "y"]).unwrap());
        let x = QExpPoly::var(2, Var::X(0)).unwrap();
        let phi0 = alg.coframe(1).scale(&x);
        ensure(JacobiAlgebroid::new(alg.clone(), phi0.clone()).is_err(), "open phi0 accepted")?;
        let j: QJacobi = JacobiAlgebroid::new_unchecked(alg.clone(), phi0);
        let one = Graded::scalar(alg.form_kind(), 2, QExpPoly::one(2));
        let dd = differential_phi(&j, &differential_phi(&j, &one).unwrap()).unwrap();
        ensure(!dd.is_zero(), "d_phi^2 vanished")?;
        Ok(format!("phi0 = x dy gives d_phi d_phi 1 = {}", alg.show(&dd)))
    };
    t.line("8a", "a non-closed phi0 breaks d_phi^2 = 0", a());
    let b = || -> Result<String, String> {
        let c = Contact::new();
        let ext = c.j.algebroid();
        let bump = merge(ext, &c.base.coframe(0).wedge(&c.base.coframe(1)).unwrap().scale(&c.var(0)), None).unwrap();
        let bad = &c.forms()[1] + &bump;
        let down = presymplectic_check(&c.j, &bad);
        ensure(down.failed(), "perturbed form still closed")?;
        let bi = JacobiBialgebroid::standard(c.j.clone());
        let inst = lift_instance(&bi, &[]).map_err(|e| e.to_string())?;
        let both = closedness_crosscheck(&inst, &bad);
        ensure(
            both.passed() && both.note.as_deref() == Some("both levels: fail"),
            format!("{} {:?}", both.status, both.note),
        )?;
        Ok(format!("witness {}", down.witness.unwrap()))
    };
    t.line("8b", "a perturbed w_H fails closedness at both levels", b());
}

fn criterion_9(t: &mut Tally) {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let bin = env!("CARGO_BIN_EXE_jacalg");
    let exec = |args: &[&str], file: &str| {
        Command::new(bin).args(args).arg(root.join(file)).env("NO_COLOR", "1").output().expect("binary runs")
    };
    let run = || -> Result<String, String> {
        let text = exec(&["check"], "examples/paper.jac");
        let out = String::from_utf8_lossy(&text.stdout).to_string();
        ensure(text.status.code() == Some(0), format!("exit {:?}", text.status.code()))?;
        let summary = out.lines().last().unwrap_or_default().to_string();
        ensure(summary.ends_with(" pass, 0 fail, 0 not decided, 0 error"), summary.clone())?;
        let a = exec(&["check", "--json", "--seed", "3"], "examples/paper.jac");
        let b = exec(&["check", "--json", "--seed", "3"], "examples/paper.jac");
        ensure(a.stdout == b.stdout && !a.stdout.is_empty(), "json differs between runs")?;
        let codes = [
            ("tests/scripts/failing.jac", &["check"][..], 1),
            ("tests/scripts/broken.jac", &["check"][..], 2),
            ("tests/scripts/unbalanced.jac", &["check"][..], 2),
            ("tests/scripts/undecided.jac", &["check"][..], 0),
            ("tests/scripts/undecided.jac", &["check", "--strict"][..], 3),
        ];
        for (file, args, want) in codes {
            let got = exec(args, file).status.code();
            ensure(got == Some(want), format!("{} {:?}: exit {:?}, want {}", file, args, got, want))?;
        }
        Ok(format!("paper.jac {}; json stable; exit codes 0/1/2/3", summary))
    };
    t.line("9", "command-line checker", run());
}

fn main() {
    let mut t = Tally { unexpected: Vec::new(), red: 0, green: 0 };
    criterion_1(&mut t);
    criterion_2(&mut t);
    criterion_3(&mut t);
    criterion_4(&mut t);
    criterion_5(&mut t);
    criterion_6(&mut t);
    criterion_7(&mut t);
    criterion_8(&mut t);
    criterion_9(&mut t);
    println!("{} green, {} red ({} expected)", t.green, t.red, t.red - t.unexpected.len());
    if !t.unexpected.is_empty() {
        println!("unexpected red: {}", t.unexpected.join(", "));
        std::process::exit(1);
    }
}
