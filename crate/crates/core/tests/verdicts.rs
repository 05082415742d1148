use jacalg::algebroid::extend_with_r;
use jacalg::calculus::merge;
use jacalg::dirac::{dirac_pair_check, jacobi_pair, jomega_check, omegan_check, poisson_pair, presymplectic_pair};
use jacalg::lift::{
    jacobi_crosscheck, lift_instance, lifted_bialgebroid_check, recursion_operator_check, theorem_main1_crosscheck,
    torsion_scaling_check, verify_bracket_scaling, verify_hat_bar_differentials, verify_instance_scaling, PairCase,
};
use jacalg::random::{Gen, SymplecticFamily};
use jacalg::structures::{
    bialgebroid_compat_check, flat_map, graph_closure_check, maurer_cartan_check, pi_from_omega, triangular,
};
use jacalg::{GraphRelation, JacobiBialgebroid, QBialgebroid, QGraded, QJacobi, Rational, Status, Strategy};

const FAMILIES: [SymplecticFamily; 3] = [SymplecticFamily::Darboux, SymplecticFamily::Contact, SymplecticFamily::Lie];

fn decided(s: Status) -> bool {
    matches!(s, Status::Pass | Status::Fail)
}

/// Two non-degenerate forms on a common base.
fn symplectic_pair_instance(seed: u64) -> (QJacobi, QGraded, QGraded) {
    let mut g = Gen::new(seed);
    let family = FAMILIES[seed as usize % 3];
    let j: QJacobi = g.symplectic_base(family);
    let w1 = g.symplectic_in(family, &j).unwrap();
    let w2 = g.symplectic_in(family, &j).unwrap();
    (j, w1, w2)
}

#[test]
fn maurer_cartan_agrees_with_bracket_closure() {
    for seed in 0..12u64 {
        let (j, w, _) = symplectic_pair_instance(seed);
        let mut g = Gen::new(1000 + seed);
        let pi = pi_from_omega(&w).unwrap();
        let alg = j.algebroid();
        let bs: Vec<QBialgebroid> = vec![JacobiBialgebroid::standard(j.clone()), triangular(&j, &pi).unwrap()];
        for b in &bs {
            let cands = [
                pi.clone(),
                w.clone(),
                g.graded(alg, alg.section_kind(), 2, 1, false),
                g.graded(alg, alg.form_kind(), 2, 1, false),
            ];
            for c in &cands {
                let mc = maurer_cartan_check(b, c);
                let cl = graph_closure_check(b, c);
                assert!(decided(mc.status), "seed {}", seed);
                assert_eq!(mc.status, cl.status, "seed {}: {:?} vs {:?}", seed, mc, cl);
            }
        }
    }
}

#[test]
fn nondegenerate_correspondence_preserves_verdicts() {
    for seed in 0..9u64 {
        let (j, w, _) = symplectic_pair_instance(seed);
        let mut g = Gen::new(2000 + seed);
        let pi = pi_from_omega(&w).unwrap();
        assert!(jacalg::structures::jacobi_check(&j, &pi).passed());
        let alg = j.algebroid();
        let noise = g.graded(alg, alg.form_kind(), 2, 1, false);
        let bent = &w + &noise;
        if flat_map(&bent).unwrap().is_invertible() {
            let p = pi_from_omega(&bent).unwrap();
            assert_eq!(
                jacalg::structures::jacobi_check(&j, &p).status,
                jacalg::structures::presymplectic_check(&j, &bent).status,
                "seed {}",
                seed
            );
        }
    }
}

#[test]
fn pair_verdicts_are_symmetric_and_strategies_agree() {
    for seed in 0..9u64 {
        let (j, w1, w2) = symplectic_pair_instance(seed);
        let b = JacobiBialgebroid::standard(j.clone());
        let pi1 = pi_from_omega(&w1).unwrap();
        let s = Strategy::InvertibleReduction;
        let pairs = [
            (GraphRelation::flat(&w1).unwrap(), GraphRelation::flat(&w2).unwrap()),
            (GraphRelation::sharp_bar(&pi1).unwrap(), GraphRelation::flat(&w2).unwrap()),
        ];
        for (l, l2) in &pairs {
            let a = dirac_pair_check(&b, l, l2, &s);
            assert!(decided(a.status), "seed {}", seed);
            assert_eq!(a.status, dirac_pair_check(&b, l2, l, &s).status, "seed {}", seed);
            let w = dirac_pair_check(&b, l, l2, &Strategy::WitnessTriples(vec![]));
            assert_eq!(a.status, w.status, "seed {}", seed);
        }
        let jo = jomega_check(&j, &pi1, &w2);
        let dp = dirac_pair_check(&b, &pairs[1].0, &pairs[1].1, &s);
        assert_eq!(jo.status, dp.status, "seed {}", seed);
    }
}

#[test]
fn flat_pairs_give_weak_structures() {
    let mut seen = 0;
    for seed in 0..15u64 {
        let (j, w1, w2) = symplectic_pair_instance(seed);
        let n = flat_map(&w1).unwrap().inverse().unwrap().compose(&flat_map(&w2).unwrap()).unwrap();
        if presymplectic_pair(&j, &w1, &w2, &Strategy::InvertibleReduction).passed() {
            seen += 1;
            assert!(omegan_check(&j, &w1, &n, true).passed(), "seed {}", seed);
        }
    }
    assert!(seen > 0);
}

#[test]
fn main_correspondence_on_random_pairs() {
    let mut statuses = Vec::new();
    for seed in 0..6u64 {
        let (j, w1, w2) = symplectic_pair_instance(seed);
        let b = JacobiBialgebroid::standard(j);
        let (p1, p2) = (pi_from_omega(&w1).unwrap(), pi_from_omega(&w2).unwrap());
        for case in [PairCase::Forms(w1.clone(), w2.clone()), PairCase::Mixed(p1.clone(), w2), PairCase::Bivectors(p1, p2)] {
            let r = theorem_main1_crosscheck(&b, &case, &Strategy::InvertibleReduction);
            assert!(r.passed(), "seed {} {}: {:?}", seed, case.name(), r);
            statuses.push(r.note.unwrap());
        }
    }
    assert!(statuses.iter().any(|n| n == "both levels: pass"));
    assert!(statuses.iter().any(|n| n == "both levels: fail"));
}

#[test]
fn poisson_pairs_are_jacobi_pairs_on_the_extension() {
    for seed in 0..6u64 {
        let mut g = Gen::new(3000 + seed);
        let j: QJacobi = g.symplectic_base(SymplecticFamily::Darboux);
        let pi1 = pi_from_omega(&g.symplectic_in(SymplecticFamily::Darboux, &j).unwrap()).unwrap();
        let pi2 = if g.coin(0.3) {
            pi1.scale_by(&Rational::from_integer(2.into()))
        } else {
            pi_from_omega(&g.symplectic_in(SymplecticFamily::Darboux, &j).unwrap()).unwrap()
        };
        let alg = j.algebroid();
        let ext = extend_with_r(alg).unwrap();
        let s = Strategy::InvertibleReduction;
        let down = poisson_pair(alg, &pi1, &pi2, &s);
        let (q1, q2) = (merge(ext.algebroid(), &pi1, None).unwrap(), merge(ext.algebroid(), &pi2, None).unwrap());
        let up = jacobi_pair(&ext, &q1, &q2, &s);
        assert!(decided(down.status), "seed {}", seed);
        assert_eq!(down.status, up.status, "seed {}", seed);
    }
}

#[test]
fn lift_identities_on_random_bialgebroids() {
    for seed in 0..8u64 {
        let mut g = Gen::new(4000 + seed);
        let b: QBialgebroid = g.bialgebroid();
        let alg = b.a().algebroid();
        let pi = g.graded(alg, alg.section_kind(), 2, 2, false);
        let w = g.graded(alg, alg.form_kind(), 2, 2, false);
        let inst = lift_instance(&b, &[("pi".into(), pi.clone()), ("omega".into(), w.clone())]).unwrap();
        assert!(verify_instance_scaling(&inst).passed(), "seed {}", seed);
        assert!(verify_bracket_scaling(&inst, &w).passed(), "seed {}", seed);
        let f = g.exp_poly(alg, 2, 3, true);
        let k = g.int(1, 2) as usize;
        let phi = g.graded(alg, alg.form_kind(), k, 1, true);
        assert!(verify_hat_bar_differentials(b.a(), &f, &phi).passed(), "seed {}", seed);
        assert!(jacobi_crosscheck(&inst, &pi).passed(), "seed {}", seed);
        assert!(recursion_operator_check(&inst, &pi, &w).passed(), "seed {}", seed);
        assert!(torsion_scaling_check(&inst, &pi, &pi).passed(), "seed {}", seed);
        let down = bialgebroid_compat_check(&b, None).status;
        assert_eq!(down, lifted_bialgebroid_check(&inst).status, "seed {}", seed);
    }
}
