mod common;

use common::contact;
use jacalg::calculus::{differential, differential_phi, merge, phi0_schouten, schouten, split};
use jacalg::dirac::{dirac_pair_check, jomega_check, omegan_check, torsion_tensor_check};
use jacalg::random::Gen;
use jacalg::structures::{flat_map, jacobi_check, nondegenerate_check, pi_from_omega, presymplectic_check};
use jacalg::{GraphRelation, Graded, QGraded, QTensorMap, Rational, Strategy};

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn cube(w: &QGraded) -> QGraded {
    w.wedge(w).unwrap().wedge(w).unwrap()
}

/// `N = (Ω^♭)^{-1} ∘ ω^♭`.
fn recursion(omega: &QGraded, w: &QGraded) -> QTensorMap {
    flat_map(omega).unwrap().inverse().unwrap().compose(&flat_map(w).unwrap()).unwrap()
}

#[test]
fn extension_differential_splits() {
    let c = contact();
    let ext = c.j.algebroid();
    let mut g = Gen::new(11);
    for k in 1..=3 {
        for _ in 0..6 {
            let alpha = g.graded(&c.base, c.base.form_kind(), k, 2, false);
            let beta = g.graded(&c.base, c.base.form_kind(), k - 1, 2, false);
            let lhs = differential_phi(&c.j, &merge(ext, &alpha, Some(&beta)).unwrap()).unwrap();
            let da = differential(&c.base, &alpha).unwrap();
            let rhs = merge(ext, &da, Some(&(&alpha - &differential(&c.base, &beta).unwrap()))).unwrap();
            assert_eq!(lhs, rhs, "degree {}", k);
        }
    }
    assert!(differential_phi(&c.j, &c.pair(&c.canonical())).unwrap().is_zero());
}

#[test]
fn contact_differential_pairing() {
    let c = contact();
    let db = differential(&c.base, &c.canonical()).unwrap();
    let probe = c.base.frame(0).wedge(&c.base.frame(2)).unwrap();
    assert_eq!(Graded::pair(&db, &probe).unwrap().as_constant(), Some(q(1)));
    let square = c.base.coframe(0).wedge(&c.base.coframe(2)).unwrap().wedge(&c.base.coframe(1)).unwrap();
    let square = square.wedge(&c.base.coframe(3)).unwrap().scale_by(&q(2));
    assert_eq!(db.wedge(&db).unwrap(), square);
}

#[test]
fn four_pairs_are_presymplectic() {
    let c = contact();
    for beta in [c.canonical(), c.hyperbolic(), c.elliptic(), c.parabolic()] {
        assert!(presymplectic_check(&c.j, &c.pair(&beta)).passed());
    }
}

#[test]
fn cubes_of_the_pairs() {
    let c = contact();
    let ext = c.j.algebroid();
    let omega = cube(&c.pair(&c.canonical()));
    assert!(!omega.is_zero());
    let db = differential(&c.base, &c.canonical()).unwrap();
    let top = merge(ext, &c.base.zero_form(6), Some(&db.wedge(&db).unwrap().wedge(&c.canonical()).unwrap())).unwrap();
    assert_eq!(omega, top.scale_by(&q(3)));
    assert_eq!(omega.len(), 1);
    assert_eq!(omega.get(&[0, 1, 2, 3, 4, 5]).as_constant(), Some(q(6)));
    assert_eq!(cube(&c.pair(&c.hyperbolic())), omega.scale_by(&q(-1)));
    assert_eq!(cube(&c.pair(&c.elliptic())), omega);
    assert!(cube(&c.pair(&c.parabolic())).is_zero());
}

#[test]
fn recursion_operators_are_torsion_free() {
    let c = contact();
    let omega = c.pair(&c.canonical());
    for beta in [c.hyperbolic(), c.elliptic(), c.parabolic()] {
        assert!(torsion_tensor_check(c.j.algebroid(), &recursion(&omega, &c.pair(&beta))).passed());
    }
}

#[test]
fn contact_dirac_pairs() {
    let c = contact();
    let b = jacalg::JacobiBialgebroid::standard(c.j.clone());
    let omega = c.pair(&c.canonical());
    let big = GraphRelation::flat(&omega).unwrap();
    for beta in [c.hyperbolic(), c.elliptic(), c.parabolic()] {
        let small = GraphRelation::flat(&c.pair(&beta)).unwrap();
        assert!(dirac_pair_check(&b, &big, &small, &Strategy::InvertibleReduction).passed());
    }
}

#[test]
fn inverse_bivector_structures() {
    let c = contact();
    let omega = c.pair(&c.canonical());
    let flat = flat_map(&omega).unwrap();
    assert!(nondegenerate_check(&flat, c.j.algebroid()).passed());
    let inv = flat.inverse().unwrap();
    let big_pi = jacalg::structures::bivector_of_map(&inv).unwrap();
    assert_eq!(jacalg::structures::sharp_map(&big_pi).unwrap(), inv);
    assert_eq!(big_pi, pi_from_omega(&omega).unwrap().scale_by(&q(-1)));
    for beta in [c.hyperbolic(), c.elliptic(), c.parabolic()] {
        let w = c.pair(&beta);
        assert!(jomega_check(&c.j, &big_pi, &w).passed());
        assert!(omegan_check(&c.j, &omega, &recursion(&omega, &w), false).passed());
    }
}

#[test]
fn contact_jacobi_manifold() {
    let c = contact();
    let ext = c.j.algebroid();
    let pi = pi_from_omega(&c.pair(&c.canonical())).unwrap();
    assert!(jacobi_check(&c.j, &pi).passed());
    assert!(phi0_schouten(&c.j, &pi, &pi).unwrap().is_zero());
    let (lambda, e) = split(ext, &pi).unwrap();
    let e = e.unwrap();
    assert_eq!(e, c.base.frame(4));
    assert!(schouten(&c.base, &e, &lambda).unwrap().is_zero());
    let ll = schouten(&c.base, &lambda, &lambda).unwrap();
    let el = e.wedge(&lambda).unwrap();
    assert!(!el.is_zero());
    assert_eq!(ll, el.scale_by(&q(-2)));
}

#[test]
fn extension_bracket_components() {
    let c = contact();
    let ext = c.j.algebroid();
    let mut g = Gen::new(5);
    for _ in 0..5 {
        let lambda = g.graded(&c.base, c.base.section_kind(), 2, 1, false);
        let e = g.graded(&c.base, c.base.section_kind(), 1, 1, false);
        let pi = merge(ext, &lambda, Some(&e)).unwrap();
        let (p, q2) = split(ext, &phi0_schouten(&c.j, &pi, &pi).unwrap()).unwrap();
        let ll = schouten(&c.base, &lambda, &lambda).unwrap();
        assert_eq!(p, &ll + &e.wedge(&lambda).unwrap().scale_by(&q(2)));
        assert_eq!(q2.unwrap(), schouten(&c.base, &e, &lambda).unwrap().scale_by(&q(2)));
    }
}
