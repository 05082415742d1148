//! Exterior calculus over an algebroid: Schouten bracket, differential, Lie
//! derivatives and their φ0-twisted versions.
//!
//! Sections of the algebroid have the algebroid's section kind; its forms have
//! the opposite kind. The same functions therefore serve `A` and a dual
//! structure on `A*`.

mod graded;
mod split;

use thiserror::Error;

use crate::algebroid::{AlgebroidPatch, JacobiAlgebroid};
use crate::coeff::{CoeffError, ExpPoly, Scalar};

pub(crate) use graded::{blade_indices, Blade};
pub use graded::{Form, Graded, Kind, MultiVector};
pub use split::{merge, split};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CalcError {
    #[error("kind mismatch: expected {0}, got {1}")]
    KindMismatch(Kind, Kind),
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("contraction of a degree-0 value")]
    ZeroDegreeContraction,
    #[error("not an A + R extension algebroid")]
    NotExtension,
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

fn sign<S: Scalar>(g: Graded<S>, negative: bool) -> Graded<S> {
    if negative {
        -g
    } else {
        g
    }
}

fn frame_blade<S: Scalar>(alg: &AlgebroidPatch<S>, b: Blade) -> Graded<S> {
    let idx: Vec<usize> = blade_indices(b).collect();
    Graded::basis(alg.section_kind(), alg.rank(), alg.nvars(), &idx)
}

/// `[e_j, P]`, expanded as a derivation over the wedge factors of `P`.
fn frame_with<S: Scalar>(alg: &AlgebroidPatch<S>, j: usize, p: &Graded<S>) -> Result<Graded<S>, CalcError> {
    let mut out = alg.zero_section(p.degree());
    for (b, f) in p.blades() {
        let df = alg.anchor_frame(j, f);
        if !df.is_zero() {
            out = &out + &frame_blade(alg, b).scale(&df);
        }
        let idx: Vec<usize> = blade_indices(b).collect();
        for (m, &im) in idx.iter().enumerate() {
            let c = alg.frame_bracket(j, im);
            if c.is_zero() {
                continue;
            }
            let before = Graded::basis(alg.section_kind(), alg.rank(), alg.nvars(), &idx[..m]);
            let after = Graded::basis(alg.section_kind(), alg.rank(), alg.nvars(), &idx[m + 1..]);
            let term = before.wedge(c)?.wedge(&after)?;
            out = &out + &term.scale(f);
        }
    }
    Ok(out)
}

/// `[g, P]` for a function `g`: each factor `e_i` contributes `[g, e_i] = −ρ(e_i) g`.
fn function_with<S: Scalar>(alg: &AlgebroidPatch<S>, g: &ExpPoly<S>, p: &Graded<S>) -> Graded<S> {
    let mut out = alg.zero_section(p.degree().saturating_sub(1));
    if p.degree() == 0 {
        return out;
    }
    let rho_g: Vec<ExpPoly<S>> = (0..alg.rank()).map(|i| alg.anchor_frame(i, g)).collect();
    for (b, f) in p.blades() {
        for (m, i) in blade_indices(b).enumerate() {
            if rho_g[i].is_zero() {
                continue;
            }
            let v = -(f * &rho_g[i]);
            out.add_blade(b & !(1 << i), if m % 2 == 1 { -v } else { v });
        }
    }
    out
}

/// `[P, e_J]` by peeling the first factor: `[P, e_j ∧ R] = [P, e_j] ∧ R + (−1)^{p+1} e_j ∧ [P, R]`.
fn with_frames<S: Scalar>(
    alg: &AlgebroidPatch<S>,
    p: &Graded<S>,
    idx: &[usize],
    cache: &mut Vec<Option<Graded<S>>>,
) -> Result<Graded<S>, CalcError> {
    let deg = p.degree() + idx.len() - 1;
    if idx.is_empty() {
        unreachable!("empty frame word");
    }
    let j = idx[0];
    if cache[j].is_none() {
        cache[j] = Some(-frame_with(alg, j, p)?);
    }
    let p_ej = cache[j].clone().expect("filled");
    let rest = Graded::basis(alg.section_kind(), alg.rank(), alg.nvars(), &idx[1..]);
    let mut out = p_ej.wedge(&rest)?;
    if idx.len() > 1 {
        let inner = with_frames(alg, p, &idx[1..], cache)?;
        let t = alg.frame(j).wedge(&inner)?;
        out = &out + &sign(t, p.degree() % 2 == 0);
    }
    debug_assert_eq!(out.degree(), deg);
    Ok(out)
}

/// Schouten bracket, expanded recursively from `[f,g] = 0`, `[X,f] = ρ(X)f`,
/// the Leibniz rule in the second slot and graded antisymmetry.
pub fn schouten<S: Scalar>(alg: &AlgebroidPatch<S>, p: &Graded<S>, q: &Graded<S>) -> Result<Graded<S>, CalcError> {
    alg.accepts(p, alg.section_kind())?;
    alg.accepts(q, alg.section_kind())?;
    if p.degree() + q.degree() == 0 {
        return Ok(alg.zero_section(0));
    }
    let pd = p.degree();
    let mut out = alg.zero_section(pd + q.degree() - 1);
    if pd + q.degree() - 1 > alg.rank() {
        return Ok(out);
    }
    let mut cache = vec![None; alg.rank()];
    for (b, g) in q.blades() {
        // [P, g ∧ e_J] = [P, g] ∧ e_J + g [P, e_J], with [P, g] = (−1)^p [g, P]
        if pd > 0 {
            let gp = function_with(alg, g, p);
            if !gp.is_zero() {
                let t = gp.wedge(&frame_blade(alg, b))?;
                out = &out + &sign(t, pd % 2 == 1);
            }
        }
        if b != 0 {
            let idx: Vec<usize> = blade_indices(b).collect();
            let pe = with_frames(alg, p, &idx, &mut cache)?;
            out = &out + &pe.scale(g);
        }
    }
    Ok(out)
}

/// `d_A ω` from the invariant formula on frame tuples.
pub fn differential<S: Scalar>(alg: &AlgebroidPatch<S>, w: &Graded<S>) -> Result<Graded<S>, CalcError> {
    alg.accepts(w, alg.form_kind())?;
    let k = w.degree();
    let r = alg.rank();
    let mut out = alg.zero_form(k + 1);
    if k + 1 > r || w.is_zero() {
        return Ok(out);
    }
    for blade in 0u32..(1u32 << r) {
        if blade.count_ones() as usize != k + 1 {
            continue;
        }
        let idx: Vec<usize> = blade_indices(blade).collect();
        let mut acc = ExpPoly::zero(alg.nvars());
        for (m, &im) in idx.iter().enumerate() {
            let v = w.blade(blade & !(1 << im));
            if v.is_zero() {
                continue;
            }
            let d = alg.anchor_frame(im, &v);
            acc = if m % 2 == 0 { acc + d } else { acc - d };
        }
        for m in 0..idx.len() {
            for l in (m + 1)..idx.len() {
                let c = alg.frame_bracket(idx[m], idx[l]);
                if c.is_zero() {
                    continue;
                }
                let rest: Vec<usize> = idx.iter().enumerate().filter(|(q, _)| *q != m && *q != l).map(|(_, &i)| i).collect();
                let mut val = ExpPoly::zero(alg.nvars());
                for (cb, cf) in c.blades() {
                    let ci = cb.trailing_zeros() as usize;
                    let mut args = vec![ci];
                    args.extend_from_slice(&rest);
                    let wv = w.get(&args);
                    if !wv.is_zero() {
                        val += &(cf * &wv);
                    }
                }
                acc = if (m + l) % 2 == 0 { acc + val } else { acc - val };
            }
        }
        out.add_blade(blade, acc);
    }
    Ok(out)
}

/// `d_A f` for a function.
pub fn differential_fn<S: Scalar>(alg: &AlgebroidPatch<S>, f: &ExpPoly<S>) -> Graded<S> {
    let comps = (0..alg.rank()).map(|i| alg.anchor_frame(i, f)).collect();
    Graded::from_vector(alg.form_kind(), alg.rank(), alg.nvars(), comps)
}

/// `d_{A,φ0} ω = d_A ω + φ0 ∧ ω`.
pub fn differential_phi<S: Scalar>(j: &JacobiAlgebroid<S>, w: &Graded<S>) -> Result<Graded<S>, CalcError> {
    let d = differential(j.algebroid(), w)?;
    Ok(&d + &j.phi0().wedge(w)?)
}

fn check_degree1<S: Scalar>(alg: &AlgebroidPatch<S>, x: &Graded<S>) -> Result<(), CalcError> {
    alg.accepts(x, alg.section_kind())?;
    if x.degree() != 1 {
        return Err(CalcError::DegreeMismatch { expected: 1, got: x.degree() });
    }
    Ok(())
}

/// `L_X u`: Cartan formula on forms, `[X, u]` on multivectors.
pub fn lie_derivative<S: Scalar>(alg: &AlgebroidPatch<S>, x: &Graded<S>, u: &Graded<S>) -> Result<Graded<S>, CalcError> {
    check_degree1(alg, x)?;
    if u.kind() == alg.section_kind() {
        return schouten(alg, x, u);
    }
    alg.accepts(u, alg.form_kind())?;
    let a = Graded::contract_or_zero(x, &differential(alg, u)?)?;
    if u.degree() == 0 {
        return Ok(a);
    }
    let b = differential(alg, &Graded::contract(x, u)?)?;
    Ok(&a + &b)
}

/// `L^{A,φ0}_X ω = L_X ω + φ0(X) ω` on forms.
pub fn lie_derivative_phi<S: Scalar>(
    j: &JacobiAlgebroid<S>,
    x: &Graded<S>,
    w: &Graded<S>,
) -> Result<Graded<S>, CalcError> {
    let alg = j.algebroid();
    alg.accepts(w, alg.form_kind())?;
    let l = lie_derivative(alg, x, w)?;
    let phx = Graded::pair(j.phi0(), x)?;
    Ok(&l + &w.scale(&phx))
}

/// `ρ(X) f + ⟨φ0, X⟩ f`.
pub fn anchor_phi<S: Scalar>(j: &JacobiAlgebroid<S>, x: &Graded<S>, f: &ExpPoly<S>) -> Result<ExpPoly<S>, CalcError> {
    let r = crate::algebroid::anchor_apply(j.algebroid(), x, f)?;
    Ok(r + Graded::pair(j.phi0(), x)? * f)
}

/// `[D1,D2]_{A,φ0} = [D1,D2]_A + (a1−1) D1∧ι_{φ0}D2 − (−1)^{a1+1}(a2−1) ι_{φ0}D1∧D2`.
pub fn phi0_schouten<S: Scalar>(
    j: &JacobiAlgebroid<S>,
    d1: &Graded<S>,
    d2: &Graded<S>,
) -> Result<Graded<S>, CalcError> {
    let alg = j.algebroid();
    let base = schouten(alg, d1, d2)?;
    let (a1, a2) = (d1.degree() as i64, d2.degree() as i64);
    if j.phi0().is_zero() || a1 + a2 == 0 {
        return Ok(base);
    }
    let n = alg.nvars();
    let mut out = base;
    if a2 > 0 && a1 != 1 {
        let t1 = d1.wedge(&Graded::contract(j.phi0(), d2)?)?;
        out = &out + &t1.scale(&ExpPoly::int(n, a1 - 1));
    }
    if a1 > 0 && a2 != 1 {
        let s = if (a1 + 1) % 2 == 0 { 1 } else { -1 };
        let t2 = Graded::contract(j.phi0(), d1)?.wedge(d2)?;
        out = &out + &t2.scale(&ExpPoly::int(n, -s * (a2 - 1)));
    }
    Ok(out)
}
