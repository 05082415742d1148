//! Identification of `Γ(∧^k(A ⊕ R))` with pairs `(P, Q)` of degrees `k` and `k−1`,
//! via `(P, Q) ↦ P + ê ∧ Q`. Forms use the same rule with `ε̂`.

use super::{blade_indices, CalcError, Graded};
use crate::algebroid::AlgebroidPatch;
use crate::coeff::Scalar;

fn base_rank<S: Scalar>(ext: &AlgebroidPatch<S>) -> Result<usize, CalcError> {
    ext.extension_of().filter(|&r| r + 1 == ext.rank()).ok_or(CalcError::NotExtension)
}

fn check_base<S: Scalar>(g: &Graded<S>, r: usize, n: usize) -> Result<(), CalcError> {
    if g.rank() != r {
        return Err(CalcError::RankMismatch(r, g.rank()));
    }
    if g.nvars() != n {
        return Err(crate::coeff::CoeffError::VariableMismatch(n, g.nvars()).into());
    }
    Ok(())
}

/// `P + ê ∧ Q` on the extension `ext`. `Q` is required exactly when `P` has positive degree,
/// except that a missing `Q` stands for zero.
pub fn merge<S: Scalar>(ext: &AlgebroidPatch<S>, p: &Graded<S>, q: Option<&Graded<S>>) -> Result<Graded<S>, CalcError> {
    let r = base_rank(ext)?;
    check_base(p, r, ext.nvars())?;
    let k = p.degree();
    let mut out = Graded::zero(p.kind(), r + 1, ext.nvars(), k);
    for (b, f) in p.blades() {
        out.add_blade(b, f.clone());
    }
    if let Some(q) = q {
        check_base(q, r, ext.nvars())?;
        if q.kind() != p.kind() {
            return Err(CalcError::KindMismatch(p.kind(), q.kind()));
        }
        if k == 0 || q.degree() + 1 != k {
            return Err(CalcError::DegreeMismatch { expected: k.saturating_sub(1), got: q.degree() });
        }
        let odd = q.degree() % 2 == 1;
        for (b, f) in q.blades() {
            out.add_blade(b | (1 << r), if odd { -f.clone() } else { f.clone() });
        }
    }
    Ok(out)
}

/// Inverse of [`merge`]: `(P, Q)` with `Q` absent for degree 0.
pub fn split<S: Scalar>(ext: &AlgebroidPatch<S>, g: &Graded<S>) -> Result<(Graded<S>, Option<Graded<S>>), CalcError> {
    let r = base_rank(ext)?;
    if g.rank() != r + 1 {
        return Err(CalcError::RankMismatch(r + 1, g.rank()));
    }
    let k = g.degree();
    let mut p = Graded::zero(g.kind(), r, g.nvars(), k);
    let mut q = (k > 0).then(|| Graded::zero(g.kind(), r, g.nvars(), k - 1));
    for (b, f) in g.blades() {
        if b & (1 << r) == 0 {
            p.add_blade(b, f.clone());
        } else if let Some(q) = q.as_mut() {
            let rest = b & !(1 << r);
            let odd = blade_indices(rest).count() % 2 == 1;
            q.add_blade(rest, if odd { -f.clone() } else { f.clone() });
        }
    }
    Ok((p, q))
}
