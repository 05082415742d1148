#![allow(dead_code)]

use jacalg::algebroid::{extend_with_r, make_tangent};
use jacalg::calculus::{differential, merge};
use jacalg::{Patch, QAlgebroid, QExpPoly, QGraded, QJacobi, Var};

/// `T R^5 ⊕ R` over `(x1, x2, y1, y2, z)` with `φ0 = (0, 1)`.
pub struct Contact {
    pub base: QAlgebroid,
    pub j: QJacobi,
}

pub fn contact() -> Contact {
    let base = make_tangent(&Patch::new(["x1", "x2", "y1", "y2", "z"]).unwrap());
    let j = extend_with_r(&base).unwrap();
    Contact { base, j }
}

impl Contact {
    pub fn var(&self, i: usize) -> QExpPoly {
        QExpPoly::var(self.base.nvars(), Var::X(i)).unwrap()
    }

    /// `-c1 dx1 + c2 dx2 + dz`, coefficient functions given as coordinate indices with signs.
    pub fn beta(&self, terms: &[(i64, usize, usize)]) -> QGraded {
        let mut b = self.base.coframe(4);
        for &(s, coord, dir) in terms {
            b = &b + &self.base.coframe(dir).scale(&self.var(coord).scale(&jacalg::Rational::from_integer(s.into())));
        }
        b
    }

    pub fn canonical(&self) -> QGraded {
        self.beta(&[(-1, 2, 0), (-1, 3, 1)])
    }

    pub fn hyperbolic(&self) -> QGraded {
        self.beta(&[(-1, 2, 0), (1, 3, 1)])
    }

    pub fn elliptic(&self) -> QGraded {
        self.beta(&[(-1, 3, 0), (1, 2, 1)])
    }

    pub fn parabolic(&self) -> QGraded {
        self.beta(&[(-1, 3, 0)])
    }

    /// `(dβ, β)` on the extension.
    pub fn pair(&self, beta: &QGraded) -> QGraded {
        merge(self.j.algebroid(), &differential(&self.base, beta).unwrap(), Some(beta)).unwrap()
    }
}
