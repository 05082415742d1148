//! Script interpreter: declarations build algebroids and sections, checks
//! produce report records. Evaluation errors become error records.

use std::collections::HashMap;
use std::fmt::Display;

use jacalg::algebroid::{extend_with_r, make_tangent, make_trivial, validate_algebroid};
use jacalg::calculus::{
    differential, differential_fn, differential_phi, lie_derivative, lie_derivative_phi, merge, phi0_schouten,
    schouten, split,
};
use jacalg::dirac::{
    condition_31, dirac_pair_check, hamiltonian_pair, jacobi_pair, jomega_check, omega_n, omegan_check,
    poisson_pair, presymplectic_pair, symplectic_pair, torsion_tensor_check,
};
use jacalg::lift::{
    closedness_crosscheck, jacobi_crosscheck, lift_instance, lifted_bialgebroid_check, recursion_operator_check,
    theorem_main1_crosscheck, torsion_scaling_check, verify_bracket_scaling, verify_hat_bar_differentials,
    LiftedInstance, PairCase,
};
use jacalg::random::Gen;
use jacalg::structures::{
    bialgebroid_compat_check, bivector_of_map, compat_check, flat_map, graph_closure_check, half_bracket_residue,
    jacobi_check, maurer_cartan_check, nondegenerate_check, omega_from_pi, pi_from_omega, presymplectic_check,
    sharp_map, SectionBracket,
};
use jacalg::{
    Graded, GraphRelation, JacobiAlgebroid, JacobiBialgebroid, Kind, Patch, QAlgebroid, QBialgebroid, QExpPoly,
    QGraded, QJacobi, QReport, QTensorMap, Rational, Report, Residue, Scalar, Strategy, TensorMap,
};

use crate::ast::{BinOp, DeclKind, Expr, GraphForm, Script, StmtKind};
use crate::print::check_text;

type Res<T> = Result<T, String>;

fn msg<E: Display>(e: E) -> String {
    e.to_string()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Options {
    /// Base seed of randomized suites.
    pub seed: u64,
}

/// One line of the report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Record {
    pub name: String,
    pub line: usize,
    pub report: QReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Run {
    pub records: Vec<Record>,
}

struct Space {
    j: QJacobi,
    /// The algebroid this one extends by `R`.
    base: Option<String>,
}

#[derive(Clone)]
enum Val {
    Poly(QExpPoly),
    Sec(QGraded, String),
    Map(QTensorMap, String),
    Graph(GraphRelation<Rational>, String),
}

impl Val {
    fn describe(&self) -> &'static str {
        match self {
            Val::Poly(_) => "a function",
            Val::Sec(g, _) if g.kind() == Kind::Vector => "a multivector",
            Val::Sec(..) => "a form",
            Val::Map(..) => "a bundle map",
            Val::Graph(..) => "a graph",
        }
    }
}

enum Obj {
    Patch(Patch),
    Space(Space),
    Bialg(QBialgebroid, String),
    Lift(Box<LiftedInstance<Rational>>, String),
    Val(Val),
}

struct Interp {
    env: HashMap<String, Obj>,
    current: Option<String>,
    seed: u64,
}

fn int_of(q: &QExpPoly) -> Option<i64> {
    let c = q.as_constant()?;
    if !c.is_integer() {
        return None;
    }
    c.to_integer().to_string().parse().ok()
}

impl Interp {
    fn space(&self, name: &str) -> Res<&Space> {
        match self.env.get(name) {
            Some(Obj::Space(s)) => Ok(s),
            Some(_) => Err(format!("`{}` is not an algebroid", name)),
            None => Err(format!("unknown algebroid `{}`", name)),
        }
    }

    fn alg(&self, name: &str) -> Res<&QAlgebroid> {
        Ok(self.space(name)?.j.algebroid())
    }

    fn current(&self) -> Res<String> {
        self.current.clone().ok_or_else(|| "no algebroid declared yet".to_string())
    }

    fn declare(&mut self, name: &str, obj: Obj) -> Res<()> {
        if self.env.contains_key(name) {
            return Err(format!("`{}` is already declared", name));
        }
        self.env.insert(name.to_string(), obj);
        Ok(())
    }

    fn ident_arg(e: &Expr) -> Res<&str> {
        match e {
            Expr::Ident(s) => Ok(s),
            _ => Err("expected a name".into()),
        }
    }

    fn space_arg(&self, e: &Expr) -> Res<String> {
        let name = Self::ident_arg(e)?;
        self.space(name)?;
        Ok(name.to_string())
    }

    fn bialg_arg(&self, e: &Expr) -> Res<(&QBialgebroid, String)> {
        let name = Self::ident_arg(e)?;
        match self.env.get(name) {
            Some(Obj::Bialg(b, s)) => Ok((b, s.clone())),
            _ => Err(format!("`{}` is not a bialgebroid", name)),
        }
    }

    fn lift_arg(&self, e: &Expr) -> Res<(&LiftedInstance<Rational>, String)> {
        let name = Self::ident_arg(e)?;
        match self.env.get(name) {
            Some(Obj::Lift(l, s)) => Ok((l, s.clone())),
            _ => Err(format!("`{}` is not a lift", name)),
        }
    }

    // Values.

    fn to_sec(&self, v: Val, sp: &str, kind: Kind) -> Res<(QGraded, String)> {
        match v {
            Val::Poly(f) => {
                let alg = self.alg(sp)?;
                Ok((Graded::scalar(kind, alg.rank(), f), sp.to_string()))
            }
            Val::Sec(g, s) => {
                if g.kind() != kind {
                    return Err(format!("expected a {}, found a {}", kind_word(kind), kind_word(g.kind())));
                }
                Ok((g, s))
            }
            other => Err(format!("expected a {}, found {}", kind_word(kind), other.describe())),
        }
    }

    fn sec(&self, v: Val, sp: &str) -> Res<(QGraded, String)> {
        match v {
            Val::Sec(g, s) => Ok((g, s)),
            Val::Poly(_) => {
                let kind = self.alg(sp)?.form_kind();
                self.to_sec(v, sp, kind)
            }
            other => Err(format!("expected a section, found {}", other.describe())),
        }
    }

    fn map(&self, v: Val) -> Res<(QTensorMap, String)> {
        match v {
            Val::Map(m, s) => Ok((m, s)),
            other => Err(format!("expected a bundle map, found {}", other.describe())),
        }
    }

    fn poly(&self, v: Val) -> Res<QExpPoly> {
        match v {
            Val::Poly(f) => Ok(f),
            Val::Sec(g, _) if g.degree() == 0 => Ok(g.as_scalar().expect("degree 0")),
            other => Err(format!("expected a function, found {}", other.describe())),
        }
    }

    fn section_value(g: QGraded, sp: String) -> Val {
        if g.degree() == 0 {
            Val::Poly(g.as_scalar().expect("degree 0"))
        } else {
            Val::Sec(g, sp)
        }
    }

    fn lookup(&self, name: &str, sp: &str) -> Res<Val> {
        match self.env.get(name) {
            Some(Obj::Val(v)) => return Ok(v.clone()),
            Some(_) => return Err(format!("`{}` is not a value", name)),
            None => {}
        }
        let alg = self.alg(sp)?;
        if let Some(v) = alg.patch().coord_index(name) {
            return QExpPoly::var(alg.nvars(), v).map(Val::Poly).map_err(msg);
        }
        let labels = alg.labels();
        if let Some(i) = labels.of(alg.section_kind()).iter().position(|l| l == name) {
            return Ok(Val::Sec(alg.frame(i), sp.into()));
        }
        if let Some(i) = labels.of(alg.form_kind()).iter().position(|l| l == name) {
            return Ok(Val::Sec(alg.coframe(i), sp.into()));
        }
        let numbered = |prefix: &str| -> Option<usize> {
            let i: usize = name.strip_prefix(prefix)?.parse().ok()?;
            (1..=alg.rank()).contains(&i).then_some(i - 1)
        };
        if let Some(i) = numbered("eps") {
            return Ok(Val::Sec(alg.coframe(i), sp.into()));
        }
        if let Some(i) = numbered("e") {
            return Ok(Val::Sec(alg.frame(i), sp.into()));
        }
        Err(format!("unknown identifier `{}`", name))
    }

    fn same_space(a: &str, b: &str) -> Res<()> {
        if a == b {
            Ok(())
        } else {
            Err(format!("operands live on different algebroids `{}` and `{}`", a, b))
        }
    }

    fn add(&self, a: Val, b: Val, sp: &str) -> Res<Val> {
        match (a, b) {
            (Val::Poly(f), Val::Poly(g)) => f.checked_add(&g).map(Val::Poly).map_err(msg),
            (Val::Sec(g, s), Val::Sec(h, t)) => {
                Self::same_space(&s, &t)?;
                g.checked_add(&h).map(|x| Val::Sec(x, s)).map_err(msg)
            }
            (Val::Poly(f), Val::Sec(g, s)) | (Val::Sec(g, s), Val::Poly(f)) => {
                let (h, _) = self.to_sec(Val::Poly(f), &s, g.kind())?;
                g.checked_add(&h).map(|x| Self::section_value(x, s)).map_err(msg)
            }
            (Val::Map(m, s), Val::Map(n, t)) => {
                Self::same_space(&s, &t)?;
                m.checked_add(&n).map(|x| Val::Map(x, s)).map_err(msg)
            }
            (a, b) => Err(format!("cannot add {} and {} on `{}`", a.describe(), b.describe(), sp)),
        }
    }

    fn neg(v: Val) -> Val {
        match v {
            Val::Poly(f) => Val::Poly(-f),
            Val::Sec(g, s) => Val::Sec(-g, s),
            Val::Map(m, s) => Val::Map(m.neg(), s),
            g @ Val::Graph(..) => g,
        }
    }

    fn mul(&self, a: Val, b: Val) -> Res<Val> {
        match (a, b) {
            (Val::Poly(f), Val::Poly(g)) => f.checked_mul(&g).map(Val::Poly).map_err(msg),
            (Val::Poly(f), Val::Sec(g, s)) | (Val::Sec(g, s), Val::Poly(f)) => Ok(Val::Sec(g.scale(&f), s)),
            (Val::Sec(g, s), Val::Sec(h, t)) => {
                Self::same_space(&s, &t)?;
                g.wedge(&h).map(|x| Val::Sec(x, s)).map_err(msg)
            }
            (Val::Poly(f), Val::Map(m, s)) | (Val::Map(m, s), Val::Poly(f)) => Ok(Val::Map(m.scale(&f), s)),
            (Val::Map(m, s), Val::Map(n, t)) => {
                Self::same_space(&s, &t)?;
                m.compose(&n).map(|x| Val::Map(x, s)).map_err(msg)
            }
            (Val::Map(m, s), Val::Sec(g, t)) => {
                Self::same_space(&s, &t)?;
                m.apply(&g).map(|x| Val::Sec(x, s)).map_err(msg)
            }
            (a, b) => Err(format!("cannot multiply {} by {}", a.describe(), b.describe())),
        }
    }

    fn eval(&self, e: &Expr, sp: &str) -> Res<Val> {
        match e {
            Expr::Num(n) => {
                let c = Rational::parse_literal(n).ok_or_else(|| format!("bad number `{}`", n))?;
                Ok(Val::Poly(QExpPoly::constant(self.alg(sp)?.nvars(), c)))
            }
            Expr::Ident(name) => self.lookup(name, sp),
            Expr::Neg(inner) => Ok(Self::neg(self.eval(inner, sp)?)),
            Expr::Bin(op, a, b) => {
                let x = self.eval(a, sp)?;
                if *op == BinOp::Wedge {
                    if let (Val::Poly(f), Expr::Num(n)) = (&x, b.as_ref()) {
                        let k: u32 = n.parse().map_err(|_| format!("exponent `{}` is too large", n))?;
                        return Ok(Val::Poly(f.pow(k)));
                    }
                }
                let y = self.eval(b, sp)?;
                match op {
                    BinOp::Add => self.add(x, y, sp),
                    BinOp::Sub => self.add(x, Self::neg(y), sp),
                    BinOp::Mul | BinOp::Wedge => self.mul(x, y),
                    BinOp::Div => {
                        let d = self.poly(y)?;
                        let inv = d.unit_inverse().map_err(|_| "division by a non-unit".to_string())?;
                        self.mul(x, Val::Poly(inv))
                    }
                }
            }
            Expr::Call(name, args) => self.call(name, args, sp),
            Expr::Tuple(items) => self.tuple(items, sp),
            Expr::Graph(form, inner) => {
                let (g, s) = self.sec(self.eval(inner, sp)?, sp)?;
                let rel = match form {
                    GraphForm::Sharp => GraphRelation::sharp(&g),
                    GraphForm::SharpBar => GraphRelation::sharp_bar(&g),
                    GraphForm::Flat => GraphRelation::flat(&g),
                }
                .map_err(msg)?;
                Ok(Val::Graph(rel, s))
            }
        }
    }

    /// `(P, Q)` on an extension `A ⊕ R`, components read on `A`.
    fn tuple(&self, items: &[Expr], sp: &str) -> Res<Val> {
        if items.len() != 2 {
            return Err(format!("a pair needs two entries, found {}", items.len()));
        }
        let base = self.space(sp)?.base.clone().ok_or_else(|| format!("`{}` is not an extension by R", sp))?;
        let ext = self.alg(sp)?;
        let p = self.eval(&items[0], &base)?;
        let q = self.eval(&items[1], &base)?;
        let is_zero = |v: &Val| matches!(v, Val::Poly(f) if f.is_zero());
        let kind = match (&p, &q) {
            (Val::Sec(g, _), _) | (_, Val::Sec(g, _)) => g.kind(),
            _ => ext.form_kind(),
        };
        let balg = self.alg(&base)?;
        let (pg, qg) = match (p, q) {
            (p, q) if is_zero(&q) => (self.to_sec(p, &base, kind)?.0, None),
            (p, Val::Sec(g, _)) if is_zero(&p) => {
                (Graded::zero(kind, balg.rank(), balg.nvars(), g.degree() + 1), Some(g))
            }
            (p, q) => (self.to_sec(p, &base, kind)?.0, Some(self.to_sec(q, &base, kind)?.0)),
        };
        merge(ext, &pg, qg.as_ref()).map(|g| Val::Sec(g, sp.into())).map_err(msg)
    }

    fn call(&self, name: &str, args: &[Expr], sp: &str) -> Res<Val> {
        // An optional leading algebroid name fixes where the operation runs.
        let (sp, args): (String, &[Expr]) = match args.first() {
            Some(Expr::Ident(s)) if args.len() > 1 && matches!(self.env.get(s), Some(Obj::Space(_))) => {
                (s.clone(), &args[1..])
            }
            _ => (sp.to_string(), args),
        };
        let sp = sp.as_str();
        let arity = |n: usize| -> Res<()> {
            if args.len() == n {
                Ok(())
            } else {
                Err(format!("`{}` takes {} argument(s), found {}", name, n, args.len()))
            }
        };
        let val = |i: usize| self.eval(&args[i], sp);
        let sec = |i: usize| self.sec(val(i)?, sp);
        let vector = |i: usize| -> Res<(QGraded, String)> {
            let kind = self.alg(sp)?.section_kind();
            self.to_sec(val(i)?, sp, kind)
        };
        match name {
            "d" | "d_phi" => {
                arity(1)?;
                let v = val(0)?;
                if let (Val::Poly(f), "d") = (&v, name) {
                    return Ok(Val::Sec(differential_fn(self.alg(sp)?, f), sp.into()));
                }
                let kind = self.alg(sp)?.form_kind();
                let (g, s) = self.to_sec(v, sp, kind)?;
                let space = self.space(&s)?;
                let r = if name == "d" { differential(space.j.algebroid(), &g) } else { differential_phi(&space.j, &g) };
                r.map(|x| Val::Sec(x, s)).map_err(msg)
            }
            "schouten" | "sbracket_phi" => {
                arity(2)?;
                let ((a, s), (b, t)) = (vector(0)?, vector(1)?);
                Self::same_space(&s, &t)?;
                let space = self.space(&s)?;
                let r = if name == "schouten" {
                    schouten(space.j.algebroid(), &a, &b)
                } else {
                    phi0_schouten(&space.j, &a, &b)
                };
                r.map(|x| Self::section_value(x, s)).map_err(msg)
            }
            "lie" | "lie_phi" => {
                arity(2)?;
                let (x, s) = vector(0)?;
                let (u, t) = sec(1)?;
                Self::same_space(&s, &t)?;
                let space = self.space(&s)?;
                let r = if name == "lie" {
                    lie_derivative(space.j.algebroid(), &x, &u)
                } else {
                    lie_derivative_phi(&space.j, &x, &u)
                };
                r.map(|x| Self::section_value(x, s)).map_err(msg)
            }
            "pair" => {
                arity(2)?;
                let ((a, s), (b, t)) = (sec(0)?, sec(1)?);
                Self::same_space(&s, &t)?;
                Graded::pair(&a, &b).map(Val::Poly).map_err(msg)
            }
            "iota" => {
                arity(2)?;
                let ((a, s), (b, t)) = (sec(0)?, sec(1)?);
                Self::same_space(&s, &t)?;
                Graded::contract(&a, &b).map(|x| Self::section_value(x, s)).map_err(msg)
            }
            "exp" => {
                arity(1)?;
                let k = int_of(&self.poly(val(0)?)?).ok_or("exp takes an integer constant")?;
                let k = i32::try_from(k).map_err(msg)?;
                Ok(Val::Poly(QExpPoly::exp(self.alg(sp)?.nvars(), k)))
            }
            "diff" => {
                arity(2)?;
                let f = self.poly(val(0)?)?;
                let v = Self::ident_arg(&args[1])?;
                let var = self.alg(sp)?.patch().coord_index(v).ok_or_else(|| format!("`{}` is not a coordinate", v))?;
                f.differentiate(var).map(Val::Poly).map_err(msg)
            }
            "fst" | "snd" => {
                arity(1)?;
                let (g, s) = sec(0)?;
                let base = self.space(&s)?.base.clone().ok_or_else(|| format!("`{}` is not an extension by R", s))?;
                let (p, q) = split(self.alg(&s)?, &g).map_err(msg)?;
                let balg = self.alg(&base)?;
                let out = match (name, q) {
                    ("fst", _) => p,
                    (_, Some(q)) => q,
                    (_, None) if p.degree() == 0 => return Ok(Val::Poly(QExpPoly::zero(balg.nvars()))),
                    (_, None) => Graded::zero(p.kind(), balg.rank(), balg.nvars(), p.degree() - 1),
                };
                Ok(Self::section_value(out, base))
            }
            "omega_from_pi" | "pi_from_omega" => {
                arity(1)?;
                let (g, s) = sec(0)?;
                let r = if name == "omega_from_pi" { omega_from_pi(&g) } else { pi_from_omega(&g) };
                r.map(|x| Val::Sec(x, s)).map_err(msg)
            }
            "flat" | "sharp" => {
                arity(1)?;
                let (g, s) = sec(0)?;
                let r = if name == "flat" { flat_map(&g) } else { sharp_map(&g) };
                r.map(|m| Val::Map(m, s)).map_err(msg)
            }
            "inverse" | "transpose" => {
                arity(1)?;
                let (m, s) = self.map(val(0)?)?;
                let r = if name == "inverse" { m.inverse().map_err(msg)? } else { m.transpose() };
                Ok(Val::Map(r, s))
            }
            "compose" => {
                arity(2)?;
                self.mul(Val::Map(self.map(val(0)?)?.0, sp.into()), Val::Map(self.map(val(1)?)?.0, sp.into()))
            }
            "id" => {
                arity(0)?;
                let alg = self.alg(sp)?;
                Ok(Val::Map(TensorMap::identity(alg.section_kind(), alg.rank(), alg.nvars()), sp.into()))
            }
            "bivector" => {
                arity(1)?;
                let (m, s) = self.map(val(0)?)?;
                bivector_of_map(&m).map(|g| Val::Sec(g, s)).map_err(msg)
            }
            "omega_n" => {
                arity(2)?;
                let (w, s) = sec(0)?;
                let (n, _) = self.map(val(1)?)?;
                omega_n(&w, &n).map(|g| Val::Sec(g, s)).map_err(msg)
            }
            _ => Err(format!("unknown function `{}`", name)),
        }
    }

    // Declarations.

    fn decl(&mut self, kind: DeclKind, name: &str, on: Option<&str>, value: &Expr) -> Res<()> {
        let ctor = |e: &Expr| -> Res<(String, Vec<Expr>)> {
            match e {
                Expr::Call(f, a) => Ok((f.clone(), a.clone())),
                _ => Err("expected a constructor call".into()),
            }
        };
        if on.is_some() && matches!(kind, DeclKind::Patch | DeclKind::Algebroid | DeclKind::Jacobi | DeclKind::Bialgebroid | DeclKind::Lift) {
            return Err(format!("`on` does not apply to {} declarations", kind.keyword()));
        }
        match kind {
            DeclKind::Patch => {
                let coords = match value {
                    Expr::Ident(c) => vec![c.clone()],
                    Expr::Tuple(items) => items.iter().map(|i| Self::ident_arg(i).map(str::to_string)).collect::<Res<_>>()?,
                    _ => return Err("a patch is a list of coordinate names".into()),
                };
                let patch = Patch::new(coords).map_err(msg)?;
                self.declare(name, Obj::Patch(patch))
            }
            DeclKind::Algebroid => {
                let (f, a) = ctor(value)?;
                let patch = match a.first().map(Self::ident_arg) {
                    Some(Ok(p)) => match self.env.get(p) {
                        Some(Obj::Patch(p)) => p.clone(),
                        _ => return Err(format!("`{}` is not a patch", p)),
                    },
                    _ => return Err(format!("`{}` expects a patch", f)),
                };
                let alg: QAlgebroid = match (f.as_str(), a.len()) {
                    ("tangent", 1) => make_tangent(&patch),
                    ("trivial", 2) => {
                        let r = match &a[1] {
                            Expr::Num(n) => n.parse::<usize>().map_err(msg)?,
                            _ => return Err("rank must be a number".into()),
                        };
                        make_trivial(&patch, r)
                    }
                    _ => return Err(format!("unknown algebroid constructor `{}`", f)),
                };
                self.declare(name, Obj::Space(Space { j: JacobiAlgebroid::untwisted(alg), base: None }))?;
                self.current = Some(name.into());
                Ok(())
            }
            DeclKind::Jacobi => {
                let (f, a) = ctor(value)?;
                let base = a.first().ok_or("missing algebroid argument")?;
                let base = self.space_arg(base)?;
                let alg = self.alg(&base)?.clone();
                let space = match (f.as_str(), a.len()) {
                    ("extend", 1) => Space { j: extend_with_r(&alg).map_err(msg)?, base: Some(base) },
                    ("untwisted", 1) => Space { j: JacobiAlgebroid::untwisted(alg), base: None },
                    ("twisted", 2) => {
                        let kind = alg.form_kind();
                        let (phi, _) = self.to_sec(self.eval(&a[1], &base)?, &base, kind)?;
                        Space { j: JacobiAlgebroid::new(alg, phi).map_err(msg)?, base: None }
                    }
                    _ => return Err(format!("unknown Jacobi algebroid constructor `{}`", f)),
                };
                self.declare(name, Obj::Space(space))?;
                self.current = Some(name.into());
                Ok(())
            }
            DeclKind::Bialgebroid => {
                let (f, a) = ctor(value)?;
                let sp = self.space_arg(a.first().ok_or("missing Jacobi algebroid argument")?)?;
                let j = self.space(&sp)?.j.clone();
                let b = match (f.as_str(), a.len()) {
                    ("standard", 1) => JacobiBialgebroid::standard(j),
                    ("triangular", 2) => {
                        let kind = j.algebroid().section_kind();
                        let (pi, _) = self.to_sec(self.eval(&a[1], &sp)?, &sp, kind)?;
                        jacalg::structures::triangular(&j, &pi).map_err(msg)?
                    }
                    _ => return Err(format!("unknown bialgebroid constructor `{}`", f)),
                };
                self.declare(name, Obj::Bialg(b, sp))
            }
            DeclKind::Lift => {
                let (f, a) = ctor(value)?;
                if f != "jacobize" || a.len() != 1 {
                    return Err("a lift is declared as `jacobize(B)`".into());
                }
                let (b, sp) = self.bialg_arg(&a[0])?;
                let inst = lift_instance(b, &[]).map_err(msg)?;
                self.declare(name, Obj::Lift(Box::new(inst), sp))
            }
            DeclKind::Let | DeclKind::Form | DeclKind::Vector | DeclKind::Map => {
                let sp = match on {
                    Some(s) => {
                        self.space(s)?;
                        s.to_string()
                    }
                    None => self.current()?,
                };
                let v = self.eval(value, &sp)?;
                let alg = self.alg(&sp)?;
                let v = match kind {
                    DeclKind::Form => Val::Sec(self.to_sec(v, &sp, alg.form_kind())?.0, sp.clone()),
                    DeclKind::Vector => Val::Sec(self.to_sec(v, &sp, alg.section_kind())?.0, sp.clone()),
                    DeclKind::Map => {
                        let (m, s) = self.map(v)?;
                        Val::Map(m, s)
                    }
                    _ => v,
                };
                self.declare(name, Obj::Val(v))
            }
        }
    }

    // Checks.

    fn strategy(opts: &[(String, Expr)]) -> Res<Strategy<Rational>> {
        match opt(opts, "strategy") {
            None => Ok(Strategy::InvertibleReduction),
            Some(Expr::Ident(s)) => match s.as_str() {
                "invertible" => Ok(Strategy::InvertibleReduction),
                "compatibility" => Ok(Strategy::CompatibilitySufficient),
                "witness" => Ok(Strategy::WitnessTriples(Vec::new())),
                _ => Err(format!("unknown strategy `{}`", s)),
            },
            Some(_) => Err("strategy must be a name".into()),
        }
    }

    fn check(&self, what: &str, args: &[Expr], opts: &[(String, Expr)]) -> Res<QReport> {
        let arity = |n: usize| -> Res<()> {
            if args.len() == n {
                Ok(())
            } else {
                Err(format!("`check {}` takes {} argument(s), found {}", what, n, args.len()))
            }
        };
        let known = |allowed: &[&str]| -> Res<()> {
            for (k, _) in opts {
                if !allowed.contains(&k.as_str()) {
                    return Err(format!("unknown option `{}`", k));
                }
            }
            Ok(())
        };
        match what {
            "random" | "main1" | "omegan" => {}
            "dirac_pair" | "jacobi_pair" | "poisson_pair" | "presymplectic_pair" | "symplectic_pair" => {
                known(&["strategy"])?
            }
            _ => known(&[])?,
        }
        let cur = self.current.clone().unwrap_or_default();
        let sec_in = |e: &Expr, sp: &str| self.sec(self.eval(e, sp)?, sp);
        let map_in = |e: &Expr, sp: &str| self.map(self.eval(e, sp)?);
        let graph_in = |e: &Expr, sp: &str| match self.eval(e, sp)? {
            Val::Graph(g, s) if s == sp => Ok(g),
            Val::Graph(_, s) => Err(format!("graph lives on `{}`, not `{}`", s, sp)),
            other => Err(format!("expected a graph such as `(flat w)`, found {}", other.describe())),
        };
        match what {
            "algebroid" => {
                arity(1)?;
                Ok(validate_algebroid(self.alg(&self.space_arg(&args[0])?)?))
            }
            "jacobi" | "presymplectic" => {
                arity(2)?;
                let sp = self.space_arg(&args[0])?;
                let j = &self.space(&sp)?.j;
                let (g, _) = sec_in(&args[1], &sp)?;
                Ok(if what == "jacobi" { jacobi_check(j, &g) } else { presymplectic_check(j, &g) })
            }
            "compat" | "jomega" | "jacobi_pair" | "poisson_pair" | "presymplectic_pair" | "symplectic_pair"
            | "hamiltonian_pair" => {
                arity(3)?;
                let sp = self.space_arg(&args[0])?;
                let j = &self.space(&sp)?.j;
                let (a, _) = sec_in(&args[1], &sp)?;
                let (b, _) = sec_in(&args[2], &sp)?;
                let s = Self::strategy(opts)?;
                Ok(match what {
                    "compat" => compat_check(j, &a, &b),
                    "jomega" => jomega_check(j, &a, &b),
                    "jacobi_pair" => jacobi_pair(j, &a, &b, &s),
                    "poisson_pair" => poisson_pair(j.algebroid(), &a, &b, &s),
                    "presymplectic_pair" => presymplectic_pair(j, &a, &b, &s),
                    "symplectic_pair" => symplectic_pair(j, &a, &b, &s),
                    _ => hamiltonian_pair(j, &a, &b),
                })
            }
            "condition31" => {
                arity(2)?;
                let (a, _) = sec_in(&args[0], &cur)?;
                let (b, _) = sec_in(&args[1], &cur)?;
                Ok(condition_31(&a, &b))
            }
            "nondegenerate" | "torsion" => {
                arity(1)?;
                let (m, sp) = map_in(&args[0], &cur)?;
                let alg = self.alg(&sp)?;
                Ok(if what == "nondegenerate" { nondegenerate_check(&m, alg) } else { torsion_tensor_check(alg, &m) })
            }
            "mc" | "closure" => {
                arity(2)?;
                let (b, sp) = self.bialg_arg(&args[0])?;
                let (g, _) = sec_in(&args[1], &sp)?;
                Ok(if what == "mc" { maurer_cartan_check(b, &g) } else { graph_closure_check(b, &g) })
            }
            "bialgebroid" => {
                arity(1)?;
                Ok(bialgebroid_compat_check(self.bialg_arg(&args[0])?.0, None))
            }
            "dirac_pair" => {
                arity(3)?;
                let (b, sp) = self.bialg_arg(&args[0])?;
                let (l, l2) = (graph_in(&args[1], &sp)?, graph_in(&args[2], &sp)?);
                Ok(dirac_pair_check(b, &l, &l2, &Self::strategy(opts)?))
            }
            "omegan" => {
                known(&["weak"])?;
                arity(3)?;
                let sp = self.space_arg(&args[0])?;
                let (w, _) = sec_in(&args[1], &sp)?;
                let (n, _) = map_in(&args[2], &sp)?;
                let weak = match opt(opts, "weak") {
                    None => false,
                    Some(Expr::Ident(s)) if s == "true" => true,
                    Some(Expr::Ident(s)) if s == "false" => false,
                    Some(_) => return Err("weak must be true or false".into()),
                };
                Ok(omegan_check(&self.space(&sp)?.j, &w, &n, weak))
            }
            "lift_scaling" | "lift_jacobi" | "lift_closed" => {
                arity(2)?;
                let (l, sp) = self.lift_arg(&args[0])?;
                let (g, _) = sec_in(&args[1], &sp)?;
                Ok(match what {
                    "lift_scaling" => verify_bracket_scaling(l, &g),
                    "lift_jacobi" => jacobi_crosscheck(l, &g),
                    _ => closedness_crosscheck(l, &g),
                })
            }
            "lift_recursion" | "lift_torsion" => {
                arity(3)?;
                let (l, sp) = self.lift_arg(&args[0])?;
                let (a, _) = sec_in(&args[1], &sp)?;
                let (b, _) = sec_in(&args[2], &sp)?;
                Ok(if what == "lift_recursion" {
                    recursion_operator_check(l, &a, &b)
                } else {
                    torsion_scaling_check(l, &a, &b)
                })
            }
            "lift_bialgebroid" => {
                arity(1)?;
                Ok(lifted_bialgebroid_check(self.lift_arg(&args[0])?.0))
            }
            "lift_differentials" => {
                arity(3)?;
                let sp = self.space_arg(&args[0])?;
                let f = self.poly(self.eval(&args[1], &sp)?)?;
                let (phi, _) = sec_in(&args[2], &sp)?;
                Ok(verify_hat_bar_differentials(&self.space(&sp)?.j, &f, &phi))
            }
            "main1" => {
                known(&["case", "strategy"])?;
                arity(3)?;
                let (b, sp) = self.bialg_arg(&args[0])?;
                let (x, _) = sec_in(&args[1], &sp)?;
                let (y, _) = sec_in(&args[2], &sp)?;
                let v = Kind::Vector;
                let case = match (x.kind(), y.kind()) {
                    (a, c) if a == v && c == v => PairCase::Bivectors(x, y),
                    (a, c) if a == v && c != v => PairCase::Mixed(x, y),
                    (a, c) if a != v && c != v => PairCase::Forms(x, y),
                    _ => return Err("a mixed pair lists the bivector first".into()),
                };
                if let Some(c) = opt(opts, "case") {
                    let written: String = crate::print::atom_to_string(c).split_whitespace().collect();
                    if written != case.name() {
                        return Err(format!("case {} does not match the arguments {}", written, case.name()));
                    }
                }
                Ok(theorem_main1_crosscheck(b, &case, &Self::strategy(opts)?))
            }
            "zero" | "nonzero" => {
                arity(1)?;
                let v = self.eval(&args[0], &cur)?;
                let (res, sp) = residue(v, &cur)?;
                let alg = self.alg(&sp)?;
                Ok(if what == "zero" {
                    Report::from_residue("exact", "value", res, alg)
                } else if res.is_zero() {
                    Report::fail_with("exact", "value vanishes", res, alg)
                } else {
                    Report::pass("exact")
                })
            }
            "equal" => {
                arity(2)?;
                let a = self.eval(&args[0], &cur)?;
                let sp = match &a {
                    Val::Sec(_, s) | Val::Map(_, s) => s.clone(),
                    _ => cur.clone(),
                };
                let d = self.add(a, Self::neg(self.eval(&args[1], &sp)?), &sp)?;
                let (res, sp) = residue(d, &cur)?;
                Ok(Report::from_residue("exact", "left - right", res, self.alg(&sp)?))
            }
            "random" => {
                known(&["count"])?;
                arity(1)?;
                let suite = Self::ident_arg(&args[0])?;
                let count = match opt(opts, "count") {
                    None => 10,
                    Some(Expr::Num(n)) => n.parse::<u64>().map_err(msg)?,
                    Some(_) => return Err("count must be a number".into()),
                };
                random_suite(suite, count, self.seed)
            }
            _ => Err(format!("unknown check `{}`", what)),
        }
    }
}

fn opt<'a>(opts: &'a [(String, Expr)], key: &str) -> Option<&'a Expr> {
    opts.iter().find(|(k, _)| k == key).map(|(_, v)| v)
}

fn kind_word(k: Kind) -> &'static str {
    match k {
        Kind::Vector => "multivector",
        Kind::Form => "form",
    }
}

fn residue(v: Val, cur: &str) -> Res<(Residue<Rational>, String)> {
    match v {
        Val::Poly(f) => Ok((Residue::Scalar(f), cur.to_string())),
        Val::Sec(g, s) => Ok((Residue::Section(g), s)),
        Val::Map(m, s) => Ok((Residue::Matrix(m.matrix().to_vec()), s)),
        Val::Graph(..) => Err("a graph has no value to compare".into()),
    }
}

/// Seeded property suites; instance `i` uses seed `seed + i`.
fn random_suite(suite: &str, count: u64, seed: u64) -> Res<QReport> {
    let strategy = format!("random seed={} count={}", seed, count);
    for i in 0..count {
        let s = seed.wrapping_add(i);
        let mut g = Gen::new(s);
        let found: Option<(String, QGraded, QAlgebroid)> = match suite {
            "d_squared" => {
                let j: QJacobi = g.jacobi_algebroid();
                let alg = j.algebroid().clone();
                let mut out = None;
                for k in 0..3 {
                    let time = g.coin(0.3);
                    let w = g.graded(&alg, alg.form_kind(), k, 2, time);
                    let dd = differential_phi(&j, &differential_phi(&j, &w).map_err(msg)?).map_err(msg)?;
                    if !dd.is_zero() {
                        out = Some((format!("seed {}: d_phi d_phi of a {}-form", s, k), dd, alg.clone()));
                        break;
                    }
                }
                out
            }
            "schouten_antisymmetry" => {
                let j: QJacobi = g.jacobi_algebroid();
                let alg = j.algebroid().clone();
                let (p, q) = (g.int(0, 3) as usize, g.int(0, 3) as usize);
                let a = g.graded(&alg, alg.section_kind(), p, 2, false);
                let b = g.graded(&alg, alg.section_kind(), q, 2, false);
                let sign = if (p + 1) * (q + 1) % 2 == 0 { -1 } else { 1 };
                let r = schouten(&alg, &a, &b).map_err(msg)?;
                let r2 = schouten(&alg, &b, &a).map_err(msg)?.scale_by(&Rational::from_i64(sign));
                let d = r.checked_sub(&r2).map_err(msg)?;
                (!d.is_zero()).then(|| (format!("seed {}: [P,Q] + (-1)^((p-1)(q-1)) [Q,P]", s), d, alg))
            }
            "bracket_identity" => {
                let j: QJacobi = g.jacobi_algebroid();
                let alg = j.algebroid().clone();
                let pi = g.graded(&alg, alg.section_kind(), 2, 2, false);
                let xi = g.graded(&alg, alg.form_kind(), 1, 2, false);
                let eta = g.graded(&alg, alg.form_kind(), 1, 2, false);
                let r = half_bracket_residue(&j, &pi, &xi, &eta, SectionBracket::Plain).map_err(msg)?;
                (!r.is_zero()).then(|| (format!("seed {}: half bracket residue", s), r, alg))
            }
            "lift_scaling" => {
                let b: QBialgebroid = g.bialgebroid();
                let alg = b.a().algebroid().clone();
                let pi = g.graded(&alg, alg.section_kind(), 2, 2, false);
                let w = g.graded(&alg, alg.form_kind(), 2, 2, false);
                let inst = lift_instance(&b, &[]).map_err(msg)?;
                for x in [pi, w] {
                    let mut r = verify_bracket_scaling(&inst, &x);
                    if !r.passed() {
                        if let Some(wit) = r.witness.as_mut() {
                            wit.context = format!("seed {}: {}", s, wit.context);
                        }
                        r.strategy = format!("{}/{}", strategy, r.strategy);
                        return Ok(r);
                    }
                }
                None
            }
            _ => return Err(format!("unknown suite `{}`", suite)),
        };
        if let Some((ctx, r, alg)) = found {
            return Ok(Report::fail_with(strategy, ctx, Residue::Section(r), &alg));
        }
    }
    Ok(Report::pass(strategy))
}

/// Runs every statement in order.
pub fn run(script: &Script, opts: &Options) -> Run {
    let mut it = Interp { env: HashMap::new(), current: None, seed: opts.seed };
    let mut records = Vec::new();
    for stmt in &script.stmts {
        let line = stmt.span.line;
        match &stmt.kind {
            StmtKind::Decl { kind, name, on, value } => {
                if let Err(e) = it.decl(*kind, name, on.as_deref(), value) {
                    let label = format!("{} {}", kind.keyword(), name);
                    records.push(Record { name: label, line, report: Report::error("declaration", e) });
                }
            }
            StmtKind::Use(name) => match it.space(name) {
                Ok(_) => it.current = Some(name.clone()),
                Err(e) => records.push(Record { name: format!("use {}", name), line, report: Report::error("declaration", e) }),
            },
            StmtKind::Check { what, args, opts } => {
                let report = it.check(what, args, opts).unwrap_or_else(|e| Report::error(what.as_str(), e));
                records.push(Record { name: check_text(what, args, opts), line, report });
            }
        }
    }
    Run { records }
}
