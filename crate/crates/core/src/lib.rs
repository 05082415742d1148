//! Exact symbolic computations with Lie and Jacobi algebroids on a single
//! coordinate patch.
//!
//! Every type is generic over an exact [`Scalar`] field; the aliases below fix
//! arbitrary-precision rationals.

pub mod algebroid;
pub mod calculus;
pub mod coeff;
pub mod dirac;
pub mod lift;
pub mod random;
pub mod report;
pub mod structures;

pub use algebroid::{AlgebroidError, AlgebroidPatch, JacobiAlgebroid, JacobiBialgebroid, Labels, Patch};
pub use calculus::{CalcError, Form, Graded, Kind, MultiVector};
pub use coeff::{CoeffError, ExpPoly, Monomial, Scalar, Var};
pub use report::{Report, Residue, Scope, Status, Witness};
pub use dirac::{GraphKind, GraphRelation, RelationModel, Strategy};
pub use structures::{CouplePair, StructureError, TensorMap};

pub type Rational = num_rational::BigRational;
pub type QExpPoly = ExpPoly<Rational>;
pub type QGraded = Graded<Rational>;
pub type QAlgebroid = AlgebroidPatch<Rational>;
pub type QJacobi = JacobiAlgebroid<Rational>;
pub type QBialgebroid = JacobiBialgebroid<Rational>;
pub type QReport = Report<Rational>;
pub type QTensorMap = TensorMap<Rational>;
