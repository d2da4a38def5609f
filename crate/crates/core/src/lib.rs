//! Exact computations with planes of P4 and the Horrocks-Mumford bundle:
//! resolution pairs, the rank classification of planes, jumping lines,
//! local geometry of the strata, and the Heisenberg symmetry.
//!
//! All algorithms are generic over an exact [`scalar::Field`]; the aliases
//! below fix the two fields used in practice.

pub mod exmat;
pub mod exterior;
pub mod heisenberg;
pub mod hmrestrict;
pub mod polykit;
pub mod respairs;
pub mod scalar;
pub mod strata;

pub use scalar::{Cyclo5, Field, ModP, Rational};

pub type QMatrix = exmat::ExactMatrix<Rational>;
pub type CycloMatrix = exmat::ExactMatrix<Cyclo5>;
pub type QPlane = hmrestrict::PlaneSpec<Rational>;
pub type CycloPlane = hmrestrict::PlaneSpec<Cyclo5>;
pub type QLine = hmrestrict::LineSpec<Rational>;
pub type CycloLine = hmrestrict::LineSpec<Cyclo5>;
