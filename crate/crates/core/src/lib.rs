//! Finite multi-sorted algebras, identities, finitely presented groups and
//! the action-algebra constructions built from them.

pub mod algebra;
pub mod budget;
pub mod constructions;
pub mod error;
pub mod groups;
pub mod terms;
pub mod verify;

pub use algebra::{
    Assignment, Check, Congruence, Elem, FiniteAlgebra, Homomorphism, Identity, Membership,
    MembershipCertificate, Signature, SubUniverse, Symbol, Term, Var,
};
pub use budget::{Budget, Progress, Silent};
pub use error::{Error, Result};
