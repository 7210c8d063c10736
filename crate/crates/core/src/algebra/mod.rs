//! Finite multi-sorted algebras and the generic machinery over them.

mod closure;
mod congruence;
mod finite;
mod free;
mod hom;
mod json;
mod membership;
mod product;
mod signature;
mod term;

pub use closure::{
    generate_subalgebra, generate_subalgebra_with, generate_with_terms, greedy_generating_set,
    small_generating_set,
    is_subuniverse, subalgebra, DenseCloser, Generated, SubUniverse,
};
pub use congruence::{is_congruence, quotient, Congruence, Homomorphism};
pub use finite::{for_each_tuple, Elem, FiniteAlgebra};
pub use free::{basis_of, free_algebra, free_algebra_with, vn_basis, vn_basis_with, FreeAlgebra, Violation};
pub use hom::{
    empty_partial, find_embedding, find_homomorphism, find_isomorphism, search, PartialMap,
    SearchOptions,
};
pub use json::{read_algebra, write_algebra, ActDoc, AlgebraDoc, GroupDoc, OpDoc, SortDoc};
pub use membership::{
    holds_bounded, BoundedCheck, in_variety, in_variety_with, in_vn, in_vn_oracle, in_vn_with, verify_certificate,
    verify_certificate_with, Membership, MembershipCertificate, VarietyOracle, VnCounterexample,
    VnOutcome,
};
pub use product::{direct_product, power, product_coords, product_elem};
pub use signature::{Signature, Symbol, DOT};
pub use term::{eval_term, holds, holds_with, Assignment, Check, Identity, Term, Var};

pub(crate) use membership::{binomial, unrank_subset};
pub(crate) use term::CompiledTerm;
