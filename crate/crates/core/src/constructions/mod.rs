//! Algebra builders: action algebras, `L(H, r)`, the star and square
//! conversions, zero adjunction, automatic algebras, the witnesses `B(n, ℓ)`
//! and structural membership certificates for their subalgebras.

mod action;
mod automatic;
mod lemma;
mod star;
mod witness;

pub use action::{adjoin_zero, build_action_algebra, build_l, strip_zero, TwoSortedActionAlgebra};
pub use automatic::{automatic_from_action, automatic_from_zero_adjoined, build_automatic, AutomaticAlgebra};
pub use lemma::{
    nn_generated_subuniverses, ChainStage, GroupChain, MembershipProof, Prover, StructuralCertificate,
    SweepSummary,
};
pub use star::{check_omega_tau_star, in_vn_star, omega_tau_star_identities, square, star, Square, StarAlgebra};
pub use witness::{build_b, BuildB, BuildBConfig};
