//! Finite groups, presentations and coset enumeration.

mod coset;
mod group;
mod maps;
mod presentation;
mod series;

pub use coset::{todd_coxeter, CosetTable};
pub use group::{cycle_notation, FiniteGroup, GroupAction};
pub use maps::{
    check_fnpq_witness, extend_generator_map, find_retraction, group_in_variety, hom_from_generators,
    semidirect_product, verify_group_certificate, FnpqReport, GroupVarietyCertificate, Retraction,
    SubsetReport,
};
pub use presentation::{
    commutator_word, cyclic_reduce, eval_word, free_reduce, invert_word, left_normed_word, power_word,
    presentation_gvpc, presentation_hpc, GroupPresentation, GvPresentation, Letter, VectorSpaceFq,
};
pub use series::{in_ap_aq, left_commutator, nilpotency, normal_closure, subgroup_generated, ApAqOutcome, Nilpotency};

pub(crate) use group::lcm;
pub(crate) use series::is_prime;
