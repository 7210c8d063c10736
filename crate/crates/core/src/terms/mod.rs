//! Concrete syntax, word terms and the identity families of automatic algebras.

mod syntax;
mod words;

pub use syntax::{format_identity, format_term, parse_identities, parse_identity, parse_term, var_name};
pub use words::{
    as_word_term, canonical_words, check_zero_adjoined, delta_identities, psi_classes, sharp,
    sharp_word, word_term, zero_term, PsiClasses, Word,
};

/// Which identity family to generate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Delta,
    Psi,
    Psi0,
}

/// A family together with its bounds: words of length at most `max_len`,
/// family members up to index `max_index`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IdentityFamilySpec {
    pub family: Family,
    pub max_len: usize,
    pub max_index: usize,
}
