//! Finite exponential sums attached to a discriminant and a level, and
//! checks of the identities between them.

mod forms;
mod sums;
mod verify;

pub use forms::{genus_char, genus_char_in_box, QuadraticForm};
pub use sums::{
    h_sum, h_sum_fast, h_value, k_sum, k_terms, k_value, plus_minus_combine, representatives,
    s_residues, s_sum, s_terms, ExpSumValue, KTerm, STerm,
};
pub use verify::{verify_gkz_lemma, verify_s_equals_k, GkzReport, SEqualsKReport, TermMatch};
pub(crate) use sums::{h_fast_with, s_value_factored};
