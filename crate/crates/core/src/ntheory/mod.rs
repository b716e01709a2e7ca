//! Elementary number theory: integer arithmetic, Kronecker symbols and
//! Dirichlet characters.

pub mod arith;
mod characters;
mod kronecker;

pub use characters::{
    all_characters, character_by_index, kronecker_character, DirichletCharacter, RootOfUnity,
};
pub use kronecker::{
    is_fundamental, kronecker, least_root, roots_mod_2n, DiscriminantDatum,
};
