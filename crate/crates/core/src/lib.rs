//! Separation deciders for the low levels of finitely based concatenation
//! hierarchies.
//!
//! The crate is organised bottom-up:
//!
//! * [`automata`]: symbolic-alphabet NFAs, regular expressions and the usual
//!   Boolean/decision procedures.
//! * [`algebra`]: finite monoids, recognizing morphisms, transition monoids,
//!   bases (finite quotienting Boolean algebras) and compatible morphisms.
//! * [`trees`]: root labels of `(alpha, beta, S)`-trees, computed by a
//!   height-stratified antichain saturation, plus a naive powerset oracle.
//! * [`separation`]: the `Pol` and `BPol` deciders, Straubing-Thérien level
//!   dispatch and separator certificates.
//! * [`reduction`]: taggings and the NFA-to-monoid reduction.
//! * [`hardness`]: the QBF instance compiler and the level 3/2 to level 2
//!   instance transform.
//! * [`corpus`]: seeded random instance generators shared by tests, the CLI
//!   self-test and the benchmarks.

pub mod algebra;
pub mod automata;
pub mod corpus;
mod elemset;
mod error;
pub mod hardness;
mod limits;
pub mod reduction;
pub mod separation;
pub mod trees;

pub use algebra::{
    compatible_product, extend_basis_e, image, is_good, transition_monoid, Basis, BasisKind,
    CompatibleMorphism, Elem, Monoid, Morphism, RecognizedLanguage, TagLetters,
};
pub use automata::{Alphabet, Letter, Nfa, Regex, Word};
pub use elemset::ElemSet;
pub use error::{Error, Result};
pub use limits::Limits;
pub use trees::{saturate, saturate_naive, LabelFamily, TreeContext};
pub use separation::{
    bpol_separates, pol_separates, st_separates, verify_certificate, BasisSpec, Certificate, Input,
    Level, SeparateOptions, Strategy, Verdict,
};
