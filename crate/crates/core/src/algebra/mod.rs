//! Finite monoids and the morphisms that recognize regular languages.

mod basis;
mod closure;
mod compat;
mod monoid;
mod morphism;
mod transition;

pub use basis::{canonical_basis_morphism, extend_basis_e, Basis, BasisKind, TagLetters};
pub(crate) use closure::generate;
pub use compat::{compatible_product, is_good, CompatibleMorphism};
pub use monoid::{Elem, Monoid};
pub use morphism::{image, morphism_to_nfa, Morphism, MorphismFile, RecognizedLanguage};
pub use transition::transition_monoid;
