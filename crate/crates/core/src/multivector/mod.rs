//! Clifford algebra of `T ⊕ T*` with the split pairing, its spin
//! representation on forms, and the exterior derivative.

mod element;
mod form;
pub mod keyed;
pub mod word;

pub use element::{pairing, skew_word, CliffordElement};
pub use form::FormField;
pub use word::{FormWord, Word};
