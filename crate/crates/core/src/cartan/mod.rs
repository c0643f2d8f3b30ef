//! Exterior calculus on a chart with trivialized line bundle: multivector
//! fields, differential forms, the Der-complex with its differential,
//! contractions, Lie derivatives and the Schouten–Nijenhuis bracket.

mod components;
mod lform;
mod multivector;
mod schouten;

pub use components::IndexSet;
pub use lform::{lie_bracket_vf, Derivation, LForm};
pub use multivector::{DiffForm, Multivector, TensorError};
pub use schouten::{lie_multivector, schouten};
