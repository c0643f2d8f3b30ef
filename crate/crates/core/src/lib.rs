//! Symbolic verification kernel for Jacobi geometry on coordinate charts
//! with a trivialized line bundle.
//!
//! The crate is organized bottom-up:
//!
//! * [`expr`] — exact multivariate rational functions, the coefficient
//!   field for everything else, with a parser and canonical printer.
//! * [`cartan`] — multivector fields, differential forms, the Der-complex
//!   of the trivial line bundle with its differential, contractions and Lie
//!   derivatives, and the Schouten–Nijenhuis bracket.
//! * [`jacobi`] — Jacobi pairs `(Λ, E)`, the tensor `J = Λ + 𝟙∧E`, its
//!   sharp map and bracket, and the structure-equation defects.
//! * [`homog`] — the dictionary between Jacobi pairs and homogeneous
//!   Poisson structures one dimension up.
//! * [`linalg`] — dense exact linear algebra over any field, used for
//!   pointwise fiber computations and symbolic matrix inverses.
//! * [`omni`] — the omni-Lie algebroid `DL ⊕ J¹L`: pairing, Dorfman
//!   bracket, B-field transforms, graphs, backwards transforms and
//!   transversal classification.
//! * [`split`] — canonical splitting models (cosymplectic, contact,
//!   homogeneous Poisson), the transversal 2-form Θ, and the Euler-like
//!   linearization test.
//! * [`moser`] — deformation families of closed 2-forms, the deformed
//!   sharp map, the Moser derivation, exact derivative identities and
//!   numerical flow probes.
//!
//! Conventions (sign tables, fiber bases, normalizations) are documented in
//! `docs/conventions.md` at the repository root and locked by regression
//! tests.
//!
//! Chart mismatches between operands are programming errors and panic; all
//! data-dependent failure modes (poles, singular matrices, points off a
//! submanifold, malformed structures) are reported through `Result`.

pub mod cartan;
pub mod expr;
pub mod homog;
pub mod jacobi;
pub mod linalg;
pub mod moser;
pub mod omni;
pub mod split;
