//! Symbolic calculator for mod-2 and rational cohomology rings of closed
//! manifolds and their topological blow-ups.
//!
//! The crate is organised bottom-up:
//!
//! - [`gring`]: finitely presented graded-commutative rings with canonical normal forms
//! - [`steenrod`]: the total Steenrod square and its inverse on GF(2) presentations
//! - [`manifold`]: closed-manifold models, fundamental-class pairing and Wu classes
//! - [`charclass`]: disk-bundle Wu classes, Chern/Stiefel-Whitney/Pontryagin conversion, L-classes
//! - [`blowup`]: cohomology of a topological blow-up and its characteristic classes
//! - [`obstruction`]: the Wu-class obstruction for codimension-2 inclusions

pub mod blowup;
pub mod charclass;
pub mod coeff;
pub mod error;
pub mod gring;
pub mod manifold;
pub mod obstruction;
pub mod steenrod;

#[cfg(test)]
pub(crate) mod testutil;

pub use coeff::{Coeff, CoefficientField, Gf2, Rational};
pub use error::{Error, Result};
pub use gring::{Element, LinearMap, Monomial, Presentation, PresentationBuilder, RingHom};
