//! Exact arithmetic in finitely presented graded-commutative rings over GF(2) and Q.

mod element;
pub mod expr;
mod hom;
pub mod linalg;
mod monomial;
mod presentation;

pub use element::Element;
pub use hom::{LinearMap, RingHom};
pub use monomial::Monomial;
pub use presentation::{Generator, Presentation, PresentationBuilder, Rule};

use std::sync::Arc;

use crate::coeff::Coeff;
use crate::error::Result;

/// `F[x]/(x^{bound})` with `deg x = degree`, truncated at `truncation`.
pub fn truncated_polynomial<F: Coeff>(
    name: &str,
    degree: u32,
    bound: u32,
    truncation: u32,
) -> Result<Arc<Presentation<F>>> {
    PresentationBuilder::new(truncation)
        .generator(name, degree)
        .rule(name, bound, "0")
        .build()
}

/// The ground field as a ring concentrated in degree 0.
pub fn ground_ring<F: Coeff>() -> Arc<Presentation<F>> {
    PresentationBuilder::new(0)
        .build()
        .expect("empty presentation")
}
