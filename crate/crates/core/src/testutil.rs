use std::sync::Arc;

use rand::Rng;

use crate::coeff::Coeff;
use crate::gring::{Element, Presentation};

/// A random class: each basis monomial present with probability 1/2.
pub(crate) fn random_element<F: Coeff, R: Rng>(
    p: &Arc<Presentation<F>>,
    rng: &mut R,
    coeff: impl Fn(&mut R) -> F,
) -> Element<F> {
    let mut acc = Element::zero(p);
    for m in p.basis() {
        if rng.gen_bool(0.5) {
            acc = &acc + &Element::term(p, m, coeff(rng));
        }
    }
    acc
}
