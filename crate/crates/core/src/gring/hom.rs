use std::collections::BTreeMap;
use std::sync::Arc;

use super::element::same_presentation;
use super::{Element, Monomial, Presentation};
use crate::coeff::Coeff;
use crate::error::{Error, Result};

/// A degree-preserving ring map, determined by generator images.
#[derive(Clone, Debug)]
pub struct RingHom<F: Coeff> {
    source: Arc<Presentation<F>>,
    target: Arc<Presentation<F>>,
    images: Vec<Element<F>>,
}

impl<F: Coeff> RingHom<F> {
    /// Validates degrees and that every source rule maps to a valid relation.
    pub fn new(
        source: &Arc<Presentation<F>>,
        target: &Arc<Presentation<F>>,
        images: Vec<Element<F>>,
    ) -> Result<Self> {
        if images.len() != source.ngens() {
            return Err(Error::InvalidHom(format!(
                "{} images for {} generators",
                images.len(),
                source.ngens()
            )));
        }
        for (g, img) in source.generators().iter().zip(&images) {
            if !same_presentation(img.presentation(), target) {
                return Err(Error::PresentationMismatch);
            }
            if img.terms().any(|(m, _)| m.degree() != g.degree) {
                return Err(Error::InvalidHom(format!(
                    "image of `{}` is not concentrated in degree {}",
                    g.name, g.degree
                )));
            }
        }
        let hom = RingHom {
            source: source.clone(),
            target: target.clone(),
            images,
        };
        for rule in source.rules() {
            let g = &source.generators()[rule.generator];
            let lhs = hom.images[rule.generator].pow(rule.exponent);
            let mut rhs = Element::zero(target);
            for (exps, c) in &rule.replacement {
                rhs = &rhs + &hom.image_of_exponents(exps).scale(c);
            }
            if lhs != rhs {
                return Err(Error::InvalidHom(format!(
                    "relation {}^{} is not respected: {} vs {}",
                    g.name, rule.exponent, lhs, rhs
                )));
            }
        }
        Ok(hom)
    }

    /// Map generators by name: each source generator goes to the same-named target generator.
    pub fn by_name(source: &Arc<Presentation<F>>, target: &Arc<Presentation<F>>) -> Result<Self> {
        let images = source
            .generators()
            .iter()
            .map(|g| Element::generator(target, &g.name))
            .collect::<Result<Vec<_>>>()?;
        RingHom::new(source, target, images)
    }

    pub fn identity(pres: &Arc<Presentation<F>>) -> Self {
        RingHom::by_name(pres, pres).expect("identity is a ring map")
    }

    pub fn source(&self) -> &Arc<Presentation<F>> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Presentation<F>> {
        &self.target
    }

    pub fn images(&self) -> &[Element<F>] {
        &self.images
    }

    fn image_of_exponents(&self, exps: &[u32]) -> Element<F> {
        let mut acc = Element::one(&self.target);
        for (img, &e) in self.images.iter().zip(exps) {
            if e > 0 {
                acc = &acc * &img.pow(e);
            }
        }
        acc
    }

    pub fn apply(&self, x: &Element<F>) -> Result<Element<F>> {
        if !same_presentation(x.presentation(), &self.source) {
            return Err(Error::PresentationMismatch);
        }
        let mut acc = Element::zero(&self.target);
        for (m, c) in x.terms() {
            acc = &acc + &self.image_of_exponents(m.exponents()).scale(c);
        }
        Ok(acc)
    }
}

/// A linear map shifting degree by a fixed amount, given on basis monomials.
#[derive(Clone, Debug)]
pub struct LinearMap<F: Coeff> {
    source: Arc<Presentation<F>>,
    target: Arc<Presentation<F>>,
    shift: u32,
    images: BTreeMap<Monomial, Element<F>>,
}

impl<F: Coeff> LinearMap<F> {
    /// Basis monomials whose shifted degree exceeds the target's truncation may be omitted.
    pub fn new(
        source: &Arc<Presentation<F>>,
        target: &Arc<Presentation<F>>,
        shift: u32,
        images: BTreeMap<Monomial, Element<F>>,
    ) -> Result<Self> {
        for (m, img) in &images {
            if !source.is_normal(m) {
                return Err(Error::InvalidHom(format!(
                    "`{}` is not a basis monomial of the source",
                    Element::monomial_string(source, m)
                )));
            }
            if !same_presentation(img.presentation(), target) {
                return Err(Error::PresentationMismatch);
            }
            if img.terms().any(|(t, _)| t.degree() != m.degree() + shift) {
                return Err(Error::InvalidHom(format!(
                    "image of `{}` is not in degree {}",
                    Element::monomial_string(source, m),
                    m.degree() + shift
                )));
            }
        }
        for m in source.basis() {
            if m.degree() + shift <= target.truncation_degree() && !images.contains_key(&m) {
                return Err(Error::InvalidHom(format!(
                    "no image given for basis monomial `{}`",
                    Element::monomial_string(source, &m)
                )));
            }
        }
        Ok(LinearMap {
            source: source.clone(),
            target: target.clone(),
            shift,
            images,
        })
    }

    pub fn shift(&self) -> u32 {
        self.shift
    }

    pub fn source(&self) -> &Arc<Presentation<F>> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Presentation<F>> {
        &self.target
    }

    pub fn images(&self) -> &BTreeMap<Monomial, Element<F>> {
        &self.images
    }

    pub fn apply(&self, x: &Element<F>) -> Result<Element<F>> {
        if !same_presentation(x.presentation(), &self.source) {
            return Err(Error::PresentationMismatch);
        }
        let mut acc = Element::zero(&self.target);
        for (m, c) in x.terms() {
            if c.is_zero() {
                continue;
            }
            if let Some(img) = self.images.get(m) {
                acc = &acc + &img.scale(c);
            }
        }
        Ok(acc)
    }
}
