use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::presentation::add_term;
use super::{Monomial, Presentation};
use crate::coeff::Coeff;
use crate::error::{Error, Result};

/// A class in normal form: a sparse table from normal monomials to nonzero coefficients.
#[derive(Clone)]
pub struct Element<F: Coeff> {
    pres: Arc<Presentation<F>>,
    terms: BTreeMap<Monomial, F>,
}

pub(crate) fn same_presentation<F: Coeff>(
    a: &Arc<Presentation<F>>,
    b: &Arc<Presentation<F>>,
) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl<F: Coeff> Element<F> {
    /// Wrap a table that is already in normal form.
    pub(crate) fn from_map(pres: Arc<Presentation<F>>, terms: BTreeMap<Monomial, F>) -> Self {
        debug_assert!(terms.iter().all(|(m, c)| pres.is_normal(m) && !c.is_zero()));
        Element { pres, terms }
    }

    pub fn zero(pres: &Arc<Presentation<F>>) -> Self {
        Element {
            pres: pres.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(pres: &Arc<Presentation<F>>) -> Self {
        Self::scalar(pres, F::one())
    }

    pub fn scalar(pres: &Arc<Presentation<F>>, c: F) -> Self {
        Self::term(pres, Monomial::one(pres.ngens()), c)
    }

    /// `c` times a monomial, reduced to normal form.
    pub fn term(pres: &Arc<Presentation<F>>, m: Monomial, c: F) -> Self {
        let mut acc = BTreeMap::new();
        pres.reduce_into(m.exponents().to_vec(), c, &mut acc);
        Element::from_map(pres.clone(), acc)
    }

    pub fn monomial(pres: &Arc<Presentation<F>>, m: Monomial) -> Self {
        Self::term(pres, m, F::one())
    }

    pub fn from_exponents(pres: &Arc<Presentation<F>>, exponents: Vec<u32>) -> Self {
        let mut acc = BTreeMap::new();
        pres.reduce_into(exponents, F::one(), &mut acc);
        Element::from_map(pres.clone(), acc)
    }

    pub fn generator(pres: &Arc<Presentation<F>>, name: &str) -> Result<Self> {
        let i = pres.generator_index(name)?;
        let mut exps = vec![0; pres.ngens()];
        exps[i] = 1;
        Ok(Self::from_exponents(pres, exps))
    }

    pub fn presentation(&self) -> &Arc<Presentation<F>> {
        &self.pres
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &F)> + '_ {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> F {
        self.terms.get(m).cloned().unwrap_or_else(F::zero)
    }

    pub fn constant_term(&self) -> F {
        self.coefficient(&Monomial::one(self.pres.ngens()))
    }

    /// Degree-`k` component.
    pub fn component(&self, k: u32) -> Self {
        self.filter(|m| m.degree() == k)
    }

    /// Components of degree at most `k`.
    pub fn truncate(&self, k: u32) -> Self {
        self.filter(|m| m.degree() <= k)
    }

    pub fn filter(&self, keep: impl Fn(&Monomial) -> bool) -> Self {
        Element {
            pres: self.pres.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// The common degree of all terms; zero counts as homogeneous of every degree.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degrees = self.terms.keys().map(Monomial::degree);
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).min()
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Degrees in which the class has a nonzero component.
    pub fn support_degrees(&self) -> Vec<u32> {
        let mut ds: Vec<u32> = self.terms.keys().map(Monomial::degree).collect();
        ds.dedup();
        ds
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Element::zero(&self.pres);
        }
        Element {
            pres: self.pres.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a.clone() * c.clone()))
                .filter(|(_, a)| !a.is_zero())
                .collect(),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            add_term(&mut terms, m.clone(), c.clone());
        }
        Ok(Element {
            pres: self.pres.clone(),
            terms,
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&-other)
    }

    /// Cup product, truncated and reduced.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let trunc = self.pres.truncation_degree();
        let mut acc = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if m1.degree() + m2.degree() > trunc {
                    continue;
                }
                let exps: Vec<u32> = m1
                    .exponents()
                    .iter()
                    .zip(m2.exponents())
                    .map(|(a, b)| a + b)
                    .collect();
                self.pres
                    .reduce_into(exps, c1.clone() * c2.clone(), &mut acc);
            }
        }
        Ok(Element::from_map(self.pres.clone(), acc))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Element::one(&self.pres);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Inverse of a class with invertible constant term, via the truncated geometric series.
    pub fn invert_unit(&self) -> Result<Self> {
        let c0 = self.constant_term();
        let c0_inv = c0.inverse().ok_or(Error::NotAUnit)?;
        // self = c0 (1 + u) with u of positive degree; (1 + u)^-1 = sum (-u)^j.
        let one = Element::one(&self.pres);
        let neg_u = &one - &self.scale(&c0_inv);
        let mut sum = one.clone();
        let mut power = one;
        loop {
            power = &power * &neg_u;
            if power.is_zero() {
                break;
            }
            sum = &sum + &power;
        }
        Ok(sum.scale(&c0_inv))
    }

    fn check(&self, other: &Self) -> Result<()> {
        if same_presentation(&self.pres, &other.pres) {
            Ok(())
        } else {
            Err(Error::PresentationMismatch)
        }
    }

    /// Render a monomial with this presentation's generator names.
    pub fn monomial_string(pres: &Presentation<F>, m: &Monomial) -> String {
        if m.is_one() {
            return "1".to_string();
        }
        let mut parts = Vec::new();
        for (g, &e) in pres.generators().iter().zip(m.exponents()) {
            match e {
                0 => {}
                1 => parts.push(g.name.clone()),
                _ => parts.push(format!("{}^{}", g.name, e)),
            }
        }
        parts.join("*")
    }

    /// `(monomial, coefficient)` pairs in ascending monomial order.
    pub fn to_pairs(&self) -> Vec<(String, String)> {
        self.terms
            .iter()
            .map(|(m, c)| (Self::monomial_string(&self.pres, m), c.to_string()))
            .collect()
    }

    /// Render with a prefix applied to each non-constant monomial.
    pub fn render_with(&self, prefix: &str) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { -c.clone() } else { c.clone() };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = Self::monomial_string(&self.pres, m);
            if m.is_one() {
                out.push_str(&abs.to_string());
            } else if abs.is_one() {
                out.push_str(prefix);
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{abs}*{prefix}{mono}"));
            }
        }
        out
    }
}

impl<F: Coeff> PartialEq for Element<F> {
    fn eq(&self, other: &Self) -> bool {
        same_presentation(&self.pres, &other.pres) && self.terms == other.terms
    }
}

impl<F: Coeff> Eq for Element<F> {}

impl<F: Coeff> fmt::Display for Element<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_with(""))
    }
}

impl<F: Coeff> fmt::Debug for Element<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element({self})")
    }
}

const MISMATCH: &str = "operands live in different presentations";

impl<F: Coeff> Add for &Element<F> {
    type Output = Element<F>;
    fn add(self, rhs: &Element<F>) -> Element<F> {
        self.try_add(rhs).expect(MISMATCH)
    }
}

impl<F: Coeff> Sub for &Element<F> {
    type Output = Element<F>;
    fn sub(self, rhs: &Element<F>) -> Element<F> {
        self.try_sub(rhs).expect(MISMATCH)
    }
}

impl<F: Coeff> Mul for &Element<F> {
    type Output = Element<F>;
    fn mul(self, rhs: &Element<F>) -> Element<F> {
        self.try_mul(rhs).expect(MISMATCH)
    }
}

impl<F: Coeff> Neg for &Element<F> {
    type Output = Element<F>;
    fn neg(self) -> Element<F> {
        Element {
            pres: self.pres.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $method:ident),*) => {$(
        impl<F: Coeff> $tr for Element<F> {
            type Output = Element<F>;
            fn $method(self, rhs: Element<F>) -> Element<F> {
                (&self).$method(&rhs)
            }
        }
        impl<F: Coeff> $tr<&Element<F>> for Element<F> {
            type Output = Element<F>;
            fn $method(self, rhs: &Element<F>) -> Element<F> {
                (&self).$method(rhs)
            }
        }
    )*};
}

owned_ops!(Add add, Sub sub, Mul mul);

impl<F: Coeff> Neg for Element<F> {
    type Output = Element<F>;
    fn neg(self) -> Element<F> {
        -&self
    }
}
