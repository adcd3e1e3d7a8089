use std::collections::BTreeMap;
use std::sync::Arc;

use super::expr::Expr;
use super::{Element, Monomial};
use crate::coeff::{Coeff, CoefficientField};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
}

/// A rewrite rule `g^e -> replacement`, the replacement kept as raw terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule<F> {
    pub generator: usize,
    pub exponent: u32,
    pub replacement: Vec<(Vec<u32>, F)>,
}

/// A finitely presented graded-commutative ring truncated above a fixed degree.
///
/// Relations form a triangular rewrite system: at most one rule per generator,
/// each rewriting a pure power of its generator into strictly smaller monomials.
/// Pure-power leading terms are pairwise coprime, so the rules are a Gröbner
/// basis and normal forms are canonical.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation<F> {
    generators: Vec<Generator>,
    rules: Vec<Rule<F>>,
    // per generator: (exponent bound, rule index)
    bounds: Vec<Option<(u32, usize)>>,
    truncation: u32,
}

impl<F: Coeff> Presentation<F> {
    pub fn field(&self) -> CoefficientField {
        F::FIELD
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn ngens(&self) -> usize {
        self.generators.len()
    }

    pub fn rules(&self) -> &[Rule<F>] {
        &self.rules
    }

    pub fn truncation_degree(&self) -> u32 {
        self.truncation
    }

    pub fn generator_index(&self, name: &str) -> Result<usize> {
        self.generators
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    /// Exponent bound for a ruled generator.
    pub fn exponent_bound(&self, generator: usize) -> Option<u32> {
        self.bounds[generator].map(|(e, _)| e)
    }

    pub fn rule_for(&self, generator: usize) -> Option<&Rule<F>> {
        self.bounds[generator].map(|(_, i)| &self.rules[i])
    }

    pub fn degree_of(&self, exponents: &[u32]) -> u32 {
        exponents
            .iter()
            .zip(&self.generators)
            .map(|(e, g)| e * g.degree)
            .sum()
    }

    pub fn monomial(&self, exponents: Vec<u32>) -> Monomial {
        assert_eq!(exponents.len(), self.ngens(), "exponent vector length");
        Monomial::from_parts(self.degree_of(&exponents), exponents)
    }

    pub fn is_normal(&self, m: &Monomial) -> bool {
        m.degree() <= self.truncation
            && m.exponents()
                .iter()
                .zip(&self.bounds)
                .all(|(e, b)| b.is_none_or(|(bound, _)| *e < bound))
    }

    /// Normal-form monomials of degree `k`, ascending in the monomial order.
    pub fn basis_of_degree(&self, k: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        if k > self.truncation {
            return out;
        }
        let mut exps = vec![0u32; self.ngens()];
        self.enumerate(0, k, &mut exps, &mut out);
        out.sort();
        out
    }

    fn enumerate(&self, idx: usize, remaining: u32, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if idx == self.ngens() {
            if remaining == 0 {
                out.push(self.monomial(exps.clone()));
            }
            return;
        }
        let d = self.generators[idx].degree;
        let mut e = 0;
        loop {
            if e * d > remaining {
                break;
            }
            if let Some((bound, _)) = self.bounds[idx] {
                if e >= bound {
                    break;
                }
            }
            exps[idx] = e;
            self.enumerate(idx + 1, remaining - e * d, exps, out);
            e += 1;
        }
        exps[idx] = 0;
    }

    /// Full normal-form basis in every degree up to truncation.
    pub fn basis(&self) -> Vec<Monomial> {
        (0..=self.truncation)
            .flat_map(|k| self.basis_of_degree(k))
            .collect()
    }

    /// Reduce an arbitrary exponent vector to normal form, accumulating `coeff` times the result.
    pub(crate) fn reduce_into(
        &self,
        exponents: Vec<u32>,
        coeff: F,
        acc: &mut BTreeMap<Monomial, F>,
    ) {
        if coeff.is_zero() {
            return;
        }
        let degree = self.degree_of(&exponents);
        if degree > self.truncation {
            return;
        }
        let overflow = exponents
            .iter()
            .zip(&self.bounds)
            .position(|(e, b)| b.is_some_and(|(bound, _)| *e >= bound));
        match overflow {
            None => add_term(acc, Monomial::from_parts(degree, exponents), coeff),
            Some(g) => {
                let (bound, rule_idx) = self.bounds[g].expect("overflowing generator has a rule");
                let rule = &self.rules[rule_idx];
                let mut rest = exponents;
                rest[g] -= bound;
                for (rexps, c) in &rule.replacement {
                    let combined: Vec<u32> = rest.iter().zip(rexps).map(|(a, b)| a + b).collect();
                    self.reduce_into(combined, coeff.clone() * c.clone(), acc);
                }
            }
        }
    }

    /// The rewrite-terminated, truncated representative of a formal combination.
    pub fn normal_form(self: &Arc<Self>, raw: &[(F, Vec<(&str, u32)>)]) -> Result<Element<F>> {
        let mut acc = BTreeMap::new();
        for (c, factors) in raw {
            let mut exps = vec![0u32; self.ngens()];
            for (name, e) in factors {
                exps[self.generator_index(name)?] += e;
            }
            self.reduce_into(exps, c.clone(), &mut acc);
        }
        Ok(Element::from_map(self.clone(), acc))
    }

    /// Parse an expression in this presentation.
    pub fn parse(self: &Arc<Self>, text: &str) -> Result<Element<F>> {
        Expr::parse(text)?.eval(self)
    }
}

pub(crate) fn add_term<F: Coeff>(acc: &mut BTreeMap<Monomial, F>, m: Monomial, c: F) {
    use std::collections::btree_map::Entry;
    match acc.entry(m) {
        Entry::Vacant(v) => {
            if !c.is_zero() {
                v.insert(c);
            }
        }
        Entry::Occupied(mut o) => {
            let sum = o.get().clone() + c;
            if sum.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = sum;
            }
        }
    }
}

/// Builder for [`Presentation`]; rules may be given as expressions in the generators.
#[derive(Clone, Debug)]
pub struct PresentationBuilder<F> {
    generators: Vec<Generator>,
    rules: Vec<(String, u32, RuleRhs<F>)>,
    truncation: u32,
}

#[derive(Clone, Debug)]
enum RuleRhs<F> {
    Text(String),
    Raw(Vec<(Vec<(String, u32)>, F)>),
}

impl<F: Coeff> PresentationBuilder<F> {
    pub fn new(truncation: u32) -> Self {
        PresentationBuilder {
            generators: Vec::new(),
            rules: Vec::new(),
            truncation,
        }
    }

    pub fn generator(mut self, name: impl Into<String>, degree: u32) -> Self {
        self.generators.push(Generator {
            name: name.into(),
            degree,
        });
        self
    }

    /// Add `g^e -> rhs` with `rhs` in the expression grammar.
    pub fn rule(
        mut self,
        generator: impl Into<String>,
        exponent: u32,
        rhs: impl Into<String>,
    ) -> Self {
        self.rules
            .push((generator.into(), exponent, RuleRhs::Text(rhs.into())));
        self
    }

    /// Add `g^e -> rhs` with `rhs` given as (factors, coefficient) terms.
    pub fn rule_terms(
        mut self,
        generator: impl Into<String>,
        exponent: u32,
        rhs: Vec<(Vec<(String, u32)>, F)>,
    ) -> Self {
        self.rules
            .push((generator.into(), exponent, RuleRhs::Raw(rhs)));
        self
    }

    pub fn build(self) -> Result<Arc<Presentation<F>>> {
        let invalid = |msg: String| Error::InvalidPresentation(msg);
        for (i, g) in self.generators.iter().enumerate() {
            if g.degree == 0 {
                return Err(invalid(format!("generator `{}` has degree 0", g.name)));
            }
            if F::FIELD == CoefficientField::Rational && g.degree % 2 == 1 {
                return Err(invalid(format!(
                    "rational presentations need even-degree generators; `{}` has degree {}",
                    g.name, g.degree
                )));
            }
            if g.name.is_empty()
                || !g.name.chars().next().unwrap().is_alphabetic()
                || !g.name.chars().all(|c| c.is_alphanumeric() || c == '_')
            {
                return Err(invalid(format!("bad generator name `{}`", g.name)));
            }
            if self.generators[..i].iter().any(|h| h.name == g.name) {
                return Err(invalid(format!("duplicate generator `{}`", g.name)));
            }
        }
        let free = Arc::new(Presentation {
            generators: self.generators.clone(),
            rules: Vec::new(),
            bounds: vec![None; self.generators.len()],
            truncation: u32::MAX,
        });
        let mut rules = Vec::new();
        let mut bounds = vec![None; self.generators.len()];
        for (name, exponent, rhs) in self.rules {
            let g = free.generator_index(&name)?;
            if exponent == 0 {
                return Err(invalid(format!("rule for `{name}` has exponent 0")));
            }
            if bounds[g].is_some() {
                return Err(invalid(format!(
                    "generator `{name}` has more than one rule"
                )));
            }
            let rhs = match rhs {
                RuleRhs::Text(t) => free.parse(&t)?,
                RuleRhs::Raw(terms) => {
                    let raw: Vec<(F, Vec<(&str, u32)>)> = terms
                        .iter()
                        .map(|(f, c)| {
                            (c.clone(), f.iter().map(|(n, e)| (n.as_str(), *e)).collect())
                        })
                        .collect();
                    free.normal_form(&raw)?
                }
            };
            let mut lead = vec![0u32; free.ngens()];
            lead[g] = exponent;
            let lead = free.monomial(lead);
            for (m, _) in rhs.terms() {
                if m.degree() != lead.degree() {
                    return Err(invalid(format!(
                        "rule {name}^{exponent} is not degree-homogeneous: term of degree {} vs {}",
                        m.degree(),
                        lead.degree()
                    )));
                }
                if *m >= lead {
                    return Err(invalid(format!(
                        "rule {name}^{exponent} does not decrease in the monomial order"
                    )));
                }
            }
            bounds[g] = Some((exponent, rules.len()));
            rules.push(Rule {
                generator: g,
                exponent,
                replacement: rhs
                    .terms()
                    .map(|(m, c)| (m.exponents().to_vec(), c.clone()))
                    .collect(),
            });
        }
        Ok(Arc::new(Presentation {
            generators: self.generators,
            rules,
            bounds,
            truncation: self.truncation,
        }))
    }
}
