//! The total Steenrod square on GF(2) presentations and its inverse `χ(Sq)`.

use std::sync::Arc;

use crate::coeff::Gf2;
use crate::error::{Error, Result};
use crate::gring::{Element, Presentation};

/// Total square images of the generators of a GF(2) presentation.
#[derive(Clone, Debug)]
pub struct SqAction {
    pres: Arc<Presentation<Gf2>>,
    images: Vec<Option<Element<Gf2>>>,
}

/// Outcome of [`SqAction::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SqValidation {
    pub failing_rule: Option<String>,
}

impl SqValidation {
    pub fn passed(&self) -> bool {
        self.failing_rule.is_none()
    }
}

impl SqAction {
    /// Generators without a declared image get `Sq(g) = g + g^2`.
    pub fn new(pres: &Arc<Presentation<Gf2>>, declared: Vec<Option<Element<Gf2>>>) -> Result<Self> {
        let defaulted = declared
            .into_iter()
            .chain(std::iter::repeat(None))
            .take(pres.ngens())
            .enumerate()
            .map(|(i, d)| Some(d.unwrap_or_else(|| default_image(pres, i))))
            .collect();
        Self::strict(pres, defaulted)
    }

    pub fn with_defaults(pres: &Arc<Presentation<Gf2>>) -> Self {
        Self::new(pres, Vec::new()).expect("default images satisfy the axioms")
    }

    /// Use exactly the given images; generators left `None` have no action.
    pub fn strict(
        pres: &Arc<Presentation<Gf2>>,
        images: Vec<Option<Element<Gf2>>>,
    ) -> Result<Self> {
        if images.len() != pres.ngens() {
            return Err(Error::InvalidPresentation(format!(
                "{} square images for {} generators",
                images.len(),
                pres.ngens()
            )));
        }
        for (i, img) in images.iter().enumerate() {
            let Some(img) = img else { continue };
            let g = &pres.generators()[i];
            let gen = Element::from_exponents(pres, unit_vector(pres.ngens(), i, 1));
            let bad =
                |why: &str| Error::InvalidPresentation(format!("Sq({}) = {}: {why}", g.name, img));
            if img.component(g.degree) != gen {
                return Err(bad("bottom component must be the generator"));
            }
            if img.component(2 * g.degree) != gen.pow(2) && 2 * g.degree <= pres.truncation_degree()
            {
                return Err(bad("top component must be the square of the generator"));
            }
            if img
                .terms()
                .any(|(m, _)| m.degree() < g.degree || m.degree() > 2 * g.degree)
            {
                return Err(bad("components outside [deg g, 2 deg g]"));
            }
        }
        Ok(SqAction {
            pres: pres.clone(),
            images,
        })
    }

    pub fn presentation(&self) -> &Arc<Presentation<Gf2>> {
        &self.pres
    }

    pub fn image(&self, generator: usize) -> Option<&Element<Gf2>> {
        self.images[generator].as_ref()
    }

    /// Check that `Sq` descends to the quotient: `Sq(g)^e = Sq(R)` for each rule `g^e -> R`.
    pub fn validate(&self) -> SqValidation {
        for rule in self.pres.rules() {
            let name = &self.pres.generators()[rule.generator].name;
            let mut rhs = Element::zero(&self.pres);
            for (exps, c) in &rule.replacement {
                rhs = &rhs + &Element::from_exponents(&self.pres, exps.clone()).scale(c);
            }
            let lhs = unit_vector(self.pres.ngens(), rule.generator, rule.exponent);
            let lhs_sq = match self.monomial_square(&lhs) {
                Ok(v) => v,
                Err(e) => {
                    return SqValidation {
                        failing_rule: Some(format!("{name}^{}: {e}", rule.exponent)),
                    }
                }
            };
            let rhs_sq = match self.sq_total(&rhs) {
                Ok(v) => v,
                Err(e) => {
                    return SqValidation {
                        failing_rule: Some(format!("{name}^{}: {e}", rule.exponent)),
                    }
                }
            };
            if lhs_sq != rhs_sq {
                return SqValidation {
                    failing_rule: Some(format!(
                        "{name}^{}: Sq({name})^{} = {lhs_sq} but Sq(rhs) = {rhs_sq}",
                        rule.exponent, rule.exponent
                    )),
                };
            }
        }
        SqValidation { failing_rule: None }
    }

    /// `Π Sq(g_i)^{e_i}` for an arbitrary exponent vector.
    fn monomial_square(&self, exps: &[u32]) -> Result<Element<Gf2>> {
        let mut acc = Element::one(&self.pres);
        for (i, &e) in exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let img = self.images[i]
                .as_ref()
                .ok_or_else(|| Error::NoAction(self.pres.generators()[i].name.clone()))?;
            acc = &acc * &img.pow(e);
        }
        Ok(acc)
    }

    /// Total square `Sq = Σ Sq^i`, a ring endomorphism.
    pub fn sq_total(&self, x: &Element<Gf2>) -> Result<Element<Gf2>> {
        self.check(x)?;
        let mut acc = Element::zero(&self.pres);
        for (m, _) in x.terms() {
            acc = &acc + &self.monomial_square(m.exponents())?;
        }
        Ok(acc)
    }

    /// `Sq^i x` for homogeneous `x`; zero for negative `i`.
    pub fn sq_i(&self, x: &Element<Gf2>, i: i64) -> Result<Element<Gf2>> {
        self.check(x)?;
        if !x.is_homogeneous() {
            return Err(Error::NonHomogeneous);
        }
        if i < 0 || x.is_zero() {
            return Ok(Element::zero(&self.pres));
        }
        let k = x.homogeneous_degree().expect("nonzero homogeneous");
        let target = k as i64 + i;
        if target > self.pres.truncation_degree() as i64 {
            return Ok(Element::zero(&self.pres));
        }
        Ok(self.sq_total(x)?.component(target as u32))
    }

    /// `χ(Sq)(y)`: the unique `x` with `Sq(x) = y`. Requires constant term 1.
    pub fn chi_sq(&self, y: &Element<Gf2>) -> Result<Element<Gf2>> {
        self.check(y)?;
        if y.constant_term() != Gf2::ONE {
            return Err(Error::NotAUnit);
        }
        self.inverse_square(y)
    }

    /// Degreewise back-substitution `x_k = y_k + [Sq(x_{<k})]_k`.
    pub(crate) fn inverse_square(&self, y: &Element<Gf2>) -> Result<Element<Gf2>> {
        let mut x = Element::zero(&self.pres);
        let mut sq_x = Element::zero(&self.pres);
        for k in 0..=self.pres.truncation_degree() {
            let xk = &y.component(k) - &sq_x.component(k);
            if xk.is_zero() {
                continue;
            }
            sq_x = &sq_x + &self.sq_total(&xk)?;
            x = &x + &xk;
        }
        Ok(x)
    }

    fn check(&self, x: &Element<Gf2>) -> Result<()> {
        if Arc::ptr_eq(x.presentation(), &self.pres) || **x.presentation() == *self.pres {
            Ok(())
        } else {
            Err(Error::PresentationMismatch)
        }
    }
}

fn unit_vector(n: usize, i: usize, e: u32) -> Vec<u32> {
    let mut v = vec![0; n];
    v[i] = e;
    v
}

fn default_image(pres: &Arc<Presentation<Gf2>>, i: usize) -> Element<Gf2> {
    let g = Element::from_exponents(pres, unit_vector(pres.ngens(), i, 1));
    &g + &g.pow(2)
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::gring::{truncated_polynomial, PresentationBuilder};
    use crate::testutil::random_element;

    fn cp(n: u32) -> (Arc<Presentation<Gf2>>, SqAction) {
        let p = truncated_polynomial("x", 2, n + 1, 2 * n).unwrap();
        let a = SqAction::with_defaults(&p);
        (p, a)
    }

    fn binom_mod2(n: u32, k: u32) -> bool {
        k <= n && (n & k) == k
    }

    #[test]
    fn total_square_of_powers() {
        let (p, a) = cp(6);
        for k in 0..=6 {
            let xk = p.parse(&format!("x^{k}")).unwrap();
            let expected = p.parse(&format!("x^{k}*(1+x)^{k}")).unwrap();
            assert_eq!(a.sq_total(&xk).unwrap(), expected);
        }
        assert_eq!(a.sq_total(&Element::one(&p)).unwrap(), Element::one(&p));
    }

    #[test]
    fn individual_squares() {
        for n in 1..=8u32 {
            let (p, a) = cp(n);
            for m in 0..=n / 2 {
                let x = p.parse(&format!("x^{}", n - m)).unwrap();
                let got = a.sq_i(&x, 2 * m as i64).unwrap();
                let expected = if binom_mod2(n - m, m) {
                    p.parse(&format!("x^{n}")).unwrap()
                } else {
                    Element::zero(&p)
                };
                assert_eq!(got, expected, "n={n} m={m}");
            }
        }
        let (p, a) = cp(4);
        assert_eq!(
            a.sq_i(&p.parse("x^3").unwrap(), 2).unwrap().to_string(),
            "x^4"
        );
        let x = p.parse("x").unwrap();
        assert_eq!(a.sq_i(&x, 0).unwrap(), x);
        assert!(a.sq_i(&x, 3).unwrap().is_zero());
        assert!(a.sq_i(&x, -2).unwrap().is_zero());
        assert_eq!(a.sq_i(&x, 2).unwrap(), x.pow(2));
        assert_eq!(
            a.sq_i(&p.parse("1 + x").unwrap(), 1),
            Err(Error::NonHomogeneous)
        );
    }

    #[test]
    fn chi_sq_examples() {
        let p = truncated_polynomial::<Gf2>("xi", 2, 100, 40).unwrap();
        let a = SqAction::with_defaults(&p);
        assert_eq!(a.chi_sq(&Element::one(&p)).unwrap(), Element::one(&p));
        let got = a.chi_sq(&p.parse("1 + xi").unwrap()).unwrap();
        // powers of two up to the truncation: xi^1, xi^2, xi^4, xi^8, xi^16
        assert_eq!(got.to_string(), "1 + xi + xi^2 + xi^4 + xi^8 + xi^16");
        assert_eq!(a.sq_total(&got).unwrap(), p.parse("1 + xi").unwrap());

        let (p, a) = cp(4);
        let z = p.parse("(1+x)^3").unwrap();
        assert_eq!(a.sq_total(&a.chi_sq(&z).unwrap()).unwrap(), z);
        assert_eq!(a.chi_sq(&p.parse("x").unwrap()), Err(Error::NotAUnit));
    }

    #[test]
    fn validation() {
        let (_, a) = cp(5);
        assert!(a.validate().passed());
        let point_proj = truncated_polynomial::<Gf2>("xi", 2, 4, 6).unwrap();
        assert!(SqAction::with_defaults(&point_proj).validate().passed());

        // x^2 -> y forces Sq(y) = Sq(x)^2 = y + y^2; declare something else
        let bad = PresentationBuilder::<Gf2>::new(8)
            .generator("y", 4)
            .generator("x", 2)
            .rule("x", 2, "y")
            .build()
            .unwrap();
        assert!(SqAction::with_defaults(&bad).validate().passed());
        let wrong =
            SqAction::new(&bad, vec![Some(bad.parse("y + x*y + y^2").unwrap()), None]).unwrap();
        let report = wrong.validate();
        assert!(!report.passed());
        assert!(report.failing_rule.unwrap().starts_with("x^2"));

        let missing = SqAction::strict(&point_proj, vec![None]).unwrap();
        assert_eq!(
            missing.sq_total(&point_proj.parse("xi").unwrap()),
            Err(Error::NoAction("xi".into()))
        );
        // images must have the right bottom and top components
        let p = truncated_polynomial::<Gf2>("x", 2, 4, 6).unwrap();
        assert!(SqAction::strict(&p, vec![Some(p.parse("x").unwrap())]).is_err());
    }

    #[test]
    fn algebraic_laws() {
        let proj = PresentationBuilder::<Gf2>::new(6)
            .generator("a", 2)
            .generator("xi", 2)
            .rule("a", 2, "0")
            .rule("xi", 3, "a*xi^2")
            .build()
            .unwrap();
        let (cp6, _) = cp(6);
        for p in [proj, cp6] {
            let a = SqAction::with_defaults(&p);
            assert!(a.validate().passed());
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            for _ in 0..200 {
                let x = random_element(&p, &mut rng, |r| Gf2(r.gen()));
                let y = random_element(&p, &mut rng, |r| Gf2(r.gen()));
                let sx = a.sq_total(&x).unwrap();
                let sy = a.sq_total(&y).unwrap();
                assert_eq!(a.sq_total(&(&x * &y)).unwrap(), &sx * &sy);
                assert_eq!(a.sq_total(&(&x + &y)).unwrap(), &sx + &sy);
                let ux = &Element::one(&p) + &x.filter(|m| m.degree() > 0);
                let uy = &Element::one(&p) + &y.filter(|m| m.degree() > 0);
                assert_eq!(a.chi_sq(&a.sq_total(&ux).unwrap()).unwrap(), ux);
                assert_eq!(a.sq_total(&a.chi_sq(&ux).unwrap()).unwrap(), ux);
                assert_eq!(
                    a.chi_sq(&(&ux * &uy)).unwrap(),
                    &a.chi_sq(&ux).unwrap() * &a.chi_sq(&uy).unwrap()
                );
            }
            for m in p.basis() {
                let x = Element::monomial(&p, m.clone());
                let d = m.degree() as i64;
                assert_eq!(a.sq_i(&x, 0).unwrap(), x);
                assert_eq!(a.sq_i(&x, d).unwrap(), &x * &x);
                assert!(a.sq_i(&x, d + 1).unwrap().is_zero());
            }
        }
    }
}
