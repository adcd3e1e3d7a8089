//! Closed-manifold cohomology models.
//!
//! The fundamental class is a designated top monomial `μ`; pairing a class with
//! `[M]` reads off the coefficient of `μ`.

use std::sync::Arc;

use crate::coeff::{Gf2, Rational};
use crate::error::{Error, Result};
use crate::gring::linalg::BitMatrix;
use crate::gring::{truncated_polynomial, Element, Monomial, Presentation, PresentationBuilder};
use crate::steenrod::SqAction;

/// Rational cohomology with the total Pontryagin class.
#[derive(Clone, Debug)]
pub struct RationalCompanion {
    pres: Arc<Presentation<Rational>>,
    top: Monomial,
    pontryagin: Element<Rational>,
}

impl RationalCompanion {
    pub fn new(pres: &Arc<Presentation<Rational>>, pontryagin: Element<Rational>) -> Self {
        let top = Monomial::one(pres.ngens());
        RationalCompanion {
            pres: pres.clone(),
            top,
            pontryagin,
        }
    }

    pub fn presentation(&self) -> &Arc<Presentation<Rational>> {
        &self.pres
    }

    pub fn pontryagin(&self) -> &Element<Rational> {
        &self.pontryagin
    }

    pub fn top(&self) -> &Monomial {
        &self.top
    }

    /// `⟨x, [M]_Q⟩`.
    pub fn pair(&self, x: &Element<Rational>) -> Rational {
        x.coefficient(&self.top)
    }
}

#[derive(Clone, Debug)]
pub struct ManifoldModel {
    name: String,
    pres: Arc<Presentation<Gf2>>,
    dim: u32,
    top: Monomial,
    sw: Element<Gf2>,
    sq: SqAction,
    rational: Option<RationalCompanion>,
}

impl ManifoldModel {
    pub fn new(
        name: impl Into<String>,
        sq: SqAction,
        dim: u32,
        top: Monomial,
        sw: Element<Gf2>,
        rational: Option<RationalCompanion>,
    ) -> Result<Self> {
        let pres = sq.presentation().clone();
        let invalid = |msg: String| Err(Error::InvalidModel(msg));
        if pres.truncation_degree() != dim {
            return invalid(format!(
                "truncation degree {} differs from dimension {dim}",
                pres.truncation_degree()
            ));
        }
        if top.exponents().len() != pres.ngens() || top.degree() != dim || !pres.is_normal(&top) {
            return invalid("top monomial is not a normal monomial of top degree".into());
        }
        if pres.basis_of_degree(dim) != [top.clone()] {
            return invalid(format!(
                "top degree must be spanned by the top monomial alone; found {} basis monomials",
                pres.basis_of_degree(dim).len()
            ));
        }
        if !Arc::ptr_eq(sw.presentation(), &pres) && **sw.presentation() != *pres {
            return Err(Error::PresentationMismatch);
        }
        if sw.constant_term() != Gf2::ONE {
            return invalid("Stiefel-Whitney class must have constant term 1".into());
        }
        let report = sq.validate();
        if let Some(rule) = report.failing_rule {
            return invalid(format!("Steenrod action does not descend: {rule}"));
        }
        let rational = match rational {
            None => None,
            Some(mut rc) => {
                let degrees_match = rc.pres.ngens() == pres.ngens()
                    && rc
                        .pres
                        .generators()
                        .iter()
                        .zip(pres.generators())
                        .all(|(a, b)| a.name == b.name && a.degree == b.degree);
                if !degrees_match {
                    return invalid("rational companion generators differ".into());
                }
                if rc.pres.truncation_degree() != dim {
                    return invalid("rational companion truncation differs from dimension".into());
                }
                let qtop = rc.pres.monomial(top.exponents().to_vec());
                if rc.pres.basis_of_degree(dim) != [qtop.clone()] {
                    return invalid(
                        "rational top degree is not spanned by the top monomial".into(),
                    );
                }
                if rc.pontryagin.constant_term() != Rational::from_integer(1.into()) {
                    return invalid("Pontryagin class must have constant term 1".into());
                }
                if rc.pontryagin.terms().any(|(m, _)| m.degree() % 4 != 0) {
                    return invalid("Pontryagin class must live in degrees divisible by 4".into());
                }
                rc.top = qtop;
                Some(rc)
            }
        };
        Ok(ManifoldModel {
            name: name.into(),
            pres,
            dim,
            top,
            sw,
            sq,
            rational,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn presentation(&self) -> &Arc<Presentation<Gf2>> {
        &self.pres
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn top(&self) -> &Monomial {
        &self.top
    }

    pub fn top_class(&self) -> Element<Gf2> {
        Element::monomial(&self.pres, self.top.clone())
    }

    pub fn sw(&self) -> &Element<Gf2> {
        &self.sw
    }

    pub fn sq(&self) -> &SqAction {
        &self.sq
    }

    pub fn rational(&self) -> Option<&RationalCompanion> {
        self.rational.as_ref()
    }

    pub fn parse(&self, text: &str) -> Result<Element<Gf2>> {
        self.pres.parse(text)
    }

    pub fn basis_of_degree(&self, k: u32) -> Vec<Monomial> {
        self.pres.basis_of_degree(k)
    }

    /// Mod-2 Betti numbers in degrees `0..=dim`.
    pub fn betti(&self) -> Vec<usize> {
        (0..=self.dim)
            .map(|k| self.basis_of_degree(k).len())
            .collect()
    }

    /// `⟨x, [M]⟩`.
    pub fn pair(&self, x: &Element<Gf2>) -> Gf2 {
        x.coefficient(&self.top)
    }

    /// Wu class by Wu's formula, `v = χ(Sq)(w)`.
    pub fn wu_class(&self) -> Result<Element<Gf2>> {
        self.sq.chi_sq(&self.sw)
    }

    /// Wu class from its defining property `⟨v ∪ x, [M]⟩ = ⟨Sq x, [M]⟩`, solved degree by degree.
    pub fn wu_class_oracle(&self) -> Result<Element<Gf2>> {
        let mut v = Element::zero(&self.pres);
        for k in 0..=self.dim {
            let unknowns = self.basis_of_degree(k);
            let tests = self.basis_of_degree(self.dim - k);
            let unknown_elts: Vec<_> = unknowns
                .iter()
                .map(|m| Element::monomial(&self.pres, m.clone()))
                .collect();
            let test_elts: Vec<_> = tests
                .iter()
                .map(|m| Element::monomial(&self.pres, m.clone()))
                .collect();
            let a = BitMatrix::from_fn(test_elts.len(), unknown_elts.len(), |i, j| {
                self.pair(&(&test_elts[i] * &unknown_elts[j])).0
            });
            if !a.is_invertible() {
                return Err(Error::SingularPairing { degree: k });
            }
            let rhs = test_elts
                .iter()
                .map(|z| Ok(self.pair(&self.sq.sq_total(z)?).0))
                .collect::<Result<Vec<bool>>>()?;
            let x = a.solve(&rhs).ok_or(Error::SingularPairing { degree: k })?;
            for (b, bit) in unknown_elts.iter().zip(x) {
                if bit {
                    v = &v + b;
                }
            }
        }
        Ok(v)
    }

    /// Whether the cup-product pairing `H^k × H^{n-k} → GF(2)` is nonsingular.
    pub fn poincare_check(&self, k: u32) -> bool {
        if k > self.dim {
            return false;
        }
        let left: Vec<_> = self
            .basis_of_degree(k)
            .into_iter()
            .map(|m| Element::monomial(&self.pres, m))
            .collect();
        let right: Vec<_> = self
            .basis_of_degree(self.dim - k)
            .into_iter()
            .map(|m| Element::monomial(&self.pres, m))
            .collect();
        BitMatrix::from_fn(left.len(), right.len(), |i, j| {
            self.pair(&(&left[i] * &right[j])).0
        })
        .is_invertible()
    }

    pub fn poincare_duality_holds(&self) -> bool {
        (0..=self.dim).all(|k| self.poincare_check(k))
    }

    /// `v_k(M) = 0` iff `Sq^k` kills `H^{n-k}(M)` under the pairing.
    pub fn wu_component_vanishes(&self, k: u32) -> Result<bool> {
        if k > self.dim {
            return Ok(true);
        }
        for m in self.basis_of_degree(self.dim - k) {
            let z = Element::monomial(&self.pres, m);
            if self.pair(&self.sq.sq_i(&z, k as i64)?) != Gf2::ZERO {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `CP^n`: `GF(2)[x]/(x^{n+1})`, `w = (1+x)^{n+1}`, `p = (1+x^2)^{n+1}`.
pub fn cp(n: u32) -> ManifoldModel {
    cp_with_generator(n, "x")
}

/// `CP^n` with a chosen name for the hyperplane class.
pub fn cp_with_generator(n: u32, name: &str) -> ManifoldModel {
    let pres = truncated_polynomial::<Gf2>(name, 2, n + 1, 2 * n).expect("valid presentation");
    let qpres =
        truncated_polynomial::<Rational>(name, 2, n + 1, 2 * n).expect("valid presentation");
    let sw = pres
        .parse(&format!("(1+{name})^{}", n + 1))
        .expect("valid expression");
    let p = qpres
        .parse(&format!("(1+{name}^2)^{}", n + 1))
        .expect("valid expression");
    let top = pres.monomial(vec![n]);
    ManifoldModel::new(
        format!("CP{n}"),
        SqAction::with_defaults(&pres),
        2 * n,
        top,
        sw,
        Some(RationalCompanion::new(&qpres, p)),
    )
    .expect("CP^n is a valid model")
}

/// A point.
pub fn point() -> ManifoldModel {
    let pres = PresentationBuilder::<Gf2>::new(0)
        .build()
        .expect("empty presentation");
    let qpres = PresentationBuilder::<Rational>::new(0)
        .build()
        .expect("empty presentation");
    ManifoldModel::new(
        "point",
        SqAction::with_defaults(&pres),
        0,
        Monomial::one(0),
        Element::one(&pres),
        Some(RationalCompanion::new(&qpres, Element::one(&qpres))),
    )
    .expect("a point is a valid model")
}
