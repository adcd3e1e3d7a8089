//! Characteristic-class algebra.
//!
//! Bundles are identified with their characteristic classes; Thom classes are
//! never built; statements about disk bundles are evaluated on the base.

use std::sync::Arc;

use num_traits::{One, Zero};

use crate::coeff::{reduce_mod2, Gf2, Rational};
use crate::error::{Error, Result};
use crate::gring::{Element, Presentation, PresentationBuilder, RingHom};
use crate::manifold::ManifoldModel;

/// A vector bundle over a closed manifold model, by its characteristic classes.
#[derive(Clone, Debug)]
pub struct BundleData {
    base: ManifoldModel,
    sw: Element<Gf2>,
    chern: Option<Element<Rational>>,
    rank: Option<u32>,
}

impl BundleData {
    pub fn new(
        base: ManifoldModel,
        sw: Element<Gf2>,
        chern: Option<Element<Rational>>,
        rank: Option<u32>,
    ) -> Result<Self> {
        if **sw.presentation() != **base.presentation() {
            return Err(Error::PresentationMismatch);
        }
        if sw.constant_term() != Gf2::ONE {
            return Err(Error::InvalidChern(
                "Stiefel-Whitney class must have constant term 1".into(),
            ));
        }
        if let Some(c) = &chern {
            let reduced = chern_mod2_to_sw(c, base.presentation())?;
            if reduced != sw {
                return Err(Error::InvalidChern(format!(
                    "w(E) = {sw} is not the mod-2 reduction {reduced} of c(E)"
                )));
            }
        }
        Ok(BundleData {
            base,
            sw,
            chern,
            rank,
        })
    }

    /// A bundle known only through `w(E)`.
    pub fn from_sw(base: ManifoldModel, sw: Element<Gf2>) -> Result<Self> {
        BundleData::new(base, sw, None, None)
    }

    pub fn base(&self) -> &ManifoldModel {
        &self.base
    }

    pub fn sw(&self) -> &Element<Gf2> {
        &self.sw
    }

    pub fn chern(&self) -> Option<&Element<Rational>> {
        self.chern.as_ref()
    }

    pub fn rank(&self) -> Option<u32> {
        self.rank
    }
}

/// Wu class of the disk bundle, `v(D(E)) = v(M) χ(Sq)(w(E))`, on the base.
pub fn disk_bundle_wu(b: &BundleData) -> Result<Element<Gf2>> {
    let base = b.base();
    Ok(&base.wu_class()? * &base.sq().chi_sq(b.sw())?)
}

/// `v_i(D(E)) = 0` iff `⟨w(E) Sq x, [M]⟩ = 0` for every `x` in `H^{n-i}(M)`.
pub fn disk_bundle_wu_vanishes(b: &BundleData, i: u32) -> Result<bool> {
    let base = b.base();
    if i > base.dim() {
        return Ok(true);
    }
    for m in base.basis_of_degree(base.dim() - i) {
        let x = Element::monomial(base.presentation(), m);
        let sq = base.sq().sq_total(&x)?;
        if base.pair(&(b.sw() * &sq)) != Gf2::ZERO {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Mod-2 reduction of a total Chern class: `w_{2i} = c_i mod 2`.
///
/// Generators are matched by name; the target must declare the same generators.
pub fn chern_mod2_to_sw(
    c: &Element<Rational>,
    target: &Arc<Presentation<Gf2>>,
) -> Result<Element<Gf2>> {
    let source = c.presentation();
    let index: Vec<usize> = source
        .generators()
        .iter()
        .map(|g| {
            let i = target.generator_index(&g.name)?;
            if target.generators()[i].degree != g.degree {
                return Err(Error::InvalidChern(format!(
                    "generator `{}` changes degree",
                    g.name
                )));
            }
            Ok(i)
        })
        .collect::<Result<_>>()?;
    let mut acc = Element::zero(target);
    for (m, q) in c.terms() {
        let bit = reduce_mod2(q).ok_or_else(|| Error::NonIntegral(q.to_string()))?;
        if bit == Gf2::ZERO {
            continue;
        }
        let mut exps = vec![0; target.ngens()];
        for (j, &e) in m.exponents().iter().enumerate() {
            exps[index[j]] += e;
        }
        acc = &acc + &Element::from_exponents(target, exps);
    }
    Ok(acc)
}

/// Total Pontryagin class from `Σ (-1)^i p_i = c · c̄`.
pub fn chern_to_pontryagin(c: &Element<Rational>) -> Element<Rational> {
    let pres = c.presentation();
    // c̄ negates Chern classes of odd index, i.e. components in degrees 2 mod 4
    let conj = c.terms().fold(Element::zero(pres), |acc, (m, q)| {
        let t = Element::term(pres, m.clone(), q.clone());
        if m.degree() % 4 == 2 {
            &acc - &t
        } else {
            &acc + &t
        }
    });
    let product = c * &conj;
    product.terms().fold(Element::zero(pres), |acc, (m, q)| {
        let t = Element::term(pres, m.clone(), q.clone());
        if m.degree() % 8 == 4 {
            &acc - &t
        } else {
            &acc + &t
        }
    })
}

/// Hirzebruch L-polynomials `L_0..L_k` in abstract Pontryagin symbols `p1..pk` (`deg p_j = 4j`).
#[derive(Clone, Debug)]
pub struct LSequence {
    pres: Arc<Presentation<Rational>>,
    polys: Vec<Element<Rational>>,
}

impl LSequence {
    pub fn presentation(&self) -> &Arc<Presentation<Rational>> {
        &self.pres
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn polynomial(&self, i: usize) -> Option<&Element<Rational>> {
        self.polys.get(i)
    }

    pub fn polynomials(&self) -> &[Element<Rational>] {
        &self.polys
    }

    /// The total L-polynomial `L_0 + … + L_k`.
    pub fn total(&self) -> Element<Rational> {
        self.polys
            .iter()
            .fold(Element::zero(&self.pres), |acc, l| &acc + l)
    }
}

fn factorial(n: u32) -> Rational {
    (1..=n).fold(Rational::one(), |acc, i| {
        acc * Rational::from_integer(i.into())
    })
}

/// Coefficients of `√z / tanh √z = Σ z^j/(2j)! / Σ z^j/(2j+1)!` up to `z^k`.
pub fn l_series_coefficients(k: u32) -> Vec<Rational> {
    let cosh: Vec<Rational> = (0..=k).map(|j| factorial(2 * j).recip()).collect();
    let sinh: Vec<Rational> = (0..=k).map(|j| factorial(2 * j + 1).recip()).collect();
    let mut q: Vec<Rational> = Vec::with_capacity(k as usize + 1);
    for m in 0..=k as usize {
        let mut v = cosh[m].clone();
        for j in 1..=m {
            v -= sinh[j].clone() * q[m - j].clone();
        }
        q.push(v / sinh[0].clone());
    }
    q
}

/// The multiplicative sequence of `√z/tanh √z` up to `L_k`.
///
/// `log Π Q(z_j) = Σ a_m s_m` with power sums `s_m` rewritten in elementary
/// symmetric functions `p_i` by Newton's identities, then exponentiated.
pub fn l_polynomials(k: u32) -> LSequence {
    let mut builder = PresentationBuilder::<Rational>::new(4 * k);
    for j in 1..=k {
        builder = builder.generator(format!("p{j}"), 4 * j);
    }
    let pres = builder.build().expect("free presentation");
    let q = l_series_coefficients(k);

    // m a_m = m q_m - Σ_{j<m} j a_j q_{m-j}
    let mut a = vec![Rational::zero(); k as usize + 1];
    for m in 1..=k as usize {
        let mut v = Rational::from_integer(m.into()) * q[m].clone();
        for j in 1..m {
            v -= Rational::from_integer(j.into()) * a[j].clone() * q[m - j].clone();
        }
        a[m] = v / Rational::from_integer(m.into());
    }

    let e: Vec<Element<Rational>> = (1..=k)
        .map(|j| Element::generator(&pres, &format!("p{j}")).expect("declared"))
        .collect();
    // s_m = Σ_{i=1}^{m-1} (-1)^{i-1} e_i s_{m-i} + (-1)^{m-1} m e_m
    let mut s: Vec<Element<Rational>> = vec![Element::zero(&pres)];
    for m in 1..=k as usize {
        let mut v = e[m - 1].scale(&Rational::from_integer(m.into()));
        if m % 2 == 0 {
            v = -v;
        }
        for i in 1..m {
            let t = &e[i - 1] * &s[m - i];
            v = if i % 2 == 1 { &v + &t } else { &v - &t };
        }
        s.push(v);
    }

    let log_l = (1..=k as usize).fold(Element::zero(&pres), |acc, m| &acc + &s[m].scale(&a[m]));
    let mut total = Element::one(&pres);
    let mut power = Element::one(&pres);
    for j in 1..=k {
        power = &power * &log_l;
        total = &total + &power.scale(&factorial(j).recip());
    }
    let polys = (0..=k).map(|i| total.component(4 * i)).collect();
    LSequence { pres, polys }
}

/// `L_i` evaluated on a total Pontryagin class.
pub fn l_class(seq: &LSequence, p: &Element<Rational>, i: u32) -> Result<Element<Rational>> {
    let target = p.presentation();
    if 4 * i > target.truncation_degree() {
        return Err(Error::DegreeOverflow {
            degree: 4 * i,
            truncation: target.truncation_degree(),
        });
    }
    let poly = seq.polynomial(i as usize).ok_or(Error::DegreeOverflow {
        degree: 4 * i,
        truncation: seq.pres.truncation_degree(),
    })?;
    let images = (1..=seq.pres.ngens() as u32)
        .map(|j| p.component(4 * j))
        .collect();
    let subst = RingHom::new(&seq.pres, target, images)?;
    subst.apply(poly)
}
