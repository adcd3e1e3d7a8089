//! Cohomology of the topological blow-up `M̃` of `M` along a center `N` of codimension `2r`.
//!
//! Classes are stored in the split `H*(M̃) = π^*H*(M) ⊕ α_{j_P}(⊕_{i≤r-2} H*(N)ξ^i)`,
//! where `P = P(η_N)` is the projectivized normal bundle and `ξ` its tautological
//! class. Anything landing in `ξ^{r-1}` is rewritten through
//! `e' = ξ^{r-1} + c_1 ξ^{r-2} + … + c_{r-1}`, whose image under `α_{j_P}` is
//! `π^* α_{i_N}` of its coefficient.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Sub};
use std::sync::Arc;

use crate::charclass::{chern_mod2_to_sw, chern_to_pontryagin, l_class, l_polynomials};
use crate::coeff::{Coeff, Gf2, Rational};
use crate::error::{Error, Result};
use crate::gring::linalg::BitMatrix;
use crate::gring::{Element, LinearMap, Monomial, Presentation, PresentationBuilder, RingHom};
use crate::manifold::{cp, cp_with_generator, ManifoldModel};
use crate::steenrod::SqAction;

/// Name of the tautological generator of the projectivization.
pub const XI: &str = "xi";

/// Rational inclusion data, needed for L-classes.
#[derive(Clone, Debug)]
pub struct RationalSubmanifoldData {
    pullback: RingHom<Rational>,
    normal_chern: Element<Rational>,
    gysin: Option<LinearMap<Rational>>,
}

impl RationalSubmanifoldData {
    pub fn new(
        pullback: RingHom<Rational>,
        normal_chern: Element<Rational>,
        gysin: Option<LinearMap<Rational>>,
    ) -> Self {
        RationalSubmanifoldData {
            pullback,
            normal_chern,
            gysin,
        }
    }

    pub fn pullback(&self) -> &RingHom<Rational> {
        &self.pullback
    }

    pub fn normal_chern(&self) -> &Element<Rational> {
        &self.normal_chern
    }

    pub fn gysin(&self) -> Option<&LinearMap<Rational>> {
        self.gysin.as_ref()
    }
}

/// A closed submanifold `N ⊂ M` of codimension `2r` with complex normal bundle.
#[derive(Clone, Debug)]
pub struct SubmanifoldData {
    ambient: ManifoldModel,
    center: ManifoldModel,
    r: u32,
    pullback: RingHom<Gf2>,
    normal_chern: Element<Gf2>,
    gysin: Option<LinearMap<Gf2>>,
    rational: Option<RationalSubmanifoldData>,
}

fn check_chern<F: Coeff>(c: &Element<F>, center: &Arc<Presentation<F>>, r: u32) -> Result<()> {
    if **c.presentation() != **center {
        return Err(Error::InvalidChern(
            "normal Chern class must live in the center's ring".into(),
        ));
    }
    if c.constant_term() != F::one() {
        return Err(Error::InvalidChern(
            "total Chern class must have constant term 1".into(),
        ));
    }
    if let Some((m, _)) = c
        .terms()
        .find(|(m, _)| m.degree() % 2 == 1 || m.degree() > 2 * r)
    {
        return Err(Error::InvalidChern(format!(
            "term `{}` of degree {} is not some c_i with i <= {r}",
            Element::monomial_string(center, m),
            m.degree()
        )));
    }
    Ok(())
}

fn check_inclusion<F: Coeff>(
    ambient: &Arc<Presentation<F>>,
    center: &Arc<Presentation<F>>,
    r: u32,
    pullback: &RingHom<F>,
    gysin: Option<&LinearMap<F>>,
) -> Result<()> {
    if **pullback.source() != **ambient || **pullback.target() != **center {
        return Err(Error::InvalidSubmanifold(
            "pullback must map H*(M) to H*(N)".into(),
        ));
    }
    let Some(g) = gysin else { return Ok(()) };
    if **g.source() != **center || **g.target() != **ambient || g.shift() != 2 * r {
        return Err(Error::InvalidSubmanifold(format!(
            "Gysin map must send H*(N) to H^{{*+{}}}(M)",
            2 * r
        )));
    }
    // projection formula α(i^*(a)·m) = a·α(m)
    for a in ambient.basis() {
        let a = Element::monomial(ambient, a);
        let ia = pullback.apply(&a)?;
        for m in center.basis() {
            let m = Element::monomial(center, m);
            if g.apply(&(&ia * &m))? != &a * &g.apply(&m)? {
                return Err(Error::InvalidSubmanifold(format!(
                    "Gysin map violates the projection formula at a = {a}, m = {m}"
                )));
            }
        }
    }
    Ok(())
}

impl SubmanifoldData {
    /// `normal_chern` is the mod-2 total Chern class `Σ c_i(η_N)`, i.e. `Σ w_{2i}(η_N)`.
    pub fn new(
        ambient: ManifoldModel,
        center: ManifoldModel,
        r: u32,
        pullback: RingHom<Gf2>,
        normal_chern: Element<Gf2>,
        gysin: Option<LinearMap<Gf2>>,
    ) -> Result<Self> {
        if r < 2 {
            return Err(Error::InvalidSubmanifold(format!(
                "codimension 2r = {} must exceed 2",
                2 * r
            )));
        }
        if ambient.dim() < 2 * r || center.dim() != ambient.dim() - 2 * r {
            return Err(Error::InvalidSubmanifold(format!(
                "center of dimension {} cannot have codimension {} in dimension {}",
                center.dim(),
                2 * r,
                ambient.dim()
            )));
        }
        if center.presentation().generator_index(XI).is_ok() {
            return Err(Error::InvalidSubmanifold(format!(
                "the center may not use the reserved generator name `{XI}`"
            )));
        }
        check_chern(&normal_chern, center.presentation(), r)?;
        check_inclusion(
            ambient.presentation(),
            center.presentation(),
            r,
            &pullback,
            gysin.as_ref(),
        )?;
        Ok(SubmanifoldData {
            ambient,
            center,
            r,
            pullback,
            normal_chern,
            gysin,
            rational: None,
        })
    }

    /// Attach rational data; its Chern class must reduce to the mod-2 one.
    pub fn with_rational(mut self, data: RationalSubmanifoldData) -> Result<Self> {
        let (Some(mq), Some(nq)) = (self.ambient.rational(), self.center.rational()) else {
            return Err(Error::MissingRational);
        };
        check_chern(&data.normal_chern, nq.presentation(), self.r)?;
        check_inclusion(
            mq.presentation(),
            nq.presentation(),
            self.r,
            &data.pullback,
            data.gysin.as_ref(),
        )?;
        let reduced = chern_mod2_to_sw(&data.normal_chern, self.center.presentation())?;
        if reduced != self.normal_chern {
            return Err(Error::InvalidChern(format!(
                "rational Chern class reduces to {reduced}, not {}",
                self.normal_chern
            )));
        }
        self.rational = Some(data);
        Ok(self)
    }

    /// A point of an even-dimensional model, with trivial normal bundle and `α(1) = μ_M`.
    pub fn point(ambient: &ManifoldModel) -> Result<Self> {
        let n = ambient.dim();
        if n % 2 == 1 || n < 4 {
            return Err(Error::InvalidSubmanifold(format!(
                "blowing up a point needs even dimension at least 4, got {n}"
            )));
        }
        let center = crate::manifold::point();
        let to_point = |m: &Arc<Presentation<Gf2>>, p: &Arc<Presentation<Gf2>>| {
            RingHom::new(m, p, vec![Element::zero(p); m.ngens()])
        };
        let pullback = to_point(ambient.presentation(), center.presentation())?;
        let one = Monomial::one(0);
        let gysin = LinearMap::new(
            center.presentation(),
            ambient.presentation(),
            n,
            BTreeMap::from([(one.clone(), ambient.top_class())]),
        )?;
        let chern = Element::one(center.presentation());
        let data = SubmanifoldData::new(
            ambient.clone(),
            center.clone(),
            n / 2,
            pullback,
            chern,
            Some(gysin),
        )?;
        match (ambient.rational(), center.rational()) {
            (Some(mq), Some(nq)) => {
                let (mq, nq) = (mq.presentation(), nq.presentation());
                let pullback = RingHom::new(mq, nq, vec![Element::zero(nq); mq.ngens()])?;
                let top = Element::monomial(mq, mq.monomial(ambient.top().exponents().to_vec()));
                let gysin = LinearMap::new(nq, mq, n, BTreeMap::from([(one, top)]))?;
                data.with_rational(RationalSubmanifoldData::new(
                    pullback,
                    Element::one(nq),
                    Some(gysin),
                ))
            }
            _ => Ok(data),
        }
    }

    /// The linear `CP^k ⊂ CP^n`: `x ↦ a`, `c(η) = (1+a)^{n-k}`, `α(a^j) = x^{n-k+j}`.
    pub fn linear_cp(k: u32, n: u32) -> Result<Self> {
        if k >= n || n - k < 2 {
            return Err(Error::InvalidSubmanifold(format!(
                "linear CP{k} in CP{n} must have complex codimension at least 2"
            )));
        }
        let r = n - k;
        let ambient = cp(n);
        let center = cp_with_generator(k, "a");
        fn data<F: Coeff>(
            m: &Arc<Presentation<F>>,
            c: &Arc<Presentation<F>>,
            k: u32,
            r: u32,
        ) -> Result<(RingHom<F>, Element<F>, LinearMap<F>)> {
            let pullback = RingHom::new(m, c, vec![Element::generator(c, "a")?])?;
            let chern = c.parse(&format!("(1+a)^{r}"))?;
            let images = (0..=k)
                .map(|j| (c.monomial(vec![j]), Element::from_exponents(m, vec![r + j])))
                .collect();
            Ok((pullback, chern, LinearMap::new(c, m, 2 * r, images)?))
        }
        let (pullback, chern, gysin) = data(ambient.presentation(), center.presentation(), k, r)?;
        let (qm, qc) = (
            ambient
                .rational()
                .expect("CP^n has rational data")
                .presentation()
                .clone(),
            center
                .rational()
                .expect("CP^k has rational data")
                .presentation()
                .clone(),
        );
        let (qpullback, qchern, qgysin) = data(&qm, &qc, k, r)?;
        SubmanifoldData::new(ambient, center, r, pullback, chern, Some(gysin))?.with_rational(
            RationalSubmanifoldData::new(qpullback, qchern, Some(qgysin)),
        )
    }

    pub fn ambient(&self) -> &ManifoldModel {
        &self.ambient
    }

    pub fn center(&self) -> &ManifoldModel {
        &self.center
    }

    /// Half the codimension.
    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn pullback(&self) -> &RingHom<Gf2> {
        &self.pullback
    }

    pub fn normal_chern(&self) -> &Element<Gf2> {
        &self.normal_chern
    }

    pub fn gysin(&self) -> Option<&LinearMap<Gf2>> {
        self.gysin.as_ref()
    }

    pub fn rational(&self) -> Option<&RationalSubmanifoldData> {
        self.rational.as_ref()
    }
}

/// `H*(N)[ξ]` with `ξ^r = -Σ_{j≥1} c_j ξ^{r-j}`, truncated at `truncation`.
fn projectivization_presentation<F: Coeff>(
    center: &Arc<Presentation<F>>,
    chern: &Element<F>,
    r: u32,
    truncation: u32,
) -> Result<Arc<Presentation<F>>> {
    let names = |exps: &[u32]| -> Vec<(String, u32)> {
        center
            .generators()
            .iter()
            .zip(exps)
            .filter(|(_, &e)| e > 0)
            .map(|(g, &e)| (g.name.clone(), e))
            .collect()
    };
    let mut builder = PresentationBuilder::<F>::new(truncation);
    for g in center.generators() {
        builder = builder.generator(g.name.clone(), g.degree);
    }
    builder = builder.generator(XI, 2);
    for rule in center.rules() {
        let rhs = rule
            .replacement
            .iter()
            .map(|(exps, c)| (names(exps), c.clone()))
            .collect();
        builder = builder.rule_terms(
            center.generators()[rule.generator].name.clone(),
            rule.exponent,
            rhs,
        );
    }
    let mut rhs = Vec::new();
    for (m, c) in chern.terms() {
        let j = m.degree() / 2;
        if j == 0 {
            continue;
        }
        let mut factors = names(m.exponents());
        if r > j {
            factors.push((XI.to_string(), r - j));
        }
        rhs.push((factors, -c.clone()));
    }
    builder.rule_terms(XI, r, rhs).build()
}

/// The projectivized normal bundle `P(η_N)` as a closed manifold model of dimension `n - 2`.
#[derive(Clone, Debug)]
pub struct ProjBundleModel {
    model: ManifoldModel,
    lift: RingHom<Gf2>,
    r: u32,
}

impl ProjBundleModel {
    pub fn model(&self) -> &ManifoldModel {
        &self.model
    }

    /// `p^*: H*(N) → H*(P)`.
    pub fn lift(&self) -> &RingHom<Gf2> {
        &self.lift
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn xi(&self) -> Element<Gf2> {
        Element::generator(self.model.presentation(), XI).expect("xi is declared")
    }
}

/// `Σ_{i=0}^{r} c_i (1+ξ)^{exponent(i)}` in the projectivization ring.
fn chern_twist<F: Coeff>(
    lift: &RingHom<F>,
    chern: &Element<F>,
    r: u32,
    exponent: impl Fn(u32) -> u32,
) -> Result<Element<F>> {
    let p = lift.target();
    let one_plus_xi = &Element::one(p) + &Element::generator(p, XI)?;
    let mut acc = Element::zero(p);
    for i in 0..=r {
        let ci = lift.apply(&chern.component(2 * i))?;
        acc = &acc + &(&ci * &one_plus_xi.pow(exponent(i)));
    }
    Ok(acc)
}

pub fn build_projectivization(s: &SubmanifoldData) -> Result<ProjBundleModel> {
    let center = &s.center;
    let n = s.ambient.dim();
    let pres = projectivization_presentation(center.presentation(), &s.normal_chern, s.r, n - 2)?;
    let lift = RingHom::by_name(center.presentation(), &pres)?;
    let declared = (0..center.presentation().ngens())
        .map(|i| center.sq().image(i).map(|img| lift.apply(img)).transpose())
        .collect::<Result<Vec<_>>>()?;
    let sq = SqAction::new(&pres, declared)?;
    let sw = &lift.apply(center.sw())? * &chern_twist(&lift, &s.normal_chern, s.r, |i| s.r - i)?;
    let mut top = center.top().exponents().to_vec();
    top.push(s.r - 1);
    let top = pres.monomial(top);
    let model = ManifoldModel::new(format!("P({})", center.name()), sq, n - 2, top, sw, None)?;
    for k in 0..=n - 2 {
        let expected: usize = (0..s.r)
            .filter(|i| 2 * i <= k)
            .map(|i| center.basis_of_degree(k - 2 * i).len())
            .sum();
        if model.basis_of_degree(k).len() != expected {
            return Err(Error::InvalidSubmanifold(format!(
                "H^{k}(P) has rank {} but Leray-Hirsch predicts {expected}; the center's relations \
                 must kill every class above its dimension",
                model.basis_of_degree(k).len()
            )));
        }
    }
    if !model.poincare_duality_holds() {
        return Err(Error::InvalidModel(
            "projectivization fails Poincaré duality".into(),
        ));
    }
    Ok(ProjBundleModel {
        model,
        lift,
        r: s.r,
    })
}

/// A class `π^*(base) + α_{j_P}(exc)` with `exc` of ξ-exponent at most `r - 2`.
#[derive(Clone, PartialEq, Eq)]
pub struct BlowUpElement<F: Coeff> {
    base: Element<F>,
    exc: Element<F>,
}

impl<F: Coeff> BlowUpElement<F> {
    pub fn base(&self) -> &Element<F> {
        &self.base
    }

    /// The exceptional part, an element of `H*(P)`.
    pub fn exc(&self) -> &Element<F> {
        &self.exc
    }

    pub fn into_parts(self) -> (Element<F>, Element<F>) {
        (self.base, self.exc)
    }

    pub fn is_zero(&self) -> bool {
        self.base.is_zero() && self.exc.is_zero()
    }

    /// Degree-`k` component; exceptional classes sit two degrees above their `P`-degree.
    pub fn component(&self, k: u32) -> Self {
        BlowUpElement {
            base: self.base.component(k),
            exc: if k >= 2 {
                self.exc.component(k - 2)
            } else {
                Element::zero(self.exc.presentation())
            },
        }
    }

    pub fn constant_term(&self) -> F {
        self.base.constant_term()
    }

    pub fn scale(&self, c: &F) -> Self {
        BlowUpElement {
            base: self.base.scale(c),
            exc: self.exc.scale(c),
        }
    }

    /// Degrees with a nonzero component.
    pub fn support_degrees(&self) -> Vec<u32> {
        let mut ds = self.base.support_degrees();
        ds.extend(self.exc.support_degrees().into_iter().map(|d| d + 2));
        ds.sort_unstable();
        ds.dedup();
        ds
    }
}

impl<F: Coeff> fmt::Display for BlowUpElement<F> {
    /// Base classes carry a `pi*` prefix; exceptional classes print as `E(...)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.base.is_zero(), self.exc.is_zero()) {
            (true, true) => f.write_str("0"),
            (false, true) => f.write_str(&self.base.render_with("pi*")),
            (true, false) => write!(f, "E({})", self.exc),
            (false, false) => write!(f, "{} + E({})", self.base.render_with("pi*"), self.exc),
        }
    }
}

impl<F: Coeff> fmt::Debug for BlowUpElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BlowUpElement({self})")
    }
}

impl<F: Coeff> Add for &BlowUpElement<F> {
    type Output = BlowUpElement<F>;
    fn add(self, rhs: &BlowUpElement<F>) -> BlowUpElement<F> {
        BlowUpElement {
            base: &self.base + &rhs.base,
            exc: &self.exc + &rhs.exc,
        }
    }
}

impl<F: Coeff> Sub for &BlowUpElement<F> {
    type Output = BlowUpElement<F>;
    fn sub(self, rhs: &BlowUpElement<F>) -> BlowUpElement<F> {
        BlowUpElement {
            base: &self.base - &rhs.base,
            exc: &self.exc - &rhs.exc,
        }
    }
}

/// Ring structure of `H*(M̃; F)` in the split representation.
#[derive(Clone, Debug)]
pub struct BlowUpRing<F: Coeff> {
    ambient: Arc<Presentation<F>>,
    center: Arc<Presentation<F>>,
    proj: Arc<Presentation<F>>,
    pullback: RingHom<F>,
    lift: RingHom<F>,
    gysin: Option<LinearMap<F>>,
    chern: Element<F>,
    e_prime: Element<F>,
    r: u32,
    xi_index: usize,
    top: Monomial,
}

impl<F: Coeff> BlowUpRing<F> {
    #[allow(clippy::too_many_arguments)]
    fn new(
        ambient: &Arc<Presentation<F>>,
        top: Monomial,
        center: &Arc<Presentation<F>>,
        proj: &Arc<Presentation<F>>,
        pullback: RingHom<F>,
        gysin: Option<LinearMap<F>>,
        chern: Element<F>,
        r: u32,
    ) -> Result<Self> {
        let lift = RingHom::by_name(center, proj)?;
        let xi = Element::generator(proj, XI)?;
        // e' = ξ^{r-1} + c_1 ξ^{r-2} + … + c_{r-1}
        let mut e_prime = Element::zero(proj);
        for j in 0..r {
            e_prime = &e_prime + &(&lift.apply(&chern.component(2 * j))? * &xi.pow(r - 1 - j));
        }
        Ok(BlowUpRing {
            ambient: ambient.clone(),
            center: center.clone(),
            proj: proj.clone(),
            pullback,
            lift,
            gysin,
            chern,
            e_prime,
            r,
            xi_index: center.ngens(),
            top,
        })
    }

    pub fn ambient(&self) -> &Arc<Presentation<F>> {
        &self.ambient
    }

    pub fn center(&self) -> &Arc<Presentation<F>> {
        &self.center
    }

    /// The projectivization ring `H*(P)`.
    pub fn proj(&self) -> &Arc<Presentation<F>> {
        &self.proj
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// `e' = ξ^{r-1} + c_1 ξ^{r-2} + … + c_{r-1}`.
    pub fn e_prime(&self) -> &Element<F> {
        &self.e_prime
    }

    pub fn xi(&self) -> Element<F> {
        Element::generator(&self.proj, XI).expect("xi is declared")
    }

    /// `p^*: H*(N) → H*(P)`.
    pub fn lift(&self) -> &RingHom<F> {
        &self.lift
    }

    pub fn chern(&self) -> &Element<F> {
        &self.chern
    }

    fn xi_exponent(&self, m: &Monomial) -> u32 {
        m.exponent(self.xi_index)
    }

    /// `p^* i_N^*(a)`.
    pub fn restrict(&self, a: &Element<F>) -> Result<Element<F>> {
        self.lift.apply(&self.pullback.apply(a)?)
    }

    /// The coefficient of `ξ^e` in canonical form, as a class on `N`.
    pub fn xi_coefficient(&self, b: &Element<F>, e: u32) -> Element<F> {
        let mut acc = Element::zero(&self.center);
        for (m, c) in b.terms() {
            if self.xi_exponent(m) == e {
                let exps = m.exponents()[..self.xi_index].to_vec();
                acc = &acc + &Element::term(&self.center, self.center.monomial(exps), c.clone());
            }
        }
        acc
    }

    fn check_proj(&self, b: &Element<F>) -> Result<()> {
        if **b.presentation() != *self.proj {
            return Err(Error::PresentationMismatch);
        }
        Ok(())
    }

    fn check(&self, x: &BlowUpElement<F>) -> Result<()> {
        if **x.base.presentation() != *self.ambient {
            return Err(Error::PresentationMismatch);
        }
        self.check_proj(&x.exc)
    }

    pub fn zero(&self) -> BlowUpElement<F> {
        BlowUpElement {
            base: Element::zero(&self.ambient),
            exc: Element::zero(&self.proj),
        }
    }

    pub fn one(&self) -> BlowUpElement<F> {
        BlowUpElement {
            base: Element::one(&self.ambient),
            exc: Element::zero(&self.proj),
        }
    }

    /// `(a, b)` after checking that `b` has ξ-exponent at most `r - 2`.
    pub fn element(&self, base: Element<F>, exc: Element<F>) -> Result<BlowUpElement<F>> {
        let x = BlowUpElement { base, exc };
        self.check(&x)?;
        if x.exc.terms().any(|(m, _)| self.xi_exponent(m) + 2 > self.r) {
            return Err(Error::InvalidModel(format!(
                "exceptional part {} must have xi-exponent at most {}",
                x.exc,
                self.r - 2
            )));
        }
        Ok(x)
    }

    pub fn pi_star(&self, a: &Element<F>) -> Result<BlowUpElement<F>> {
        self.element(a.clone(), Element::zero(&self.proj))
    }

    pub fn alpha_pi(&self, x: &BlowUpElement<F>) -> Element<F> {
        x.base.clone()
    }

    /// `α_{j_P}(b)`, rewriting the `ξ^{r-1}` part through `e'`.
    pub fn alpha_jp(&self, b: &Element<F>) -> Result<BlowUpElement<F>> {
        self.check_proj(b)?;
        let m = self.xi_coefficient(b, self.r - 1);
        if m.is_zero() {
            return Ok(BlowUpElement {
                base: Element::zero(&self.ambient),
                exc: b.clone(),
            });
        }
        let gysin = self.gysin.as_ref().ok_or(Error::MissingGysin)?;
        let rest = b - &(&self.lift.apply(&m)? * &self.e_prime);
        debug_assert!(rest.terms().all(|(t, _)| self.xi_exponent(t) + 2 <= self.r));
        Ok(BlowUpElement {
            base: gysin.apply(&m)?,
            exc: rest,
        })
    }

    /// `j_P^*(a, b) = p^* i_N^*(a) + b ξ`.
    pub fn jp_star(&self, x: &BlowUpElement<F>) -> Result<Element<F>> {
        self.check(x)?;
        Ok(&self.restrict(&x.base)? + &(&x.exc * &self.xi()))
    }

    /// `(a,b)(a',b') = (aa', 0) + α(p^*i^*(a) b' + p^*i^*(a') b + b b' ξ)`.
    pub fn mul(&self, x: &BlowUpElement<F>, y: &BlowUpElement<F>) -> Result<BlowUpElement<F>> {
        self.check(x)?;
        self.check(y)?;
        let cross = &(&(&self.restrict(&x.base)? * &y.exc) + &(&self.restrict(&y.base)? * &x.exc))
            + &(&(&x.exc * &y.exc) * &self.xi());
        let base = BlowUpElement {
            base: &x.base * &y.base,
            exc: Element::zero(&self.proj),
        };
        Ok(&base + &self.alpha_jp(&cross)?)
    }

    pub fn pow(&self, x: &BlowUpElement<F>, e: u32) -> Result<BlowUpElement<F>> {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, x)?;
        }
        Ok(acc)
    }

    /// Inverse of a class with invertible constant term, by the truncated geometric series.
    pub fn invert_unit(&self, x: &BlowUpElement<F>) -> Result<BlowUpElement<F>> {
        let c0_inv = x.constant_term().inverse().ok_or(Error::NotAUnit)?;
        let neg_u = &self.one() - &x.scale(&c0_inv);
        let mut sum = self.one();
        let mut power = self.one();
        loop {
            power = self.mul(&power, &neg_u)?;
            if power.is_zero() {
                break;
            }
            sum = &sum + &power;
        }
        Ok(sum.scale(&c0_inv))
    }

    /// `⟨x, [M̃]⟩`, read off the base part (π has degree one).
    pub fn pair(&self, x: &BlowUpElement<F>) -> F {
        x.base.coefficient(&self.top)
    }

    /// The unique `w` of ξ-exponent at most `r - 2` with `w ξ = z`.
    pub fn xi_shift_down(&self, z: &Element<F>) -> Result<Element<F>> {
        self.check_proj(z)?;
        let mut acc = Element::zero(&self.proj);
        for (m, c) in z.terms() {
            let e = self.xi_exponent(m);
            if e == 0 {
                return Err(Error::NotDivisible);
            }
            let mut exps = m.exponents().to_vec();
            exps[self.xi_index] = e - 1;
            acc = &acc + &Element::term(&self.proj, self.proj.monomial(exps), c.clone());
        }
        Ok(acc)
    }

    /// Basis of `H^k(M̃)`: base monomials first, then exceptional monomials.
    pub fn basis_of_degree(&self, k: u32) -> Vec<BlowUpElement<F>> {
        let mut out: Vec<BlowUpElement<F>> = self
            .ambient
            .basis_of_degree(k)
            .into_iter()
            .map(|m| BlowUpElement {
                base: Element::monomial(&self.ambient, m),
                exc: Element::zero(&self.proj),
            })
            .collect();
        if k >= 2 {
            out.extend(
                self.proj
                    .basis_of_degree(k - 2)
                    .into_iter()
                    .filter(|m| self.xi_exponent(m) + 2 <= self.r)
                    .map(|m| BlowUpElement {
                        base: Element::zero(&self.ambient),
                        exc: Element::monomial(&self.proj, m),
                    }),
            );
        }
        out
    }

    pub fn dim(&self) -> u32 {
        self.ambient.truncation_degree()
    }

    pub fn betti(&self) -> Vec<usize> {
        (0..=self.dim())
            .map(|k| self.basis_of_degree(k).len())
            .collect()
    }
}

/// The blow-up `M̃` with its mod-2 (and optionally rational) cohomology.
#[derive(Clone, Debug)]
pub struct BlowUpModel {
    sub: SubmanifoldData,
    proj: ProjBundleModel,
    ring: BlowUpRing<Gf2>,
    rational: Option<BlowUpRing<Rational>>,
}

pub fn build_blowup_model(s: SubmanifoldData) -> Result<BlowUpModel> {
    BlowUpModel::new(s)
}

impl BlowUpModel {
    pub fn new(sub: SubmanifoldData) -> Result<Self> {
        let proj = build_projectivization(&sub)?;
        let ring = BlowUpRing::new(
            sub.ambient.presentation(),
            sub.ambient.top().clone(),
            sub.center.presentation(),
            proj.model.presentation(),
            sub.pullback.clone(),
            sub.gysin.clone(),
            sub.normal_chern.clone(),
            sub.r,
        )?;
        let rational = match (&sub.rational, sub.ambient.rational(), sub.center.rational()) {
            (Some(rd), Some(mq), Some(nq)) => {
                let n = sub.ambient.dim();
                let pq = projectivization_presentation(
                    nq.presentation(),
                    &rd.normal_chern,
                    sub.r,
                    n - 2,
                )?;
                Some(BlowUpRing::new(
                    mq.presentation(),
                    mq.top().clone(),
                    nq.presentation(),
                    &pq,
                    rd.pullback.clone(),
                    rd.gysin.clone(),
                    rd.normal_chern.clone(),
                    sub.r,
                )?)
            }
            _ => None,
        };
        let model = BlowUpModel {
            sub,
            proj,
            ring,
            rational,
        };
        let (m, n) = (&model.sub.ambient, &model.sub.center);
        for k in 0..=m.dim() {
            let expected = m.basis_of_degree(k).len()
                + (0..model.sub.r - 1)
                    .filter(|i| 2 * i + 2 <= k)
                    .map(|i| n.basis_of_degree(k - 2 - 2 * i).len())
                    .sum::<usize>();
            if model.ring.basis_of_degree(k).len() != expected {
                return Err(Error::InvalidModel(format!(
                    "H^{k} of the blow-up has rank {} instead of {expected}",
                    model.ring.basis_of_degree(k).len()
                )));
            }
        }
        Ok(model)
    }

    pub fn submanifold(&self) -> &SubmanifoldData {
        &self.sub
    }

    pub fn projectivization(&self) -> &ProjBundleModel {
        &self.proj
    }

    pub fn ring(&self) -> &BlowUpRing<Gf2> {
        &self.ring
    }

    pub fn rational_ring(&self) -> Option<&BlowUpRing<Rational>> {
        self.rational.as_ref()
    }

    pub fn dim(&self) -> u32 {
        self.sub.ambient.dim()
    }

    pub fn r(&self) -> u32 {
        self.sub.r
    }

    pub fn pi_star(&self, a: &Element<Gf2>) -> Result<BlowUpElement<Gf2>> {
        self.ring.pi_star(a)
    }

    pub fn alpha_pi(&self, x: &BlowUpElement<Gf2>) -> Element<Gf2> {
        self.ring.alpha_pi(x)
    }

    pub fn alpha_jp(&self, b: &Element<Gf2>) -> Result<BlowUpElement<Gf2>> {
        self.ring.alpha_jp(b)
    }

    pub fn jp_star(&self, x: &BlowUpElement<Gf2>) -> Result<Element<Gf2>> {
        self.ring.jp_star(x)
    }

    pub fn mul(
        &self,
        x: &BlowUpElement<Gf2>,
        y: &BlowUpElement<Gf2>,
    ) -> Result<BlowUpElement<Gf2>> {
        self.ring.mul(x, y)
    }

    pub fn pair(&self, x: &BlowUpElement<Gf2>) -> Gf2 {
        self.ring.pair(x)
    }

    pub fn basis_of_degree(&self, k: u32) -> Vec<BlowUpElement<Gf2>> {
        self.ring.basis_of_degree(k)
    }

    /// All basis classes, by degree.
    pub fn basis(&self) -> Vec<BlowUpElement<Gf2>> {
        (0..=self.dim())
            .flat_map(|k| self.basis_of_degree(k))
            .collect()
    }

    pub fn betti(&self) -> Vec<usize> {
        self.ring.betti()
    }

    pub fn xi_shift_down(&self, z: &Element<Gf2>) -> Result<Element<Gf2>> {
        self.ring.xi_shift_down(z)
    }

    /// The exceptional generator `y = α_{j_P}(1)`.
    pub fn y(&self) -> BlowUpElement<Gf2> {
        BlowUpElement {
            base: Element::zero(&self.ring.ambient),
            exc: Element::one(&self.ring.proj),
        }
    }

    /// Parse a sum of terms, each an ambient expression (optionally prefixed `pi*`)
    /// or `E(<expression in H*(P)>)`.
    pub fn parse(&self, text: &str) -> Result<BlowUpElement<Gf2>> {
        let mut acc = self.ring.zero();
        for (offset, term) in split_terms(text)? {
            let shift = |e: Error| match e {
                Error::Parse {
                    message,
                    line,
                    column,
                } => Error::Parse {
                    message,
                    line,
                    column: column + offset,
                },
                other => other,
            };
            let trimmed = term.trim_start();
            let lead = offset + term.len() - trimmed.len();
            let trimmed = trimmed.trim_end();
            let x =
                if let Some(inner) = trimmed.strip_prefix("E(").and_then(|t| t.strip_suffix(')')) {
                    let b = self.ring.proj.parse(inner).map_err(|e| match shift(e) {
                        Error::Parse {
                            message,
                            line,
                            column,
                        } => Error::Parse {
                            message,
                            line,
                            column: column + lead - offset + 2,
                        },
                        other => other,
                    })?;
                    self.ring.alpha_jp(&b)?
                } else {
                    let body = trimmed.strip_prefix("pi*").unwrap_or(trimmed);
                    let skipped = lead - offset + (trimmed.len() - body.len());
                    let a = self.ring.ambient.parse(body).map_err(|e| match shift(e) {
                        Error::Parse {
                            message,
                            line,
                            column,
                        } => Error::Parse {
                            message,
                            line,
                            column: column + skipped,
                        },
                        other => other,
                    })?;
                    self.ring.pi_star(&a)?
                };
            acc = &acc + &x;
        }
        Ok(acc)
    }

    /// Total square: `Sq(a, b) = π^* Sq(a) + α((1+ξ) Sq(b))`.
    pub fn sq_blowup(&self, x: &BlowUpElement<Gf2>) -> Result<BlowUpElement<Gf2>> {
        let base = self.sub.ambient.sq().sq_total(&x.base)?;
        let p = self.proj.model.sq();
        let one_plus_xi = &Element::one(&self.ring.proj) + &self.ring.xi();
        let exc = &one_plus_xi * &p.sq_total(&x.exc)?;
        Ok(&self.ring.pi_star(&base)? + &self.ring.alpha_jp(&exc)?)
    }

    /// `Sq^i` of a homogeneous class.
    pub fn sq_i_blowup(&self, x: &BlowUpElement<Gf2>, i: u32) -> Result<BlowUpElement<Gf2>> {
        let degrees = x.support_degrees();
        match degrees.as_slice() {
            [] => Ok(self.ring.zero()),
            [d] => Ok(self.sq_blowup(x)?.component(d + i)),
            _ => Err(Error::NonHomogeneous),
        }
    }

    /// `v(P) = p^*v(N) χ(Sq)(Σ w_{2i}(η_N)(1+ξ)^{r-i})`.
    pub fn wu_projectivization(&self) -> Result<Element<Gf2>> {
        let r = self.sub.r;
        let twist = chern_twist(&self.proj.lift, &self.sub.normal_chern, r, |i| r - i)?;
        let vn = self.proj.lift.apply(&self.sub.center.wu_class()?)?;
        Ok(&vn * &self.proj.model.sq().chi_sq(&twist)?)
    }

    /// `v(S̄) = v(P) χ(Sq)(1+ξ)`.
    pub fn wu_exceptional_collar(&self) -> Result<Element<Gf2>> {
        let one_plus_xi = &Element::one(&self.ring.proj) + &self.ring.xi();
        Ok(&self.wu_projectivization()? * &self.proj.model.sq().chi_sq(&one_plus_xi)?)
    }

    /// `v(M̃) = π^*v(M) + α(ξ^{-1}(v(S̄) - p^*i^*v(M)))`, cross-checked against the
    /// closed form and against `⟨v ∪ z⟩ = ⟨Sq z⟩` on a full basis.
    pub fn wu_blowup(&self) -> Result<BlowUpElement<Gf2>> {
        let vm = self.sub.ambient.wu_class()?;
        let collar = self.wu_exceptional_collar()?;
        let r = self.sub.r;
        let closed = &self.proj.lift.apply(&self.sub.center.wu_class()?)?
            * &self.proj.model.sq().chi_sq(&chern_twist(
                &self.proj.lift,
                &self.sub.normal_chern,
                r,
                |i| r + 1 - i,
            )?)?;
        if closed != collar {
            return Err(Error::WuMismatch(format!(
                "collar Wu class {collar} differs from the closed form {closed}"
            )));
        }
        let b = self
            .ring
            .xi_shift_down(&(&collar - &self.ring.restrict(&vm)?))?;
        let v = self.ring.element(vm, b)?;
        for z in self.basis() {
            let lhs = self.pair(&self.mul(&v, &z)?);
            let rhs = self.pair(&self.sq_blowup(&z)?);
            if lhs != rhs {
                return Err(Error::WuMismatch(format!(
                    "<v z> = {lhs} but <Sq z> = {rhs} for z = {z}"
                )));
            }
        }
        Ok(v)
    }

    /// Wu class from its defining property alone, solved degree by degree.
    pub fn wu_blowup_oracle(&self) -> Result<BlowUpElement<Gf2>> {
        let n = self.dim();
        let mut v = self.ring.zero();
        for k in 0..=n {
            let unknowns = self.basis_of_degree(k);
            let tests = self.basis_of_degree(n - k);
            let mut products = Vec::with_capacity(tests.len() * unknowns.len());
            for t in &tests {
                for u in &unknowns {
                    products.push(self.pair(&self.mul(t, u)?).0);
                }
            }
            let a = BitMatrix::from_fn(tests.len(), unknowns.len(), |i, j| {
                products[i * unknowns.len() + j]
            });
            let rhs = tests
                .iter()
                .map(|z| Ok(self.pair(&self.sq_blowup(z)?).0))
                .collect::<Result<Vec<bool>>>()?;
            let x = a.solve(&rhs).ok_or(Error::SingularPairing { degree: k })?;
            for (u, bit) in unknowns.iter().zip(x) {
                if bit {
                    v = &v + u;
                }
            }
        }
        Ok(v)
    }

    /// `v_k(M̃) = 0` iff `v_k(M) = 0` and `Sq^k b + ξ Sq^{k-2} b = 0` in `H*(P)` for every
    /// exceptional basis class `b` of degree `n - k - 2`.
    pub fn wu_vanishes(&self, k: u32) -> Result<bool> {
        let n = self.dim();
        if k > n {
            return Ok(true);
        }
        if !self.sub.ambient.wu_component_vanishes(k)? {
            return Ok(false);
        }
        if n - k < 2 {
            return Ok(true);
        }
        let sq = self.proj.model.sq();
        let xi = self.ring.xi();
        for b in self.ring.basis_of_degree(n - k) {
            if b.exc.is_zero() {
                continue;
            }
            let c = &sq.sq_i(&b.exc, k as i64)? + &(&xi * &sq.sq_i(&b.exc, k as i64 - 2)?);
            if !c.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `L_i(M̃) = π^*L_i(M) + α(ξ^{-1}(L_i(S) - p^*i^*L_i(M)))` for `4i < min(2r, (n-1)/2)`,
    /// with `c(S) = (1-ξ) Σ c_i(η_N)(1+ξ)^{r-i}`.
    pub fn l_class_blowup(&self, i: u32) -> Result<BlowUpElement<Rational>> {
        let (n, r) = (self.dim(), self.sub.r);
        if 4 * i >= 2 * r || 8 * i + 1 >= n {
            return Err(Error::RangeViolation {
                index: i,
                two_r: 2 * r,
                n,
            });
        }
        let ring = self.rational.as_ref().ok_or(Error::MissingRational)?;
        let mq = self.sub.ambient.rational().ok_or(Error::MissingRational)?;
        let p = ring.proj();
        let one_minus_xi = &Element::one(p) - &ring.xi();
        let c_s = &one_minus_xi * &chern_twist(&ring.lift, &ring.chern, r, |j| r - j)?;
        let seq = l_polynomials(i.max(1));
        let l_s = l_class(&seq, &chern_to_pontryagin(&c_s), i)?;
        let l_m = l_class(&seq, mq.pontryagin(), i)?;
        let b = ring.xi_shift_down(&(&l_s - &ring.restrict(&l_m)?))?;
        ring.element(l_m, b)
    }

    /// `L_i(S)` for the sphere bundle of the normal bundle, as used by [`Self::l_class_blowup`].
    pub fn l_class_collar(&self, i: u32) -> Result<Element<Rational>> {
        let ring = self.rational.as_ref().ok_or(Error::MissingRational)?;
        let r = self.sub.r;
        let one_minus_xi = &Element::one(ring.proj()) - &ring.xi();
        let c_s = &one_minus_xi * &chern_twist(&ring.lift, &ring.chern, r, |j| r - j)?;
        l_class(&l_polynomials(i.max(1)), &chern_to_pontryagin(&c_s), i)
    }
}

/// Split at top-level `+`/`-`; returns byte offsets and term text (signs are irrelevant mod 2).
fn split_terms(text: &str) -> Result<Vec<(usize, &str)>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in text.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(Error::Parse {
                        message: "unbalanced `)`".into(),
                        line: 1,
                        column: i + 1,
                    });
                }
            }
            '+' | '-' if depth == 0 => {
                out.push((start, &text[start..i]));
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push((start, &text[start..]));
    let nonempty: Vec<_> = out
        .into_iter()
        .filter(|(_, t)| !t.trim().is_empty())
        .collect();
    if nonempty.is_empty() {
        return Err(Error::Parse {
            message: "empty expression".into(),
            line: 1,
            column: 1,
        });
    }
    Ok(nonempty)
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::manifold::cp;

    fn point_blowup(n: u32) -> BlowUpModel {
        BlowUpModel::new(SubmanifoldData::point(&cp(n)).unwrap()).unwrap()
    }

    fn linear_blowup(k: u32, n: u32) -> BlowUpModel {
        BlowUpModel::new(SubmanifoldData::linear_cp(k, n).unwrap()).unwrap()
    }

    fn models() -> Vec<BlowUpModel> {
        let mut out: Vec<_> = (2..=6).map(point_blowup).collect();
        out.push(linear_blowup(1, 4));
        out.push(linear_blowup(1, 5));
        out.push(linear_blowup(2, 5));
        out.push(linear_blowup(2, 6));
        out
    }

    fn random_element(m: &BlowUpModel, rng: &mut ChaCha8Rng) -> BlowUpElement<Gf2> {
        m.basis()
            .into_iter()
            .filter(|_| rng.gen_bool(0.5))
            .fold(m.ring().zero(), |acc, b| &acc + &b)
    }

    #[test]
    fn projectivization_examples() {
        let p = build_projectivization(&SubmanifoldData::point(&cp(2)).unwrap()).unwrap();
        assert_eq!(p.model().dim(), 2);
        assert_eq!(p.model().top_class().to_string(), "xi");
        assert_eq!(p.model().betti(), vec![1, 0, 1]);

        let s = SubmanifoldData::linear_cp(1, 4).unwrap();
        let p = build_projectivization(&s).unwrap();
        assert_eq!(p.model().dim(), 6);
        assert_eq!(p.model().parse("xi^3").unwrap().to_string(), "a*xi^2");
        assert_eq!(p.model().top_class().to_string(), "a*xi^2");

        let p = build_projectivization(&SubmanifoldData::point(&cp(6)).unwrap()).unwrap();
        assert_eq!(p.model().dim(), 10);
        assert!(p.model().parse("xi^6").unwrap().is_zero());
        for m in models() {
            let p = m.projectivization().model();
            assert!(p.poincare_duality_holds());
            assert_eq!(p.wu_class().unwrap(), p.wu_class_oracle().unwrap());
            assert_eq!(m.wu_projectivization().unwrap(), p.wu_class().unwrap());
        }
    }

    #[test]
    fn betti_numbers() {
        assert_eq!(point_blowup(2).basis_of_degree(2).len(), 2);
        assert_eq!(point_blowup(3).betti(), vec![1, 0, 2, 0, 2, 0, 1]);
        assert_eq!(linear_blowup(1, 4).basis_of_degree(4).len(), 3);
    }

    #[test]
    fn structure_map_examples() {
        let m = point_blowup(2);
        let x = m.sub.ambient.parse("x").unwrap();
        let x2 = m.sub.ambient.parse("x^2").unwrap();
        assert_eq!(m.alpha_pi(&m.pi_star(&x2).unwrap()), x2);
        assert!(m.alpha_pi(&m.y()).is_zero());
        assert_eq!(m.y().to_string(), "E(1)");
        assert_eq!(m.jp_star(&m.y()).unwrap().to_string(), "xi");
        assert!(m.jp_star(&m.pi_star(&x).unwrap()).unwrap().is_zero());

        for n in [3u32, 5, 7] {
            let m = point_blowup(n + 1);
            let xi_n = m.ring().proj().parse(&format!("xi^{n}")).unwrap();
            assert_eq!(
                m.alpha_jp(&xi_n).unwrap().to_string(),
                format!("pi*x^{}", n + 1)
            );
            let y = m.y();
            let x = m.pi_star(&m.sub.ambient.parse("x").unwrap()).unwrap();
            assert!(m.mul(&y, &x).unwrap().is_zero());
            let half = m.ring().pow(&y, n.div_ceil(2)).unwrap();
            let expected = m
                .ring()
                .proj()
                .parse(&format!("xi^{}", (n - 1) / 2))
                .unwrap();
            assert_eq!(half, m.alpha_jp(&expected).unwrap());
            let top = m.ring().pow(&y, n + 1).unwrap();
            assert_eq!(top.to_string(), format!("pi*x^{}", n + 1));
            assert_eq!(m.pair(&top), Gf2::ONE);
        }

        let m = linear_blowup(1, 4);
        let xi2 = m.ring().proj().parse("xi^2").unwrap();
        assert_eq!(m.alpha_jp(&xi2).unwrap().to_string(), "pi*x^3 + E(a*xi)");
        let x = m.pi_star(&m.sub.ambient.parse("x").unwrap()).unwrap();
        assert_eq!(m.jp_star(&x).unwrap().to_string(), "a");
    }

    #[test]
    fn missing_gysin() {
        let s = SubmanifoldData::point(&cp(2)).unwrap();
        let s = SubmanifoldData::new(
            s.ambient.clone(),
            s.center.clone(),
            2,
            s.pullback.clone(),
            s.normal_chern.clone(),
            None,
        )
        .unwrap();
        let m = BlowUpModel::new(s).unwrap();
        let xi = m.ring().xi();
        assert_eq!(m.alpha_jp(&xi), Err(Error::MissingGysin));
        assert!(matches!(m.mul(&m.y(), &m.y()), Err(Error::MissingGysin)));
        assert_eq!(m.alpha_jp(&Element::one(m.ring().proj())).unwrap(), m.y());
    }

    #[test]
    fn rejects_bad_submanifolds() {
        assert!(matches!(
            SubmanifoldData::point(&cp(1)),
            Err(Error::InvalidSubmanifold(_))
        ));
        assert!(matches!(
            SubmanifoldData::linear_cp(2, 3),
            Err(Error::InvalidSubmanifold(_))
        ));
        let s = SubmanifoldData::linear_cp(1, 4).unwrap();
        let bad_gysin = LinearMap::new(
            s.center.presentation(),
            s.ambient.presentation(),
            6,
            BTreeMap::from([
                (
                    s.center.presentation().monomial(vec![0]),
                    s.ambient.parse("x^3").unwrap(),
                ),
                (
                    s.center.presentation().monomial(vec![1]),
                    Element::zero(s.ambient.presentation()),
                ),
            ]),
        )
        .unwrap();
        let err = SubmanifoldData::new(
            s.ambient.clone(),
            s.center.clone(),
            3,
            s.pullback.clone(),
            s.normal_chern.clone(),
            Some(bad_gysin),
        );
        assert!(matches!(err, Err(Error::InvalidSubmanifold(_))));
        let bad_chern = s.center.parse("1").unwrap();
        let ok = SubmanifoldData::new(
            s.ambient.clone(),
            s.center.clone(),
            3,
            s.pullback.clone(),
            bad_chern,
            s.gysin.clone(),
        )
        .unwrap();
        let rd = s.rational.clone().unwrap();
        assert!(matches!(ok.with_rational(rd), Err(Error::InvalidChern(_))));
    }

    #[test]
    fn ring_laws() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for m in models() {
            let ring = m.ring();
            for _ in 0..25 {
                let (x, y, z) = (
                    random_element(&m, &mut rng),
                    random_element(&m, &mut rng),
                    random_element(&m, &mut rng),
                );
                let xy = ring.mul(&x, &y).unwrap();
                assert_eq!(xy, ring.mul(&y, &x).unwrap());
                assert_eq!(
                    ring.mul(&xy, &z).unwrap(),
                    ring.mul(&x, &ring.mul(&y, &z).unwrap()).unwrap()
                );
                assert_eq!(
                    ring.mul(&x, &(&y + &z)).unwrap(),
                    &xy + &ring.mul(&x, &z).unwrap()
                );
                assert_eq!(ring.mul(&ring.one(), &x).unwrap(), x);
                assert_eq!(
                    ring.jp_star(&xy).unwrap(),
                    &ring.jp_star(&x).unwrap() * &ring.jp_star(&y).unwrap()
                );
                let a = x.base().clone();
                let b = y.exc().clone();
                let pa = ring.pi_star(&a).unwrap();
                let ab = ring.alpha_jp(&b).unwrap();
                assert_eq!(
                    ring.mul(&pa, &ab).unwrap(),
                    ring.alpha_jp(&(&ring.restrict(&a).unwrap() * &b)).unwrap()
                );
                let a2 = z.base().clone();
                assert_eq!(
                    ring.mul(&pa, &ring.pi_star(&a2).unwrap()).unwrap(),
                    ring.pi_star(&(&a * &a2)).unwrap()
                );
            }
        }
    }

    #[test]
    fn duality_structure() {
        for m in models() {
            let n = m.dim();
            for k in 0..=n {
                for a in m.sub.ambient.basis_of_degree(k) {
                    let a = Element::monomial(m.sub.ambient.presentation(), a);
                    assert_eq!(m.alpha_pi(&m.pi_star(&a).unwrap()), a);
                }
                let kernel: Vec<_> = m
                    .basis_of_degree(k)
                    .into_iter()
                    .filter(|b| b.base().is_zero())
                    .collect();
                let dual: Vec<_> = m
                    .basis_of_degree(n - k)
                    .into_iter()
                    .filter(|b| b.base().is_zero())
                    .collect();
                for b in &kernel {
                    for a in m.sub.ambient.basis_of_degree(n - k) {
                        let pa = m
                            .pi_star(&Element::monomial(m.sub.ambient.presentation(), a))
                            .unwrap();
                        assert_eq!(m.pair(&m.mul(b, &pa).unwrap()), Gf2::ZERO);
                    }
                }
                let mat = BitMatrix::from_fn(kernel.len(), dual.len(), |i, j| {
                    m.pair(&m.mul(&kernel[i], &dual[j]).unwrap()).0
                });
                assert!(mat.is_invertible(), "degree {k} of {}", m.sub.center.name());
            }
        }
    }

    #[test]
    fn steenrod_examples_and_naturality() {
        let m = point_blowup(2);
        let x = m.pi_star(&m.sub.ambient.parse("x").unwrap()).unwrap();
        assert_eq!(m.sq_blowup(&x).unwrap().to_string(), "pi*x + pi*x^2");
        assert_eq!(m.sq_blowup(&m.y()).unwrap().to_string(), "pi*x^2 + E(1)");
        for m in models() {
            let p = m.projectivization().model().sq();
            for z in m.basis() {
                let sz = m.sq_blowup(&z).unwrap();
                assert_eq!(
                    m.jp_star(&sz).unwrap(),
                    p.sq_total(&m.jp_star(&z).unwrap()).unwrap()
                );
                if z.exc().is_zero() {
                    let sa = m.sub.ambient.sq().sq_total(z.base()).unwrap();
                    assert_eq!(sz, m.pi_star(&sa).unwrap());
                } else {
                    // Sq^2 α(b) = α(Sq^2 b + ξ b)
                    let b = z.exc();
                    let d = b.homogeneous_degree().unwrap();
                    let expected = m
                        .alpha_jp(&(&p.sq_i(b, 2).unwrap() + &(&m.ring().xi() * b)))
                        .unwrap();
                    assert_eq!(m.sq_i_blowup(&z, 2).unwrap(), expected.component(d + 4));
                }
            }
        }
    }

    #[test]
    fn cartan_on_blowups() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for m in models() {
            for _ in 0..20 {
                let x = random_element(&m, &mut rng);
                let y = random_element(&m, &mut rng);
                assert_eq!(
                    m.sq_blowup(&m.mul(&x, &y).unwrap()).unwrap(),
                    m.mul(&m.sq_blowup(&x).unwrap(), &m.sq_blowup(&y).unwrap())
                        .unwrap()
                );
            }
        }
    }

    #[test]
    fn wu_examples() {
        let m = point_blowup(2);
        assert_eq!(m.wu_exceptional_collar().unwrap().to_string(), "1 + xi");
        assert_eq!(m.wu_blowup().unwrap().to_string(), "1 + pi*x + E(1)");
        let m = point_blowup(3);
        assert_eq!(m.wu_projectivization().unwrap().to_string(), "1 + xi");
        assert_eq!(m.wu_exceptional_collar().unwrap().to_string(), "1");
        assert_eq!(m.wu_blowup().unwrap().to_string(), "1");
        assert!(m.wu_vanishes(2).unwrap());
        assert!(!point_blowup(2).wu_vanishes(2).unwrap());
        for m in models() {
            let v = m.wu_blowup().unwrap();
            assert_eq!(v, m.wu_blowup_oracle().unwrap());
            assert_eq!(v.base(), &m.sub.ambient.wu_class().unwrap());
            for k in 0..=m.dim() {
                assert_eq!(
                    m.wu_vanishes(k).unwrap(),
                    v.component(k).is_zero(),
                    "k = {k}"
                );
            }
        }
    }

    #[test]
    fn xi_shift_examples() {
        let m = linear_blowup(1, 4);
        let p = m.ring().proj();
        assert_eq!(
            m.xi_shift_down(&p.parse("xi").unwrap())
                .unwrap()
                .to_string(),
            "1"
        );
        assert_eq!(
            m.xi_shift_down(&p.parse("a*xi^2").unwrap())
                .unwrap()
                .to_string(),
            "a*xi"
        );
        assert_eq!(
            m.xi_shift_down(&p.parse("1 + xi").unwrap()),
            Err(Error::NotDivisible)
        );
    }

    #[test]
    fn l_class_examples() {
        let m = point_blowup(5);
        let l0 = m.l_class_blowup(0).unwrap();
        assert_eq!(l0.to_string(), "1");
        let l1 = m.l_class_blowup(1).unwrap();
        assert_eq!(l1.to_string(), "2*pi*x^2 + E(2*xi)");
        let ring = m.rational_ring().unwrap();
        assert_eq!(ring.jp_star(&l1).unwrap(), m.l_class_collar(1).unwrap());
        assert_eq!(m.l_class_collar(1).unwrap().to_string(), "2*xi^2");
        assert_eq!(ring.alpha_pi(&l1).to_string(), "2*x^2");
        assert!(matches!(
            point_blowup(4).l_class_blowup(1),
            Err(Error::RangeViolation { .. })
        ));
    }

    #[test]
    fn parse_blowup_classes() {
        let m = point_blowup(2);
        assert_eq!(m.parse("1 + pi*x + E(1)").unwrap(), m.wu_blowup().unwrap());
        assert_eq!(m.parse("E(xi)").unwrap().to_string(), "pi*x^2");
        assert_eq!(m.parse("x^2").unwrap().to_string(), "pi*x^2");
        assert_eq!(
            m.parse("x + E(q)"),
            Err(Error::UnknownGenerator("q".into()))
        );
        match m.parse("x + E(xi*)") {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 10),
            other => panic!("{other:?}"),
        }
        match m.parse("x + pi*x^") {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 10),
            other => panic!("{other:?}"),
        }
        match m.parse("1 + pi*z") {
            Err(e) => assert!(e.is_input_error()),
            other => panic!("{other:?}"),
        }
    }
}
