//! The codimension-two embedding obstruction `v_{n+1}(W)` for `W = D(-L)` over `M^{2n+2}`.
//!
//! `-L` enters only through `w(-L) = (1 + u_N)^{-1}`; the obstruction vanishes iff
//! `⟨Sq x / (1 + u_N), [M]⟩ = 0` for every `x ∈ H^{n+1}(M)`.

use crate::blowup::{BlowUpElement, BlowUpModel, SubmanifoldData};
use crate::coeff::Gf2;
use crate::error::{Error, Result};
use crate::gring::Element;
use crate::manifold::{cp, ManifoldModel};

/// An ambient `M^{2n+2}` (`n` odd) with the mod-2 dual class `u_N ∈ H^2(M)` of a codimension-two submanifold.
#[derive(Clone, Debug)]
pub struct EmbeddingContext {
    ambient: ManifoldModel,
    n: u32,
    u: Element<Gf2>,
    label: Option<String>,
}

impl EmbeddingContext {
    pub fn new(ambient: ManifoldModel, u: Element<Gf2>, label: Option<String>) -> Result<Self> {
        let dim = ambient.dim();
        if dim < 2 || dim % 2 == 1 {
            return Err(Error::InvalidModel(format!(
                "ambient dimension {dim} is not of the form 2n+2"
            )));
        }
        let n = (dim - 2) / 2;
        if n.is_multiple_of(2) {
            return Err(Error::BadParity(n));
        }
        if **u.presentation() != **ambient.presentation() {
            return Err(Error::PresentationMismatch);
        }
        if u.terms().any(|(m, _)| m.degree() != 2) {
            return Err(Error::InvalidModel(format!(
                "u_N = {u} must lie in degree 2"
            )));
        }
        Ok(EmbeddingContext {
            ambient,
            n,
            u,
            label,
        })
    }

    pub fn ambient(&self) -> &ManifoldModel {
        &self.ambient
    }

    /// Half of `dim M - 2`.
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn u(&self) -> &Element<Gf2> {
        &self.u
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// `w(-L) = (1 + u_N)^{-1}`.
    pub fn w_minus_l(&self) -> Element<Gf2> {
        (&Element::one(self.ambient.presentation()) + &self.u)
            .invert_unit()
            .expect("1 + u is a unit")
    }

    /// Caveats that do not affect the computed class.
    pub fn warnings(&self) -> Vec<String> {
        dimension_warnings(self.n)
    }
}

fn dimension_warnings(n: u32) -> Vec<String> {
    if matches!(n, 1 | 3 | 7) {
        vec![format!(
            "n = {n} lies in {{1, 3, 7}}: the class is computed, but its geometric interpretation does not apply"
        )]
    } else {
        Vec::new()
    }
}

/// A degree-`d` hypersurface `F_d ⊂ CP^{n+1}`: `u = d x`.
pub fn hypersurface_ctx(n: u32, d: u32) -> Result<EmbeddingContext> {
    if n.is_multiple_of(2) {
        return Err(Error::BadParity(n));
    }
    if n < 3 || d == 0 {
        return Err(Error::InvalidSubmanifold(format!(
            "hypersurface needs odd n >= 3 and degree d >= 1, got n = {n}, d = {d}"
        )));
    }
    let ambient = cp(n + 1);
    let u = if d % 2 == 1 {
        ambient.parse("x")?
    } else {
        Element::zero(ambient.presentation())
    };
    EmbeddingContext::new(ambient, u, Some(format!("F_{d} in CP{}", n + 1)))
}

/// A basis class `x ∈ H^{n+1}(M)` with `⟨Sq x / (1+u), [M]⟩ ≠ 0`, if any.
pub fn obstruction_witness(ctx: &EmbeddingContext) -> Result<Option<Element<Gf2>>> {
    let m = &ctx.ambient;
    let w = ctx.w_minus_l();
    for b in m.basis_of_degree(ctx.n + 1) {
        let x = Element::monomial(m.presentation(), b);
        if m.pair(&(&w * &m.sq().sq_total(&x)?)) != Gf2::ZERO {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

/// `v_{n+1}(W) = 0`.
pub fn obstruction_vanishes(ctx: &EmbeddingContext) -> Result<bool> {
    Ok(obstruction_witness(ctx)?.is_none())
}

/// The context after blowing up `M` along a center inside `N`.
#[derive(Clone, Debug)]
pub struct BlowUpEmbeddingContext {
    base: EmbeddingContext,
    model: BlowUpModel,
}

impl BlowUpEmbeddingContext {
    pub fn new(base: EmbeddingContext, center: SubmanifoldData) -> Result<Self> {
        if center.ambient().presentation() != base.ambient.presentation() {
            return Err(Error::PresentationMismatch);
        }
        let model = BlowUpModel::new(center)?;
        Ok(BlowUpEmbeddingContext { base, model })
    }

    /// Blow up a point of `N`.
    pub fn at_point(base: EmbeddingContext) -> Result<Self> {
        let center = SubmanifoldData::point(&base.ambient)?;
        Self::new(base, center)
    }

    pub fn base(&self) -> &EmbeddingContext {
        &self.base
    }

    pub fn model(&self) -> &BlowUpModel {
        &self.model
    }

    pub fn warnings(&self) -> Vec<String> {
        self.base.warnings()
    }
}

/// `u_Ñ = π^* u_N + α_{j_P}(1)`.
pub fn u_tilde(ctx: &BlowUpEmbeddingContext) -> Result<BlowUpElement<Gf2>> {
    Ok(&ctx.model.pi_star(&ctx.base.u)? + &ctx.model.y())
}

/// A basis class `x ∈ H^{n+1}(M̃)` with `⟨Sq x / (1 + u_Ñ), [M̃]⟩ ≠ 0`, if any.
pub fn blowup_obstruction_witness(
    ctx: &BlowUpEmbeddingContext,
) -> Result<Option<BlowUpElement<Gf2>>> {
    let m = &ctx.model;
    let ring = m.ring();
    let w = ring.invert_unit(&(&ring.one() + &u_tilde(ctx)?))?;
    for x in m.basis_of_degree(ctx.base.n + 1) {
        if m.pair(&m.mul(&w, &m.sq_blowup(&x)?)?) != Gf2::ZERO {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

/// `v_{n+1}(W̃) = 0`.
pub fn blowup_obstruction_vanishes(ctx: &BlowUpEmbeddingContext) -> Result<bool> {
    Ok(blowup_obstruction_witness(ctx)?.is_none())
}
