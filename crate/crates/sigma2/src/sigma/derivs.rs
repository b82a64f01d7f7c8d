//! Logarithmic derivatives 𝒫ᵢⱼ… = −∂ log 𝒵 in the sheared coordinates (U₃, U₁), where
//! 𝒵(U₃, U₁) = σ(U₃, U₁ + (3/5)A·U₃) and A = ℘(α).
//!
//! Everything reduces to the single quantity 𝒮 = (℘′(U₁) − ℘′(α)ℛ)/(2(℘(U₁) − A)) with
//! ℛ = (𝒫+1)/(𝒫−1). It obeys ∂_{U₁}𝒮 = 2℘(U₁) + A − 𝒮² and
//! ∂_{U₃}𝒮 = (℘(U₁) − A)𝒮² − ℘′(U₁)𝒮 + Q, Q = ℘(U₁)² + A℘(U₁) + A² + γ₄, so all
//! higher derivatives are polynomials in 𝒮.

use super::{DegenSigmaContext, Lambda1Data};
use crate::elliptic::Weierstrass;
use crate::strata::G2Params;
use crate::{Error, Result, C};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaDerivatives {
    pub p11: C,
    pub p13: C,
    pub p111: C,
    pub p113: C,
    pub p1111: C,
    pub p1113: C,
}

/// Derivatives with respect to the original (u₃, u₁).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WpBasis {
    pub wp11: C,
    pub wp13: C,
    pub wp111: C,
    pub wp113: C,
    pub wp1111: C,
    pub wp1113: C,
}

/// The pieces of the 𝒮-route at one point.
#[derive(Debug, Clone, Copy)]
pub struct SRoute {
    pub s: C,
    pub w: C,
    pub wp: C,
    /// ℘′(α)ℛ; at a branch point this is the finite limit 2/(U₃ − J(U₁)).
    pub p_r: C,
}

impl SigmaDerivatives {
    /// ∂_{U₃} = ∂_{u₃} + (3/5)A∂_{u₁}, ∂_{U₁} = ∂_{u₁}.
    pub fn to_wp_basis(&self, a: C) -> WpBasis {
        let k = a * 0.6;
        WpBasis {
            wp11: self.p11,
            wp13: self.p13 - k * self.p11,
            wp111: self.p111,
            wp113: self.p113 - k * self.p111,
            wp1111: self.p1111,
            wp1113: self.p1113 - k * self.p1111,
        }
    }
}

pub fn lambda_from_wp_basis(b: &WpBasis) -> G2Params {
    let (p11, p13, p111, p113, p1111, p1113) =
        (b.wp11, b.wp13, b.wp111, b.wp113, b.wp1111, b.wp1113);
    G2Params::new(
        p1111 * 0.5 - p11 * p11 * 3.0 - p13 * 2.0,
        p1113 * 0.5 - p1111 * p11 * 0.5 + p111 * p111 * 0.25 + p11.powi(3) * 2.0 - p13 * p11 * 2.0,
        -p1113 * p11 * 0.5 - p1111 * p13 * 0.5
            + p113 * p111 * 0.5
            + p13 * p13
            + p11 * p11 * p13 * 4.0,
        -p1113 * p13 * 0.5 + p113 * p113 * 0.25 + p13 * p13 * p11 * 2.0,
    )
}

impl DegenSigmaContext {
    pub fn s_route(&self, big_u3: C, big_u1: C) -> Result<SRoute> {
        let d = self.lambda1_or_err()?;
        let v = d.ectx.eval(big_u1)?;
        let p_r = match d.branch_point {
            Some(h) => {
                let j = super::branch_j(d, h, big_u1)?;
                if (big_u3 - j).norm() < self.cfg.tol {
                    return Err(Error::SingularConfiguration(
                        "U₃ = J(U₁): on the σ divisor".into(),
                    ));
                }
                (big_u3 - j).inv() * 2.0
            }
            None => {
                let pc = self.p_function_u(big_u3, big_u1)?;
                p_times_r(d.wpp_alpha, pc, self.cfg.tol)?
            }
        };
        let gap = v.wp - d.wp_alpha;
        if gap.norm() < self.cfg.tol * (1.0 + d.wp_alpha.norm()) {
            return Err(Error::SingularConfiguration("℘(U₁) = ℘(α)".into()));
        }
        Ok(SRoute {
            s: (v.wp_prime - p_r) / (gap * 2.0),
            w: v.wp,
            wp: v.wp_prime,
            p_r,
        })
    }

    /// X₁+X₂ and X₁X₂ from the 𝒮-route.
    pub fn symmetric_functions_s(&self, big_u3: C, big_u1: C) -> Result<(C, C)> {
        let d = self.lambda1_or_err()?;
        let r = self.s_route(big_u3, big_u1)?;
        let (s, w, a) = (r.s, r.w, d.wp_alpha);
        let q = w * w + w * a + a * a + d.ectx.gamma().0;
        Ok((s * s - w, w * s * s - r.wp * s - a * (w + a) + q))
    }

    pub fn log_derivatives(&self, big_u3: C, big_u1: C) -> Result<SigmaDerivatives> {
        let d = self.lambda1_or_err()?;
        let r = self.s_route(big_u3, big_u1)?;
        Ok(derivatives_from_s(d, r))
    }

    /// 𝒫₁₁ and 𝒫₁₃ through 𝒫, ℘(α ± U₁) and ζ(α ± U₁) directly, bypassing 𝒮.
    pub fn log_derivatives_p_route(&self, big_u3: C, big_u1: C) -> Result<(C, C)> {
        let d = self.lambda1_or_err()?;
        if d.branch_point.is_some() {
            return Err(Error::SingularConfiguration(
                "𝒫-route needs ℘′(α) ≠ 0".into(),
            ));
        }
        let e = &d.ectx;
        let pc = self.p_function_u(big_u3, big_u1)?;
        let plus = e.eval(d.alpha + big_u1)?;
        let minus = e.eval(d.alpha - big_u1)?;
        let l1 = plus.zeta + minus.zeta - d.zeta_alpha * 2.0;
        let l2 = minus.wp - plus.wp;
        let den = pc - 1.0;
        let a = d.wp_alpha;
        let p11 = a * 0.2 + minus.wp - pc * l2 / den + pc * l1 * l1 / (den * den);
        let p13 = a * a * 0.36 + d.wpp_alpha * pc * l1 / (den * den);
        Ok((p11, p13))
    }

    /// ℘₁₁₁₃ with the constant term exactly as quoted alongside the ℘₁₁₁₁ formula.
    pub fn wp1113_quoted(&self, big_u3: C, big_u1: C) -> Result<C> {
        let d = self.lambda1_or_err()?;
        let r = self.s_route(big_u3, big_u1)?;
        let corrected = derivatives_from_s(d, r).to_wp_basis(d.wp_alpha).wp1113;
        let (w, a, wp, p) = (r.w, d.wp_alpha, r.wp, d.wpp_alpha);
        let shape = a * 6.0 * (w * w * 0.4 + a * w + a * a * 0.4);
        let quoted_const =
            shape - (w * w + a * a) * 0.8 + w * (wp * wp + p * p) * 9.0 / ((w - a) * 5.0);
        let true_const = (w + a * 0.8) * (wp * wp - p * p) / (w - a) - shape;
        Ok(corrected - true_const + quoted_const)
    }

    /// λ from the ℘-basis at (U₃, U₁), and γ from the ℘(U₁), ℘′(U₁) quotients.
    pub fn reconstruct_lambda(&self, big_u3: C, big_u1: C) -> Result<(G2Params, (C, C))> {
        let d = self.lambda1_or_err()?;
        let lam = lambda_from_wp_basis(
            &self
                .log_derivatives(big_u3, big_u1)?
                .to_wp_basis(d.wp_alpha),
        );
        Ok((lam, self.gamma_from_wp(big_u1)?))
    }

    pub fn gamma_from_wp(&self, big_u1: C) -> Result<(C, C)> {
        let d = self.lambda1_or_err()?;
        let v = d.ectx.eval(big_u1)?;
        let (w, a) = (v.wp, d.wp_alpha);
        let den = (w - a) * 4.0;
        if den.norm() < self.cfg.tol {
            return Err(Error::SingularConfiguration("℘(U₁) = ℘(α)".into()));
        }
        let fu = v.wp_prime * v.wp_prime - w.powi(3) * 4.0;
        let fa = d.wpp_alpha * d.wpp_alpha - a.powi(3) * 4.0;
        Ok(((fu - fa) / den, -(a * fu - w * fa) / den))
    }
}

/// ℘′(α)(𝒫+1)/(𝒫−1), refusing the σ divisor 𝒫 = 1.
pub(crate) fn p_times_r(wpp_alpha: C, pc: C, tol: f64) -> Result<C> {
    if (pc - 1.0).norm() < tol.max(1e-8) {
        return Err(Error::SingularConfiguration(
            "𝒫 = 1: on the σ divisor".into(),
        ));
    }
    Ok(wpp_alpha * (pc + 1.0) / (pc - 1.0))
}

/// The 𝒮-route for any Weierstrass-type family (used for the rational limit).
pub fn s_route_generic<W: Weierstrass>(
    w: &W,
    alpha: C,
    big_u3: C,
    big_u1: C,
    tol: f64,
) -> Result<SRoute> {
    let at = w.eval(alpha)?;
    let v = w.eval(big_u1)?;
    let den = w.ln_sigma(alpha - big_u1)?;
    if den.re == f64::NEG_INFINITY {
        return Err(Error::PoleAtArgument(format!(
            "σ(α − U₁) = 0 at U₁ = {big_u1}"
        )));
    }
    let pc =
        (w.ln_sigma(alpha + big_u1)? - den + at.wp_prime * big_u3 - at.zeta * big_u1 * 2.0).exp();
    let p_r = p_times_r(at.wp_prime, pc, tol)?;
    let gap = v.wp - at.wp;
    if gap.norm() < tol * (1.0 + at.wp.norm()) {
        return Err(Error::SingularConfiguration("℘(U₁) = ℘(α)".into()));
    }
    Ok(SRoute {
        s: (v.wp_prime - p_r) / (gap * 2.0),
        w: v.wp,
        wp: v.wp_prime,
        p_r,
    })
}

fn derivatives_from_s(d: &Lambda1Data, r: SRoute) -> SigmaDerivatives {
    let (s, w, wp, a) = (r.s, r.w, r.wp, d.wp_alpha);
    let g4 = d.ectx.gamma().0;
    let q = w * w + w * a + a * a + g4;
    let ds1 = w * 2.0 + a - s * s;
    let ds3 = (w - a) * s * s - wp * s + q;
    let p111 = s * ds1 * 2.0 - wp;
    SigmaDerivatives {
        p11: s * s - w - a * 0.8,
        p13: -(w * s * s - wp * s - a * (w + a) + q) + a * (s * s - w - a * 0.8) + a * a * 0.16,
        p111,
        p113: s * ds3 * 2.0,
        p1111: ds1 * ds1 * 2.0 + s * wp * 4.0 - s * s * ds1 * 4.0 - w * w * 6.0 - g4 * 2.0,
        p1113: ds3 * (ds1 * 2.0 - s * s * 4.0),
    }
}
