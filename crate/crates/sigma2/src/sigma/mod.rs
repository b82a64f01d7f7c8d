//! The genus-2 sigma function on the degenerate strata Λ₁ (one elliptic factor) and Λ₀
//! (purely exponential), evaluated in closed form.

mod derivs;

pub use derivs::{lambda_from_wp_basis, s_route_generic, SRoute, SigmaDerivatives, WpBasis};

use crate::elliptic::{Branch, EllipticContext, EllipticCurveParams, HalfPeriod, Weierstrass};
use crate::numerics::diff::Differ;
use crate::numerics::real;
use crate::strata::charts::{lambda0_chart, lambda1_chart};
use crate::strata::{classify, G2Params, Stratum, StratumClassification};
use crate::{Error, NumericsConfig, Result, C};

/// Cached elliptic data for Λ₁: α with ℘(α) = A = 5a₂/3 and ℘′(α) = 2d.
#[derive(Debug, Clone)]
pub struct Lambda1Data {
    pub a2: C,
    pub ectx: EllipticContext,
    pub alpha: C,
    pub d: C,
    pub wp_alpha: C,
    pub wpp_alpha: C,
    pub zeta_alpha: C,
    pub ln_sigma_alpha: C,
    /// Set when ℘′(α) vanishes numerically (α is a half-period).
    pub branch_point: Option<HalfPeriod>,
}

#[derive(Debug, Clone)]
pub struct Lambda0Data {
    pub a2: C,
    pub b2: C,
    /// √(2a₂+3b₂), √(3a₂+2b₂), principal branch.
    pub root_a: C,
    pub root_b: C,
}

#[derive(Debug, Clone)]
pub enum DegenKind {
    OnLambda1(Box<Lambda1Data>),
    OnLambda0(Lambda0Data),
}

#[derive(Debug, Clone)]
pub struct DegenSigmaContext {
    pub kind: DegenKind,
    pub lambda: G2Params,
    /// Factor making the Taylor leading part exactly u₃ − u₁³/3.
    pub norm: C,
    pub cfg: NumericsConfig,
}

/// Relative size of ℘′(α) below which α is treated as a half-period. The generic formula
/// loses about eps/|℘′(α)| to cancellation while the half-period formula is off by
/// O(|℘′(α)|); this balances the two.
const BRANCH_REL: f64 = 1e-8;

fn weight3_scale(g4: C, g6: C) -> f64 {
    g4.norm().powf(0.75) + g6.norm().sqrt()
}

/// cosh(√z·y), even in √z so branch-free.
fn cosh_sqrt(z: C, y: C) -> C {
    (z.sqrt() * y).cosh()
}

/// sinh(√z·y)/√z, entire in z.
fn sinhc_sqrt(z: C, y: C) -> C {
    let w = z.sqrt() * y;
    if w.norm() < 1e-4 {
        let w2 = w * w;
        y * (1.0 + w2 / 6.0 + w2 * w2 / 120.0)
    } else {
        w.sinh() / z.sqrt()
    }
}

impl DegenSigmaContext {
    pub fn from_classification(cls: &StratumClassification, cfg: &NumericsConfig) -> Result<Self> {
        match cls.stratum {
            Stratum::Lambda2 => Err(Error::NotOnStratum("λ is on Λ₂ (Δ ≠ 0)".into())),
            Stratum::Lambda1 { a2, gamma } => Self::on_lambda1(a2, gamma, cfg),
            Stratum::Lambda0 { a2, b2 } => Self::on_lambda0(a2, b2, cfg),
        }
    }

    pub fn from_lambda(lambda: &G2Params, cfg: &NumericsConfig) -> Result<Self> {
        Self::from_classification(&classify(lambda, cfg)?, cfg)
    }

    pub fn on_lambda1(a2: C, gamma: EllipticCurveParams, cfg: &NumericsConfig) -> Result<Self> {
        let ectx = EllipticContext::with_config(gamma, cfg)?;
        let alpha = ectx.invert_wp(a2 * (5.0 / 3.0), Branch::Principal)?;
        Self::with_alpha(ectx, alpha, cfg)
    }

    /// Λ₁ context from an explicit α; a₂ = 3℘(α)/5. Either preimage ±α gives the same σ.
    pub fn with_alpha(ectx: EllipticContext, alpha: C, cfg: &NumericsConfig) -> Result<Self> {
        let (g4, g6) = ectx.gamma();
        let mut branch_point = None;
        for h in HalfPeriod::ALL {
            if ectx.reduce(alpha - ectx.half_period(h)).norm() < 1e-12 * (1.0 + alpha.norm()) {
                branch_point = Some(h);
            }
        }
        let (wp_alpha, wpp_alpha, zeta_alpha) = match branch_point {
            Some(h) => (ectx.root(h), C::default(), ectx.eta_of(h)),
            None => {
                let v = ectx.eval(alpha)?;
                (v.wp, v.wp_prime, v.zeta)
            }
        };
        if branch_point.is_none() && wpp_alpha.norm() < BRANCH_REL * weight3_scale(g4, g6) {
            let h = HalfPeriod::ALL
                .into_iter()
                .min_by(|x, y| {
                    (wp_alpha - ectx.root(*x))
                        .norm()
                        .total_cmp(&(wp_alpha - ectx.root(*y)).norm())
                })
                .expect("three half-periods");
            branch_point = Some(h);
        }
        let a2 = wp_alpha * 0.6;
        let lambda = G2Params::from_array(lambda1_chart(a2, g4, g6));
        let data = Lambda1Data {
            a2,
            d: wpp_alpha * 0.5,
            ln_sigma_alpha: ectx.ln_sigma(alpha)?,
            ectx,
            alpha,
            wp_alpha,
            wpp_alpha,
            zeta_alpha,
            branch_point,
        };
        let mut ctx = DegenSigmaContext {
            kind: DegenKind::OnLambda1(Box::new(data)),
            lambda,
            norm: real(1.0),
            cfg: *cfg,
        };
        ctx.norm = ctx.leading_normalization()?;
        Ok(ctx)
    }

    pub fn on_lambda0(a2: C, b2: C, cfg: &NumericsConfig) -> Result<Self> {
        let data = Lambda0Data {
            a2,
            b2,
            root_a: (a2 * 2.0 + b2 * 3.0).sqrt(),
            root_b: (a2 * 3.0 + b2 * 2.0).sqrt(),
        };
        let lambda = G2Params::from_array(lambda0_chart(a2, b2));
        let mut ctx = DegenSigmaContext {
            kind: DegenKind::OnLambda0(data),
            lambda,
            norm: real(1.0),
            cfg: *cfg,
        };
        ctx.norm = ctx.leading_normalization()?;
        Ok(ctx)
    }

    pub fn lambda1(&self) -> Option<&Lambda1Data> {
        match &self.kind {
            DegenKind::OnLambda1(d) => Some(d),
            DegenKind::OnLambda0(_) => None,
        }
    }

    pub fn lambda1_or_err(&self) -> Result<&Lambda1Data> {
        self.lambda1()
            .ok_or_else(|| Error::NotOnStratum("operation needs a Λ₁ context".into()))
    }

    /// 1/∂σ/∂u₃ at the origin.
    fn leading_normalization(&self) -> Result<C> {
        let d = Differ {
            step: 1e-4,
            levels: 3,
        };
        let slope = d.derivative(|t| self.sigma2_raw(t, C::default()), C::default(), 1)?;
        if slope.norm() == 0.0 || !slope.re.is_finite() {
            return Err(Error::numerical(
                "sigma has no linear u₃ term",
                slope.norm(),
            ));
        }
        Ok(slope.inv())
    }

    /// σ(u₃, u₁) as given by the closed-form expressions (no normalization).
    pub fn sigma2(&self, u3: C, u1: C) -> Result<C> {
        self.sigma2_raw(u3, u1)
    }

    /// σ rescaled so that its expansion starts with u₃ − u₁³/3.
    pub fn sigma2_normalized(&self, u3: C, u1: C) -> Result<C> {
        Ok(self.sigma2_raw(u3, u1)? * self.norm)
    }

    pub fn sigma2_with(&self, u3: C, u1: C, normalized: bool) -> Result<C> {
        if normalized {
            self.sigma2_normalized(u3, u1)
        } else {
            self.sigma2(u3, u1)
        }
    }

    fn sigma2_raw(&self, u3: C, u1: C) -> Result<C> {
        match &self.kind {
            DegenKind::OnLambda1(d) => match d.branch_point {
                None => lambda1_generic(d, u3, u1),
                Some(h) => lambda1_branch_point(d, h, u3, u1),
            },
            DegenKind::OnLambda0(d) => Ok(lambda0_value(d, u3, u1)),
        }
    }

    /// U₁ = u₁ − (3/5)℘(α)u₃ on Λ₁.
    pub fn big_u1(&self, u3: C, u1: C) -> Result<C> {
        Ok(u1 - self.lambda1_or_err()?.wp_alpha * 0.6 * u3)
    }

    /// The product form with the elliptic Baker function Φ(u, α) = σ(α−u)e^{ζ(α)u}/(σ(α)σ(u)).
    pub fn sigma2_baker_form(&self, u3: C, u1: C) -> Result<C> {
        let d = self.lambda1_or_err()?;
        if d.branch_point.is_some() {
            return Err(Error::SingularConfiguration(
                "Baker form needs ℘′(α) ≠ 0".into(),
            ));
        }
        let e = &d.ectx;
        let big_u = u1 - d.wp_alpha * 0.6 * u3;
        let baker = |u: C| -> Result<C> {
            let den = e.ln_sigma(u)?;
            if den.re == f64::NEG_INFINITY {
                return Err(Error::PoleAtArgument(format!("Φ({u}, α)")));
            }
            Ok((e.ln_sigma(d.alpha - u)? - d.ln_sigma_alpha - den + d.zeta_alpha * u).exp())
        };
        let half = d.wpp_alpha * u3 * 0.5;
        let bracket = baker(-big_u)? * half.exp() + baker(big_u)? * (-half).exp();
        Ok(
            -(prefactor_exponent(d.wp_alpha, e.gamma().0, u3, u1)).exp() * e.sigma(big_u)?
                / d.wpp_alpha
                * bracket,
        )
    }

    /// The branch-point form exactly as quoted, u₃·exp(…)·σᵢ(U₁): omits the correction term.
    pub fn sigma2_branch_point_quoted(&self, u3: C, u1: C) -> Result<C> {
        let d = self.lambda1_or_err()?;
        let h = d.branch_point.ok_or(Error::NotBranchPoint)?;
        let ei = d.ectx.root(h);
        let big_u = u1 - ei * 0.6 * u3;
        Ok(u3
            * prefactor_exponent(ei, d.ectx.gamma().0, u3, u1).exp()
            * d.ectx.sigma_char(big_u, h)?)
    }

    /// 𝒫 = σ(α+U₁)/σ(α−U₁)·e^{℘′(α)U₃ − 2ζ(α)U₁} in the U-coordinates.
    pub fn p_function_u(&self, big_u3: C, big_u1: C) -> Result<C> {
        let d = self.lambda1_or_err()?;
        let e = &d.ectx;
        let den = e.ln_sigma(d.alpha - big_u1)?;
        if den.re == f64::NEG_INFINITY {
            return Err(Error::PoleAtArgument(format!(
                "σ(α − U₁) = 0 at U₁ = {big_u1}"
            )));
        }
        Ok((e.ln_sigma(d.alpha + big_u1)? - den + d.wpp_alpha * big_u3
            - d.zeta_alpha * big_u1 * 2.0)
            .exp())
    }

    /// 𝒫 at the original coordinates (u₃, u₁).
    pub fn p_function(&self, u3: C, u1: C) -> Result<C> {
        self.p_function_u(u3, self.big_u1(u3, u1)?)
    }

    /// 𝒵(U₃, U₁) = σ(U₃, U₁ + (3/5)A·U₃).
    pub fn sigma2_u(&self, big_u3: C, big_u1: C) -> Result<C> {
        let a = self.lambda1_or_err()?.wp_alpha;
        self.sigma2(big_u3, big_u1 + a * 0.6 * big_u3)
    }
}

/// −(3/5)A((γ₄/2 + 3A²/25)u₃² + (2/5)A u₁u₃ + u₁²/6).
fn prefactor_exponent(a: C, g4: C, u3: C, u1: C) -> C {
    -a * 0.6 * ((g4 * 0.5 + a * a * 0.12) * u3 * u3 + a * 0.4 * u1 * u3 + u1 * u1 / 6.0)
}

fn lambda1_generic(d: &Lambda1Data, u3: C, u1: C) -> Result<C> {
    let e = &d.ectx;
    let big_u = u1 - d.wp_alpha * 0.6 * u3;
    let base = prefactor_exponent(d.wp_alpha, e.gamma().0, u3, u1) - d.ln_sigma_alpha;
    let half = d.wpp_alpha * u3 * 0.5;
    let plus = base + e.ln_sigma(d.alpha + big_u)? + half - d.zeta_alpha * big_u;
    let minus = base + e.ln_sigma(d.alpha - big_u)? - half + d.zeta_alpha * big_u;
    Ok((plus.exp() - minus.exp()) / d.wpp_alpha)
}

/// ℘′(α) = 0: α = ωᵢ, and the bracket over ℘′(α) tends to σᵢ(U₁)(u₃ − J(U₁)) with
/// J(ξ) = −2(ζ(ξ+ωᵢ) − ηᵢ + eᵢξ)/℘″(ωᵢ).
fn lambda1_branch_point(d: &Lambda1Data, h: HalfPeriod, u3: C, u1: C) -> Result<C> {
    let e = &d.ectx;
    let ei = e.root(h);
    let wi = e.half_period(h);
    let eta_i = e.eta_of(h);
    let big_u = u1 - ei * 0.6 * u3;
    let pre = prefactor_exponent(ei, e.gamma().0, u3, u1).exp();
    let sig_i = e.sigma_char(big_u, h)?;
    let sig_j = match branch_j(d, h, big_u) {
        Ok(j) => sig_i * j,
        // σᵢ(U)·ζ(U+ωᵢ) = e^{−Uηᵢ}σ′(U+ωᵢ)/σ(ωᵢ) stays finite where ζ has its pole.
        Err(Error::PoleAtArgument(_)) => {
            let ds = Differ::default().derivative(|v| e.sigma(v), big_u + wi, 1)?;
            let sig_zeta = (-big_u * eta_i - e.ln_sigma(wi)?).exp() * ds;
            (sig_zeta - sig_i * eta_i + sig_i * ei * big_u) * -2.0 / wpp_at(e, ei)
        }
        Err(err) => return Err(err),
    };
    Ok(pre * (sig_i * u3 - sig_j))
}

fn wpp_at(e: &EllipticContext, x: C) -> C {
    x * x * 6.0 + e.gamma().0 * 2.0
}

/// J(ξ) = −2(ζ(ξ+ωᵢ) − ηᵢ + eᵢξ)/℘″(ωᵢ).
pub(crate) fn branch_j(d: &Lambda1Data, h: HalfPeriod, xi: C) -> Result<C> {
    let e = &d.ectx;
    let ei = e.root(h);
    Ok((e.zeta(xi + e.half_period(h))? - e.eta_of(h) + ei * xi) * -2.0 / wpp_at(e, ei))
}

/// The cosh/sinh closed form on Λ₀. At a₂ = b₂ the 0/0 is resolved by differentiating the
/// bracket in b₂.
fn lambda0_value(d: &Lambda0Data, u3: C, u1: C) -> C {
    let (a, b) = (d.a2, d.b2);
    let bracket = |a: C, b: C| -> C {
        let (za, zb) = (a * 2.0 + b * 3.0, a * 3.0 + b * 2.0);
        let (ya, yb) = (u1 - a * u3, u1 - b * u3);
        cosh_sqrt(za, ya) * sinhc_sqrt(zb, yb) - cosh_sqrt(zb, yb) * sinhc_sqrt(za, ya)
    };
    let expo = |a: C, b: C| -> C {
        ((a * b * (a + b) * 3.0 * u3 * u3 + a * b * u1 * u3 * 2.0 - (a + b) * u1 * u1) * 0.5).exp()
    };
    let scale = 1.0 + a.norm() + b.norm();
    if (a - b).norm() > 1e-6 * scale {
        return expo(a, b) * bracket(a, b) / ((a - b) * 4.0);
    }
    let m = (a + b) * 0.5;
    let db = Differ {
        step: 1e-4 * scale,
        levels: 3,
    }
    .derivative(|t| Ok(bracket(m, t)), m, 1)
    .unwrap_or(C::new(f64::NAN, 0.0));
    -expo(m, m) * db / 4.0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> NumericsConfig {
        NumericsConfig::default()
    }

    fn l1(a2: C, g4: C, g6: C) -> DegenSigmaContext {
        DegenSigmaContext::on_lambda1(a2, EllipticCurveParams::new(g4, g6), &cfg()).unwrap()
    }

    #[test]
    fn leading_terms_match() {
        let s = l1(C::new(0.3, -0.1), C::new(0.4, 0.2), C::new(-0.2, 0.5));
        assert!((s.norm - 1.0).norm() < 1e-9, "{}", s.norm);
        let u = 1e-3;
        let v = s.sigma2(real(0.0), real(u)).unwrap();
        assert!((v / (-u * u * u / 3.0) - 1.0).norm() < 1e-4);
    }

    #[test]
    fn baker_form_and_alpha_parity() {
        let s = l1(C::new(0.2, 0.3), C::new(-0.5, 0.1), C::new(0.3, -0.4));
        let d = s.lambda1().unwrap();
        let t = DegenSigmaContext::with_alpha(d.ectx.clone(), -d.alpha, &cfg()).unwrap();
        for (u3, u1) in [
            (C::new(0.3, 0.1), C::new(-0.2, 0.4)),
            (C::new(-0.7, 0.2), C::new(0.5, 0.1)),
        ] {
            let v = s.sigma2(u3, u1).unwrap();
            assert!((s.sigma2_baker_form(u3, u1).unwrap() - v).norm() < 1e-10 * v.norm());
            assert!((t.sigma2(u3, u1).unwrap() - v).norm() < 1e-10 * v.norm());
        }
        assert_eq!(s.p_function(C::default(), C::default()).unwrap(), real(1.0));
    }

    #[test]
    fn lambda0_worked_example_and_normalization() {
        let s = DegenSigmaContext::on_lambda0(real(1.0), real(0.0), &cfg()).unwrap();
        let (u3, u1) = (real(0.1), real(0.2));
        let (r2, r3) = (2f64.sqrt(), 3f64.sqrt());
        let e = (0.5 * (-(0.2f64 * 0.2))).exp();
        let direct = e / 4.0
            * ((r2 * (0.2 - 0.1f64)).cosh() * (r3 * 0.2f64).sinh() / r3
                - (r3 * 0.2f64).cosh() * (r2 * (0.2 - 0.1f64)).sinh() / r2);
        assert!((s.sigma2(u3, u1).unwrap() - direct).norm() < 1e-15);
        assert!((s.norm - 4.0).norm() < 1e-8, "{}", s.norm);
    }

    #[test]
    fn lambda0_coincident_roots_are_continuous() {
        let a = C::new(0.4, 0.1);
        let at = DegenSigmaContext::on_lambda0(a, a, &cfg()).unwrap();
        let near = DegenSigmaContext::on_lambda0(a, a + 1e-5, &cfg()).unwrap();
        let (u3, u1) = (C::new(0.3, -0.2), C::new(0.5, 0.2));
        let v = at.sigma2(u3, u1).unwrap();
        assert!((near.sigma2(u3, u1).unwrap() - v).norm() < 1e-4 * v.norm());
        let zero = DegenSigmaContext::on_lambda0(C::default(), C::default(), &cfg()).unwrap();
        let w = zero.sigma2_normalized(u3, u1).unwrap();
        assert!((w - (u3 - u1.powi(3) / 3.0)).norm() < 1e-9);
    }

    #[test]
    fn branch_point_formula_matches_nearby_generic() {
        let g = EllipticCurveParams::new(C::new(0.4, -0.2), C::new(-0.3, 0.5));
        let e = EllipticContext::new(g).unwrap();
        for h in HalfPeriod::ALL {
            let at = DegenSigmaContext::with_alpha(e.clone(), e.half_period(h), &cfg()).unwrap();
            assert_eq!(at.lambda1().unwrap().branch_point, Some(h));
            let near =
                DegenSigmaContext::with_alpha(e.clone(), e.half_period(h) + 1e-6, &cfg()).unwrap();
            assert!(near.lambda1().unwrap().branch_point.is_none());
            let (u3, u1) = (C::new(0.2, 0.1), C::new(-0.3, 0.25));
            let v = at.sigma2(u3, u1).unwrap();
            assert!((near.sigma2(u3, u1).unwrap() - v).norm() < 1e-5 * v.norm());
            let quoted = at.sigma2_branch_point_quoted(u3, u1).unwrap();
            assert!((quoted - v).norm() > 1e-3 * v.norm());
        }
    }
}
