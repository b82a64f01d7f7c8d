//! Numerical checks that the degenerate sigma function is annihilated by the heat operators.
//!
//! Two independent families are evaluated: the restricted operators Q₀, Q₂, Q₄, Q₆ acting on
//! 𝒵(u₃, U₁, a₂, γ) with U₁ = u₁ − a₂u₃, and the genus-2 operators q₀…q₆ acting on σ(u₃, u₁)
//! with the vector fields ℓₖ replaced by their restrictions to Λ₁. Moduli derivatives rebuild
//! the context (and hence α) at each perturbed point.

use crate::elliptic::{EllipticContext, EllipticCurveParams, Weierstrass};
use crate::numerics::diff::Differ;
use crate::sigma::DegenSigmaContext;
use crate::strata::fields::restricted_fields_lambda1;
use crate::{Error, NumericsConfig, Result, C};

/// A point of Λ₁ in the (a₂, γ₄, γ₆) chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moduli {
    pub a2: C,
    pub g4: C,
    pub g6: C,
}

impl Moduli {
    pub fn new(a2: C, g4: C, g6: C) -> Self {
        Moduli { a2, g4, g6 }
    }

    fn shifted(&self, v: [C; 3], t: C) -> Self {
        Moduli {
            a2: self.a2 + v[0] * t,
            g4: self.g4 + v[1] * t,
            g6: self.g6 + v[2] * t,
        }
    }

    fn scale(&self) -> f64 {
        (self.a2.norm() + self.g4.norm() + self.g6.norm()).max(0.1)
    }

    pub fn context(&self, cfg: &NumericsConfig) -> Result<DegenSigmaContext> {
        DegenSigmaContext::on_lambda1(self.a2, EllipticCurveParams::new(self.g4, self.g6), cfg)
    }

    /// d² = γ₆ + (5/3)a₂γ₄ + (5a₂/3)³.
    pub fn d_squared(&self) -> C {
        let a = self.a2 * (5.0 / 3.0);
        self.g6 + a * self.g4 + a * a * a
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorResidual {
    /// |Σ terms| / max |term|.
    pub relative: f64,
    pub scale: f64,
}

impl OperatorResidual {
    fn from_terms(terms: &[C]) -> Self {
        let scale = terms.iter().map(|t| t.norm()).fold(0.0, f64::max);
        let sum: C = terms.iter().sum();
        let relative = if scale > 1e-12 {
            sum.norm() / scale
        } else {
            sum.norm()
        };
        OperatorResidual { relative, scale }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeatResidualReport {
    pub moduli: Moduli,
    pub u3: C,
    pub big_u1: C,
    /// Q₀, Q₂, Q₄, Q₆ in that order.
    pub residuals: [OperatorResidual; 4],
    pub u_step: f64,
    pub moduli_step: f64,
    pub levels: usize,
}

impl HeatResidualReport {
    pub fn max_relative(&self) -> f64 {
        self.residuals
            .iter()
            .map(|r| r.relative)
            .fold(0.0, f64::max)
    }
}

/// Differentiation settings for the heat checks.
#[derive(Debug, Clone, Copy)]
pub struct HeatSteps {
    pub u: Differ,
    /// Step relative to the size of the moduli.
    pub moduli: Differ,
}

impl HeatSteps {
    pub fn from_config(cfg: &NumericsConfig) -> Self {
        HeatSteps {
            u: Differ::from(cfg),
            moduli: Differ::from(cfg),
        }
    }
}

struct Evaluator<'a> {
    cfg: &'a NumericsConfig,
    steps: HeatSteps,
    m: Moduli,
}

impl Evaluator<'_> {
    /// Derivative along the moduli direction v at fixed (u₃, x), where x is U₁ or u₁.
    fn along<F>(&self, v: [C; 3], f: F) -> Result<C>
    where
        F: Fn(&DegenSigmaContext) -> Result<C>,
    {
        let vn = v.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if vn == 0.0 {
            return Ok(C::default());
        }
        let c = self.m.scale() / vn;
        let g = |t: C| f(&self.m.shifted(v, t * c).context(self.cfg)?);
        Ok(self.steps.moduli.derivative(g, C::default(), 1)? / c)
    }
}

/// Residuals of Q₀, Q₂, Q₄, Q₆ applied to 𝒵 at (u₃, U₁).
pub fn q_residuals(
    m: Moduli,
    u3: C,
    big_u1: C,
    cfg: &NumericsConfig,
) -> Result<HeatResidualReport> {
    q_residuals_with(
        m,
        u3,
        big_u1,
        cfg,
        HeatSteps::from_config(cfg),
        C::new(1.0, 0.0),
    )
}

/// As [`q_residuals`] with explicit steps, applied to `factor`·𝒵.
pub fn q_residuals_with(
    m: Moduli,
    u3: C,
    big_u1: C,
    cfg: &NumericsConfig,
    steps: HeatSteps,
    factor: C,
) -> Result<HeatResidualReport> {
    let ev = Evaluator { cfg, steps, m };
    let ctx = m.context(cfg)?;
    let zu = |c: &DegenSigmaContext, x: &[C]| -> Result<C> {
        Ok(factor * c.sigma2(x[0], x[1] + c.lambda1_or_err()?.a2 * x[0])?)
    };
    let x = [u3, big_u1];
    let du = |o: [usize; 2]| -> Result<C> { Ok(steps.u.partial(|x| zu(&ctx, x), &x, &o)?.0) };
    let z = zu(&ctx, &x)?;
    let (z3, z33, z1, z11, z13) = (
        du([1, 0])?,
        du([2, 0])?,
        du([0, 1])?,
        du([0, 2])?,
        du([1, 1])?,
    );
    let at_fixed_u = |c: &DegenSigmaContext| zu(c, &x);

    let (a, g4, g6) = (m.a2, m.g4, m.g6);
    let (big_u, a2sq) = (big_u1, a * a);
    let d2 = m.d_squared();

    // Q₀ = −U₁∂_{U₁} − 3u₃∂_{u₃} + 2a₂∂_{a₂} + L₀ + 3.
    let q0 = OperatorResidual::from_terms(&[
        -big_u * z1,
        -u3 * z3 * 3.0,
        ev.along([a * 2.0, g4 * 4.0, g6 * 6.0], at_fixed_u)?,
        z * 3.0,
    ]);

    let q2 = OperatorResidual::from_terms(&[
        -z11 * 0.5,
        -a / 3.0 * (big_u + a * u3 * 3.0) * z1,
        -(big_u + a * u3 * 5.0) * z3,
        ev.along(
            [
                (g4 * 6.0 + a2sq * 25.0) * (2.0 / 15.0),
                g6 * 6.0,
                -g4 * g4 * (4.0 / 3.0),
            ],
            at_fixed_u,
        )?,
        (g4 * 3.0 - a2sq * 5.0) * 0.1 * (big_u + a * u3 * 2.0) * big_u * z,
        (a * g6 * 90.0 + g4 * g4 * 12.0 - a2sq * g4 * 16.0 - a2sq * a2sq * 15.0) / 30.0
            * u3
            * u3
            * z,
        a * 4.0 * z,
    ]);

    // D = ∂_{u₃} + mD with mD = a₂²U₁ + (γ₄ + 7a₂²/3)a₂u₃.
    let k_d = (g4 + a2sq * (7.0 / 3.0)) * a;
    let m_d = a2sq * big_u + k_d * u3;
    let q6 = OperatorResidual::from_terms(&[z33, m_d * z3 * 2.0, k_d * z, m_d * m_d * z, -d2 * z]);

    // (∂_{U₁} + n)D𝒵 − (6/5)d∂_{a₂}(d𝒵) − (1/5)(U₁² + 12a₂U₁u₃ + 3(γ₄+7a₂²)u₃²)d²𝒵.
    let n = a * big_u * 2.0 + (g4 + a2sq * (28.0 / 3.0)) * u3;
    let dd2 = g4 * (5.0 / 3.0) + a2sq * (125.0 / 9.0);
    let q4 = OperatorResidual::from_terms(&[
        z13,
        a2sq * z,
        m_d * z1,
        n * z3,
        n * m_d * z,
        -dd2 * 0.6 * z,
        -d2 * 1.2 * ev.along([C::new(1.0, 0.0), C::default(), C::default()], at_fixed_u)?,
        -(big_u * big_u + a * big_u * u3 * 12.0 + (g4 + a2sq * 7.0) * u3 * u3 * 3.0) * 0.2 * d2 * z,
    ]);

    Ok(HeatResidualReport {
        moduli: m,
        u3,
        big_u1,
        residuals: [q0, q2, q4, q6],
        u_step: steps.u.step,
        moduli_step: steps.moduli.step,
        levels: steps.u.levels,
    })
}

/// Residuals of the genus-2 operators q₀, q₂, q₄, q₆ on σ(u₃, u₁), with ℓₖ restricted to Λ₁.
pub fn q_unrestricted_residuals(
    m: Moduli,
    u3: C,
    u1: C,
    cfg: &NumericsConfig,
) -> Result<[OperatorResidual; 4]> {
    let steps = HeatSteps::from_config(cfg);
    let ev = Evaluator { cfg, steps, m };
    let ctx = m.context(cfg)?;
    let x = [u3, u1];
    let s = |c: &DegenSigmaContext, x: &[C]| c.sigma2(x[0], x[1]);
    let du = |o: [usize; 2]| -> Result<C> { Ok(steps.u.partial(|x| s(&ctx, x), &x, &o)?.0) };
    let z = s(&ctx, &x)?;
    let (z3, z33, z1, z11, z13) = (
        du([1, 0])?,
        du([2, 0])?,
        du([0, 1])?,
        du([0, 2])?,
        du([1, 1])?,
    );
    let at_fixed_u = |c: &DegenSigmaContext| s(c, &x);
    let f = restricted_fields_lambda1(m.a2, m.g4, m.g6);
    let [l4, l6, l8, l10] = ctx.lambda.to_array();

    let q0 = OperatorResidual::from_terms(&[
        -u1 * z1,
        -u3 * z3 * 3.0,
        z * 3.0,
        ev.along(f.l0, at_fixed_u)?,
    ]);
    let q2 = OperatorResidual::from_terms(&[
        -z11 * 0.5,
        l4 * 0.8 * u3 * z1,
        -u1 * z3,
        l4 * 0.3 * u1 * u1 * z,
        -(l8 * 15.0 - l4 * l4 * 4.0) * 0.1 * u3 * u3 * z,
        ev.along(f.l2, at_fixed_u)?,
    ]);
    let q4 = OperatorResidual::from_terms(&[
        -z13,
        l6 * 1.2 * u3 * z1,
        -l4 * u3 * z3,
        l6 * 0.2 * u1 * u1 * z,
        -l8 * u1 * u3 * z,
        -(l10 * 30.0 - l6 * l4 * 6.0) * 0.1 * u3 * u3 * z,
        l4 * z,
        ev.along(f.l4, at_fixed_u)?,
    ]);
    let q6 = OperatorResidual::from_terms(&[
        -z33 * 0.5,
        l8 * 0.6 * u3 * z1,
        l8 * 0.1 * u1 * u1 * z,
        -l10 * 2.0 * u1 * u3 * z,
        l8 * l4 * 0.3 * u3 * u3 * z,
        l6 * 0.5 * z,
        ev.along(f.l6, at_fixed_u)?,
    ]);
    Ok([q0, q2, q4, q6])
}

/// L₂ = 6γ₆∂γ₄ − (4/3)γ₄²∂γ₆ (and L₀ = 4γ₄∂γ₄ + 6γ₆∂γ₆) applied to σ, ζ, ℘, ℘′ at a
/// fixed argument, against their closed forms. Relative residuals in that order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActionReport {
    pub l2: [f64; 4],
    pub l0: [f64; 4],
}

pub fn l2_action_residuals(
    ectx: &EllipticContext,
    alpha: C,
    cfg: &NumericsConfig,
) -> Result<ActionReport> {
    let (g4, g6) = ectx.gamma();
    let v = ectx.eval(alpha)?;
    let (s, z, p, pp) = (v.ln_sigma.exp(), v.zeta, v.wp, v.wp_prime);
    let scale = (g4.norm() + g6.norm()).max(0.1);
    let d = Differ::from(cfg);
    let act = |dir: [C; 2], pick: usize| -> Result<C> {
        let vn = dir[0].norm().max(dir[1].norm());
        if vn == 0.0 {
            return Ok(C::default());
        }
        let c = scale / vn;
        let f = |t: C| -> Result<C> {
            let e = EllipticContext::with_config(
                EllipticCurveParams::new(g4 + dir[0] * t * c, g6 + dir[1] * t * c),
                cfg,
            )?;
            let w = e.eval(alpha)?;
            Ok([w.ln_sigma.exp(), w.zeta, w.wp, w.wp_prime][pick])
        };
        Ok(d.derivative(f, C::default(), 1)? / c)
    };
    let rel = |a: C, b: C| (a - b).norm() / (1.0 + b.norm());
    let l2dir = [g6 * 6.0, -g4 * g4 * (4.0 / 3.0)];
    let l2_rhs = [
        s * (-g4 / 6.0 * alpha * alpha + z * z * 0.5 - p * 0.5),
        -g4 / 3.0 * alpha - z * p - pp * 0.5,
        g4 * (4.0 / 3.0) + p * p * 2.0 + z * pp,
        z * (p * p * 6.0 + g4 * 2.0) + p * pp * 3.0,
    ];
    // Euler relations from f(α; s⁴γ₄, s⁶γ₆) = s^{−w} f(sα; γ).
    let l0dir = [g4 * 4.0, g6 * 6.0];
    let l0_rhs = [
        s * (alpha * z - 1.0),
        z - alpha * p,
        p * 2.0 + alpha * pp,
        pp * 3.0 + alpha * (p * p * 6.0 + g4 * 2.0),
    ];
    let mut l2 = [0.0; 4];
    let mut l0 = [0.0; 4];
    for k in 0..4 {
        l2[k] = rel(act(l2dir, k)?, l2_rhs[k]);
        l0[k] = rel(act(l0dir, k)?, l0_rhs[k]);
    }
    if l2.iter().chain(&l0).any(|r| !r.is_finite()) {
        return Err(Error::numerical("non-finite action residual", f64::NAN));
    }
    Ok(ActionReport { l2, l0 })
}

#[derive(Debug, Clone, PartialEq)]
pub struct InitialConditionReport {
    pub u: f64,
    /// (ε, 𝒵(u,0)/u, 𝒵(0,u)/(−u³/3)) along a₂ = 0, γ = (0, ε).
    pub lambda1: Vec<(f64, C, C)>,
    /// Same along (a₂, b₂) = (t, t/2) on Λ₀, unnormalized.
    pub lambda0: Vec<(f64, C, C)>,
}

pub fn initial_condition_probe(cfg: &NumericsConfig) -> Result<InitialConditionReport> {
    let u = 1e-2;
    let ratios = |c: &DegenSigmaContext| -> Result<(C, C)> {
        Ok((
            c.sigma2(C::new(u, 0.0), C::default())? / u,
            c.sigma2(C::default(), C::new(u, 0.0))? / (-u * u * u / 3.0),
        ))
    };
    let mut lambda1 = Vec::new();
    let mut lambda0 = Vec::new();
    for eps in [1e-1, 1e-2, 1e-3, 1e-4] {
        let c = Moduli::new(C::default(), C::default(), C::new(eps, 0.0)).context(cfg)?;
        let (r3, r1) = ratios(&c)?;
        lambda1.push((eps, r3, r1));
        let c0 = DegenSigmaContext::on_lambda0(C::new(eps, 0.0), C::new(eps / 2.0, 0.0), cfg)?;
        let (r3, r1) = ratios(&c0)?;
        lambda0.push((eps, r3, r1));
    }
    Ok(InitialConditionReport {
        u,
        lambda1,
        lambda0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m() -> Moduli {
        Moduli::new(C::new(0.3, -0.1), C::new(0.4, 0.2), C::new(-0.2, 0.5))
    }

    #[test]
    fn restricted_operators_annihilate() {
        let cfg = NumericsConfig::default();
        for (u3, u1) in [
            (C::new(0.3, 0.1), C::new(0.2, -0.35)),
            (C::new(-0.5, 0.2), C::new(0.4, 0.3)),
        ] {
            let r = q_residuals(m(), u3, u1, &cfg).unwrap();
            assert!(r.max_relative() < 1e-5, "{:?}", r.residuals);
            let r7 = q_residuals_with(
                m(),
                u3,
                u1,
                &cfg,
                HeatSteps::from_config(&cfg),
                C::new(7.0, 0.0),
            )
            .unwrap();
            for (x, y) in r.residuals.iter().zip(&r7.residuals) {
                assert!((x.relative - y.relative).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn unrestricted_operators_annihilate() {
        let cfg = NumericsConfig::default();
        let r = q_unrestricted_residuals(m(), C::new(0.3, 0.1), C::new(0.2, -0.35), &cfg).unwrap();
        assert!(r.iter().all(|x| x.relative < 1e-5), "{r:?}");
    }

    #[test]
    fn l2_and_l0_actions() {
        let cfg = NumericsConfig::default();
        let e = EllipticContext::new(EllipticCurveParams::new(
            C::new(0.4, 0.2),
            C::new(-0.2, 0.5),
        ))
        .unwrap();
        let r = l2_action_residuals(&e, C::new(0.3, 0.2), &cfg).unwrap();
        assert!(r.l2.iter().chain(&r.l0).all(|x| *x < 1e-6), "{r:?}");
    }

    #[test]
    fn initial_condition_limits() {
        let r = initial_condition_probe(&NumericsConfig::default()).unwrap();
        let last = r.lambda1.last().unwrap();
        assert!(
            (last.1 - 1.0).norm() < 1e-4 && (last.2 - 1.0).norm() < 1e-3,
            "{last:?}"
        );
        let l0 = r.lambda0.last().unwrap();
        assert!((l0.1 - 0.25).norm() < 1e-3, "{l0:?}");
    }
}
