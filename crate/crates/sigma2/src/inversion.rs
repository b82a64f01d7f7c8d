//! Closed-form solution of the degenerate Jacobi inversion problem
//!   ∫^{(X₁,Y₁)} dX/(−2Y) + ∫^{(X₂,Y₂)} dX/(−2Y) = U₁,
//!   ∫^{(X₁,Y₁)} dX/(−2Y(X−A)) + ∫^{(X₂,Y₂)} dX/(−2Y(X−A)) = U₃,
//! base point ∞, on Y² = X³ + γ₄X + γ₆. With X = ℘(ξ) the problem becomes
//! ξ₁ + ξ₂ = U₁ and Σ∫₀^{ξₖ} dξ/(℘(ξ) − A) = U₃.

use crate::elliptic::{Branch, RationalLimit, Weierstrass};
use crate::numerics::quad::{integrate_path, Estimate};
use crate::sigma::{s_route_generic, DegenSigmaContext, SRoute};
use crate::{Error, Result, C};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InversionResult {
    /// X₁ + X₂ and X₁X₂.
    pub e1: C,
    pub e2: C,
    pub x: [C; 2],
    pub y: [C; 2],
    /// ℘(ξₖ) = Xₖ and ℘′(ξₖ) = −2Yₖ.
    pub xi: [C; 2],
    /// max |Yₖ² − (Xₖ³ + γ₄Xₖ + γ₆)| relative to max(1, |Xₖ|³).
    pub curve_residual: f64,
}

fn sorted_roots(e1: C, e2: C) -> [C; 2] {
    let r = (e1 * e1 - e2 * 4.0).sqrt();
    let mut x = [(e1 + r) * 0.5, (e1 - r) * 0.5];
    // The smaller-magnitude root loses digits to cancellation; Vieta restores it.
    let (big, small) = if x[0].norm() >= x[1].norm() {
        (0, 1)
    } else {
        (1, 0)
    };
    if x[big].norm() > 0.0 {
        x[small] = e2 / x[big];
    }
    x.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    x
}

/// (X₁ + X₂, X₁X₂) from 𝒮. Written over the common denominator 4(℘ − A)² with ℘′² − 4℘(℘ − A)²
/// expanded through the curve, so the ℘⁴ and ℘³ terms cancel symbolically; the textbook form
/// e₂ = ℘𝒮² − ℘′𝒮 − A(℘ + A) + (℘′² − ℘′(α)²)/4(℘ − A) loses about |U₁|⁻⁴ ulps as U₁ → 0.
pub fn symmetric_from_s(r: &SRoute, a: C, wpp_alpha: C, gamma: (C, C)) -> (C, C) {
    let (w, wp, pr) = (r.w, r.wp, r.p_r);
    let d = w - a;
    let den = d * d * 4.0;
    let n = (w * w * a * 2.0 + w * (gamma.0 - a * a) + gamma.1) * 4.0;
    let e1 = (n - wp * pr * 2.0 + pr * pr) / den;
    let e2 = (a * n - a * wp * pr * 2.0 + w * pr * pr - wpp_alpha * wpp_alpha * d) / den - a * a;
    (e1, e2)
}

/// Yₖ from 𝒮. The sign pattern of the 𝒮³ and 𝒮 terms is the one obtained by differentiating
/// the symmetric functions, Yₖ = −½(Xₖ∂_{U₁}(X₁+X₂) − ∂_{U₁}(X₁X₂))/(Xₖ − A).
pub fn y_from_s(xk: C, r: &SRoute, a: C, wpp_alpha: C) -> C {
    let (s, w, wp) = (r.s, r.w, r.wp);
    let q = (wp * wp - wpp_alpha * wpp_alpha) / ((xk - a) * (w - a) * 4.0);
    (xk - w) / (xk - a) * s.powi(3) + wp / (xk - a) * s * s - (w * 2.0 + a + q) * s + wp * 0.5
}

/// Yₖ with the 𝒮³ and 𝒮 signs as quoted; kept for comparison.
pub fn y_from_s_quoted(xk: C, r: &SRoute, a: C, wpp_alpha: C) -> C {
    let (s, w, wp) = (r.s, r.w, r.wp);
    let q = (wp * wp - wpp_alpha * wpp_alpha) / ((xk - a) * (w - a) * 4.0);
    -(xk - w) / (xk - a) * s.powi(3) + wp / (xk - a) * s * s + (w * 2.0 + a + q) * s + wp * 0.5
}

fn curve_residual(g4: C, g6: C, x: &[C; 2], y: &[C; 2]) -> f64 {
    (0..2)
        .map(|k| {
            (y[k] * y[k] - (x[k].powi(3) + g4 * x[k] + g6)).norm() / x[k].norm().powi(3).max(1.0)
        })
        .fold(0.0, f64::max)
}

impl DegenSigmaContext {
    pub fn solve_inversion(&self, big_u1: C, big_u3: C) -> Result<InversionResult> {
        let d = self.lambda1_or_err()?;
        let r = self.s_route(big_u3, big_u1)?;
        let (a, p) = (d.wp_alpha, d.wpp_alpha);
        let (e1, e2) = symmetric_from_s(&r, a, p, d.ectx.gamma());
        let x = sorted_roots(e1, e2);
        if x.iter()
            .any(|xk| (xk - a).norm() < self.cfg.tol * (1.0 + a.norm()))
        {
            return Err(Error::SingularConfiguration(
                "Xₖ = A: Yₖ is not determined by the 𝒮 formula".into(),
            ));
        }
        let y = x.map(|xk| y_from_s(xk, &r, a, p));
        let e = &d.ectx;
        let mut xi = [C::default(); 2];
        for k in 0..2 {
            let z = e.invert_wp(x[k], Branch::Principal)?;
            let target = y[k] * -2.0;
            xi[k] = if (e.wp_prime(z)? - target).norm() <= (e.wp_prime(-z)? - target).norm() {
                z
            } else {
                e.reduce(-z)
            };
        }
        let (g4, g6) = e.gamma();
        Ok(InversionResult {
            e1,
            e2,
            x,
            y,
            xi,
            curve_residual: curve_residual(g4, g6, &x, &y),
        })
    }

    /// Yₖ through −½𝒫₁₁₁ − 𝒫₁₁₃/(2(Xₖ − A)).
    pub fn y_from_log_derivatives(&self, big_u1: C, big_u3: C, xk: C) -> Result<C> {
        let d = self.lambda1_or_err()?;
        let g = self.log_derivatives(big_u3, big_u1)?;
        Ok(-g.p111 * 0.5 - g.p113 / ((xk - d.wp_alpha) * 2.0))
    }

    /// X₁+X₂ = 𝒫₁₁ + 4A/5, X₁X₂ = −𝒫₁₃ + A𝒫₁₁ + 4A²/25 with 𝒫₁₁, 𝒫₁₃ from the 𝒫-route.
    pub fn symmetric_from_p_route(&self, big_u1: C, big_u3: C) -> Result<(C, C)> {
        let a = self.lambda1_or_err()?.wp_alpha;
        let (p11, p13) = self.log_derivatives_p_route(big_u3, big_u1)?;
        Ok((p11 + a * 0.8, -p13 + a * p11 + a * a * 0.16))
    }

    /// The quoted branch-point pair (eᵢ, 0), (℘(U₁+ωᵢ), −½℘′(U₁+ωᵢ)). It is the U₃ → ∞ limit of
    /// the actual solution, which `solve_inversion` returns for finite U₃.
    pub fn branch_point_inversion(&self, big_u1: C) -> Result<InversionResult> {
        let d = self.lambda1_or_err()?;
        let h = d.branch_point.ok_or(Error::NotBranchPoint)?;
        let e = &d.ectx;
        let wi = e.half_period(h);
        let v = e.eval(big_u1 + wi)?;
        let x = [e.root(h), v.wp];
        let y = [C::default(), v.wp_prime * -0.5];
        let (g4, g6) = e.gamma();
        Ok(InversionResult {
            e1: x[0] + x[1],
            e2: x[0] * x[1],
            x,
            y,
            xi: [e.reduce(wi), e.reduce(big_u1 + wi)],
            curve_residual: curve_residual(g4, g6, &x, &y),
        })
    }

    /// ∫₀^ξ dt/(℘(t) − A) = (2ζ(α)ξ + ln(σ(α−ξ)/σ(α+ξ)))/℘′(α), the logarithm continued
    /// along the segment [0, ξ].
    pub fn u3_integral(&self, xi: C) -> Result<C> {
        let d = self.lambda1_or_err()?;
        Ok((d.zeta_alpha * xi * 2.0 + self.log_ratio_increment(C::default(), xi)?) / d.wpp_alpha)
    }

    /// Change of ln(σ(α−t)/σ(α+t)) as t runs along the segment [from, to], continued through
    /// the branch cuts.
    pub(crate) fn log_ratio_increment(&self, from: C, to: C) -> Result<C> {
        let d = self.lambda1_or_err()?;
        if d.branch_point.is_some() {
            return Err(Error::SingularConfiguration(
                "closed form needs ℘′(α) ≠ 0".into(),
            ));
        }
        let e = &d.ectx;
        let g = |t: C| -> Result<C> {
            let (m, p) = (e.ln_sigma(d.alpha - t)?, e.ln_sigma(d.alpha + t)?);
            if m.re == f64::NEG_INFINITY || p.re == f64::NEG_INFINITY {
                return Err(Error::PoleAtArgument(format!(
                    "t = ±α on the path {from} → {to}"
                )));
            }
            Ok(m - p)
        };
        let mut n = 128;
        'refine: while n <= 1 << 14 {
            let mut prev = g(from)?;
            let mut acc = C::default();
            let steps = n;
            for j in 1..=steps {
                let cur = g(from + (to - from) * (j as f64 / steps as f64))?;
                let mut step = cur - prev;
                let turns = (step.im / std::f64::consts::TAU).round();
                step.im -= turns * std::f64::consts::TAU;
                if step.im.abs() > 1.0 {
                    n *= 4;
                    continue 'refine;
                }
                acc += step;
                prev = cur;
            }
            return Ok(acc);
        }
        Err(Error::numerical(
            "log continuation did not resolve",
            f64::NAN,
        ))
    }

    /// The same integral by adaptive Gauss–Legendre quadrature along [0, ξ].
    pub fn u3_integral_quadrature(&self, xi: C) -> Result<Estimate> {
        let d = self.lambda1_or_err()?;
        let (e, a) = (&d.ectx, d.wp_alpha);
        let f = |t: C| -> Result<C> {
            if t.norm() < 1e-5 {
                // ℘(t) = t⁻² + O(t²).
                return Ok(t * t / (1.0 - a * t * t));
            }
            Ok((e.wp(t)? - a).inv())
        };
        integrate_path(f, &[C::default(), xi], self.cfg.quad_nodes, self.cfg.tol)
    }

    /// (U₁, U₃) reached by the pair ξ₁, ξ₂.
    pub fn forward_integrals(&self, xi1: C, xi2: C) -> Result<(C, C)> {
        Ok((xi1 + xi2, self.u3_integral(xi1)? + self.u3_integral(xi2)?))
    }

    pub fn forward_integrals_quadrature(&self, xi1: C, xi2: C) -> Result<(C, C)> {
        Ok((
            xi1 + xi2,
            self.u3_integral_quadrature(xi1)?.value + self.u3_integral_quadrature(xi2)?.value,
        ))
    }

    /// Roots of e^κ = σ(ξ−α)σ(ξ+β)/(σ(ξ+α)σ(ξ−2α+β)) through β = α − U₁,
    /// κ = −2ζ(α)U₁ + ℘′(α)U₃. Returns ξ₁ and ξ₂ = U₁ − ξ₁.
    pub fn solve_bethe(&self, beta: C, kappa: C) -> Result<[C; 2]> {
        let d = self.lambda1_or_err()?;
        if d.branch_point.is_some() {
            return Err(Error::SingularConfiguration("needs ℘′(α) ≠ 0".into()));
        }
        let big_u1 = d.alpha - beta;
        let big_u3 = (kappa + d.zeta_alpha * big_u1 * 2.0) / d.wpp_alpha;
        let sol = self.solve_inversion(big_u1, big_u3)?;
        Ok([sol.xi[0], big_u1 - sol.xi[0]])
    }

    /// ln of the Bethe ratio minus κ, reduced mod 2πi.
    pub fn bethe_residual(&self, beta: C, kappa: C, xi: C) -> Result<f64> {
        let d = self.lambda1_or_err()?;
        let e = &d.ectx;
        let a = d.alpha;
        let l = e.ln_sigma(xi - a)? + e.ln_sigma(xi + beta)?
            - e.ln_sigma(xi + a)?
            - e.ln_sigma(xi - a * 2.0 + beta)?;
        let mut r = l - kappa;
        r.im -= (r.im / std::f64::consts::TAU).round() * std::f64::consts::TAU;
        Ok(r.norm())
    }

    /// Coefficients (A, B, C) of A℘′(ξ) + B℘(ξ) + C = 0, the rational form of the Bethe
    /// equation: e^κ·det₂ − K·det₁ with
    /// K = σ(β)/σ(2α−β)·(℘(α) − ℘(2α−β))/(℘(α) − ℘(β)).
    pub fn bethe_linear_form(&self, beta: C, kappa: C) -> Result<[C; 3]> {
        let d = self.lambda1_or_err()?;
        let e = &d.ectx;
        let (pa, dpa) = (d.wp_alpha, d.wpp_alpha);
        let vb = e.eval(beta)?;
        let vg = e.eval(d.alpha * 2.0 - beta)?;
        let k = (vb.ln_sigma - vg.ln_sigma).exp() * (pa - vg.wp) / (pa - vb.wp);
        // det|(℘′ξ, ℘ξ, 1); (p₁, x₁, 1); (p₂, x₂, 1)| = ℘′ξ(x₁−x₂) − ℘ξ(p₁−p₂) + (p₁x₂ − p₂x₁).
        let det = |p1: C, x1: C, p2: C, x2: C| [x1 - x2, -(p1 - p2), p1 * x2 - p2 * x1];
        let d1 = det(dpa, pa, -vb.wp_prime, vb.wp);
        let d2 = det(-dpa, pa, vg.wp_prime, vg.wp);
        let ek = kappa.exp();
        Ok([0, 1, 2].map(|i| ek * d2[i] - k * d1[i]))
    }

    /// The κ-independent extra root (℘(α−β), −℘′(α−β)) of the linear form.
    pub fn bethe_extra_root(&self, beta: C) -> Result<(C, C)> {
        let d = self.lambda1_or_err()?;
        let v = d.ectx.eval(d.alpha - beta)?;
        Ok((v.wp, -v.wp_prime))
    }
}

/// The rational limit γ = 0 through the same 𝒮 formulas: returns (X₁+X₂, X₁X₂).
pub fn rational_inversion(alpha: C, big_u1: C, big_u3: C) -> Result<(C, C)> {
    let w = RationalLimit;
    let at = w.eval(alpha)?;
    let r = s_route_generic(&w, alpha, big_u3, big_u1, 1e-12)?;
    Ok(symmetric_from_s(
        &r,
        at.wp,
        at.wp_prime,
        (C::default(), C::default()),
    ))
}

/// ξ₁ + ξ₂ = U₁, ξ₁ξ₂ = −α² + αU₁·coth(U₃/α³ + U₁/α), converted to X = ξ⁻².
pub fn rational_closed_form(alpha: C, big_u1: C, big_u3: C) -> (C, C) {
    let t = big_u3 / alpha.powi(3) + big_u1 / alpha;
    let p = -alpha * alpha + alpha * big_u1 / t.tanh();
    ((big_u1 * big_u1 - p * 2.0) / (p * p), (p * p).inv())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::{EllipticContext, EllipticCurveParams, HalfPeriod};
    use crate::NumericsConfig;

    fn ctx() -> DegenSigmaContext {
        let g = EllipticCurveParams::new(C::new(0.4, 0.2), C::new(-0.2, 0.5));
        DegenSigmaContext::on_lambda1(C::new(0.3, -0.1), g, &NumericsConfig::default()).unwrap()
    }

    fn same_set(a: [C; 2], b: [C; 2], tol: f64) -> bool {
        let d1 = (a[0] - b[0]).norm().max((a[1] - b[1]).norm());
        let d2 = (a[0] - b[1]).norm().max((a[1] - b[0]).norm());
        d1.min(d2) < tol * (1.0 + a[0].norm().max(a[1].norm()))
    }

    #[test]
    fn round_trip_and_routes() {
        let s = ctx();
        let e = &s.lambda1().unwrap().ectx;
        for (x1, x2) in [
            (C::new(0.3, 0.1), C::new(-0.2, 0.25)),
            (C::new(0.15, -0.4), C::new(0.5, 0.2)),
        ] {
            let (u1, u3) = s.forward_integrals(x1, x2).unwrap();
            let (_, q3) = s.forward_integrals_quadrature(x1, x2).unwrap();
            assert!((u3 - q3).norm() < 1e-9, "{u3} {q3}");
            let sol = s.solve_inversion(u1, u3).unwrap();
            assert!(
                same_set(sol.x, [e.wp(x1).unwrap(), e.wp(x2).unwrap()], 1e-9),
                "{sol:?}"
            );
            assert!(sol.curve_residual < 1e-10);
            for k in 0..2 {
                let want = [x1, x2].map(|x| e.wp_prime(x).unwrap() * -0.5);
                assert!(
                    want.iter().any(|w| (w - sol.y[k]).norm() < 1e-8),
                    "{:?} {want:?}",
                    sol.y
                );
                let alt = s.y_from_log_derivatives(u1, u3, sol.x[k]).unwrap();
                assert!((alt - sol.y[k]).norm() < 1e-8);
                assert!(
                    (y_from_s_quoted(
                        sol.x[k],
                        &s.s_route(u3, u1).unwrap(),
                        s.lambda1().unwrap().wp_alpha,
                        s.lambda1().unwrap().wpp_alpha
                    ) - sol.y[k])
                        .norm()
                        > 1e-3
                );
            }
            let (p1, p2) = s.symmetric_from_p_route(u1, u3).unwrap();
            assert!((p1 - sol.e1).norm() < 1e-9 && (p2 - sol.e2).norm() < 1e-9);
        }
    }

    #[test]
    fn symmetric_pair_gives_origin() {
        let s = ctx();
        let xi = C::new(0.3, 0.2);
        let (u1, u3) = s.forward_integrals(xi, -xi).unwrap();
        assert_eq!(u1, C::default());
        assert!(u3.norm() < 1e-12);
    }

    #[test]
    fn rational_limit_closed_form() {
        let alpha = C::new(0.7, 0.2);
        for (u1, u3) in [
            (C::new(0.3, 0.1), C::new(0.2, -0.1)),
            (C::new(-0.5, 0.3), C::new(0.4, 0.6)),
        ] {
            let (a1, a2) = rational_inversion(alpha, u1, u3).unwrap();
            let (b1, b2) = rational_closed_form(alpha, u1, u3);
            assert!(
                (a1 - b1).norm() < 1e-10 * (1.0 + b1.norm())
                    && (a2 - b2).norm() < 1e-10 * (1.0 + b2.norm())
            );
        }
    }

    #[test]
    fn branch_point_pair_is_the_large_u3_limit() {
        let e = EllipticContext::new(EllipticCurveParams::new(
            C::new(0.4, -0.2),
            C::new(-0.3, 0.5),
        ))
        .unwrap();
        let s = DegenSigmaContext::with_alpha(
            e.clone(),
            e.half_period(HalfPeriod::Omega),
            &NumericsConfig::default(),
        )
        .unwrap();
        let u1 = C::new(0.3, 0.1);
        let quoted = s.branch_point_inversion(u1).unwrap();
        assert!(quoted.curve_residual < 1e-10);
        let at0 = s.branch_point_inversion(C::default());
        assert!(at0.is_err() || (at0.unwrap().x[1] - e.root(HalfPeriod::Omega)).norm() < 1e-8);
        let (f1, f2) = s.symmetric_functions_s(C::new(1e6, 0.0), u1).unwrap();
        let far = sorted_roots(f1, f2);
        assert!(same_set(far, quoted.x, 1e-5), "{far:?} {quoted:?}");
        let near = s.solve_inversion(u1, C::new(0.2, -0.1)).unwrap();
        assert!(!same_set(near.x, quoted.x, 1e-3));
        // Finite U₃ agrees with the generic solution at a nearby non-branch α.
        let gen = DegenSigmaContext::with_alpha(
            e.clone(),
            e.half_period(HalfPeriod::Omega) + 1e-6,
            &NumericsConfig::default(),
        )
        .unwrap();
        let g = gen.solve_inversion(u1, C::new(0.2, -0.1)).unwrap();
        assert!(same_set(g.x, near.x, 1e-4), "{g:?} {near:?}");
    }

    #[test]
    fn bethe_roots_and_extra_root() {
        let s = ctx();
        let d = s.lambda1().unwrap();
        let (x1, x2) = (C::new(0.3, 0.1), C::new(-0.2, 0.25));
        let (u1, u3) = s.forward_integrals(x1, x2).unwrap();
        let beta = d.alpha - u1;
        let kappa = -d.zeta_alpha * u1 * 2.0 + d.wpp_alpha * u3;
        let xs = s.solve_bethe(beta, kappa).unwrap();
        for xi in xs {
            assert!(s.bethe_residual(beta, kappa, xi).unwrap() < 1e-8);
        }
        let lf = s.bethe_linear_form(beta, kappa).unwrap();
        let e = &d.ectx;
        for xi in xs {
            let v = e.eval(xi).unwrap();
            let r = lf[0] * v.wp_prime + lf[1] * v.wp + lf[2];
            assert!(
                r.norm() < 1e-8 * (lf[0].norm() + lf[1].norm() + lf[2].norm()),
                "{r}"
            );
        }
        let (x, dx) = s.bethe_extra_root(beta).unwrap();
        for k in [kappa, kappa + 0.7] {
            let lf = s.bethe_linear_form(beta, k).unwrap();
            assert!(
                (lf[0] * dx + lf[1] * x + lf[2]).norm()
                    < 1e-8 * (lf[0].norm() + lf[1].norm() + lf[2].norm())
            );
        }
    }
}
