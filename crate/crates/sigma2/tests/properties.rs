use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use sigma2::elliptic::{EllipticCurveParams, Weierstrass};
use sigma2::sigma::DegenSigmaContext;
use sigma2::strata::fields::tangency_at;
use sigma2::strata::{classify, lambda_from_lambda0, lambda_from_lambda1, Stratum};
use sigma2::{NumericsConfig, C};

fn cfg() -> NumericsConfig {
    NumericsConfig::default()
}

fn cplx(r: f64) -> impl Strategy<Value = C> {
    (-r..r, -r..r).prop_map(|(a, b)| C::new(a, b))
}

/// Λ₁ moduli away from δ(γ) = 0 and from ℘′(α) = 0.
fn lambda1() -> impl Strategy<Value = DegenSigmaContext> {
    (cplx(1.0), cplx(1.0), cplx(1.0)).prop_filter_map("degenerate moduli", |(a2, g4, g6)| {
        let g = EllipticCurveParams::new(g4, g6);
        if g.delta().norm() < 0.05 * (4.0 * g4.norm().powi(3) + 27.0 * g6.norm_sqr()) {
            return None;
        }
        let ctx = DegenSigmaContext::on_lambda1(a2, g, &cfg()).ok()?;
        let d = ctx.lambda1()?;
        (d.branch_point.is_none() && d.wpp_alpha.norm() > 0.05).then_some(ctx)
    })
}

fn close(a: C, b: C, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + a.norm().max(b.norm()))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, ..ProptestConfig::default() })]

    #[test]
    fn sigma_is_odd(ctx in lambda1(), u3 in cplx(0.4), u1 in cplx(0.4)) {
        let (p, m) = (ctx.sigma2(u3, u1).unwrap(), ctx.sigma2(-u3, -u1).unwrap());
        prop_assert!(close(p, -m, 1e-10), "{p} {m}");
    }

    #[test]
    fn sigma_has_sato_weight_minus_three(
        a2 in cplx(0.8), g4 in cplx(0.8), g6 in cplx(0.8), t in 0.7f64..1.4, u3 in cplx(0.3), u1 in cplx(0.3)
    ) {
        let g = EllipticCurveParams::new(g4, g6);
        prop_assume!(g.delta().norm() > 0.05 * (4.0 * g4.norm().powi(3) + 27.0 * g6.norm_sqr()));
        let base = DegenSigmaContext::on_lambda1(a2, g, &cfg());
        let scaled = DegenSigmaContext::on_lambda1(
            a2 * t.powi(2),
            EllipticCurveParams::new(g4 * t.powi(4), g6 * t.powi(6)),
            &cfg(),
        );
        let (Ok(base), Ok(scaled)) = (base, scaled) else { return Ok(()) };
        prop_assume!(base.lambda1().unwrap().branch_point.is_none());
        let s = scaled.sigma2(u3 / t.powi(3), u1 / t).unwrap();
        let b = base.sigma2(u3, u1).unwrap();
        prop_assert!(close(s, b / t.powi(3), 1e-9), "{s} {}", b / t.powi(3));
    }

    #[test]
    fn three_periodic_p_is_unimodular_pair(ctx in lambda1(), u3 in cplx(0.4), u1 in cplx(0.4)) {
        let p = ctx.three_periodic_p(u3, u1).unwrap();
        let q = ctx.three_periodic_p(-u3, -u1).unwrap();
        prop_assert!(close(p * q, C::new(1.0, 0.0), 1e-10), "{}", p * q);
    }

    #[test]
    fn inversion_round_trip(ctx in lambda1(), x1 in cplx(0.4), x2 in cplx(0.4)) {
        prop_assume!(x1.norm() > 0.1 && x2.norm() > 0.1 && (x1 - x2).norm() > 0.05 && (x1 + x2).norm() > 0.05);
        let Ok((u1, u3)) = ctx.forward_integrals(x1, x2) else { return Ok(()) };
        let Ok(inv) = ctx.solve_inversion(u1, u3) else { return Ok(()) };
        let e = &ctx.lambda1().unwrap().ectx;
        let want = [e.wp(x1).unwrap(), e.wp(x2).unwrap()];
        let scale = 1.0 + want[0].norm().max(want[1].norm());
        let d = ((inv.x[0] - want[0]).norm().max((inv.x[1] - want[1]).norm()))
            .min((inv.x[0] - want[1]).norm().max((inv.x[1] - want[0]).norm()));
        prop_assert!(d < 1e-8 * scale, "{:?} vs {want:?}", inv.x);
    }

    #[test]
    fn quasi_periodicity(ctx in lambda1(), u3 in cplx(0.4), u1 in cplx(0.4), k in 1usize..=3) {
        let lat = ctx.period_matrices().unwrap();
        for sign in [1.0, -1.0] {
            let r = ctx.quasi_periodicity_residual(&lat, u3, u1, k, sign, true).unwrap();
            prop_assert!(r < 1e-8, "k={k} sign={sign} r={r}");
        }
    }

    #[test]
    fn legendre_identity(ctx in lambda1()) {
        let lat = ctx.period_matrices().unwrap();
        prop_assert!(lat.legendre_residual < 1e-8, "{}", lat.legendre_residual);
    }

    #[test]
    fn potential_routes_agree(ctx in lambda1(), u3 in cplx(0.4), u1 in cplx(0.4)) {
        let (Ok(s), Ok(p)) = (ctx.potential_u(u3, u1), ctx.potential_u_p_route(u3, u1)) else { return Ok(()) };
        prop_assert!(close(s, p, 1e-9), "{s} {p}");
    }

    #[test]
    fn lambda1_chart_round_trip(a2 in cplx(1.0), g4 in cplx(1.0), g6 in cplx(1.0)) {
        let g = EllipticCurveParams::new(g4, g6);
        prop_assume!(g.delta().norm() > 0.05 * (4.0 * g4.norm().powi(3) + 27.0 * g6.norm_sqr()));
        let lam = lambda_from_lambda1(a2, g).unwrap();
        let Ok(c) = classify(&lam, &cfg()) else { return Ok(()) };
        if let Stratum::Lambda1 { a2: r, gamma } = c.stratum {
            prop_assert!(close(r, a2, 1e-9) && close(gamma.gamma4, g4, 1e-9) && close(gamma.gamma6, g6, 1e-9));
        } else {
            // Only possible when 5a₂/3 collides with a root of the cubic.
            prop_assert!(c.rank < 3);
        }
    }

    #[test]
    fn lambda0_chart_round_trip(a in cplx(1.0), b in cplx(1.0)) {
        let c3 = -(a + b) * (2.0 / 3.0);
        prop_assume!((a - b).norm() > 0.05 && (a - c3).norm() > 0.05 && (b - c3).norm() > 0.05);
        let c = classify(&lambda_from_lambda0(a, b), &cfg()).unwrap();
        let Stratum::Lambda0 { a2, b2 } = c.stratum else { panic!("{:?}", c.stratum) };
        let d = (close(a2, a, 1e-9) && close(b2, b, 1e-9)) || (close(a2, b, 1e-9) && close(b2, a, 1e-9));
        prop_assert!(d, "({a2}, {b2}) vs ({a}, {b})");
    }

    #[test]
    fn tangency_is_exact(l in proptest::array::uniform4((-50i64..50, 1i64..12))) {
        let lam = l.map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)));
        let t = tangency_at(&lam);
        let zero = BigRational::from_integer(BigInt::from(0));
        prop_assert!(t.delta.iter().all(|v| *v == zero));
        prop_assert!(t.gamma.iter().flatten().all(|v| *v == zero));
    }
}
