//! Parameterizations of the strata Λ₁ (by a₂ and γ) and Λ₀ (by a₂, b₂), and their inverses.

use super::classify::{classify, Stratum};
use super::poly::{t, tq, Poly, Scalar};
use super::G2Params;
use crate::elliptic::EllipticCurveParams;
use crate::{Error, NumericsConfig, Result, C};

/// λ on Λ₁ as polynomials in (a₂, γ₄, γ₆).
pub fn lambda1_chart_polys() -> [Poly<3>; 4] {
    [
        Poly::new(&[t(1, [0, 1, 0]), tq(-5, 3, [2, 0, 0])]),
        Poly::new(&[
            t(1, [0, 0, 1]),
            tq(-4, 3, [1, 1, 0]),
            tq(-10, 27, [3, 0, 0]),
        ]),
        Poly::new(&[
            t(-2, [1, 0, 1]),
            tq(-1, 3, [2, 1, 0]),
            tq(20, 27, [4, 0, 0]),
        ]),
        Poly::new(&[t(1, [2, 0, 1]), tq(2, 3, [3, 1, 0]), tq(8, 27, [5, 0, 0])]),
    ]
}

/// λ on Λ₁ as polynomials in (A, γ₄, γ₆) with A = ℘(α) = 5a₂/3.
pub fn lambda_a_chart_polys() -> [Poly<3>; 4] {
    [
        Poly::new(&[t(1, [0, 1, 0]), tq(-3, 5, [2, 0, 0])]),
        Poly::new(&[t(1, [0, 0, 1]), tq(-4, 5, [1, 1, 0]), tq(-2, 25, [3, 0, 0])]),
        Poly::new(&[
            tq(-6, 5, [1, 0, 1]),
            tq(-3, 25, [2, 1, 0]),
            tq(12, 125, [4, 0, 0]),
        ]),
        Poly::new(&[
            tq(9, 25, [2, 0, 1]),
            tq(18, 125, [3, 1, 0]),
            tq(72, 3125, [5, 0, 0]),
        ]),
    ]
}

/// λ on Λ₀ as polynomials in (a₂, b₂).
pub fn lambda0_chart_polys() -> [Poly<2>; 4] {
    [
        Poly::new(&[t(-3, [2, 0]), t(-4, [1, 1]), t(-3, [0, 2])]),
        Poly::new(&[t(2, [3, 0]), t(8, [2, 1]), t(8, [1, 2]), t(2, [0, 3])]),
        Poly::new(&[t(-4, [3, 1]), t(-7, [2, 2]), t(-4, [1, 3])]),
        Poly::new(&[t(2, [3, 2]), t(2, [2, 3])]),
    ]
}

fn eval4<T: Scalar, const N: usize>(polys: &[Poly<N>; 4], x: &[T; N]) -> [T; 4] {
    [
        polys[0].eval(x),
        polys[1].eval(x),
        polys[2].eval(x),
        polys[3].eval(x),
    ]
}

pub fn lambda1_chart<T: Scalar>(a2: T, g4: T, g6: T) -> [T; 4] {
    eval4(&lambda1_chart_polys(), &[a2, g4, g6])
}

pub fn lambda_a_chart<T: Scalar>(a: T, g4: T, g6: T) -> [T; 4] {
    eval4(&lambda_a_chart_polys(), &[a, g4, g6])
}

pub fn lambda0_chart<T: Scalar>(a2: T, b2: T) -> [T; 4] {
    eval4(&lambda0_chart_polys(), &[a2, b2])
}

/// (μ₄, μ₆) from (γ₄, γ₆).
pub fn mu_from_gamma<T: Scalar>(a2: T, g4: T, g6: T) -> (T, T) {
    let mu4 = g4.clone() + T::ratio(4, 3) * a2.pow(2);
    let mu6 = g6 + T::ratio(2, 3) * a2.clone() * g4 + T::ratio(8, 27) * a2.pow(3);
    (mu4, mu6)
}

/// (γ₄, γ₆) from (μ₄, μ₆).
pub fn gamma_from_mu<T: Scalar>(a2: T, mu4: T, mu6: T) -> (T, T) {
    let g4 = mu4.clone() - T::ratio(4, 3) * a2.pow(2);
    let g6 = mu6 - T::ratio(2, 3) * a2.clone() * mu4 + T::ratio(16, 27) * a2.pow(3);
    (g4, g6)
}

/// Υ(λ; μ, a₂): vanishes iff x⁵+λ₄x³+λ₆x²+λ₈x+λ₁₀ = (x−a₂)²(x³+2a₂x²+μ₄x+μ₆).
pub fn upsilon<T: Scalar>(lambda: &[T; 4], mu4: T, mu6: T, a2: T) -> [T; 4] {
    let a = a2;
    [
        lambda[0].clone() - (mu4.clone() - T::int(3) * a.pow(2)),
        lambda[1].clone()
            - (mu6.clone() - T::int(2) * a.clone() * mu4.clone() + T::int(2) * a.pow(3)),
        lambda[2].clone() - (-T::int(2) * a.clone() * mu6.clone() + a.pow(2) * mu4),
        lambda[3].clone() - a.pow(2) * mu6,
    ]
}

pub fn lambda_from_lambda1(a2: C, gamma: EllipticCurveParams) -> Result<G2Params> {
    check_delta(&gamma)?;
    Ok(G2Params::from_array(lambda1_chart(
        a2,
        gamma.gamma4,
        gamma.gamma6,
    )))
}

pub fn lambda_from_a(a: C, gamma: EllipticCurveParams) -> Result<G2Params> {
    check_delta(&gamma)?;
    Ok(G2Params::from_array(lambda_a_chart(
        a,
        gamma.gamma4,
        gamma.gamma6,
    )))
}

pub fn lambda_from_lambda0(a2: C, b2: C) -> G2Params {
    G2Params::from_array(lambda0_chart(a2, b2))
}

fn check_delta(g: &EllipticCurveParams) -> Result<()> {
    let size = 4.0 * g.gamma4.norm().powi(3) + 27.0 * g.gamma6.norm_sqr();
    if g.delta().norm() <= 1e-14 * size || size == 0.0 {
        return Err(Error::DegenerateCurve(format!("δ(γ) = {}", g.delta())));
    }
    Ok(())
}

/// (a₂, γ) of a point of Λ₁.
pub fn recover_lambda1(
    lambda: &G2Params,
    cfg: &NumericsConfig,
) -> Result<(C, EllipticCurveParams)> {
    match classify(lambda, cfg) {
        Ok(c) => match c.stratum {
            Stratum::Lambda1 { a2, gamma } => Ok((a2, gamma)),
            other => Err(Error::NotOnStratum(format!("λ lies on {}", other.name()))),
        },
        Err(Error::AmbiguousClassification(m)) => Err(Error::NotOnStratum(m)),
        Err(e) => Err(e),
    }
}

/// (a₂, b₂) of a point of Λ₀, ordered lexicographically by (Re, Im).
pub fn recover_lambda0(lambda: &G2Params, cfg: &NumericsConfig) -> Result<(C, C)> {
    match classify(lambda, cfg) {
        Ok(c) => match c.stratum {
            Stratum::Lambda0 { a2, b2 } => Ok((a2, b2)),
            other => Err(Error::NotOnStratum(format!("λ lies on {}", other.name()))),
        },
        Err(Error::AmbiguousClassification(m)) => Err(Error::NotOnStratum(m)),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::ratio(n, d)
    }

    #[test]
    fn a_chart_is_lambda1_chart_at_three_fifths() {
        let (a, g4, g6) = (q(7, 3), q(-2, 5), q(11, 7));
        let lhs = lambda_a_chart(a.clone(), g4.clone(), g6.clone());
        let rhs = lambda1_chart(q(3, 5) * a, g4, g6);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn upsilon_vanishes_on_chart_and_mu_gamma_inverse() {
        let (a, g4, g6) = (q(-3, 4), q(5, 2), q(1, 9));
        let lam = lambda1_chart(a.clone(), g4.clone(), g6.clone());
        let (m4, m6) = mu_from_gamma(a.clone(), g4.clone(), g6.clone());
        assert!(upsilon(&lam, m4.clone(), m6.clone(), a.clone())
            .iter()
            .all(|v| *v == q(0, 1)));
        assert_eq!(gamma_from_mu(a, m4, m6), (g4, g6));
    }

    #[test]
    fn worked_examples() {
        let l = lambda_from_lambda0(C::new(1.0, 0.0), C::default());
        assert_eq!(
            l.to_array(),
            [
                C::new(-3.0, 0.0),
                C::new(2.0, 0.0),
                C::default(),
                C::default()
            ]
        );
        let a = q(2, 1);
        let l = lambda0_chart(a.clone(), a);
        assert_eq!(l, [q(-40, 1), q(160, 1), q(-240, 1), q(128, 1)]);
        let l = lambda_from_lambda1(
            C::default(),
            EllipticCurveParams::new(C::default(), C::new(1.0, 0.0)),
        )
        .unwrap();
        assert_eq!(
            l.to_array(),
            [C::default(), C::new(1.0, 0.0), C::default(), C::default()]
        );
    }
}
