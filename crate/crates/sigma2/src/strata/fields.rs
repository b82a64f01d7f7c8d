//! The vector fields ℓ₀, ℓ₂, ℓ₄, ℓ₆ tangent to the discriminant, their tangency identities,
//! and their restrictions to the strata.

use super::charts::{lambda0_chart_polys, lambda1_chart_polys};
use super::poly::{Poly, Scalar};
use super::tables::{delta_poly, gamma_polys, phi_polys, psi_polys, v_polys};
use super::G2Params;
use crate::elliptic::{Branch, EllipticContext, EllipticCurveParams, Weierstrass};
use crate::{Result, C};

/// V, φ and ψ evaluated at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorFieldData<T> {
    pub v: [[T; 4]; 4],
    pub phi: [T; 4],
    pub psi: [[[T; 4]; 4]; 4],
}

fn map4<T, U>(a: &[T; 4], f: impl Fn(&T) -> U) -> [U; 4] {
    [f(&a[0]), f(&a[1]), f(&a[2]), f(&a[3])]
}

pub fn vmatrix_at<T: Scalar>(lambda: &[T; 4]) -> VectorFieldData<T> {
    let ev = |p: &Poly<4>| p.eval(lambda);
    VectorFieldData {
        v: map4(&v_polys(), |row| map4(row, ev)),
        phi: map4(&phi_polys(), ev),
        psi: map4(&psi_polys(), |m| map4(m, |row| map4(row, ev))),
    }
}

pub fn vmatrix(lambda: &G2Params) -> VectorFieldData<C> {
    vmatrix_at(&lambda.to_array())
}

/// Laplace expansion; no division, so exact over any ring.
pub fn det4<T: Scalar>(m: &[[T; 4]; 4]) -> T {
    fn det<T: Scalar>(m: &[Vec<T>]) -> T {
        if m.len() == 1 {
            return m[0][0].clone();
        }
        let mut acc = T::zero();
        for j in 0..m.len() {
            let minor: Vec<Vec<T>> = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|(k, _)| *k != j)
                        .map(|(_, v)| v.clone())
                        .collect()
                })
                .collect();
            let term = m[0][j].clone() * det(&minor);
            acc = if j % 2 == 0 { acc + term } else { acc - term };
        }
        acc
    }
    let rows: Vec<Vec<T>> = m.iter().map(|r| r.to_vec()).collect();
    det(&rows)
}

/// ℓₖ applied to a polynomial: Σⱼ V_kj ∂ⱼ p.
pub fn apply_field<T: Scalar>(k: usize, p: &Poly<4>, lambda: &[T; 4]) -> T {
    let v = v_polys();
    (0..4).fold(T::zero(), |acc, j| {
        acc + v[k][j].eval(lambda) * p.diff(j).eval(lambda)
    })
}

/// ℓₖΔ − φₖΔ for k = 0..4 and ℓₖΓ − ψₖΓ (componentwise).
#[derive(Debug, Clone, PartialEq)]
pub struct Tangency<T> {
    pub delta: [T; 4],
    pub gamma: [[T; 4]; 4],
}

pub fn tangency_at<T: Scalar>(lambda: &[T; 4]) -> Tangency<T> {
    let d = delta_poly();
    let gs = gamma_polys();
    let data = vmatrix_at(lambda);
    let dval = d.eval(lambda);
    let gval: [T; 4] = map4(&gs, |g| g.eval(lambda));
    let delta =
        [0, 1, 2, 3].map(|k| apply_field(k, &d, lambda) - data.phi[k].clone() * dval.clone());
    let gamma = [0, 1, 2, 3].map(|k| {
        [0, 1, 2, 3].map(|i| {
            let psi_g = (0..4).fold(T::zero(), |acc, j| {
                acc + data.psi[k][i][j].clone() * gval[j].clone()
            });
            apply_field(k, &gs[i], lambda) - psi_g
        })
    });
    Tangency { delta, gamma }
}

/// Largest tangency residual relative to the size of the terms involved.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangencyReport {
    pub delta_max: f64,
    pub gamma_max: f64,
}

pub fn tangency_residuals(lambda: &G2Params) -> TangencyReport {
    let la = lambda.to_array();
    let tan = tangency_at(&la);
    // scale by the weight-normalized magnitude so the report is dimensionless
    let s = super::classify::weight_scale(lambda).max(1e-300);
    let delta_max = tan
        .delta
        .iter()
        .enumerate()
        .map(|(k, r)| r.norm() / s.powi(40 + 2 * k as i32))
        .fold(0.0, f64::max);
    let gw = [16, 18, 20, 24];
    let gamma_max = tan
        .gamma
        .iter()
        .enumerate()
        .flat_map(|(k, row)| {
            row.iter()
                .zip(gw)
                .map(move |(r, w)| r.norm() / s.powi(w + 2 * k as i32))
        })
        .fold(0.0, f64::max);
    TangencyReport {
        delta_max,
        gamma_max,
    }
}

/// Restricted fields on Λ₁: coefficients on (∂a₂, ∂γ₄, ∂γ₆).
#[derive(Debug, Clone, PartialEq)]
pub struct Lambda1Fields<T> {
    pub l0: [T; 3],
    pub l2: [T; 3],
    pub l4: [T; 3],
    /// ℓ₆|Λ₁ = c₀ℓ̃₀ + c₂ℓ̃₂ + c₄ℓ̃₄.
    pub l6_decomposition: [T; 3],
    pub l6: [T; 3],
}

pub fn restricted_fields_lambda1<T: Scalar>(a: T, g4: T, g6: T) -> Lambda1Fields<T> {
    let r = T::ratio;
    let l0 = [
        T::int(2) * a.clone(),
        T::int(4) * g4.clone(),
        T::int(6) * g6.clone(),
    ];
    let l2 = [
        r(2, 15) * (T::int(6) * g4.clone() + T::int(5) * a.pow(2)),
        r(2, 3) * (T::int(9) * g6.clone() - T::int(8) * a.clone() * g4.clone()),
        -r(4, 3) * (g4.pow(2) + T::int(6) * a.clone() * g6.clone()),
    ];
    let l4 = [
        r(2, 45)
            * (T::int(27) * g6.clone() + T::int(9) * a.clone() * g4.clone()
                - T::int(40) * a.pow(3)),
        -r(4, 3) * a.clone() * (T::int(9) * g6.clone() + a.clone() * g4.clone()),
        -r(2, 3) * a.clone() * (T::int(3) * a.clone() * g6.clone() - T::int(4) * g4.pow(2)),
    ];
    let dec = [-a.pow(3), -a.pow(2), -a.clone()];
    let l6 = [0, 1, 2].map(|i| {
        dec[0].clone() * l0[i].clone()
            + dec[1].clone() * l2[i].clone()
            + dec[2].clone() * l4[i].clone()
    });
    Lambda1Fields {
        l0,
        l2,
        l4,
        l6_decomposition: dec,
        l6,
    }
}

/// Restricted fields on Λ₀: coefficients on (∂a₂, ∂b₂).
#[derive(Debug, Clone, PartialEq)]
pub struct Lambda0Fields<T> {
    pub l0: [T; 2],
    pub l2: [T; 2],
    /// ℓ₄|Λ₀ and ℓ₆|Λ₀ as combinations of (ℓ̃₀, ℓ̃₂).
    pub l4_decomposition: [T; 2],
    pub l6_decomposition: [T; 2],
    pub l4: [T; 2],
    pub l6: [T; 2],
}

pub fn restricted_fields_lambda0<T: Scalar>(a: T, b: T) -> Lambda0Fields<T> {
    let r = T::ratio;
    let ab = a.clone() * b.clone();
    let l0 = [T::int(2) * a.clone(), T::int(2) * b.clone()];
    let l2 = [
        -r(2, 5) * (a.pow(2) + T::int(8) * ab.clone() + T::int(6) * b.pow(2)),
        -r(2, 5) * (T::int(6) * a.pow(2) + T::int(8) * ab.clone() + b.pow(2)),
    ];
    let d4 = [
        -(a.pow(2) + ab.clone() + b.pow(2)),
        -(a.clone() + b.clone()),
    ];
    let d6 = [ab.clone() * (a.clone() + b.clone()), ab];
    let comb =
        |d: &[T; 2]| [0, 1].map(|i| d[0].clone() * l0[i].clone() + d[1].clone() * l2[i].clone());
    let (l4, l6) = (comb(&d4), comb(&d6));
    Lambda0Fields {
        l0,
        l2,
        l4_decomposition: d4,
        l6_decomposition: d6,
        l4,
        l6,
    }
}

/// Pushforward defect on Λ₁: row k, column j is ℓ̃ₖ(λⱼ(a₂,γ)) − V_kj(λ(a₂,γ)), computed with
/// the exact chart derivatives. Vanishes identically.
pub fn pushforward_defect_lambda1<T: Scalar>(a: T, g4: T, g6: T) -> [[T; 4]; 4] {
    let x = [a.clone(), g4.clone(), g6.clone()];
    let chart = lambda1_chart_polys();
    let lam = map4(&chart, |p| p.eval(&x));
    let v = vmatrix_at(&lam).v;
    let f = restricted_fields_lambda1(a, g4, g6);
    let rows = [f.l0, f.l2, f.l4, f.l6];
    [0, 1, 2, 3].map(|k| {
        [0, 1, 2, 3].map(|j| {
            let push = (0..3).fold(T::zero(), |acc, i| {
                acc + rows[k][i].clone() * chart[j].diff(i).eval(&x)
            });
            push - v[k][j].clone()
        })
    })
}

/// Same on Λ₀.
pub fn pushforward_defect_lambda0<T: Scalar>(a: T, b: T) -> [[T; 4]; 4] {
    let x = [a.clone(), b.clone()];
    let chart = lambda0_chart_polys();
    let lam = map4(&chart, |p| p.eval(&x));
    let v = vmatrix_at(&lam).v;
    let f = restricted_fields_lambda0(a, b);
    let rows = [f.l0, f.l2, f.l4, f.l6];
    [0, 1, 2, 3].map(|k| {
        [0, 1, 2, 3].map(|j| {
            let push = (0..2).fold(T::zero(), |acc, i| {
                acc + rows[k][i].clone() * chart[j].diff(i).eval(&x)
            });
            push - v[k][j].clone()
        })
    })
}

/// ∂λΔ on Λ₁ against c·δ(γ)·℘′(α)⁶·((3A/5)³, (3A/5)², 3A/5, 1), A = ℘(α) = 5a₂/3.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientDeltaReport {
    pub gradient: [C; 4],
    /// Right-hand side with c = 1/5.
    pub quoted: [C; 4],
    /// Right-hand side with c = 1/16, the constant the polynomial Δ actually gives.
    pub corrected: [C; 4],
    pub quoted_residual: f64,
    pub corrected_residual: f64,
}

fn rel_residual(a: &[C; 4], b: &[C; 4]) -> f64 {
    let scale = a.iter().chain(b).map(|v| v.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return 0.0;
    }
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
        / scale
}

pub fn gradient_delta_check(
    a2: C,
    gamma: EllipticCurveParams,
    ctx: &EllipticContext,
) -> Result<GradientDeltaReport> {
    let lam = super::charts::lambda1_chart(a2, gamma.gamma4, gamma.gamma6);
    let d = delta_poly();
    let gradient = [0, 1, 2, 3].map(|j| d.diff(j).eval(&lam));
    let big_a = a2 * (5.0 / 3.0);
    let alpha = ctx.invert_wp(big_a, Branch::Principal)?;
    let wpp = ctx.wp_prime(alpha)?;
    let x = big_a * 0.6;
    let dir = [x.powi(3), x * x, x, C::new(1.0, 0.0)];
    let base = gamma.delta() * wpp.powi(6);
    let quoted = dir.map(|v| base * v / 5.0);
    let corrected = dir.map(|v| base * v / 16.0);
    Ok(GradientDeltaReport {
        quoted_residual: rel_residual(&gradient, &quoted),
        corrected_residual: rel_residual(&gradient, &corrected),
        gradient,
        quoted,
        corrected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_traits::Zero;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::ratio(n, d)
    }

    #[test]
    fn det_v_is_sixteen_fifths_delta_exactly() {
        for lam in [
            [q(1, 2), q(-3, 7), q(2, 1), q(5, 3)],
            [q(0, 1), q(0, 1), q(0, 1), q(1, 1)],
        ] {
            let v = vmatrix_at(&lam).v;
            assert_eq!(det4(&v), q(16, 5) * delta_poly().eval(&lam));
        }
        let unit = [q(0, 1), q(0, 1), q(0, 1), q(1, 1)];
        assert_eq!(det4(&vmatrix_at(&unit).v), q(10000, 1));
    }

    #[test]
    fn tangency_exact() {
        let lam = [q(3, 4), q(-2, 9), q(7, 5), q(-1, 3)];
        let t = tangency_at(&lam);
        assert!(t.delta.iter().all(Zero::is_zero));
        assert!(t.gamma.iter().flatten().all(Zero::is_zero));
    }

    #[test]
    fn pushforward_exact() {
        let d = pushforward_defect_lambda1(q(2, 3), q(-5, 7), q(1, 4));
        assert!(d.iter().flatten().all(Zero::is_zero), "{d:?}");
        let d = pushforward_defect_lambda0(q(-3, 5), q(4, 11));
        assert!(d.iter().flatten().all(Zero::is_zero), "{d:?}");
    }

    #[test]
    fn restricted_field_examples() {
        let f = restricted_fields_lambda1(q(1, 1), q(1, 1), q(1, 1));
        assert_eq!(f.l0, [q(2, 1), q(4, 1), q(6, 1)]);
        let f = restricted_fields_lambda1(q(0, 1), q(3, 1), q(-2, 1));
        assert!(f.l6_decomposition.iter().all(Zero::is_zero));
        let f = restricted_fields_lambda0(q(1, 1), q(1, 1));
        assert_eq!(f.l0, [q(2, 1), q(2, 1)]);
        let f = restricted_fields_lambda0(q(0, 1), q(0, 1));
        assert!(f
            .l0
            .iter()
            .chain(&f.l2)
            .chain(&f.l4)
            .chain(&f.l6)
            .all(Zero::is_zero));
    }
}
