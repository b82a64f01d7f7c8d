//! Rank-3 period lattice on Λ₁ with ℘′(α) ≠ 0: Abel integrals, period matrices T and H,
//! the degenerate Legendre relation, quasi-periodicity of σ and the three-periodic 𝒫.
//!
//! Column k of T is a period of the pair (I₁, I₂) of Abel integrals; T₁ comes from the
//! residue at the pole ξ = α, T₂ and T₃ from the lattice periods ω, ω′. The fourth period
//! of the genus-2 lattice is lost: the cycle around the two colliding branch points has
//! shrunk to the pole and its partner cycle becomes infinite.

use std::f64::consts::PI;

use crate::elliptic::Weierstrass;
use crate::numerics::real;
use crate::sigma::DegenSigmaContext;
use crate::strata::{classify, G2Params, Stratum};
use crate::{Error, NumericsConfig, Result, C};

pub type Mat2 = [[C; 2]; 2];
pub type Mat2x3 = [[C; 3]; 2];

/// I₁…I₄ at one point ξ; I₁ is continued along [0, ξ].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbelIntegralValues {
    pub i1: C,
    pub i2: C,
    pub i3: C,
    pub i4: C,
}

impl AbelIntegralValues {
    pub fn to_array(&self) -> [C; 4] {
        [self.i1, self.i2, self.i3, self.i4]
    }
}

#[derive(Debug, Clone)]
pub struct PeriodLattice {
    /// Rows (u₃, u₁); columns T₁, T₂, T₃.
    pub t: Mat2x3,
    /// Rows are the increments of (I₃, I₄).
    pub h: Mat2x3,
    pub k1: Mat2,
    pub k2: Mat2,
    pub k3: Mat2,
    /// (T|H)ᵗ J (T|H) / 2πi.
    pub legendre: [[C; 3]; 3],
    pub legendre_residual: f64,
}

impl PeriodLattice {
    /// Column k = 1, 2, 3 of T.
    pub fn t_col(&self, k: usize) -> [C; 2] {
        [self.t[0][k - 1], self.t[1][k - 1]]
    }
    pub fn h_col(&self, k: usize) -> [C; 2] {
        [self.h[0][k - 1], self.h[1][k - 1]]
    }
}

/// The pairing on (T₀, T₁, H₀, H₁). With this sign, genus 1 reduces to ηω′ − η′ω = 2πi for
/// Im(ω′/ω) > 0.
pub const SYMPLECTIC_J: [[f64; 4]; 4] = [
    [0.0, 0.0, 0.0, -1.0],
    [0.0, 0.0, -1.0, 0.0],
    [0.0, 1.0, 0.0, 0.0],
    [1.0, 0.0, 0.0, 0.0],
];

/// (T|H)ᵗJ(T|H)/2πi on the rank-3 stratum: only the (T₂, T₃) pairing survives.
pub const LEGENDRE_TARGET: [[f64; 3]; 3] = [[0.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, -1.0, 0.0]];

fn mat_mul(a: &Mat2, b: &Mat2x3) -> Mat2x3 {
    let mut out = [[C::default(); 3]; 2];
    for i in 0..2 {
        for j in 0..3 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn mat2_inverse(m: &Mat2) -> Result<Mat2> {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let scale = m
        .iter()
        .flatten()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
        .powi(2);
    if det.norm() <= 1e-14 * scale {
        return Err(Error::SingularConfiguration(
            "2×2 matrix is singular".into(),
        ));
    }
    Ok([
        [m[1][1] / det, -m[0][1] / det],
        [-m[1][0] / det, m[0][0] / det],
    ])
}

pub fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[C::default(); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// ΩᵗJΩ/2πi for Ω with rows (T₀, T₁, H₀, H₁).
pub fn legendre_form(t: &Mat2x3, h: &Mat2x3) -> [[C; 3]; 3] {
    let rows = [t[0], t[1], h[0], h[1]];
    let mut out = [[C::default(); 3]; 3];
    for (i, o) in out.iter_mut().enumerate() {
        for (j, v) in o.iter_mut().enumerate() {
            let mut acc = C::default();
            for (r, jr) in SYMPLECTIC_J.iter().enumerate() {
                for (s, &w) in jr.iter().enumerate() {
                    if w != 0.0 {
                        acc += rows[r][i] * rows[s][j] * w;
                    }
                }
            }
            *v = acc / C::new(0.0, 2.0 * PI);
        }
    }
    out
}

/// Largest entrywise distance to `LEGENDRE_TARGET`.
fn legendre_distance(form: &[[C; 3]; 3]) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            worst = worst.max((form[i][j] - LEGENDRE_TARGET[i][j]).norm());
        }
    }
    worst
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IncrementCheck {
    pub winding: i64,
    /// Distance of the fitted multiple of T₁ from an integer.
    pub winding_defect: f64,
    pub residual: f64,
}

/// Multiplicity pattern, rank and, on Λ₁, |℘′(α)| (zero means the rank drops to 2).
#[derive(Debug, Clone, PartialEq)]
pub struct RankReport {
    pub stratum: &'static str,
    pub partition: Vec<usize>,
    pub rank: usize,
    /// Which ℱₖ the point lies in; equals `rank`.
    pub f_index: usize,
    pub wpp_alpha_abs: Option<f64>,
}

pub fn rank_report(lambda: &G2Params, cfg: &NumericsConfig) -> Result<RankReport> {
    let cls = classify(lambda, cfg)?;
    let wpp_alpha_abs = match cls.stratum {
        Stratum::Lambda1 { .. } => {
            let ctx = DegenSigmaContext::from_classification(&cls, cfg)?;
            ctx.lambda1().map(|d| d.wpp_alpha.norm())
        }
        _ => None,
    };
    Ok(RankReport {
        stratum: cls.stratum.name(),
        f_index: cls.rank,
        rank: cls.rank,
        partition: cls.partition,
        wpp_alpha_abs,
    })
}

/// Residuals of the two relations of f(z₁,z₂) = 𝒫(z₁/℘′(α), c·z₂ + (3/5)A·z₁/℘′(α)).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FunctionalEquationResiduals {
    /// |f(z₁,z₂)f(z₁,−z₂)/e^{z₁} − 1|, the quoted form.
    pub product_quoted: f64,
    /// |f(z₁,z₂)f(z₁,−z₂)/e^{2z₁} − 1|.
    pub product: f64,
    /// |f(z₁,z₂)/(−f(−z₁,−z₂)) − 1|, the quoted parity.
    pub parity_quoted: f64,
    /// |f(z₁,z₂)·f(−z₁,−z₂) − 1|.
    pub parity: f64,
}

impl DegenSigmaContext {
    fn rank3_data(&self) -> Result<&crate::sigma::Lambda1Data> {
        let d = self.lambda1_or_err()?;
        if d.branch_point.is_some() {
            return Err(Error::SingularConfiguration(
                "℘′(α) = 0: the lattice has rank 2".into(),
            ));
        }
        Ok(d)
    }

    fn integrals_from_i1(&self, xi: C, i1: C) -> Result<AbelIntegralValues> {
        let d = self.rank3_data()?;
        let (a, g4) = (d.wp_alpha, d.ectx.gamma().0);
        let v = d.ectx.eval(xi)?;
        let i2 = xi + a * 0.6 * i1;
        let i3 = v.zeta - a * a * 0.24 * i1 - a * 0.2 * i2;
        let i4 = -v.wp_prime * 0.5
            - a * 0.6 * (g4 + a * a * 0.48) * i1
            - a * a * 0.36 * i2
            - a * 0.6 * i3;
        Ok(AbelIntegralValues { i1, i2, i3, i4 })
    }

    pub fn abel_integrals(&self, xi: C) -> Result<AbelIntegralValues> {
        self.rank3_data()?;
        let i1 = self.u3_integral(xi)?;
        self.integrals_from_i1(xi, i1)
    }

    /// I(ξ + ω_k) − I(ξ) with I₁ continued along the straight segment, k = 2 (ω) or 3 (ω′).
    /// Paths on different sides of the poles ±α differ by multiples of T₁.
    pub fn abel_increment(&self, xi: C, k: usize) -> Result<AbelIntegralValues> {
        let d = self.rank3_data()?;
        let e = &d.ectx;
        let (w, eta) = match k {
            2 => (e.omega, e.eta),
            3 => (e.omega_p, e.eta_p),
            _ => {
                return Err(Error::InvalidInput(format!(
                    "increment index {k} is not 2 or 3"
                )))
            }
        };
        let di1 = (d.zeta_alpha * w * 2.0 + self.log_ratio_increment(xi, xi + w)?) / d.wpp_alpha;
        let a = d.wp_alpha;
        let g4 = e.gamma().0;
        let di2 = w + a * 0.6 * di1;
        let di3 = eta - a * a * 0.24 * di1 - a * 0.2 * di2;
        let di4 = -a * 0.6 * (g4 + a * a * 0.48) * di1 - a * a * 0.36 * di2 - a * 0.6 * di3;
        Ok(AbelIntegralValues {
            i1: di1,
            i2: di2,
            i3: di3,
            i4: di4,
        })
    }

    /// Compares I(ξ + ω_k) − I(ξ) with column k of (T; H). The straight path may wind around
    /// ±α, which adds m·(T₁; H₁); m is returned with the residual left after removing it.
    pub fn increment_check(&self, lat: &PeriodLattice, xi: C, k: usize) -> Result<IncrementCheck> {
        let inc = self.abel_increment(xi, k)?.to_array();
        let col = |j: usize| {
            [
                lat.t[0][j - 1],
                lat.t[1][j - 1],
                lat.h[0][j - 1],
                lat.h[1][j - 1],
            ]
        };
        let (ck, c1) = (col(k), col(1));
        let m_raw = (inc[0] - ck[0]) / c1[0];
        let m = m_raw.re.round();
        let scale = ck.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let residual = (0..4)
            .map(|i| (inc[i] - ck[i] - c1[i] * m).norm())
            .fold(0.0, f64::max)
            / scale;
        Ok(IncrementCheck {
            winding: m as i64,
            winding_defect: (m_raw - m).norm(),
            residual,
        })
    }

    pub fn period_matrices(&self) -> Result<PeriodLattice> {
        let d = self.rank3_data()?;
        let e = &d.ectx;
        let (a, p, z, al) = (d.wp_alpha, d.wpp_alpha, d.zeta_alpha, d.alpha);
        let g4 = e.gamma().0;
        let k1 = [
            [z * 2.0 / p, -al * 2.0 / p],
            [1.0 + a * z * 1.2 / p, -a * al * 1.2 / p],
        ];
        let k2 = [
            [-a * a * 0.36, C::default()],
            [C::default(), -(g4 + a * a * 0.48)],
        ];
        let k3 = [[-a * 0.2, real(1.0)], [g4 + a * a * 0.24, -a * 0.6]];
        let zero = C::default();
        let base = [
            [zero, e.omega, e.omega_p],
            [C::new(0.0, -PI) / al, e.eta, e.eta_p],
        ];
        let base0 = [[zero, e.omega, e.omega_p], [zero, e.eta, e.eta_p]];
        let t = mat_mul(&k1, &base);
        let k2t = mat_mul(&k2, &t);
        let k3b = mat_mul(&k3, &base0);
        let mut h = [[zero; 3]; 2];
        for i in 0..2 {
            for j in 0..3 {
                h[i][j] = k2t[i][j] + k3b[i][j];
            }
        }
        let legendre = legendre_form(&t, &h);
        Ok(PeriodLattice {
            legendre_residual: legendre_distance(&legendre),
            t,
            h,
            k1,
            k2,
            k3,
            legendre,
        })
    }

    /// |σ(u ± T_k)/σ(u) / (−exp{±H_kᵗ S (u ± T_k/2)}) − 1| with S the index swap.
    pub fn quasi_periodicity_residual(
        &self,
        lat: &PeriodLattice,
        u3: C,
        u1: C,
        k: usize,
        sign: f64,
        normalized: bool,
    ) -> Result<f64> {
        let (tk, hk) = (lat.t_col(k), lat.h_col(k));
        let base = self.sigma2_with(u3, u1, normalized)?;
        if base.norm() < 1e-300 {
            return Err(Error::SingularConfiguration("σ(u) = 0".into()));
        }
        let shifted = self.sigma2_with(u3 + tk[0] * sign, u1 + tk[1] * sign, normalized)?;
        let (v3, v1) = (u3 + tk[0] * (0.5 * sign), u1 + tk[1] * (0.5 * sign));
        let factor = -((hk[0] * v1 + hk[1] * v3) * sign).exp();
        Ok((shifted / base / factor - 1.0).norm())
    }

    /// 𝒫(u) = σ(α+U₁)/σ(α−U₁)·exp{(℘′(α) + (6/5)Aζ(α))u₃ − 2ζ(α)u₁}, U₁ = u₁ − (3/5)Au₃.
    pub fn three_periodic_p(&self, u3: C, u1: C) -> Result<C> {
        let d = self.rank3_data()?;
        let e = &d.ectx;
        let big_u1 = u1 - d.wp_alpha * 0.6 * u3;
        let den = e.ln_sigma(d.alpha - big_u1)?;
        if den.re == f64::NEG_INFINITY {
            return Err(Error::PoleAtArgument(format!(
                "σ(α − U₁) = 0 at u = ({u3}, {u1})"
            )));
        }
        let lin = (d.wpp_alpha + d.wp_alpha * d.zeta_alpha * 1.2) * u3 - d.zeta_alpha * u1 * 2.0;
        Ok((e.ln_sigma(d.alpha + big_u1)? - den + lin).exp())
    }

    /// |𝒫(u + T_k)/𝒫(u) − 1|.
    pub fn p_periodicity_residual(
        &self,
        lat: &PeriodLattice,
        u3: C,
        u1: C,
        k: usize,
    ) -> Result<f64> {
        let tk = lat.t_col(k);
        let base = self.three_periodic_p(u3, u1)?;
        Ok((self.three_periodic_p(u3 + tk[0], u1 + tk[1])? / base - 1.0).norm())
    }

    pub fn functional_equation_check(
        &self,
        c: C,
        z1: C,
        z2: C,
    ) -> Result<FunctionalEquationResiduals> {
        let d = self.rank3_data()?;
        if c.norm() == 0.0 {
            return Err(Error::InvalidInput("c must be nonzero".into()));
        }
        let (a, p) = (d.wp_alpha, d.wpp_alpha);
        let f = |z1: C, z2: C| self.three_periodic_p(z1 / p, c * z2 + a * 0.6 * z1 / p);
        let f0 = f(z1, z2)?;
        let prod = f0 * f(z1, -z2)?;
        let opp = f(-z1, -z2)?;
        Ok(FunctionalEquationResiduals {
            product_quoted: (prod / z1.exp() - 1.0).norm(),
            product: (prod / (z1 * 2.0).exp() - 1.0).norm(),
            parity_quoted: (f0 / -opp - 1.0).norm(),
            parity: (f0 * opp - 1.0).norm(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::EllipticCurveParams;

    fn ctx() -> DegenSigmaContext {
        let g = EllipticCurveParams::new(C::new(0.4, -0.2), C::new(-0.3, 0.5));
        DegenSigmaContext::on_lambda1(C::new(0.3, 0.1), g, &NumericsConfig::default()).unwrap()
    }

    #[test]
    fn t1_column_and_legendre() {
        let s = ctx();
        let lat = s.period_matrices().unwrap();
        let d = s.lambda1().unwrap();
        let t1 = lat.t_col(1);
        let i2pi = C::new(0.0, 2.0 * PI);
        assert!((t1[0] - i2pi / d.wpp_alpha).norm() < 1e-12);
        assert!((t1[1] - i2pi * d.wp_alpha * 0.6 / d.wpp_alpha).norm() < 1e-12);
        assert!(lat.legendre_residual < 1e-10, "{}", lat.legendre_residual);
    }

    #[test]
    fn increments_match_columns() {
        let s = ctx();
        let lat = s.period_matrices().unwrap();
        for xi in [C::new(0.1, 0.05), C::new(-0.2, 0.1), C::new(0.05, -0.3)] {
            for k in [2, 3] {
                let c = s.increment_check(&lat, xi, k).unwrap();
                assert!(
                    c.winding_defect < 1e-9 && c.residual < 1e-9,
                    "ξ={xi} k={k}: {c:?}"
                );
            }
        }
    }

    #[test]
    fn abel_integrals_small_xi_and_quadrature() {
        let s = ctx();
        let xi = C::new(1e-3, 5e-4);
        let v = s.abel_integrals(xi).unwrap();
        assert!(v.i1.norm() < 1e-8);
        assert!((v.i3 * xi - 1.0).norm() < 1e-5);
        let xi = C::new(0.3, 0.2);
        let v = s.abel_integrals(xi).unwrap();
        let q = s.u3_integral_quadrature(xi).unwrap().value;
        assert!((v.i1 - q).norm() < 1e-9);
        let a = s.lambda1().unwrap().wp_alpha;
        assert_eq!(v.i2, xi + a * 0.6 * v.i1);
    }

    #[test]
    fn quasi_periodicity_and_p_periods() {
        let s = ctx();
        let lat = s.period_matrices().unwrap();
        let (u3, u1) = (C::new(0.2, -0.1), C::new(0.15, 0.25));
        for k in 1..=3 {
            for sign in [1.0, -1.0] {
                let r = s
                    .quasi_periodicity_residual(&lat, u3, u1, k, sign, false)
                    .unwrap();
                assert!(r < 1e-9, "k={k} sign={sign}: {r}");
            }
            assert!(s.p_periodicity_residual(&lat, u3, u1, k).unwrap() < 1e-9);
        }
        let p = s.three_periodic_p(u3, u1).unwrap();
        assert!((p * s.three_periodic_p(-u3, -u1).unwrap() - 1.0).norm() < 1e-12);
        assert!((p - s.p_function(u3, u1).unwrap()).norm() < 1e-12 * p.norm());
    }

    #[test]
    fn functional_equation_doubles_the_exponent() {
        let s = ctx();
        let r = s
            .functional_equation_check(C::new(0.7, 0.3), C::new(0.3, 0.2), C::new(-0.2, 0.4))
            .unwrap();
        assert!(r.product < 1e-10 && r.parity < 1e-10);
        assert!(r.product_quoted > 1e-2 && r.parity_quoted > 1e-2);
    }

    #[test]
    fn ranks() {
        let cfg = NumericsConfig::default();
        let o = real(0.0);
        let r = rank_report(&G2Params::new(o, real(1.0), o, o), &cfg).unwrap();
        assert_eq!((r.rank, r.partition.clone()), (3, vec![2, 1, 1, 1]));
        assert!(r.wpp_alpha_abs.unwrap() > 1e-3);
        let r = rank_report(&G2Params::new(real(1.0), o, o, o), &cfg).unwrap();
        assert_eq!((r.rank, r.partition), (2, vec![3, 1, 1]));
        assert_eq!(
            rank_report(&G2Params::new(o, o, o, o), &cfg).unwrap().rank,
            0
        );
    }
}
