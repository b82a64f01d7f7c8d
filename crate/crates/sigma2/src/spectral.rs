//! Baker eigenfunctions and Schrödinger potentials on Λ₁: (∂²_{U₁} − 𝒰)ψ = ℘(B₁)ψ with
//! 𝒰 = 2𝒮² − 2℘(U₁) − 2A, a KdV solution in (U₃, U₁), and its real one-parameter families.

use crate::elliptic::{EllipticContext, RationalLimit, Weierstrass};
use crate::lattice::{mat2_inverse, mat2_mul, Mat2, PeriodLattice};
use crate::numerics::diff::Differ;
use crate::sigma::{s_route_generic, DegenSigmaContext};
use crate::{Error, NumericsConfig, Result, C};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    V1,
    V2,
}

/// Point spectrum {℘(α)} plus the bands [e₃, e₂] and [e₁, ∞).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spectrum {
    pub point: f64,
    pub band1: [f64; 2],
    pub band2_lo: f64,
}

/// Where α sits on the boundary of the rectangle 0, ω/2, ω/2+ω′/2, ω′/2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlphaSegment {
    /// (0, ω/2); ℘′(α) real.
    Real,
    /// (ω/2, ω/2 + ω′/2); ℘′(α) imaginary.
    RightEdge,
    /// (ω′/2, ω/2 + ω′/2); ℘′(α) real.
    TopEdge,
    /// (0, ω′/2); ℘′(α) imaginary.
    Imaginary,
}

impl AlphaSegment {
    pub fn wpp_is_imaginary(self) -> bool {
        matches!(self, AlphaSegment::RightEdge | AlphaSegment::Imaginary)
    }
}

#[derive(Debug, Clone)]
pub struct PotentialSample {
    pub family: Family,
    pub phi: f64,
    pub segment: AlphaSegment,
    pub grid: Vec<f64>,
    pub values: Vec<C>,
    pub max_imag: f64,
    /// Largest |V| on the grid; unbounded families show up as large values near poles.
    pub max_abs: f64,
    pub spectrum: Spectrum,
}

/// β = (I₁, I₂) and ρ = (I₄, I₃) at ξ_b, with the quoted and the derived quasi-momenta.
#[derive(Debug, Clone)]
pub struct QuasiMomenta {
    pub beta: [C; 2],
    pub rho: [C; 2],
    /// Sign s of the exponential factor exp{s(ρ₀u₃ + ρ₁u₁)} in Φ.
    pub sign: f64,
    /// M_k = ρ + βᵗK as quoted.
    pub quoted: [[C; 2]; 3],
    /// M_k = sρ − (Sβ)ᵗK with S the index swap.
    pub derived: [[C; 2]; 3],
    pub det_k1: C,
}

impl DegenSigmaContext {
    fn baker_data(&self) -> Result<&crate::sigma::Lambda1Data> {
        let d = self.lambda1_or_err()?;
        if d.branch_point.is_some() {
            return Err(Error::SingularConfiguration(
                "Baker function needs ℘′(α) ≠ 0".into(),
            ));
        }
        Ok(d)
    }

    /// B₃ = I₁(B₁) and the exponent ζ(B₁) − (A/5)B₁ − (9/25)A²B₃ that makes ψ an eigenfunction.
    pub fn baker_parameters(&self, b1: C) -> Result<(C, C)> {
        let d = self.baker_data()?;
        let a = d.wp_alpha;
        let b3 = self.u3_integral(b1)?;
        let rate = d.ectx.zeta(b1)? - a * 0.2 * b1 - a * a * 0.36 * b3;
        Ok((b3, rate))
    }

    /// ψ(U₁) = 𝒵(B₃ − U₃, B₁ − U₁)/𝒵(U₃, U₁)·e^{U₁(ζ(B₁) − (A/5)B₁ − (9/25)A²B₃)}, with
    /// 𝒵(U₃, U₁) = σ(U₃, U₁ + (3/5)AU₃).
    pub fn baker_psi(&self, b1: C, big_u3: C, big_u1: C) -> Result<C> {
        let (b3, rate) = self.baker_parameters(b1)?;
        self.baker_psi_with(b1, b3, rate, big_u3, big_u1)
    }

    fn baker_psi_with(&self, b1: C, b3: C, rate: C, big_u3: C, big_u1: C) -> Result<C> {
        let den = self.sigma2_u(big_u3, big_u1)?;
        if den.norm() < 1e-300 {
            return Err(Error::SingularConfiguration("𝒵(U₃, U₁) = 0".into()));
        }
        Ok(self.sigma2_u(b3 - big_u3, b1 - big_u1)? / den * (rate * big_u1).exp())
    }

    /// The quoted form: numerator σ(B₃ − U₃, B₁ − U₁ + (3/5)AU₃) and factor e^{U₁ϖ}.
    pub fn baker_psi_quoted(&self, b1: C, big_u3: C, big_u1: C) -> Result<C> {
        let d = self.baker_data()?;
        let (a, p, z) = (d.wp_alpha, d.wpp_alpha, d.zeta_alpha);
        let e = &d.ectx;
        let b3 = self.u3_integral(b1)?;
        let log_q = ((e.ln_sigma(b1 - d.alpha)? - e.ln_sigma(b1 + d.alpha)?).exp()).ln();
        let varpi =
            -e.zeta(b1)? + a * 0.2 * (1.0 + z * a * 3.6 / p) * b1 + a * a * 0.36 / p * log_q;
        let shift = a * 0.6 * big_u3;
        let den = self.sigma2(big_u3, big_u1 + shift)?;
        Ok(self.sigma2(b3 - big_u3, b1 - big_u1 + shift)? / den * (big_u1 * varpi).exp())
    }

    /// |ψ″ − (𝒰 + ℘(B₁))ψ| / |ψ|, ψ″ by finite differences in U₁.
    pub fn eigen_residual(&self, b1: C, big_u3: C, big_u1: C, quoted: bool) -> Result<f64> {
        let psi = |u: C| {
            if quoted {
                self.baker_psi_quoted(b1, big_u3, u)
            } else {
                self.baker_psi(b1, big_u3, u)
            }
        };
        let diff = Differ {
            levels: 4,
            ..Differ::from(&self.cfg)
        };
        let d2 = diff.derivative(psi, big_u1, 2)?;
        let p = psi(big_u1)?;
        let energy = self.lambda1_or_err()?.ectx.wp(b1)?;
        let pot = self.potential_u(big_u3, big_u1)?;
        let scale = d2.norm().max(((pot + energy) * p).norm()).max(p.norm());
        Ok((d2 - (pot + energy) * p).norm() / scale)
    }

    /// W(ψ₊, ψ₋) = ψ₊ψ₋′ − ψ₊′ψ₋ for the pair B₁, −B₁.
    pub fn wronskian(&self, b1: C, big_u3: C, big_u1: C) -> Result<C> {
        let (b3, rate) = self.baker_parameters(b1)?;
        let plus = |u: C| self.baker_psi_with(b1, b3, rate, big_u3, u);
        let minus = |u: C| self.baker_psi_with(-b1, -b3, -rate, big_u3, u);
        let diff = Differ::from(&self.cfg);
        let (p, m) = (plus(big_u1)?, minus(big_u1)?);
        Ok(p * diff.derivative(minus, big_u1, 1)? - diff.derivative(plus, big_u1, 1)? * m)
    }

    /// 𝒰 = 2𝒮² − 2℘(U₁) − 2A.
    pub fn potential_u(&self, big_u3: C, big_u1: C) -> Result<C> {
        let d = self.lambda1_or_err()?;
        let r = self.s_route(big_u3, big_u1)?;
        Ok(r.s * r.s * 2.0 - r.w * 2.0 - d.wp_alpha * 2.0)
    }

    /// 𝒰 = 2𝒫₁₁ − (2/5)A with 𝒫₁₁ computed without 𝒮.
    pub fn potential_u_p_route(&self, big_u3: C, big_u1: C) -> Result<C> {
        let d = self.lambda1_or_err()?;
        let (p11, _) = self.log_derivatives_p_route(big_u3, big_u1)?;
        Ok(p11 * 2.0 - d.wp_alpha * 0.4)
    }

    /// 𝒰 = 2(X₁ + X₂) − 2A from the solved inversion problem.
    pub fn potential_u_inversion(&self, big_u3: C, big_u1: C) -> Result<C> {
        let d = self.lambda1_or_err()?;
        let inv = self.solve_inversion(big_u1, big_u3)?;
        Ok(inv.e1 * 2.0 - d.wp_alpha * 2.0)
    }

    /// |4∂₃𝒰 − ∂₁³𝒰 + 6𝒰∂₁𝒰| relative to the largest of the three terms.
    pub fn kdv_residual(&self, big_u3: C, big_u1: C) -> Result<f64> {
        let f = |v: &[C]| self.potential_u(v[0], v[1]);
        let x = [big_u3, big_u1];
        let diff = Differ {
            levels: 4,
            ..Differ::from(&self.cfg)
        };
        let (d3, _) = diff.partial(f, &x, &[1, 0])?;
        let (d1, _) = diff.partial(f, &x, &[0, 1])?;
        let (d111, _) = diff.partial(f, &x, &[0, 3])?;
        let u = f(&x)?;
        let terms = [d3 * 4.0, d111, u * d1 * 6.0];
        let scale = terms
            .iter()
            .map(|t| t.norm())
            .fold(f64::MIN_POSITIVE, f64::max);
        Ok((terms[0] - terms[1] + terms[2]).norm() / scale)
    }

    /// Quasi-momenta for Φ(u) = σ(β − u)/σ(u)·exp{s(ρ₀u₃ + ρ₁u₁)} with β, ρ taken from the
    /// Abel integrals at ξ_b.
    pub fn quasi_momenta(&self, lat: &PeriodLattice, xi_b: C, sign: f64) -> Result<QuasiMomenta> {
        let v = self.abel_integrals(xi_b)?;
        let (beta, rho) = ([v.i1, v.i2], [v.i4, v.i3]);
        let k1_inv = mat2_inverse(&lat.k1)?;
        let k3k1 = mat2_mul(&lat.k3, &k1_inv);
        let mut kk: Mat2 = lat.k2;
        for i in 0..2 {
            for j in 0..2 {
                kk[i][j] += k3k1[i][j];
            }
        }
        let ks = [lat.k2, kk, kk];
        let swapped = [beta[1], beta[0]];
        let quoted = ks.map(|k| [0, 1].map(|i| rho[i] + beta[0] * k[0][i] + beta[1] * k[1][i]));
        let derived =
            ks.map(|k| [0, 1].map(|i| rho[i] * sign - swapped[0] * k[0][i] - swapped[1] * k[1][i]));
        let det_k1 = lat.k1[0][0] * lat.k1[1][1] - lat.k1[0][1] * lat.k1[1][0];
        Ok(QuasiMomenta {
            beta,
            rho,
            sign,
            quoted,
            derived,
            det_k1,
        })
    }

    pub fn bloch_function(&self, qm: &QuasiMomenta, u3: C, u1: C) -> Result<C> {
        let den = self.sigma2(u3, u1)?;
        if den.norm() < 1e-300 {
            return Err(Error::SingularConfiguration("σ(u) = 0".into()));
        }
        let expo = (qm.rho[0] * u3 + qm.rho[1] * u1) * qm.sign;
        Ok(self.sigma2(qm.beta[0] - u3, qm.beta[1] - u1)? / den * expo.exp())
    }

    /// |Φ(u + T_k)/Φ(u) / e^{M_k·T_k} − 1| for the quoted or the derived M_k.
    pub fn bloch_residual(
        &self,
        lat: &PeriodLattice,
        qm: &QuasiMomenta,
        u3: C,
        u1: C,
        k: usize,
        quoted: bool,
    ) -> Result<f64> {
        let tk = lat.t_col(k);
        let m = if quoted {
            qm.quoted[k - 1]
        } else {
            qm.derived[k - 1]
        };
        let ratio =
            self.bloch_function(qm, u3 + tk[0], u1 + tk[1])? / self.bloch_function(qm, u3, u1)?;
        Ok((ratio / (m[0] * tk[0] + m[1] * tk[1]).exp() - 1.0).norm())
    }
}

/// The potential in the γ = 0 limit through the same 𝒮 formula, and its closed form from
/// ξ₁ξ₂ = −α² + αU₁coth(U₃/α³ + U₁/α).
pub fn rational_potential(alpha: C, big_u3: C, big_u1: C) -> Result<(C, C)> {
    let w = RationalLimit;
    let r = s_route_generic(&w, alpha, big_u3, big_u1, 1e-12)?;
    let a = w.wp(alpha)?;
    let direct = r.s * r.s * 2.0 - r.w * 2.0 - a * 2.0;
    let (e1, _) = crate::inversion::rational_closed_form(alpha, big_u1, big_u3);
    Ok((direct, e1 * 2.0 - a * 2.0))
}

/// Locates α on the boundary of the real period rectangle.
pub fn alpha_segment(ectx: &EllipticContext, alpha: C) -> Result<AlphaSegment> {
    let (w, wp) = (ectx.omega * 0.5, ectx.omega_p * 0.5);
    if ectx.omega.im.abs() > 1e-12 * ectx.omega.norm()
        || ectx.omega_p.re.abs() > 1e-12 * ectx.omega_p.norm()
    {
        return Err(Error::NotRealLattice);
    }
    let (x, y) = (alpha.re / w.re, alpha.im / wp.im);
    let eps = 1e-9;
    let inside = |t: f64| t > eps && t < 1.0 - eps;
    let near = |t: f64, c: f64| (t - c).abs() <= eps;
    if near(y, 0.0) && inside(x) {
        Ok(AlphaSegment::Real)
    } else if near(x, 1.0) && inside(y) {
        Ok(AlphaSegment::RightEdge)
    } else if near(y, 1.0) && inside(x) {
        Ok(AlphaSegment::TopEdge)
    } else if near(x, 0.0) && inside(y) {
        Ok(AlphaSegment::Imaginary)
    } else {
        Err(Error::NotRealAlpha)
    }
}

/// Samples 𝒱₁(x) = 𝒰(U₃, ωx)/ω² or 𝒱₂(x) = 𝒰(U₃ + (ζ(α)ω′ − αη′)/℘′(α), ωx + ω′/2)/ω²
/// with U₃ = 2πiφ/℘′(α).
pub fn real_family(
    ectx: &EllipticContext,
    alpha: C,
    family: Family,
    phi: f64,
    grid: &[f64],
    cfg: &NumericsConfig,
) -> Result<PotentialSample> {
    let segment = alpha_segment(ectx, alpha)?;
    let ctx = DegenSigmaContext::with_alpha(ectx.clone(), alpha, cfg)?;
    let d = ctx.baker_data()?;
    let (w, wp) = (ectx.omega, ectx.omega_p);
    let mut big_u3 = C::new(0.0, 2.0 * std::f64::consts::PI * phi) / d.wpp_alpha;
    let offset = match family {
        Family::V1 => C::default(),
        Family::V2 => {
            big_u3 += (d.zeta_alpha * wp - d.alpha * ectx.eta_p) / d.wpp_alpha;
            wp * 0.5
        }
    };
    let values = grid
        .iter()
        .map(|&x| Ok(ctx.potential_u(big_u3, w * x + offset)? / (w * w)))
        .collect::<Result<Vec<C>>>()?;
    let max_imag = values.iter().map(|v| v.im.abs()).fold(0.0, f64::max);
    let max_abs = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let [e1, e2, e3] = ectx.roots;
    Ok(PotentialSample {
        family,
        phi,
        segment,
        grid: grid.to_vec(),
        values,
        max_imag,
        max_abs,
        spectrum: Spectrum {
            point: d.wp_alpha.re,
            band1: [e3.re, e2.re],
            band2_lo: e1.re,
        },
    })
}
