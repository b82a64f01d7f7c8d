use std::f64::consts::PI;

use super::theta::{theta1_derivs, theta_constants};
use super::{carlson_rf, principal_sqrt, Branch, HalfPeriod, Weierstrass, WpValues};
use crate::numerics::roots::poly_roots;
use crate::numerics::{is_finite, real};
use crate::{Error, NumericsConfig, Result, C};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticCurveParams {
    pub gamma4: C,
    pub gamma6: C,
}

impl EllipticCurveParams {
    pub fn new(gamma4: C, gamma6: C) -> Self {
        EllipticCurveParams { gamma4, gamma6 }
    }

    /// δ(γ) = 4γ₄³ + 27γ₆².
    pub fn delta(&self) -> C {
        self.gamma4.powi(3) * 4.0 + self.gamma6 * self.gamma6 * 27.0
    }
}

/// Relative size of δ below which a curve counts as singular.
const DEGENERATE_REL: f64 = 1e-14;

/// Weierstrass data for one curve. Evaluation runs on a Gauss-reduced basis (|q| ≤ e^{−π√3/2});
/// the public basis (`omega`, `omega_p`) is the same lattice, possibly in another basis.
#[derive(Debug, Clone)]
pub struct EllipticContext {
    pub params: EllipticCurveParams,
    pub g2: C,
    pub g3: C,
    /// Full periods.
    pub omega: C,
    pub omega_p: C,
    /// η = 2ζ(ω/2), η′ = 2ζ(ω′/2).
    pub eta: C,
    pub eta_p: C,
    /// exp(iπω′/ω) of the public basis.
    pub nome: C,
    /// e₁ = ℘(ω/2), e₂ = ℘((ω+ω′)/2), e₃ = ℘(ω′/2).
    pub roots: [C; 3],
    w1: C,
    w3: C,
    eta1: C,
    eta3: C,
    tau: C,
    ln_theta1p0: C,
    pole_tol: f64,
}

fn agm(mut a: C, mut b: C) -> C {
    for _ in 0..100 {
        let an = (a + b) * 0.5;
        let mut bn = (a * b).sqrt();
        if (an - bn).norm() > (an + bn).norm() {
            bn = -bn;
        }
        a = an;
        b = bn;
        if (a - b).norm() <= 1e-16 * a.norm() {
            break;
        }
    }
    a
}

fn gauss_reduce(mut a: C, mut b: C) -> (C, C) {
    if (b / a).im < 0.0 {
        b = -b;
    }
    for _ in 0..200 {
        let n = (b / a).re.round();
        b -= a * n;
        if b.norm() < a.norm() * (1.0 - 1e-12) {
            let t = a;
            a = -b;
            b = t;
        } else {
            break;
        }
    }
    (a, b)
}

fn theta_roots(w1: C, tau: C) -> [C; 3] {
    let (t2, t3, t4) = theta_constants(tau);
    let c = (real(PI) / (w1 * 2.0)).powi(2);
    let (t2, t3, t4) = (t2.powi(4), t3.powi(4), t4.powi(4));
    [
        c * (t3 + t4) / 3.0,
        c * (t2 - t4) / 3.0,
        -c * (t2 + t3) / 3.0,
    ]
}

impl EllipticContext {
    pub fn new(params: EllipticCurveParams) -> Result<Self> {
        Self::with_config(params, &NumericsConfig::default())
    }

    pub fn with_config(params: EllipticCurveParams, cfg: &NumericsConfig) -> Result<Self> {
        let (g4, g6) = (params.gamma4, params.gamma6);
        if !is_finite(g4) || !is_finite(g6) {
            return Err(Error::InvalidInput("non-finite curve parameters".into()));
        }
        let size = 4.0 * g4.norm().powi(3) + 27.0 * g6.norm_sqr();
        if size == 0.0 || params.delta().norm() <= DEGENERATE_REL * size {
            return Err(Error::DegenerateCurve(format!(
                "δ(γ) = {} for γ = ({g4}, {g6})",
                params.delta()
            )));
        }
        let es = poly_roots(&[real(1.0), C::default(), g4, g6])?;
        let mut cands = Vec::new();
        for (i, j, k) in [
            (0, 1, 2),
            (0, 2, 1),
            (1, 0, 2),
            (1, 2, 0),
            (2, 0, 1),
            (2, 1, 0),
        ] {
            let m = agm((es[i] - es[k]).sqrt(), (es[i] - es[j]).sqrt());
            cands.push(real(PI) / (m * 2.0));
        }
        let escale = es.iter().map(|e| e.norm()).fold(0.0, f64::max);
        let mut best: Option<(f64, C, C)> = None;
        for &a in &cands {
            for &b in &cands {
                if (b / a).im.abs() < 1e-9 * (b / a).norm() {
                    continue;
                }
                let (w1, w3) = gauss_reduce(a, b);
                let ee = theta_roots(w1, w3 / w1);
                let err: f64 = ee
                    .iter()
                    .map(|x| {
                        es.iter()
                            .map(|e| (x - e).norm())
                            .fold(f64::INFINITY, f64::min)
                    })
                    .sum();
                if best.is_none_or(|(e, _, _)| err < e) {
                    best = Some((err, w1, w3));
                }
            }
        }
        let (err, mut w1, mut w3) = best
            .ok_or_else(|| Error::numerical("no independent period pair found", f64::INFINITY))?;
        if err > 1e-7 * escale.max(1e-300) {
            return Err(Error::numerical(
                "period pair fails theta-constant check",
                err,
            ));
        }
        if w1.re < 0.0 || (w1.re == 0.0 && w1.im < 0.0) {
            w1 = -w1;
            w3 = -w3;
        }
        let tau = w3 / w1;
        let d0 = theta1_derivs(C::default(), tau);
        let eta1 = -(real(PI * PI) / (w1 * 12.0)) * d0[3] / d0[1];
        let eta3 = (eta1 * w3 - C::new(0.0, PI / 2.0)) / w1;
        let mut ctx = EllipticContext {
            params,
            g2: -g4 * 4.0,
            g3: -g6 * 4.0,
            omega: w1 * 2.0,
            omega_p: w3 * 2.0,
            eta: eta1 * 2.0,
            eta_p: eta3 * 2.0,
            nome: C::default(),
            roots: [C::default(); 3],
            w1,
            w3,
            eta1,
            eta3,
            tau,
            ln_theta1p0: d0[1].ln(),
            pole_tol: cfg.cluster_tol,
        };
        ctx.relabel(&es)?;
        Ok(ctx)
    }

    /// Context for real γ with three real roots, in the basis ω ∈ ℝ₊, ω′ ∈ iℝ₊ (so that
    /// e₁ > e₂ > e₃ are the half-period values in the usual order).
    pub fn real_rectangular(params: EllipticCurveParams, cfg: &NumericsConfig) -> Result<Self> {
        let (g4, g6) = (params.gamma4, params.gamma6);
        let scale = g4.norm().max(g6.norm()).max(1e-300);
        if g4.im.abs() > 1e-14 * scale || g6.im.abs() > 1e-14 * scale || params.delta().re >= 0.0 {
            return Err(Error::NotRealLattice);
        }
        let base = Self::with_config(params, cfg)?;
        let (a, b) = (base.w1 * 2.0, base.w3 * 2.0);
        let is_real = |z: C| z.im.abs() <= 1e-10 * z.norm();
        let is_imag = |z: C| z.re.abs() <= 1e-10 * z.norm();
        let (om, omp) = if is_real(a) && is_imag(b) {
            (a, b)
        } else if is_imag(a) && is_real(b) {
            (b, a)
        } else {
            return Err(Error::NotRealLattice);
        };
        let om = C::new(om.re.abs(), 0.0);
        let omp = C::new(0.0, omp.im.abs());
        base.rebased(om, omp)
    }

    /// Same lattice in another basis. Fails unless (omega, omega_p) is a basis with
    /// Im(omega_p/omega) > 0.
    pub fn rebased(&self, omega: C, omega_p: C) -> Result<Self> {
        let (x1, y1) = self.internal_coords(omega);
        let (x2, y2) = self.internal_coords(omega_p);
        let ints = [x1, y1, x2, y2];
        if ints.iter().any(|v| (v - v.round()).abs() > 1e-8) {
            return Err(Error::InvalidInput("not lattice vectors".into()));
        }
        let det = x1.round() * y2.round() - x2.round() * y1.round();
        if det != 1.0 {
            return Err(Error::InvalidInput(
                "not a positively oriented basis".into(),
            ));
        }
        let mut ctx = self.clone();
        ctx.omega = omega;
        ctx.omega_p = omega_p;
        ctx.eta = self.eval_raw(omega * 0.5)?.zeta * 2.0;
        ctx.eta_p = self.eval_raw(omega_p * 0.5)?.zeta * 2.0;
        let es = self.roots;
        ctx.relabel(&es)?;
        Ok(ctx)
    }

    fn relabel(&mut self, es: &[C]) -> Result<()> {
        self.nome = (C::new(0.0, PI) * self.omega_p / self.omega).exp();
        let mut roots = [C::default(); 3];
        for (slot, h) in roots.iter_mut().zip(HalfPeriod::ALL) {
            let v = self.eval_raw(self.half_period(h))?.wp;
            *slot = es
                .iter()
                .copied()
                .min_by(|a, b| (a - v).norm().total_cmp(&(b - v).norm()))
                .unwrap_or(v);
        }
        self.roots = roots;
        Ok(())
    }

    pub fn gamma(&self) -> (C, C) {
        (self.params.gamma4, self.params.gamma6)
    }

    pub fn half_period(&self, h: HalfPeriod) -> C {
        match h {
            HalfPeriod::Omega => self.omega * 0.5,
            HalfPeriod::OmegaPrime => self.omega_p * 0.5,
            HalfPeriod::Sum => (self.omega + self.omega_p) * 0.5,
        }
    }

    /// e_i = ℘(ω_i).
    pub fn root(&self, h: HalfPeriod) -> C {
        match h {
            HalfPeriod::Omega => self.roots[0],
            HalfPeriod::Sum => self.roots[1],
            HalfPeriod::OmegaPrime => self.roots[2],
        }
    }

    /// η_i = ζ(ω_i).
    pub fn eta_of(&self, h: HalfPeriod) -> C {
        match h {
            HalfPeriod::Omega => self.eta * 0.5,
            HalfPeriod::OmegaPrime => self.eta_p * 0.5,
            HalfPeriod::Sum => (self.eta + self.eta_p) * 0.5,
        }
    }

    fn internal_coords(&self, u: C) -> (f64, f64) {
        let (a, b) = (self.w1 * 2.0, self.w3 * 2.0);
        let x = (b.conj() * u).im / (b.conj() * a).im;
        let y = (a.conj() * u).im / (a.conj() * b).im;
        (x, y)
    }

    /// Real coordinates (x, y) with u = xω + yω′.
    pub fn lattice_coords(&self, u: C) -> (f64, f64) {
        let (a, b) = (self.omega, self.omega_p);
        let x = (b.conj() * u).im / (b.conj() * a).im;
        let y = (a.conj() * u).im / (a.conj() * b).im;
        (x, y)
    }

    /// Representative of u in the period parallelogram centered at 0 (public basis).
    pub fn reduce(&self, u: C) -> C {
        let (x, y) = self.lattice_coords(u);
        u - self.omega * x.round() - self.omega_p * y.round()
    }

    /// u = u0 + 2m·w1 + 2n·w3 in the reduced internal basis.
    fn split(&self, u: C) -> (C, f64, f64) {
        let (x, y) = self.internal_coords(u);
        let (m, n) = (x.round(), y.round());
        (u - self.w1 * (2.0 * m) - self.w3 * (2.0 * n), m, n)
    }

    fn ln_sigma_cell(&self, u0: C, th: C) -> C {
        if th.norm() == 0.0 {
            return C::new(f64::NEG_INFINITY, 0.0);
        }
        (self.w1 * 2.0 / PI).ln() + self.eta1 * u0 * u0 / (self.w1 * 2.0) + th.ln()
            - self.ln_theta1p0
    }

    /// Evaluation without the pole-radius guard (used for half-periods during setup).
    fn eval_raw(&self, u: C) -> Result<WpValues> {
        let (u0, m, n) = self.split(u);
        let s = real(PI) / (self.w1 * 2.0);
        let v = u0 * s;
        let th = theta1_derivs(v, self.tau);
        if th[0].norm() == 0.0 {
            return Err(Error::PoleAtArgument(format!("{u} is a lattice point")));
        }
        let r1 = th[1] / th[0];
        let r2 = th[2] / th[0];
        let r3 = th[3] / th[0];
        let big_eta = self.eta1 * (2.0 * m) + self.eta3 * (2.0 * n);
        let omega = self.w1 * (2.0 * m) + self.w3 * (2.0 * n);
        let parity = (m + n + m * n).rem_euclid(2.0);
        let ln_sigma =
            self.ln_sigma_cell(u0, th[0]) + big_eta * (u0 + omega * 0.5) + C::new(0.0, PI * parity);
        let zeta = self.eta1 * u0 / self.w1 + s * r1 + big_eta;
        let wp = -self.eta1 / self.w1 - s * s * (r2 - r1 * r1);
        let wp_prime = -(s * s * s) * (r3 - r2 * r1 * 3.0 + r1 * r1 * r1 * 2.0);
        Ok(WpValues {
            ln_sigma,
            zeta,
            wp,
            wp_prime,
        })
    }

    /// σ with characteristic: exp(−uη_i)σ(u+ω_i)/σ(ω_i).
    pub fn sigma_char(&self, u: C, h: HalfPeriod) -> Result<C> {
        let wi = self.half_period(h);
        Ok((self.ln_sigma(u + wi)? - self.ln_sigma(wi)? - u * self.eta_of(h)).exp())
    }

    /// A preimage α of X under ℘, reduced to the period parallelogram; `Branch::Principal`
    /// fixes ℘′(α) = −2√(X³+γ₄X+γ₆).
    pub fn invert_wp(&self, x: C, branch: Branch) -> Result<C> {
        if !is_finite(x) {
            return Err(Error::InvalidInput("non-finite X".into()));
        }
        let (g4, g6) = self.gamma();
        let scale = 1.0 + self.roots.iter().map(|e| e.norm()).fold(0.0, f64::max);
        for h in HalfPeriod::ALL {
            if (x - self.root(h)).norm() <= 1e-13 * scale {
                return Ok(self.reduce(self.half_period(h)));
            }
        }
        let mut seeds = vec![];
        if let Ok(s) = carlson_rf(x - self.roots[0], x - self.roots[1], x - self.roots[2]) {
            seeds.push(s);
        }
        for i in 1..4 {
            for j in 0..4 {
                seeds.push(self.omega * (i as f64 / 8.0) + self.omega_p * (j as f64 / 8.0));
            }
        }
        let mut best: Option<(f64, C)> = None;
        for seed in seeds {
            let Ok(a) = self.newton_wp(seed, x) else {
                continue;
            };
            let r = (self.wp(a)? - x).norm();
            if best.is_none_or(|(b, _)| r < b) {
                best = Some((r, a));
            }
            if r <= 1e-13 * x.norm().max(1.0) {
                break;
            }
        }
        let (res, mut a) =
            best.ok_or_else(|| Error::numerical("℘ inversion failed", f64::INFINITY))?;
        if res > 1e-9 * x.norm().max(1.0) {
            return Err(Error::numerical("℘ inversion did not converge", res));
        }
        let mut d = -principal_sqrt(x * x * x + g4 * x + g6) * 2.0;
        if branch == Branch::Opposite {
            d = -d;
        }
        let p = self.wp_prime(a)?;
        if (p - d).norm() > (p + d).norm() {
            a = -a;
        }
        Ok(self.reduce(a))
    }

    fn newton_wp(&self, mut a: C, x: C) -> Result<C> {
        let recip = x.norm() > 1.0;
        for _ in 0..60 {
            let v = self.eval(a)?;
            let (g, dg) = if recip {
                (v.wp.inv() - x.inv(), -v.wp_prime / (v.wp * v.wp))
            } else {
                (v.wp - x, v.wp_prime)
            };
            if dg.norm() == 0.0 || !is_finite(g) {
                break;
            }
            let step = g / dg;
            a -= step;
            if step.norm() <= 1e-15 * a.norm().max(1e-3) {
                return Ok(a);
            }
        }
        Ok(a)
    }
}

impl Weierstrass for EllipticContext {
    fn gamma4(&self) -> C {
        self.params.gamma4
    }
    fn gamma6(&self) -> C {
        self.params.gamma6
    }

    fn eval(&self, u: C) -> Result<WpValues> {
        if !is_finite(u) {
            return Err(Error::InvalidInput("non-finite argument".into()));
        }
        let (u0, _, _) = self.split(u);
        if u0.norm() < self.pole_tol {
            return Err(Error::PoleAtArgument(format!(
                "{u} is within {} of a lattice point",
                self.pole_tol
            )));
        }
        self.eval_raw(u)
    }

    fn ln_sigma(&self, u: C) -> Result<C> {
        if !is_finite(u) {
            return Err(Error::InvalidInput("non-finite argument".into()));
        }
        let (u0, m, n) = self.split(u);
        let th = theta1_derivs(u0 * (real(PI) / (self.w1 * 2.0)), self.tau)[0];
        let base = self.ln_sigma_cell(u0, th);
        if m == 0.0 && n == 0.0 {
            return Ok(base);
        }
        let big_eta = self.eta1 * (2.0 * m) + self.eta3 * (2.0 * n);
        let omega = self.w1 * (2.0 * m) + self.w3 * (2.0 * n);
        let parity = (m + n + m * n).rem_euclid(2.0);
        Ok(base + big_eta * (u0 + omega * 0.5) + C::new(0.0, PI * parity))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::Weierstrass;

    fn ctx(g4: C, g6: C) -> EllipticContext {
        EllipticContext::new(EllipticCurveParams::new(g4, g6)).unwrap()
    }

    #[test]
    fn legendre_and_root_labels() {
        let e = ctx(C::new(0.3, 0.2), C::new(-0.5, 0.1));
        let leg = e.eta * e.omega_p - e.eta_p * e.omega;
        assert!((leg - C::new(0.0, 2.0 * PI)).norm() < 1e-12);
        assert!((e.omega_p / e.omega).im > 0.0);
        for h in HalfPeriod::ALL {
            assert!((e.wp(e.half_period(h)).unwrap() - e.root(h)).norm() < 1e-12);
            assert!(e.wp_prime(e.half_period(h)).unwrap().norm() < 1e-10);
        }
    }

    #[test]
    fn cube_roots_of_minus_one() {
        let e = ctx(C::default(), real(1.0));
        let mut want = [
            real(-1.0),
            C::new(0.5, 3f64.sqrt() / 2.0),
            C::new(0.5, -(3f64.sqrt()) / 2.0),
        ];
        for r in e.roots {
            let k = (0..want.len())
                .min_by(|&a, &b| (want[a] - r).norm().total_cmp(&(want[b] - r).norm()))
                .unwrap();
            assert!((want[k] - r).norm() < 1e-13);
            want[k] = C::new(f64::NAN, 0.0);
        }
    }

    #[test]
    fn laurent_oracle_at_small_argument() {
        let e = ctx(C::default(), real(1.0));
        let u = real(0.1);
        let laurent = u.powi(-2) + e.g3 / 28.0 * u.powi(4);
        assert!((e.wp(u).unwrap() - laurent).norm() < 1e-8);
        let e = ctx(C::new(0.7, -0.4), C::new(0.2, 0.9));
        let u = C::new(0.02, 0.01);
        let laurent = u.powi(-2) + e.g2 / 20.0 * u.powi(2) + e.g3 / 28.0 * u.powi(4);
        assert!((e.wp(u).unwrap() - laurent).norm() < 1e-9);
        let sig = u - e.g2 / 240.0 * u.powi(5) - e.g3 / 840.0 * u.powi(7);
        assert!(
            (e.sigma(u).unwrap() - sig).norm() < 1e-14,
            "{}",
            (e.sigma(u).unwrap() - sig).norm()
        );
    }

    #[test]
    fn quasi_periodicity_far_from_cell() {
        let e = ctx(C::new(-0.6, 0.3), C::new(0.4, -0.2));
        let u = C::new(0.17, -0.08);
        for (m, n) in [(1.0, 0.0), (0.0, 1.0), (2.0, -3.0), (-1.0, 1.0)] {
            let om = e.omega * m + e.omega_p * n;
            let eta = e.eta * m + e.eta_p * n;
            let sign = if (m + n + m * n) as i64 % 2 == 0 {
                1.0
            } else {
                -1.0
            };
            let lhs = e.sigma(u + om).unwrap();
            let rhs = e.sigma(u).unwrap() * sign * (eta * (u + om * 0.5)).exp();
            assert!((lhs - rhs).norm() < 1e-11 * rhs.norm().max(1.0), "{m},{n}");
            assert!((e.zeta(u + om).unwrap() - e.zeta(u).unwrap() - eta).norm() < 1e-11);
        }
    }

    #[test]
    fn pole_guard_and_sigma_zero() {
        let e = ctx(C::new(0.5, 0.0), C::new(0.1, 0.0));
        assert!(matches!(e.wp(e.omega), Err(Error::PoleAtArgument(_))));
        assert_eq!(e.sigma(e.omega_p).unwrap(), C::default());
    }

    #[test]
    fn degenerate_curve_rejected() {
        let a = C::new(0.4, 0.1);
        let p = EllipticCurveParams::new(a * a * -3.0, a.powi(3) * 2.0);
        assert!(matches!(
            EllipticContext::new(p),
            Err(Error::DegenerateCurve(_))
        ));
    }

    #[test]
    fn lemniscatic_roots() {
        let e = ctx(real(1.0), C::default());
        let mut rs: Vec<C> = e.roots.to_vec();
        rs.sort_by(|a, b| a.im.total_cmp(&b.im));
        assert!((rs[0] - C::new(0.0, -1.0)).norm() < 1e-13);
        assert!(rs[1].norm() < 1e-13);
        assert!((rs[2] - C::new(0.0, 1.0)).norm() < 1e-13);
    }

    #[test]
    fn real_rectangular_basis() {
        let p = EllipticCurveParams::new(real(-1.0), real(0.2));
        let e = EllipticContext::real_rectangular(p, &NumericsConfig::default()).unwrap();
        assert!(e.omega.im == 0.0 && e.omega.re > 0.0);
        assert!(e.omega_p.re == 0.0 && e.omega_p.im > 0.0);
        assert!(e.roots[0].re > e.roots[1].re && e.roots[1].re > e.roots[2].re);
        assert!((e.eta * e.omega_p - e.eta_p * e.omega - C::new(0.0, 2.0 * PI)).norm() < 1e-12);
        assert!(e.eta.im.abs() < 1e-12 && e.eta_p.re.abs() < 1e-12);
    }

    #[test]
    fn invert_wp_branch_contract() {
        let e = ctx(C::new(0.3, -0.2), C::new(-0.1, 0.4));
        let (g4, g6) = e.gamma();
        for x in [
            C::new(0.3, 0.2),
            C::new(-2.0, 1.0),
            C::new(15.0, -3.0),
            C::new(0.01, 0.0),
        ] {
            let a = e.invert_wp(x, Branch::Principal).unwrap();
            assert!((e.wp(a).unwrap() - x).norm() < 1e-10 * x.norm().max(1.0));
            let d = -(x * x * x + g4 * x + g6).sqrt() * 2.0;
            assert!((e.wp_prime(a).unwrap() - d).norm() < 1e-9 * d.norm().max(1.0));
            let b = e.invert_wp(x, Branch::Opposite).unwrap();
            assert!((e.reduce(a + b)).norm() < 1e-9);
        }
        let h = e.invert_wp(e.roots[0], Branch::Principal).unwrap();
        assert!((e.reduce(h - e.omega * 0.5)).norm() < 1e-12);
    }

    #[test]
    fn sigma_char_even_and_normalized() {
        let e = ctx(real(1.0), C::default());
        let u = real(0.3);
        for h in HalfPeriod::ALL {
            assert!((e.sigma_char(C::default(), h).unwrap() - 1.0).norm() < 1e-14);
            assert!((e.sigma_char(u, h).unwrap() - e.sigma_char(-u, h).unwrap()).norm() < 1e-13);
        }
        let direct = (-u * e.eta * 0.5).exp() * e.sigma(u + e.omega * 0.5).unwrap()
            / e.sigma(e.omega * 0.5).unwrap();
        assert!((e.sigma_char(u, HalfPeriod::Omega).unwrap() - direct).norm() < 1e-13);
    }
}
