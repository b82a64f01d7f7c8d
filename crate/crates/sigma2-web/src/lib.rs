//! wasm-bindgen exports for the static demo page in `www/`. Each export has a plain Rust twin
//! so the numbers can be checked natively.

use sigma2::elliptic::{EllipticContext, EllipticCurveParams};
use sigma2::sigma::DegenSigmaContext;
use sigma2::spectral::{real_family, Family};
use sigma2::{NumericsConfig, C};
use wasm_bindgen::prelude::*;

fn lambda1(a2: [f64; 2], g4: [f64; 2], g6: [f64; 2]) -> sigma2::Result<DegenSigmaContext> {
    let g = EllipticCurveParams::new(C::new(g4[0], g4[1]), C::new(g6[0], g6[1]));
    DegenSigmaContext::on_lambda1(C::new(a2[0], a2[1]), g, &NumericsConfig::default())
}

/// |σ(u₃, u₁)| on an n×n real grid over [−extent, extent]², row-major in u₃.
pub fn sigma_map(
    a2: [f64; 2],
    g4: [f64; 2],
    g6: [f64; 2],
    n: usize,
    extent: f64,
) -> sigma2::Result<Vec<f64>> {
    if n < 2 {
        return Err(sigma2::Error::InvalidInput(
            "grid needs at least 2 points per side".into(),
        ));
    }
    let ctx = lambda1(a2, g4, g6)?;
    let at = |i: usize| -extent + 2.0 * extent * i as f64 / (n - 1) as f64;
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            out.push(ctx.sigma2(C::new(at(i), 0.0), C::new(at(j), 0.0))?.norm());
        }
    }
    Ok(out)
}

/// Real potential with α = ω/2 + t·ω′/2 (`edge = true`) or α = t·ω′/2, the two segments where
/// ℘′(α) is imaginary. Returns interleaved (x, Re V, Im V).
pub fn potential_samples(
    g4: f64,
    g6: f64,
    t: f64,
    edge: bool,
    v2: bool,
    phi: f64,
    points: usize,
) -> sigma2::Result<Vec<f64>> {
    let cfg = NumericsConfig::default();
    let e = EllipticContext::real_rectangular(
        EllipticCurveParams::new(C::new(g4, 0.0), C::new(g6, 0.0)),
        &cfg,
    )?;
    let alpha = e.omega_p * (0.5 * t) + if edge { e.omega * 0.5 } else { C::default() };
    let grid: Vec<f64> = (0..points)
        .map(|i| (i as f64 + 0.5) / points as f64)
        .collect();
    let fam = if v2 { Family::V2 } else { Family::V1 };
    let s = real_family(&e, alpha, fam, phi, &grid, &cfg)?;
    Ok(s.grid
        .iter()
        .zip(&s.values)
        .flat_map(|(x, v)| [*x, v.re, v.im])
        .collect())
}

/// Jacobi inversion on Λ₁: (X₁, X₂, Y₁, Y₂) as re/im pairs, then the curve residual.
pub fn invert_point(
    a2: [f64; 2],
    g4: [f64; 2],
    g6: [f64; 2],
    u1: [f64; 2],
    u3: [f64; 2],
) -> sigma2::Result<Vec<f64>> {
    let ctx = lambda1(a2, g4, g6)?;
    let r = ctx.solve_inversion(C::new(u1[0], u1[1]), C::new(u3[0], u3[1]))?;
    let mut out: Vec<f64> = r.x.iter().chain(&r.y).flat_map(|z| [z.re, z.im]).collect();
    out.push(r.curve_residual);
    Ok(out)
}

fn js(e: sigma2::Error) -> JsError {
    JsError::new(&e.to_string())
}

fn pair(v: &[f64], k: usize) -> Result<[f64; 2], JsError> {
    v.get(2 * k..2 * k + 2)
        .map(|s| [s[0], s[1]])
        .ok_or_else(|| JsError::new("moduli array too short"))
}

/// `moduli` = [a2re, a2im, g4re, g4im, g6re, g6im].
#[wasm_bindgen(js_name = sigmaMap)]
pub fn sigma_map_js(moduli: &[f64], n: usize, extent: f64) -> Result<Vec<f64>, JsError> {
    sigma_map(
        pair(moduli, 0)?,
        pair(moduli, 1)?,
        pair(moduli, 2)?,
        n,
        extent,
    )
    .map_err(js)
}

#[wasm_bindgen(js_name = potential)]
pub fn potential_js(
    g4: f64,
    g6: f64,
    t: f64,
    edge: bool,
    v2: bool,
    phi: f64,
    points: usize,
) -> Result<Vec<f64>, JsError> {
    potential_samples(g4, g6, t, edge, v2, phi, points).map_err(js)
}

/// `moduli` as for `sigmaMap`; `u` = [U1re, U1im, U3re, U3im].
#[wasm_bindgen(js_name = invert)]
pub fn invert_js(moduli: &[f64], u: &[f64]) -> Result<Vec<f64>, JsError> {
    invert_point(
        pair(moduli, 0)?,
        pair(moduli, 1)?,
        pair(moduli, 2)?,
        pair(u, 0)?,
        pair(u, 1)?,
    )
    .map_err(js)
}

#[cfg(test)]
mod tests {
    use super::*;

    const A2: [f64; 2] = [0.3, -0.1];
    const G4: [f64; 2] = [0.4, 0.2];
    const G6: [f64; 2] = [-0.2, 0.5];

    #[test]
    fn sigma_map_is_finite_and_vanishes_at_origin() {
        let m = sigma_map(A2, G4, G6, 21, 1.0).unwrap();
        assert_eq!(m.len(), 441);
        assert!(m.iter().all(|v| v.is_finite()));
        assert!(m[10 * 21 + 10] < 1e-14);
    }

    #[test]
    fn potential_is_real_on_edge() {
        let s = potential_samples(-0.7, 0.1, 0.4, true, false, 0.25, 64).unwrap();
        assert_eq!(s.len(), 192);
        for c in s.chunks(3) {
            assert!(c[2].abs() < 1e-8 * (1.0 + c[1].abs()));
        }
    }

    #[test]
    fn inversion_recovers_forward_points() {
        let ctx = lambda1(A2, G4, G6).unwrap();
        let (x1, x2) = (C::new(0.3, 0.1), C::new(-0.2, 0.25));
        let (u1, u3) = ctx.forward_integrals(x1, x2).unwrap();
        let r = invert_point(A2, G4, G6, [u1.re, u1.im], [u3.re, u3.im]).unwrap();
        assert_eq!(r.len(), 9);
        assert!(r[8] < 1e-9);
    }

    #[test]
    fn bad_grid_is_an_error() {
        assert!(sigma_map(A2, G4, G6, 1, 1.0).is_err());
    }
}
