use std::f64::consts::PI;

use super::C;
use crate::{Error, Result};

/// Gauss-Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p0 = 1.0;
                p1 = z;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

#[derive(Debug, Clone, Copy)]
pub struct Estimate {
    pub value: C,
    pub error: f64,
}

/// Adaptive composite Gauss-Legendre integration of `f` along a polygonal path.
///
/// Each segment is compared against the sum over its two halves; segments whose discrepancy
/// exceeds their share of the budget are bisected, down to a fixed depth.
pub fn integrate_path<F>(mut f: F, path: &[C], nodes: usize, tol: f64) -> Result<Estimate>
where
    F: FnMut(C) -> Result<C>,
{
    if path.len() < 2 {
        return Err(Error::InvalidInput("path needs at least two points".into()));
    }
    let rule = gauss_legendre(nodes.max(2));
    let mut total = Estimate {
        value: C::default(),
        error: 0.0,
    };
    for seg in path.windows(2) {
        let whole = panel(&mut f, &rule, seg[0], seg[1])?;
        let e = adapt(&mut f, &rule, seg[0], seg[1], whole, tol, 0)?;
        total.value += e.value;
        total.error += e.error;
    }
    if total.error > tol * total.value.norm().max(1.0) {
        return Err(Error::numerical("quadrature did not converge", total.error));
    }
    Ok(total)
}

fn panel<F: FnMut(C) -> Result<C>>(
    f: &mut F,
    rule: &(Vec<f64>, Vec<f64>),
    a: C,
    b: C,
) -> Result<C> {
    let mid = (a + b) * 0.5;
    let half = (b - a) * 0.5;
    let mut s = C::default();
    for (x, w) in rule.0.iter().zip(&rule.1) {
        s += f(mid + half * *x)? * *w;
    }
    Ok(s * half)
}

fn adapt<F: FnMut(C) -> Result<C>>(
    f: &mut F,
    rule: &(Vec<f64>, Vec<f64>),
    a: C,
    b: C,
    whole: C,
    tol: f64,
    depth: usize,
) -> Result<Estimate> {
    let m = (a + b) * 0.5;
    let left = panel(f, rule, a, m)?;
    let right = panel(f, rule, m, b)?;
    let err = (left + right - whole).norm();
    if err <= tol * (left + right).norm().max(1.0) || depth >= 24 {
        return Ok(Estimate {
            value: left + right,
            error: err,
        });
    }
    let l = adapt(f, rule, a, m, left, tol * 0.5, depth + 1)?;
    let r = adapt(f, rule, m, b, right, tol * 0.5, depth + 1)?;
    Ok(Estimate {
        value: l.value + r.value,
        error: l.error + r.error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::real;

    #[test]
    fn weights_sum_to_two_and_integrate_polynomials() {
        for n in [1, 2, 5, 16, 64] {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13, "n={n}");
            let deg = 2 * n - 1;
            let s: f64 = x
                .iter()
                .zip(&w)
                .map(|(x, w)| w * x.powi(deg as i32 - 1))
                .sum();
            let exact = if (deg - 1) % 2 == 0 {
                2.0 / deg as f64
            } else {
                0.0
            };
            assert!((s - exact).abs() < 1e-13, "n={n}");
        }
    }

    #[test]
    fn contour_integral_of_reciprocal() {
        let path: Vec<C> = (0..=8)
            .map(|k| C::from_polar(1.0, 2.0 * PI * k as f64 / 8.0))
            .collect();
        let e = integrate_path(|z| Ok(z.inv()), &path, 16, 1e-12).unwrap();
        assert!((e.value - C::new(0.0, 2.0 * PI)).norm() < 1e-10);
    }

    #[test]
    fn peaked_integrand_triggers_refinement() {
        let e = integrate_path(
            |z| Ok((z * z + 1e-4).inv()),
            &[real(-1.0), real(1.0)],
            8,
            1e-11,
        )
        .unwrap();
        let exact = 2.0 * (1.0f64 / 1e-2).atan() / 1e-2;
        assert!((e.value.re - exact).abs() < 1e-8 * exact);
    }
}
