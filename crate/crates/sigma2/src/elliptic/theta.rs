use std::f64::consts::PI;

use crate::C;

/// θ₁(v | τ) and its first three v-derivatives, summed until the terms underflow.
pub(crate) fn theta1_derivs(v: C, tau: C) -> [C; 4] {
    let i = C::i();
    let mut out = [C::default(); 4];
    for n in 0..40 {
        let k = 2 * n + 1;
        let h = n as f64 + 0.5;
        let weight = (i * PI * tau * h * h).exp() * if n % 2 == 0 { 2.0 } else { -2.0 };
        let arg = v * k as f64;
        let (s, c) = (arg.sin(), arg.cos());
        let kf = k as f64;
        let terms = [s, c * kf, -s * kf * kf, -c * kf * kf * kf];
        let mut biggest = 0.0f64;
        for (o, t) in out.iter_mut().zip(terms) {
            let d = weight * t;
            *o += d;
            biggest = biggest.max(d.norm());
        }
        let scale = out.iter().map(|o| o.norm()).fold(0.0, f64::max);
        if n > 1 && biggest <= 1e-18 * scale {
            break;
        }
    }
    out
}

/// θ₂, θ₃, θ₄ at zero.
pub(crate) fn theta_constants(tau: C) -> (C, C, C) {
    let i = C::i();
    let mut t2 = C::default();
    let mut t3 = C::new(1.0, 0.0);
    let mut t4 = C::new(1.0, 0.0);
    for n in 1..40 {
        let nf = n as f64;
        let a = (i * PI * tau * (nf - 0.5) * (nf - 0.5)).exp() * 2.0;
        let b = (i * PI * tau * nf * nf).exp() * 2.0;
        t2 += a;
        t3 += b;
        t4 += if n % 2 == 0 { b } else { -b };
        if a.norm() + b.norm() < 1e-18 {
            break;
        }
    }
    (t2, t3, t4)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_identity_and_derivative_relation() {
        let tau = C::new(0.2, 1.1);
        let (t2, t3, t4) = theta_constants(tau);
        assert!((t3.powi(4) - t2.powi(4) - t4.powi(4)).norm() < 1e-13);
        // θ₁′(0) = θ₂θ₃θ₄
        let d = theta1_derivs(C::default(), tau);
        assert!((d[1] - t2 * t3 * t4).norm() < 1e-13);
        // derivative consistency by central difference
        let v = C::new(0.3, -0.2);
        let h = 1e-5;
        let fd = (theta1_derivs(v + h, tau)[0] - theta1_derivs(v - h, tau)[0]) / (2.0 * h);
        assert!((fd - theta1_derivs(v, tau)[1]).norm() < 1e-9);
    }
}
