//! Shared numerical plumbing: quadrature, finite differences and polynomial roots.

pub mod diff;
pub mod quad;
pub mod roots;

pub use num_complex::Complex64 as C;

pub(crate) fn real(x: f64) -> C {
    C::new(x, 0.0)
}

pub fn is_finite(z: C) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Relative distance `|a - b| / max(|a|, |b|, floor)`.
pub fn rel_err(a: C, b: C, floor: f64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(floor)
}
