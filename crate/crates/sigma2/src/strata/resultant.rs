//! Discriminant of the monic quintic as the Sylvester resultant Res(f, f′), exact over ℚ.
//! Independent of the hard-coded Δ table, so it serves as its oracle.

use num_rational::BigRational;
use num_traits::{One, Zero};

/// Determinant by Gaussian elimination over ℚ.
fn det(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut acc = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            m.swap(p, c);
            acc = -acc;
        }
        let pivot = m[c][c].clone();
        acc *= pivot.clone();
        for r in c + 1..n {
            if m[r][c].is_zero() {
                continue;
            }
            let f = m[r][c].clone() / pivot.clone();
            let (top, bottom) = m.split_at_mut(r);
            for (dst, src) in bottom[0][c..].iter_mut().zip(&top[c][c..]) {
                *dst -= src.clone() * f.clone();
            }
        }
    }
    acc
}

/// Res(f, f′) for f = x⁵ + λ₄x³ + λ₆x² + λ₈x + λ₁₀; for a monic quintic this is the
/// discriminant with no sign or leading-coefficient factor.
pub fn sylvester_discriminant(lambda: &[BigRational; 4]) -> BigRational {
    let z = BigRational::zero;
    let [l4, l6, l8, l10] = lambda.clone();
    let f = [
        BigRational::one(),
        z(),
        l4.clone(),
        l6.clone(),
        l8.clone(),
        l10,
    ];
    let int = |n: i64| BigRational::from_integer(n.into());
    let fp = [int(5), z(), l4 * int(3), l6 * int(2), l8];
    let mut rows = Vec::with_capacity(9);
    for s in 0..4 {
        let mut r = vec![z(); 9];
        for (j, c) in f.iter().enumerate() {
            r[s + j] = c.clone();
        }
        rows.push(r);
    }
    for s in 0..5 {
        let mut r = vec![z(); 9];
        for (j, c) in fp.iter().enumerate() {
            r[s + j] = c.clone();
        }
        rows.push(r);
    }
    det(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strata::tables::delta_poly;

    #[test]
    fn resultant_equals_delta() {
        let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        for lam in [
            [q(1, 2), q(-3, 7), q(2, 1), q(5, 3)],
            [q(0, 1), q(0, 1), q(0, 1), q(1, 1)],
        ] {
            assert_eq!(sylvester_discriminant(&lam), delta_poly().eval(&lam));
        }
        // double root at 0: x²(x³ + x + 1)
        assert!(sylvester_discriminant(&[q(1, 1), q(1, 1), q(0, 1), q(0, 1)]).is_zero());
    }
}
