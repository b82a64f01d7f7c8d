use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Num;

use crate::C;

/// Scalars the polynomial tables can be evaluated in: complex floats for numerics, big
/// rationals for exact identity checks.
pub trait Scalar: Num + Clone + Neg<Output = Self> {
    fn ratio(num: i64, den: i64) -> Self;

    fn int(n: i64) -> Self {
        Self::ratio(n, 1)
    }

    fn pow(&self, k: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = out * self.clone();
        }
        out
    }
}

impl Scalar for C {
    fn ratio(num: i64, den: i64) -> Self {
        C::new(num as f64 / den as f64, 0.0)
    }
}

impl Scalar for BigRational {
    fn ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Term<const N: usize> {
    pub num: i64,
    pub den: i64,
    pub exp: [u8; N],
}

/// Sparse polynomial in N variables with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly<const N: usize>(pub Vec<Term<N>>);

pub const fn t<const N: usize>(num: i64, exp: [u8; N]) -> Term<N> {
    Term { num, den: 1, exp }
}

pub const fn tq<const N: usize>(num: i64, den: i64, exp: [u8; N]) -> Term<N> {
    Term { num, den, exp }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

impl<const N: usize> Poly<N> {
    pub fn new(terms: &[Term<N>]) -> Self {
        Poly(terms.to_vec())
    }

    pub fn zero() -> Self {
        Poly(vec![])
    }

    pub fn eval<T: Scalar>(&self, x: &[T; N]) -> T {
        let mut acc = T::zero();
        for term in &self.0 {
            let mut m = T::ratio(term.num, term.den);
            for (xi, &e) in x.iter().zip(&term.exp) {
                if e > 0 {
                    m = m * xi.pow(e as u32);
                }
            }
            acc = acc + m;
        }
        acc
    }

    /// Σ |monomial|, the natural scale for a residual that should vanish.
    pub fn magnitude(&self, x: &[C; N]) -> f64 {
        self.0
            .iter()
            .map(|t| {
                let m: f64 = x
                    .iter()
                    .zip(&t.exp)
                    .map(|(xi, &e)| xi.norm().powi(e as i32))
                    .product();
                (t.num as f64 / t.den as f64).abs() * m
            })
            .sum()
    }

    /// Partial derivative in variable `j`.
    pub fn diff(&self, j: usize) -> Self {
        let terms = self
            .0
            .iter()
            .filter(|t| t.exp[j] > 0)
            .map(|t| {
                let mut exp = t.exp;
                exp[j] -= 1;
                let num = t.num * t.exp[j] as i64;
                let g = gcd(num, t.den);
                Term {
                    num: num / g,
                    den: t.den / g,
                    exp,
                }
            })
            .collect();
        Poly(terms)
    }

    /// Weighted degree with the given variable weights, if homogeneous.
    pub fn weighted_degree(&self, weights: [u32; N]) -> Option<u32> {
        let mut degs = self.0.iter().map(|t| {
            t.exp
                .iter()
                .zip(weights)
                .map(|(&e, w)| e as u32 * w)
                .sum::<u32>()
        });
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diff_and_eval() {
        // 3x²y − y³/2
        let p = Poly::new(&[t(3, [2, 1]), tq(-1, 2, [0, 3])]);
        let dy = p.diff(1);
        let x = [BigRational::ratio(2, 3), BigRational::ratio(-1, 5)];
        // ∂y = 3x² − 3y²/2
        let want = BigRational::int(3) * x[0].pow(2) - BigRational::ratio(3, 2) * x[1].pow(2);
        assert_eq!(dy.eval(&x), want);
        assert_eq!(p.weighted_degree([1, 1]), Some(3));
    }
}
