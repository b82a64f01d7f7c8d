//! Stratification of the parameter space λ = (λ₄, λ₆, λ₈, λ₁₀) of y² = x⁵ + λ₄x³ + λ₆x² + λ₈x + λ₁₀
//! by the root multiplicities of the quintic.

pub mod charts;
pub mod classify;
pub mod fields;
pub mod poly;
pub mod resultant;
pub mod tables;

pub use charts::{
    lambda_from_a, lambda_from_lambda0, lambda_from_lambda1, recover_lambda0, recover_lambda1,
    upsilon,
};
pub use classify::{classify, rank_of_partition, Residuals, Stratum, StratumClassification};
pub use fields::{gradient_delta_check, tangency_residuals, vmatrix, VectorFieldData};
pub use poly::Scalar;

use crate::C;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct G2Params {
    pub lambda4: C,
    pub lambda6: C,
    pub lambda8: C,
    pub lambda10: C,
}

impl G2Params {
    pub fn new(lambda4: C, lambda6: C, lambda8: C, lambda10: C) -> Self {
        G2Params {
            lambda4,
            lambda6,
            lambda8,
            lambda10,
        }
    }

    pub fn from_array(l: [C; 4]) -> Self {
        G2Params::new(l[0], l[1], l[2], l[3])
    }

    pub fn to_array(&self) -> [C; 4] {
        [self.lambda4, self.lambda6, self.lambda8, self.lambda10]
    }
}

/// Δ(λ), the discriminant of the quintic.
pub fn discriminant(lambda: &G2Params) -> C {
    tables::delta_poly().eval(&lambda.to_array())
}

/// Γ(λ); vanishes exactly on Λ₀.
pub fn gamma_vec(lambda: &G2Params) -> [C; 4] {
    let l = lambda.to_array();
    tables::gamma_polys().map(|g| g.eval(&l))
}
