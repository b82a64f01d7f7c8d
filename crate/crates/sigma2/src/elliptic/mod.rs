//! Weierstrass elliptic functions for the curve Y² = X³ + γ₄X + γ₆, i.e. invariants
//! (g₂, g₃) = (−4γ₄, −4γ₆).

mod carlson;
mod context;
mod limits;
mod theta;

pub use carlson::carlson_rf;
pub use context::{EllipticContext, EllipticCurveParams};
pub use limits::{sigma_trig_limit, sigma_trig_limit_quoted, RationalLimit};

use crate::{Result, C};

/// σ, ζ, ℘, ℘′ at one point; `ln_sigma` is defined modulo 2πi.
#[derive(Debug, Clone, Copy)]
pub struct WpValues {
    pub ln_sigma: C,
    pub zeta: C,
    pub wp: C,
    pub wp_prime: C,
}

impl WpValues {
    pub fn sigma(&self) -> C {
        self.ln_sigma.exp()
    }
}

/// Common interface of the genuine elliptic engine and its degenerate limits, so that
/// formulas built from σ, ζ, ℘ can be written once.
pub trait Weierstrass {
    fn gamma4(&self) -> C;
    fn gamma6(&self) -> C;

    /// All four functions at `u`. Errors with `PoleAtArgument` at lattice points.
    fn eval(&self, u: C) -> Result<WpValues>;

    /// ln σ(u); a lattice point gives `-inf` rather than an error.
    fn ln_sigma(&self, u: C) -> Result<C>;

    fn sigma(&self, u: C) -> Result<C> {
        Ok(self.ln_sigma(u)?.exp())
    }
    fn zeta(&self, u: C) -> Result<C> {
        Ok(self.eval(u)?.zeta)
    }
    fn wp(&self, u: C) -> Result<C> {
        Ok(self.eval(u)?.wp)
    }
    fn wp_prime(&self, u: C) -> Result<C> {
        Ok(self.eval(u)?.wp_prime)
    }
    /// ℘″ = 6℘² + 2γ₄.
    fn wp_second(&self, u: C) -> Result<C> {
        let p = self.wp(u)?;
        Ok(p * p * 6.0 + self.gamma4() * 2.0)
    }
}

/// Selects one of the three half-periods ω/2, ω′/2, (ω+ω′)/2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HalfPeriod {
    Omega,
    OmegaPrime,
    Sum,
}

impl HalfPeriod {
    pub const ALL: [HalfPeriod; 3] = [HalfPeriod::Omega, HalfPeriod::Sum, HalfPeriod::OmegaPrime];
}

/// Branch flag for `invert_wp`: `Principal` gives ℘′(α) = −2√(X³+γ₄X+γ₆) with the principal
/// root, `Opposite` the other preimage −α.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Principal,
    Opposite,
}

/// Principal square root: cut along the negative real axis, Re ≥ 0.
pub fn principal_sqrt(z: C) -> C {
    z.sqrt()
}
