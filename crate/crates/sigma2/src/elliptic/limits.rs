use super::{Weierstrass, WpValues};
use crate::{Error, Result, C};

/// γ = 0: σ(u) = u, ζ = 1/u, ℘ = u⁻², ℘′ = −2u⁻³.
#[derive(Debug, Clone, Copy, Default)]
pub struct RationalLimit;

impl Weierstrass for RationalLimit {
    fn gamma4(&self) -> C {
        C::default()
    }
    fn gamma6(&self) -> C {
        C::default()
    }
    fn eval(&self, u: C) -> Result<WpValues> {
        if u.norm() == 0.0 {
            return Err(Error::PoleAtArgument("0".into()));
        }
        let r = u.inv();
        Ok(WpValues {
            ln_sigma: u.ln(),
            zeta: r,
            wp: r * r,
            wp_prime: r * r * r * -2.0,
        })
    }
    fn ln_sigma(&self, u: C) -> Result<C> {
        Ok(if u.norm() == 0.0 {
            C::new(f64::NEG_INFINITY, 0.0)
        } else {
            u.ln()
        })
    }
}

/// The closed form ½√(3a)·e^{−au²/2}(e^{√(3a)u} − e^{−√(3a)u}) quoted for the limit
/// (g₂, g₃) → (12a², −8a³).
pub fn sigma_trig_limit_quoted(a: C, u: C) -> C {
    let s = (a * 3.0).sqrt();
    s * 0.5 * (-a * u * u * 0.5).exp() * ((s * u).exp() - (-s * u).exp())
}

/// The actual limit of σ as (g₂, g₃) → (12a², −8a³):
/// e^{−au²/2} sinh(√(3a)u)/√(3a). Differs from the quoted form by the factor 3a.
pub fn sigma_trig_limit(a: C, u: C) -> C {
    let s = (a * 3.0).sqrt();
    (-a * u * u * 0.5).exp() * ((s * u).exp() - (-s * u).exp()) / (s * 2.0)
}
