pub mod config;
pub mod elliptic;
pub mod error;
pub mod heat;
pub mod inversion;
pub mod lattice;
pub mod numerics;
pub mod sigma;
pub mod spectral;
pub mod strata;
pub mod verify;

pub use config::NumericsConfig;
pub use error::{Error, Result};
pub use numerics::C;
