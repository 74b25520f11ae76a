//! Sharp-front toolkit for the generalized SQG family.

pub mod analysis;
pub mod contour;
pub mod error;
pub mod evolution;
pub mod io;
pub mod kernels;
pub mod quadrature;
pub mod special;
pub mod spectral;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{FrontError, Result};
pub use kernels::{AlphaFamily, KernelQuery, Regime, SymbolTable};
pub use spectral::{FrontState, Grid, Spectrum};
