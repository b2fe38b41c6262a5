//! Geometric scattering of a particle confined to a Gaussian bump crossed by
//! parallel delta-line defects.
//!
//! Units: σ = 1 and ℏ²/2m = 1 throughout. Wavenumbers are `𝔎 = kσ`, defect
//! positions `α = a/σ`, couplings `z = σ𝔷`, and cross sections `|f|²/σ`.
//!
//! Layout:
//! - [`specfun`]: complex error functions and overflow-safe scaled products.
//! - [`surface`]: bump profile, curvatures, perturbation operator coefficients.
//! - [`flatdefects`]: exact flat-plane solution with N line defects.
//! - [`geoamp`]: closed-form geometric coefficients and the assembled amplitude.
//! - [`oracle`]: adaptive quadrature of the defining integrals.
//! - [`cli`]: sweeps, presets, verification, feasibility and plotting.

pub mod cli;
pub mod error;
pub mod flatdefects;
pub mod geoamp;
pub mod numerics;
pub mod oracle;
pub mod specfun;
pub mod surface;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Crate version, stamped into generated files.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
