//! Casimir interaction of a cylindrical plasma sheet with a flat plasma sheet
//! or a plasma-model half-space.
//!
//! The crate is organised bottom-up:
//!
//! * [`specfun`]: Bessel functions, polylogarithms, quadrature.
//! * [`models`]: boundary kinds, plane amplitudes and rescaled reflection coefficients.
//! * [`pfa`]: the leading (proximity force) functions `f0` and their small-coupling limits.
//! * [`beyond`]: the first curvature correction `f1`, in closed form and through the
//!   generic Gaussian-chain machinery.
//! * [`asympt`]: exact cylinder and plane factors against their uniform expansions.
//! * [`modesum`]: the exact log-determinant mode sum used as an oracle.
//! * [`cli`]: the command line front end.

pub mod asympt;
pub mod beyond;
pub mod cli;
pub mod error;
pub mod models;
pub mod modesum;
pub mod pfa;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};

/// Library version echoed into every CSV header.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
