//! First correction beyond the proximity force approximation.

pub mod chain;
pub mod closed;
pub mod coeffs;
pub mod poly;
pub mod series;

pub use chain::{bracket_laurent, chain_covariance, chain_moment, laurent_tables};
pub use closed::{f1_dd_closed, f1_small_limit, g_dd, Mode};
pub use coeffs::{a_coeff, a_polys, LinkArgs, Order};
pub use poly::{Poly2, Ring};
pub use series::{f1_series, mas_mean, series_integrand, tau_reduce, TauHandling};

use std::f64::consts::PI;

/// Hard-boundary coefficients of the first curvature correction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct F1Constants;

impl F1Constants {
    /// `7/36`.
    pub fn te() -> f64 {
        7.0 / 36.0
    }

    /// `7/36 − 40/(3π²)`, negative.
    pub fn tm() -> f64 {
        7.0 / 36.0 - 40.0 / (3.0 * PI * PI)
    }

    pub fn hard(te: bool) -> f64 {
        if te { Self::te() } else { Self::tm() }
    }
}
