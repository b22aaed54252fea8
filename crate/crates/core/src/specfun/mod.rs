//! Special functions and quadrature.

pub mod bessel;
pub mod gamma;
pub mod polylog;
pub mod quad;

pub use bessel::{bessel_ik, bessel_ik_real, bessel_ik_sequence, BesselIK, BesselPair};
pub use gamma::{gamma_half, zeta};
pub use polylog::{polylog, polylog_exp, polylog_exp_half, HalfOrder};
pub use quad::{
    integrate, integrate_breaks, integrate_breaks_par, integrate_halfline, integrate_semiinf, integrate_semiinf_floored,
    integrate_semiinf_scaled,
    integrate_unit, InnerLedger, QuadResult, QuadSpec,
};
