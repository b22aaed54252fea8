//! Closed polylogarithm forms of `f1` for two delta-function boundaries.

use std::f64::consts::{PI, SQRT_2};

use crate::beyond::F1Constants;
use crate::models::{ModelPair, PlasmaParams};
use crate::pfa::{pfa_norm, tm_y_breaks};
use crate::specfun::{integrate_semiinf_scaled, integrate_unit, polylog_exp_half, HalfOrder, InnerLedger, QuadResult, QuadSpec};
use crate::{Error, Result};

/// Polarisation of the delta-delta pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Te,
    Tm,
}

impl Mode {
    pub fn pair(self) -> ModelPair {
        match self {
            Mode::Te => ModelPair::DdTe,
            Mode::Tm => ModelPair::DdTm,
        }
    }
}

fn li(twice: i32, mu: f64) -> Result<f64> {
    polylog_exp_half(HalfOrder::new(twice)?, mu)
}

/// The polylogarithm combination `g` of the delta-delta pair.  `y` is ignored for TE.
pub fn g_dd(mode: Mode, t: f64, y: f64, big: f64) -> Result<f64> {
    if big <= 0.0 {
        return Ok(0.0);
    }
    let w = big;
    match mode {
        Mode::Te => {
            let mu = 2.0 * t - 2.0 * (w / (w + t)).ln();
            let (t2, t3, t4, w2) = (t * t, t * t * t, t.powi(4), w * w);
            Ok((16.0 * t4 + 32.0 * w * t3 + 32.0 * t3 + 16.0 * w2 * t2 + 32.0 * w * t2 + 16.0 * t2) * li(-3, mu)?
                + (-40.0 * t3 - 80.0 * w * t2 - 24.0 * t2 - 40.0 * w2 * t - 40.0 * w * t) * li(-1, mu)?
                + (32.0 * t4 + 64.0 * w * t3 + 16.0 * t3 + 32.0 * w2 * t2 + 16.0 * w * t2 + 11.0 * t2
                    + 30.0 * w * t
                    + 15.0 * w2)
                    * li(1, mu)?
                + (-8.0 * t3 - 16.0 * w * t2 + 12.0 * t2 - 8.0 * w2 * t + 16.0 * w * t) * li(3, mu)?
                + (-3.0 * w2 - 6.0 * t * w - 3.0 * t2) * li(5, mu)?)
        }
        Mode::Tm => {
            let mu = 2.0 * t - 2.0 * (w / (t * y * y + w)).ln();
            let (y2, y4, y6) = (y * y, y.powi(4), y.powi(6));
            let (t2, t3, t4, w2) = (t * t, t * t * t, t.powi(4), w * w);
            let tw = (t - 1.0) * y2 + w;
            Ok(-16.0 * t2 * (y2 - 1.0) * tw * tw * li(-3, mu)?
                - 8.0
                    * t
                    * (t * (-3.0 * y2 + t * (y2 + 3.0) - 1.0) * y4
                        + w * (-5.0 * y2 + 2.0 * t * (y2 + 3.0) + 1.0) * y2
                        + w2 * (y2 + 3.0))
                    * li(-1, mu)?
                + (-32.0 * t4 * y6 + 16.0 * t3 * y6 - 23.0 * t2 * y6 + 32.0 * t4 * y4 - 64.0 * w * t3 * y4
                    - 16.0 * t3 * y4
                    + 16.0 * w * t2 * y4
                    - 49.0 * t2 * y4
                    - 54.0 * w * t * y4
                    + 64.0 * w * t3 * y2
                    - 27.0 * w2 * y2
                    - 32.0 * w2 * t2 * y2
                    - 16.0 * w * t2 * y2
                    - 90.0 * w * t * y2
                    - 45.0 * w2
                    + 32.0 * w2 * t2)
                    * li(1, mu)?
                + (-16.0 * t3 * y6 - 32.0 * w * t2 * y4 - 8.0 * t2 * y4 - 4.0 * w * t * y4 - 16.0 * w2 * t * y2
                    - 4.0 * w * t * y2)
                    * li(3, mu)?
                + (-6.0 * t2 * y6 - 12.0 * w * t * y4 - 6.0 * w2 * y2) * li(5, mu)?)
        }
    }
}

/// Denominator that turns `g` into the per-node integrand of the chain series.
pub fn g_denominator(mode: Mode, t: f64, y: f64, big: f64) -> f64 {
    match mode {
        Mode::Te => 144.0 * t * (big + t).powi(2),
        Mode::Tm => 96.0 * t * (t * y * y + big).powi(2),
    }
}

/// `f1` of the delta-delta pair from the closed forms, relative to its hard-boundary value.
pub fn f1_dd_closed(mode: Mode, big: f64, spec: &QuadSpec) -> Result<QuadResult> {
    spec.validate()?;
    if big < 0.0 || big.is_nan() {
        return Err(Error::domain(format!("Ω_L = {big} must be nonnegative")));
    }
    if big == 0.0 {
        return Ok(QuadResult::exact(0.0));
    }
    let params = PlasmaParams { omega: 0.0, omega_p: 0.0, omega_l: big, omega_pl: 0.0 };
    let node = |t: f64, y: f64| -> Result<f64> { Ok(g_dd(mode, t, y, big)? / g_denominator(mode, t, y, big)) };
    let ledger = InnerLedger::new();
    let outer = match mode {
        Mode::Te => integrate_semiinf_scaled(|t| t.powf(1.5) * ledger.check(node(t, 0.0)), big, spec),
        Mode::Tm => {
            let inner_spec = spec.nested();
            integrate_semiinf_scaled(
                |t| {
                    let inner = integrate_unit(
                        |y| ledger.check(node(t, y)),
                        &tm_y_breaks(ModelPair::DdTm, t, &params),
                        &inner_spec,
                    );
                    t.powf(1.5) * ledger.record(inner)
                },
                big,
                spec,
            )
        }
    };
    Ok(ledger.finish(outer)?.scale(pfa_norm() / F1Constants::hard(mode == Mode::Te)))
}

/// Leading small-coupling behaviour of the delta-delta `f1`.
pub fn f1_small_limit(mode: Mode, big: f64) -> f64 {
    match mode {
        Mode::Te => 720.0 * SQRT_2 / (7.0 * PI.powf(3.5)) * big.powf(1.5),
        Mode::Tm => 0.92 * big.sqrt(),
    }
}
