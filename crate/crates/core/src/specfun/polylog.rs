//! Polylogarithms `Li_s(z)` of half-integer order on the open interval `(-1, 1)`.
//!
//! Two branches: the defining series for `z ≤ 1/2`, and for `z` near one the
//! expansion in `μ = -ln z`,
//! `Li_s(e^{-μ}) = Γ(1-s) μ^{s-1} + Σ_k ζ(s-k) (-μ)^k / k!`,
//! which converges for `μ < 2π` and is used for `μ < ln 2`.

use std::f64::consts::LN_2;
use std::sync::OnceLock;

use super::gamma::{gamma_half_odd, zeta};
use crate::{Error, Result};

/// Largest `|2s|` accepted.
const MAX_TWICE_ORDER: i32 = 15;
const MU_TERMS: usize = 48;
const SERIES_MAX_TERMS: usize = 4000;

/// A half-integer order stored as its odd double `2s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HalfOrder(i32);

impl HalfOrder {
    pub fn new(twice: i32) -> Result<Self> {
        if twice % 2 == 0 || twice.abs() > MAX_TWICE_ORDER {
            return Err(Error::domain(format!("polylog order {}/2 not supported", twice)));
        }
        Ok(HalfOrder(twice))
    }

    /// Compile-time constructor; `None` for unsupported orders.
    pub const fn new_const(twice: i32) -> Option<Self> {
        if twice % 2 == 0 || twice.abs() > MAX_TWICE_ORDER {
            None
        } else {
            Some(HalfOrder(twice))
        }
    }

    pub fn from_f64(s: f64) -> Result<Self> {
        let twice = (2.0 * s).round();
        if (2.0 * s - twice).abs() > 1e-12 {
            return Err(Error::domain(format!("polylog order {s} is not a half-integer")));
        }
        Self::new(twice as i32)
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub fn twice(self) -> i32 {
        self.0
    }
}

/// ζ at every half-integer the μ-expansion can touch, indexed by `(2σ + OFFSET) / 2`.
fn zeta_table() -> &'static Vec<f64> {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let lo = -MAX_TWICE_ORDER - 2 * MU_TERMS as i32;
        (lo..=MAX_TWICE_ORDER)
            .step_by(2)
            .map(|j| zeta(j as f64 / 2.0))
            .collect()
    })
}

fn zeta_half(twice: i32) -> f64 {
    let lo = -MAX_TWICE_ORDER - 2 * MU_TERMS as i32;
    zeta_table()[((twice - lo) / 2) as usize]
}

/// `Li_s(z)` for real `z ∈ (-1, 1)` and half-integer `s`.
pub fn polylog(s: f64, z: f64) -> Result<f64> {
    let order = HalfOrder::from_f64(s)?;
    polylog_half(order, z)
}

pub fn polylog_half(s: HalfOrder, z: f64) -> Result<f64> {
    if !(z.abs() < 1.0) {
        return Err(Error::domain(format!("polylog argument {z} outside (-1, 1)")));
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    if z < 0.0 {
        if z >= -0.5 {
            return direct_series(s, z);
        }
        // Li_s(-x) = 2^{1-s} Li_s(x^2) - Li_s(x)
        let x = -z;
        let sv = s.value();
        let mu = -x.ln();
        return Ok(2f64.powf(1.0 - sv) * polylog_exp_half(s, 2.0 * mu)? - polylog_exp_half(s, mu)?);
    }
    polylog_exp_half(s, -z.ln())
}

/// `Li_s(e^{-μ})` for `μ > 0`, without forming `e^{-μ}` when `μ` is small.
pub fn polylog_exp(s: f64, mu: f64) -> Result<f64> {
    polylog_exp_half(HalfOrder::from_f64(s)?, mu)
}

pub fn polylog_exp_half(s: HalfOrder, mu: f64) -> Result<f64> {
    if !(mu > 0.0) {
        return Err(Error::domain(format!("polylog needs mu > 0, got {mu}")));
    }
    if mu.is_infinite() {
        return Ok(0.0);
    }
    if mu >= LN_2 {
        return direct_series(s, (-mu).exp());
    }
    Ok(mu_expansion(s, mu))
}

fn mu_expansion(s: HalfOrder, mu: f64) -> f64 {
    let sv = s.value();
    let mut sum = gamma_half_odd(2 - s.twice()) * mu.powf(sv - 1.0);
    let mut pow = 1.0;
    for k in 0..MU_TERMS {
        let term = zeta_half(s.twice() - 2 * k as i32) * pow;
        sum += term;
        if k > 2 && term.abs() < 1e-17 * sum.abs() {
            break;
        }
        pow *= -mu / (k as f64 + 1.0);
    }
    sum
}

fn direct_series(s: HalfOrder, z: f64) -> Result<f64> {
    let sv = s.value();
    let mut sum = 0.0;
    let mut zk = 1.0;
    for k in 1..=SERIES_MAX_TERMS {
        zk *= z;
        let kf = k as f64;
        let term = zk * kf.powf(-sv);
        sum += term;
        // once terms shrink monotonically the tail is bounded by a geometric series
        let ratio = z.abs() * (kf / (kf + 1.0)).powf(sv);
        if ratio < 1.0 && term.abs() * ratio / (1.0 - ratio) <= 1e-17 * sum.abs() {
            return Ok(sum);
        }
    }
    Err(Error::no_convergence(format!("polylog series at s = {sv}, z = {z}")))
}
