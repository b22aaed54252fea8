//! Modified Bessel functions `I_ν(x)`, `K_ν(x)` of real order `ν ≥ 0` and positive argument.
//!
//! `K_μ`, `K_{μ+1}` with `|μ| ≤ 1/2` come from Temme's series (`x < 2`) or Steed's
//! continued fraction (`x ≥ 2`) and are carried to order `ν` by forward recurrence of
//! the ratio `K_{ν+1}/K_ν`.  The ratio `I_{ν+1}/I_ν` comes from the continued fraction
//! CF1, and `I_ν` itself from the Wronskian `I_ν K_{ν+1} + I_{ν+1} K_ν = 1/x`.
//! Everything is kept in logarithms, so orders of several hundred are fine.

use std::f64::consts::PI;

use super::gamma::{rgamma1p, temme_gammas};
use crate::{Error, Result};

const EPS: f64 = 1e-16;
const MAX_ITER: usize = 200_000;
/// Orders and arguments inside this box have been checked against independent oracles.
pub const VALIDATED_MAX_ORDER: f64 = 1000.0;
pub const VALIDATED_X: (f64, f64) = (1e-6, 1e5);

/// A function value and its derivative, both multiplied by `e^{-log_scale}`.
///
/// When the value fits comfortably in an `f64` the scale is zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselPair {
    pub value: f64,
    pub derivative: f64,
    pub log_scale: f64,
}

impl BesselPair {
    fn from_log(ln_value: f64, log_derivative: f64) -> Self {
        if ln_value.abs() < 600.0 {
            let value = ln_value.exp();
            BesselPair { value, derivative: value * log_derivative, log_scale: 0.0 }
        } else {
            BesselPair { value: 1.0, derivative: log_derivative, log_scale: ln_value }
        }
    }

    pub fn is_scaled(&self) -> bool {
        self.log_scale != 0.0
    }

    pub fn ln_value(&self) -> f64 {
        self.value.ln() + self.log_scale
    }

    /// `f'/f`, free of any scaling.
    pub fn log_derivative(&self) -> f64 {
        self.derivative / self.value
    }

    /// The true value; may overflow to infinity or underflow to zero.
    pub fn unscaled(&self) -> f64 {
        self.value * self.log_scale.exp()
    }
}

/// `I_ν(x)` and `K_ν(x)` with derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselIK {
    pub order: f64,
    pub x: f64,
    pub i: BesselPair,
    pub k: BesselPair,
    /// `I_{ν+1}/I_ν`
    pub i_ratio: f64,
    /// `K_{ν+1}/K_ν`
    pub k_ratio: f64,
    /// Set when `(ν, x)` lies outside the validated box.
    pub accuracy_warning: bool,
}

impl BesselIK {
    /// `I_ν K_ν`, computed without forming either factor.
    pub fn ik_product(&self) -> f64 {
        1.0 / (self.x * (self.k_ratio + self.i_ratio))
    }

    /// `I'_ν K'_ν`, always negative.
    pub fn ipkp_product(&self) -> f64 {
        self.ik_product() * self.i.log_derivative() * self.k.log_derivative()
    }
}

/// Integer-order entry point.
pub fn bessel_ik(m: u32, x: f64) -> Result<BesselIK> {
    bessel_ik_real(m as f64, x)
}

/// Real-order entry point.
pub fn bessel_ik_real(nu: f64, x: f64) -> Result<BesselIK> {
    check_domain(nu, x)?;
    let (ln_k, k_ratio) = k_forward(nu, x)?;
    let i_ratio = cf1(nu, x)?;
    Ok(assemble(nu, x, ln_k, k_ratio, i_ratio))
}

/// `I` and `K` for the orders `nu0, nu0 + 1, …, nu0 + count - 1` at one argument.
///
/// Cheaper than repeated calls: one CF1 at the top order, backward recurrence for the
/// `I` ratios, forward recurrence for the `K` ratios.
pub fn bessel_ik_sequence(nu0: f64, count: usize, x: f64) -> Result<Vec<BesselIK>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    check_domain(nu0, x)?;
    let top = nu0 + (count - 1) as f64;
    let mut f = vec![0.0; count];
    f[count - 1] = cf1(top, x)?;
    for j in (0..count - 1).rev() {
        // I_{ν+1}/I_ν = 1 / (2(ν+1)/x + I_{ν+2}/I_{ν+1})
        let nu = nu0 + j as f64;
        f[j] = 1.0 / (2.0 * (nu + 1.0) / x + f[j + 1]);
    }
    let (mut ln_k, mut r) = k_forward(nu0, x)?;
    let mut out = Vec::with_capacity(count);
    for (j, &fj) in f.iter().enumerate() {
        let nu = nu0 + j as f64;
        out.push(assemble(nu, x, ln_k, r, fj));
        ln_k += r.ln();
        r = 1.0 / r + 2.0 * (nu + 1.0) / x;
    }
    Ok(out)
}

fn check_domain(nu: f64, x: f64) -> Result<()> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("Bessel argument must be positive, got {x}")));
    }
    if !(nu >= 0.0) || !nu.is_finite() {
        return Err(Error::domain(format!("Bessel order must be nonnegative, got {nu}")));
    }
    Ok(())
}

fn assemble(nu: f64, x: f64, ln_k: f64, k_ratio: f64, i_ratio: f64) -> BesselIK {
    let ln_i = -x.ln() - ln_k - (k_ratio + i_ratio).ln();
    let dk = nu / x - k_ratio;
    let di = i_ratio + nu / x;
    let accuracy_warning =
        nu > VALIDATED_MAX_ORDER || x < VALIDATED_X.0 || x > VALIDATED_X.1;
    BesselIK {
        order: nu,
        x,
        i: BesselPair::from_log(ln_i, di),
        k: BesselPair::from_log(ln_k, dk),
        i_ratio,
        k_ratio,
        accuracy_warning,
    }
}

/// `ln K_ν(x)` and `K_{ν+1}(x)/K_ν(x)`.
fn k_forward(nu: f64, x: f64) -> Result<(f64, f64)> {
    let nl = (nu + 0.5).floor();
    let mu = nu - nl;
    let (ln_kmu_scaled, mut r) = if x < 2.0 { temme(mu, x)? } else { steed(mu, x)? };
    let mut ln_k = ln_kmu_scaled - x;
    for k in 0..nl as usize {
        ln_k += r.ln();
        r = 1.0 / r + 2.0 * (mu + k as f64 + 1.0) / x;
    }
    Ok((ln_k, r))
}

/// Temme's series for `e^x K_μ(x)` and `K_{μ+1}/K_μ`, `x < 2`.
fn temme(mu: f64, x: f64) -> Result<(f64, f64)> {
    let x2 = 0.5 * x;
    let pimu = PI * mu;
    let fact = if pimu.abs() < EPS { 1.0 } else { pimu / pimu.sin() };
    let d = -x2.ln();
    let e = mu * d;
    let fact2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
    let (gam1, gam2) = temme_gammas(mu);
    let gampl = rgamma1p(mu);
    let gammi = rgamma1p(-mu);
    let mut ff = fact * (gam1 * e.cosh() + gam2 * fact2 * d);
    let mut sum = ff;
    let ee = e.exp();
    let mut p = 0.5 * ee / gampl;
    let mut q = 0.5 / (ee * gammi);
    let mut c = 1.0;
    let dd = x2 * x2;
    let mut sum1 = p;
    let mut i = 1.0;
    loop {
        ff = (i * ff + p + q) / (i * i - mu * mu);
        c *= dd / i;
        p /= i - mu;
        q /= i + mu;
        let del = c * ff;
        sum += del;
        sum1 += c * p - i * del;
        if del.abs() < sum.abs() * EPS {
            break;
        }
        i += 1.0;
        if i > 500.0 {
            return Err(Error::no_convergence("Temme series for K"));
        }
    }
    let kmu1_over_kmu = sum1 * 2.0 / x / sum;
    Ok((sum.ln() + x, kmu1_over_kmu))
}

/// Steed's continued fraction for `e^x K_μ(x)` and `K_{μ+1}/K_μ`, `x ≥ 2`.
fn steed(mu: f64, x: f64) -> Result<(f64, f64)> {
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut delh = d;
    let mut h = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25 - mu * mu;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    let mut converged = false;
    for i in 2..MAX_ITER {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < EPS {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::no_convergence("Steed continued fraction for K"));
    }
    let ln_kmu = 0.5 * (PI / (2.0 * x)).ln() - s.ln();
    let ratio = (mu + x + 0.5 - a1 * h) / x;
    Ok((ln_kmu, ratio))
}

/// `I_{ν+1}(x)/I_ν(x)` by modified Lentz on CF1.
fn cf1(nu: f64, x: f64) -> Result<f64> {
    const TINY: f64 = 1e-300;
    let mut f = TINY;
    let mut c = f;
    let mut d = 0.0;
    for k in 1..MAX_ITER {
        let b = 2.0 * (nu + k as f64) / x;
        d = b + d;
        if d == 0.0 {
            d = TINY;
        }
        c = b + 1.0 / c;
        if c == 0.0 {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < EPS {
            return Ok(f);
        }
    }
    Err(Error::no_convergence(format!("CF1 for I at order {nu}, x = {x}")))
}
