//! `f1` from the link coefficients, for every model pair.
//!
//! At each `(t, y)` the chain average of the order-`ε` bracket is a Laurent polynomial
//! `Σ_k c_k N^k` in the chain length `N = s + 1`, so the sum over `s` of
//! `z^N N^{-3/2} Σ_k c_k N^k` with `z = r_cyl r_plane e^{-2t}` resums into
//! `Σ_k c_k Li_{3/2-k}(z)`.  The explicit partial sums are kept as a check.

use crate::beyond::chain::{bracket_laurent, laurent_at, LAURENT_LEN, LAURENT_MIN};
use crate::beyond::coeffs::{a_polys, LinkArgs};
use crate::beyond::F1Constants;
use crate::models::{refl_product, ModelPair, PlasmaParams};
use crate::pfa::{is_transparent, pfa_norm, t_scale, tm_y_breaks};
use crate::specfun::gamma::gamma_half;
use crate::specfun::{
    integrate_semiinf_floored, integrate_unit, polylog_exp_half, HalfOrder, InnerLedger, QuadResult, QuadSpec,
};
use crate::{Error, Result};

/// Relative size below which a Laurent coefficient outside the natural range counts as
/// cancelled.
const CANCEL_TOL: f64 = 1e-9;

/// Range of `k` whose polylogarithm order `3/2 − k` lies in `[−3/2, 5/2]`.
const NATURAL_K: std::ops::RangeInclusive<i32> = -1..=3;

/// How the direction variable `τ` enters [`mas_mean`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TauHandling {
    /// A fixed value of `τ`.
    Fixed(f64),
    /// Averaged with the angular measure: `τ^{2n}` becomes `(1−y²)^n Γ(n+½)/(√π n!)`.
    Reduced,
}

/// `Γ(n+½)/(√π n!)`.
pub fn tau_weight(n: u32) -> f64 {
    let factorial: f64 = (1..=n).map(f64::from).product();
    gamma_half(n) / (std::f64::consts::PI.sqrt() * factorial)
}

/// `Γ(n+½)/(√π n!) ∫₀¹ dy (1−y²)ⁿ f(y)`, the angular average of `τ^{2n} f`.
pub fn tau_reduce<F: Fn(f64) -> f64>(n: u32, f: F, spec: &QuadSpec) -> QuadResult {
    let r = integrate_unit(|y| (1.0 - y * y).powi(n as i32) * f(y), &[], spec);
    r.scale(tau_weight(n))
}

/// Laurent coefficients of the chain-averaged bracket at one node, with the magnitudes
/// that entered each coefficient.
pub fn node_laurent(
    pair: ModelPair,
    t: f64,
    tau: TauHandling,
    y: f64,
    params: &PlasmaParams,
) -> ([f64; LAURENT_LEN], [f64; LAURENT_LEN]) {
    let at = |tau: f64| {
        let (h, o) = a_polys(pair, &LinkArgs::new(t, tau, y, params));
        bracket_laurent(&h, &o)
    };
    match tau {
        TauHandling::Fixed(tau) => at(tau),
        TauHandling::Reduced => {
            // the bracket is quadratic in τ²: fit it through τ² = 0, ½, 1
            let (c0, m0) = at(0.0);
            let (ch, mh) = at(std::f64::consts::FRAC_1_SQRT_2);
            let (c1, m1) = at(1.0);
            // TE carries no y dependence, so the y-average of (1−y²)ⁿ is taken here
            let (w1, w2) = if pair.is_te() {
                (1.0 / 3.0, 1.0 / 5.0)
            } else {
                let u = 1.0 - y * y;
                (tau_weight(1) * u, tau_weight(2) * u * u)
            };
            let mut c = [0.0; LAURENT_LEN];
            let mut m = [0.0; LAURENT_LEN];
            for k in 0..LAURENT_LEN {
                let quart = 2.0 * (c1[k] - 2.0 * ch[k] + c0[k]);
                let quad = c1[k] - c0[k] - quart;
                c[k] = c0[k] + w1 * quad + w2 * quart;
                m[k] = m0[k].max(mh[k]).max(m1[k]);
            }
            (c, m)
        }
    }
}

/// Chain average `⟨M^as⟩` of the order-`ε` bracket for `s` free chain variables,
/// `(s+1)^{-1/2}` included.  The `√ε` term averages to zero by parity.
pub fn mas_mean(pair: ModelPair, s: usize, t: f64, tau: TauHandling, y: f64, params: &PlasmaParams) -> f64 {
    let (c, _) = node_laurent(pair, t, tau, y, params);
    let n = s + 1;
    laurent_at(&c, n) * (n as f64).powf(-0.5)
}

/// `Σ_s z^{s+1}/(s+1) ⟨M^as⟩` at one node, resummed into polylogarithms.
pub fn series_integrand(pair: ModelPair, t: f64, y: f64, params: &PlasmaParams) -> Result<f64> {
    Ok(series_integrand_noise(pair, t, y, params)?.0)
}

/// [`series_integrand`] with an estimate of its rounding noise, from the magnitudes of
/// the terms that cancel in each Laurent coefficient.
pub fn series_integrand_noise(pair: ModelPair, t: f64, y: f64, params: &PlasmaParams) -> Result<(f64, f64)> {
    let q = refl_product(pair, t, y, params);
    if q <= 0.0 {
        return Ok((0.0, 0.0));
    }
    let mu = 2.0 * t - q.ln();
    let (c, m) = node_laurent(pair, t, TauHandling::Reduced, y, params);
    let mut acc = 0.0;
    let mut size = 0.0;
    for (i, (&ck, &mk)) in c.iter().zip(m.iter()).enumerate() {
        let k = i as i32 + LAURENT_MIN;
        if ck == 0.0 || (!NATURAL_K.contains(&k) && ck.abs() <= CANCEL_TOL * mk) {
            continue;
        }
        let li = polylog_exp_half(HalfOrder::new(3 - 2 * k)?, mu)?;
        acc += ck * li;
        size += mk * li.abs();
    }
    Ok((acc, NOISE_FACTOR * f64::EPSILON * size))
}

/// Multiple of the machine epsilon assumed for the rounding of one coefficient.
const NOISE_FACTOR: f64 = 4.0;

/// Sample points for the average rounding noise of a `y`-integral.
const NOISE_YS: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

/// Lower end of the `t`-integration, in units of the coupling scale when that is small;
/// below it the resummed integrand is dominated by cancellation.
const T_FLOOR: f64 = 1e-6;

/// Explicit sum over chain lengths at one node, stopped once the remaining tail is below
/// `spec.series_tail_tol` of the partial sum.  Returns the sum and its tail bound.
pub fn series_integrand_explicit(
    pair: ModelPair,
    t: f64,
    y: f64,
    params: &PlasmaParams,
    spec: &QuadSpec,
) -> Result<(f64, f64)> {
    let q = refl_product(pair, t, y, params);
    if q <= 0.0 {
        return Ok((0.0, 0.0));
    }
    let z = q * (-2.0 * t).exp();
    let (c, _) = node_laurent(pair, t, TauHandling::Reduced, y, params);
    let envelope = |n: f64| -> f64 {
        c.iter().enumerate().map(|(i, ck)| ck.abs() * n.powf(i as f64 + LAURENT_MIN as f64 - 1.5)).sum()
    };
    let mut sum = 0.0;
    for s in 0..spec.s_max {
        let n = s + 1;
        let nf = n as f64;
        sum += z.powi(n as i32) * nf.powf(-1.5) * laurent_at(&c, n);
        // envelope(M) grows at most like M^{7/2}, so the tail is geometric beyond N
        let ratio = z * ((nf + 1.0) / nf).powf(3.5);
        if ratio < 1.0 {
            let tail = z.powi(n as i32 + 1) * envelope(nf + 1.0) / (1.0 - ratio);
            if tail <= spec.series_tail_tol * sum.abs() {
                return Ok((sum, tail));
            }
        }
    }
    Err(Error::no_convergence(format!("chain sum at t = {t} needs more than {} terms", spec.s_max)))
}

/// `f1` relative to its hard-boundary value, by resumming the chain series.
pub fn f1_series(pair: ModelPair, params: &PlasmaParams, spec: &QuadSpec) -> Result<QuadResult> {
    spec.validate()?;
    if is_transparent(pair, params) {
        return Ok(QuadResult::exact(0.0));
    }
    let ledger = InnerLedger::new();
    let scale = t_scale(pair, params);
    let floor = T_FLOOR * scale.min(1.0);
    let outer = if pair.is_te() {
        integrate_semiinf_floored(
            |t| t.powf(1.5) * ledger.check(series_integrand(pair, t, 0.0, params)),
            scale,
            floor,
            spec,
        )
    } else {
        let inner_spec = spec.nested();
        integrate_semiinf_floored(
            |t| {
                // below the rounding floor of the integrand the inner integral cannot improve
                let noise = NOISE_YS
                    .iter()
                    .map(|&y| ledger.check(series_integrand_noise(pair, t, y, params).map(|(_, n)| n)))
                    .sum::<f64>()
                    / NOISE_YS.len() as f64;
                let spec_t = inner_spec.with_abs_tol(noise.max(f64::MIN_POSITIVE));
                let inner = integrate_unit(
                    |y| ledger.check(series_integrand(pair, t, y, params)),
                    &tm_y_breaks(pair, t, params),
                    &spec_t,
                );
                let w = t.powf(1.5);
                w * ledger.record_at(t, w, inner)
            },
            scale,
            floor,
            spec,
        )
    };
    Ok(ledger.finish(outer)?.scale(pfa_norm() / F1Constants::hard(pair.is_te())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn p(ol: f64, wl: f64) -> PlasmaParams {
        PlasmaParams { omega: 0.0, omega_p: 0.0, omega_l: ol, omega_pl: wl }
    }

    #[test]
    fn tau_weights() {
        assert_eq!(tau_weight(0), 1.0);
        assert_relative_eq!(tau_weight(1), 0.5, max_relative = 1e-15);
        assert_relative_eq!(tau_weight(2), 0.375, max_relative = 1e-15);
        let s = QuadSpec::default();
        assert_relative_eq!(tau_reduce(0, |_| 1.0, &s).value, 1.0, max_relative = 1e-12);
        assert_relative_eq!(tau_reduce(1, |_| 1.0, &s).value, 1.0 / 3.0, max_relative = 1e-12);
    }

    #[test]
    fn single_link_is_a_one_at_origin() {
        use crate::beyond::coeffs::{a_coeff, Order};
        let params = p(2.0, 1.0);
        for pair in ModelPair::ALL {
            let v = mas_mean(pair, 0, 0.7, TauHandling::Fixed(0.4), 0.3, &params);
            let a = a_coeff(pair, Order::One, 0.0, 0.0, &LinkArgs::new(0.7, 0.4, 0.3, &params));
            assert_relative_eq!(v, a, max_relative = 1e-9, epsilon = 1e-12);
        }
    }

    #[test]
    fn explicit_sum_matches_resummation() {
        let params = p(2.0, 1.5);
        let spec = QuadSpec::default();
        for pair in ModelPair::ALL {
            for t in [0.4, 1.0, 3.0] {
                let r = series_integrand(pair, t, 0.5, &params).unwrap();
                let (e, tail) = series_integrand_explicit(pair, t, 0.5, &params, &spec).unwrap();
                assert!(tail <= 1e-11 * e.abs());
                assert_relative_eq!(r, e, max_relative = 1e-9);
            }
        }
    }
}
