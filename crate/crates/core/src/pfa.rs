//! Proximity force approximation: the functions `f0`, the leading energy and the
//! small-coupling limits.
//!
//! Every `f0` has the form `C ∫dt t^{3/2} ⟨Li_{3/2}(r_cyl r_plane e^{-2t})⟩_y` with
//! `C = 480√2/π^{9/2}`, normalised so that hard boundaries give one.  TE pairs have no
//! `y` dependence.

use std::f64::consts::{PI, SQRT_2};
use std::sync::OnceLock;

use crate::beyond::F1Constants;
use crate::models::{refl, Geometry, ModelPair, PlasmaParams};
use crate::specfun::{
    integrate_halfline, integrate_semiinf_scaled, integrate_unit, polylog_exp_half, HalfOrder, InnerLedger,
    QuadResult, QuadSpec,
};
use crate::Result;

/// `480√2/π^{9/2}`: the inverse of the hard-boundary `t`-integral.
pub fn pfa_norm() -> f64 {
    480.0 * SQRT_2 / PI.powf(4.5)
}

/// `−π³/(1920√2 L²)·√(R/L)`, the hard-boundary energy per unit length.
pub fn hard_energy(geom: &Geometry) -> f64 {
    -PI.powi(3) / (1920.0 * SQRT_2 * geom.gap * geom.gap) * (geom.radius / geom.gap).sqrt()
}

const LI32: HalfOrder = match HalfOrder::new_const(3) {
    Some(s) => s,
    None => panic!(),
};

/// `Li_{3/2}(q e^{-2t})` for `0 ≤ q ≤ 1`, never forming the argument when it is near one.
pub(crate) fn li32_damped(q: f64, t: f64) -> Result<f64> {
    if q <= 0.0 {
        return Ok(0.0);
    }
    polylog_exp_half(LI32, 2.0 * t - q.ln())
}

/// Energy split into the leading term and the first curvature correction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyBreakdown {
    pub f0: f64,
    pub f1: f64,
    /// Leading energy per unit length.
    pub e_pfa: f64,
    /// `e_pfa·(1 + (L/R)·f1h·f1/f0)`.
    pub e_total: f64,
    pub err_f0: f64,
    pub err_f1: f64,
}

impl EnergyBreakdown {
    pub fn new(pair: ModelPair, geom: &Geometry, f0: QuadResult, f1: QuadResult) -> Self {
        let e_pfa = hard_energy(geom) * f0.value;
        let f1h = F1Constants::hard(pair.is_te());
        let e_total = if f0.value == 0.0 {
            e_pfa
        } else {
            e_pfa * (1.0 + geom.epsilon() * f1h * f1.value / f0.value)
        };
        EnergyBreakdown {
            f0: f0.value,
            f1: f1.value,
            e_pfa,
            e_total,
            err_f0: f0.error_estimate,
            err_f1: f1.error_estimate,
        }
    }
}

/// True when one of the two boundaries is transparent, so every `f` vanishes.
pub(crate) fn is_transparent(pair: ModelPair, params: &PlasmaParams) -> bool {
    params.omega_l == 0.0 || (pair.has_dielectric() && params.omega_pl == 0.0)
}

/// Points in `y ∈ (0, 1)` where the TM reflection coefficients change character.
pub(crate) fn tm_y_breaks(pair: ModelPair, t: f64, params: &PlasmaParams) -> Vec<f64> {
    let mut b = vec![(params.omega_l / t).sqrt()];
    if pair.has_dielectric() {
        let w = params.omega_pl;
        b.push(w / (t * (t + t.hypot(w))).sqrt());
    }
    b.retain(|y| *y > 0.0 && *y < 1.0);
    b
}

/// Scale in `t` below which the integrand is suppressed by weak coupling.
pub(crate) fn t_scale(pair: ModelPair, params: &PlasmaParams) -> f64 {
    if pair.has_dielectric() {
        params.omega_l.min(params.omega_pl)
    } else {
        params.omega_l
    }
}

/// The `f0` function of a model pair.
pub fn f0(pair: ModelPair, params: &PlasmaParams, spec: &QuadSpec) -> Result<QuadResult> {
    spec.validate()?;
    if is_transparent(pair, params) {
        return Ok(QuadResult::exact(0.0));
    }
    let ledger = InnerLedger::new();
    let scale = t_scale(pair, params);
    let outer = if pair.is_te() {
        integrate_semiinf_scaled(
            |t| {
                let q = refl(pair.cyl(), t, 0.0, params) * refl(pair.plane(), t, 0.0, params);
                t.powf(1.5) * ledger.check(li32_damped(q, t))
            },
            scale,
            spec,
        )
    } else {
        let inner_spec = spec.nested();
        integrate_semiinf_scaled(
            |t| {
                let inner = integrate_unit(
                    |y| {
                        let q = refl(pair.cyl(), t, y, params) * refl(pair.plane(), t, y, params);
                        ledger.check(li32_damped(q, t))
                    },
                    &tm_y_breaks(pair, t, params),
                    &inner_spec,
                );
                t.powf(1.5) * ledger.record(inner)
            },
            scale,
            spec,
        )
    };
    Ok(ledger.finish(outer)?.scale(pfa_norm()))
}

/// Leading energy per unit length of cylinder.
pub fn e_pfa(pair: ModelPair, geom: &Geometry, params: &PlasmaParams, spec: &QuadSpec) -> Result<QuadResult> {
    Ok(f0(pair, params, spec)?.scale(hard_energy(geom)))
}

/// Weak-coupling forms of `f0`.
///
/// TE: `(840/π⁴)Ω_L²` and `(420/π⁴)ω_L Ω_L`.  TM: `(840√2/π^{9/2})√Ω_L` times
/// [`ftilde_dd`] or [`ftilde_ed`] at `x = ω_L²/Ω_L`, both evaluated at default tolerances.
pub fn f0_small_limit(pair: ModelPair, params: &PlasmaParams) -> Result<f64> {
    let (ol, wl) = (params.omega_l, params.omega_pl);
    let tm_pref = 840.0 * SQRT_2 / PI.powf(4.5) * ol.sqrt();
    Ok(match pair {
        ModelPair::DdTe => 840.0 / PI.powi(4) * ol * ol,
        ModelPair::EdTe => 420.0 / PI.powi(4) * wl * ol,
        ModelPair::DdTm => tm_pref * ftilde_dd_cached()?,
        ModelPair::EdTm => {
            if ol == 0.0 {
                0.0
            } else {
                tm_pref * ftilde_ed(wl * wl / ol, &QuadSpec::default())?.value
            }
        }
    })
}

fn ftilde_dd_cached() -> Result<f64> {
    static CACHE: OnceLock<Result<f64>> = OnceLock::new();
    CACHE.get_or_init(|| ftilde_dd(&QuadSpec::default()).and_then(|r| r.into_result("ftilde_dd")).map(|r| r.value)).clone()
}

/// `∫₀^∞dt t^{3/2} ∫₀^∞dy Li_{3/2}(e^{-2t}/(1+ty²)²)`, the weak-coupling TM integral of
/// two plasma sheets.
pub fn ftilde_dd(spec: &QuadSpec) -> Result<QuadResult> {
    spec.validate()?;
    let ledger = InnerLedger::new();
    let inner_spec = spec.nested();
    let outer = integrate_semiinf_scaled(
        |t| {
            let inner = integrate_halfline(
                |y| {
                    let d = 1.0 + t * y * y;
                    ledger.check(li32_damped(1.0 / (d * d), t))
                },
                &[1.0 / t.sqrt()],
                &inner_spec,
            );
            t.powf(1.5) * ledger.record(inner)
        },
        1.0,
        spec,
    );
    ledger.finish(outer)
}

/// `∫₀^∞dt t^{3/2} ∫₀^∞dy Li_{3/2}(e^{-2t}/((1+ty²)(1+2t²y²/x)))`, the weak-coupling
/// TM integral of a sheet facing the half-space, at `x = ω_p²L/Ω`.
///
/// This is what the half-space `f0` reduces to under `y → y√Ω_L` at fixed `x`.
pub fn ftilde_ed(x: f64, spec: &QuadSpec) -> Result<QuadResult> {
    spec.validate()?;
    if !(x >= 0.0) {
        return Err(crate::Error::domain(format!("ftilde_ed needs x >= 0, got {x}")));
    }
    if x == 0.0 {
        return Ok(QuadResult::exact(0.0));
    }
    let ledger = InnerLedger::new();
    let inner_spec = spec.nested();
    let outer = integrate_semiinf_scaled(
        |t| {
            let inner = integrate_halfline(
                |y| {
                    let y2 = y * y;
                    let q = 1.0 / ((1.0 + t * y2) * (1.0 + 2.0 * t * t * y2 / x));
                    ledger.check(li32_damped(q, t))
                },
                &[1.0 / t.sqrt(), (0.5 * x).sqrt() / t],
                &inner_spec,
            );
            t.powf(1.5) * ledger.record(inner)
        },
        1.0,
        spec,
    );
    ledger.finish(outer)
}

/// Which reflection coefficients an `f0` of `pair` multiplies inside the polylogarithm.
pub fn li_argument(pair: ModelPair, t: f64, y: f64, params: &PlasmaParams) -> f64 {
    refl(pair.cyl(), t, y, params) * refl(pair.plane(), t, y, params) * (-2.0 * t).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::gamma::{gamma_half, zeta};
    use approx::assert_relative_eq;

    fn p(ol: f64, wl: f64) -> PlasmaParams {
        PlasmaParams::dimensionless(ol, wl).unwrap()
    }

    #[test]
    fn norm_inverts_hard_integral() {
        // ∫t^{3/2} Li_{3/2}(e^{-2t}) = Γ(5/2) ζ(4) / 2^{5/2}
        let hard = gamma_half(2) * zeta(4.0) / 2f64.powf(2.5);
        assert_relative_eq!(pfa_norm() * hard, 1.0, max_relative = 1e-14);
    }

    #[test]
    fn hard_limit_is_one() {
        let spec = QuadSpec::default();
        for pair in ModelPair::ALL {
            let r = f0(pair, &p(1e9, 1e9), &spec).unwrap();
            assert!(r.converged);
            assert_relative_eq!(r.value, 1.0, max_relative = 1e-6);
        }
    }

    #[test]
    fn transparent_is_zero() {
        let spec = QuadSpec::default();
        assert_eq!(f0(ModelPair::DdTm, &p(0.0, 0.0), &spec).unwrap().value, 0.0);
        assert_eq!(f0(ModelPair::EdTe, &p(3.0, 0.0), &spec).unwrap().value, 0.0);
        let g = Geometry::new(1.0, 0.1).unwrap();
        assert_eq!(e_pfa(ModelPair::EdTm, &g, &p(0.0, 0.0), &spec).unwrap().value, 0.0);
    }

    #[test]
    fn ftilde_dd_matches_series() {
        // Σ_n n^{-3/2} ∫t^{3/2}e^{-2nt}∫dy (1+ty²)^{-2n} = Σ_n n^{-7/2} √π Γ(2n-1/2) / (8 Γ(2n))
        let mut series = 0.0;
        let mut ratio = PI.sqrt() / 2.0;
        for n in 1..=4000u32 {
            let m = 2.0 * n as f64;
            series += (n as f64).powf(-3.5) * PI.sqrt() * ratio / 8.0;
            ratio *= (m - 0.5) * (m + 0.5) / (m * (m + 1.0));
        }
        let r = ftilde_dd(&QuadSpec::default()).unwrap();
        assert!(r.converged);
        assert_relative_eq!(r.value, series, max_relative = 1e-7);
    }
}
