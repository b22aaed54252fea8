//! Exact cylinder factors and plane integrals against their small-`ε` expansions.
//!
//! A link `(m, m')` of the reflection chain is mapped to the expansion variables by
//! `ρ = (t/ε)√(1−τ²)`, `m = (t/ε)τ + n√(4t/ε)`, `m' = (t/ε)τ + n'√(4t/ε)`, in units where
//! the cylinder radius is one and the gap is `ε`.  Each exact factor is compared with its
//! expansion after removing the same exponential, so the large exponents of the Bessel
//! functions and of the saddle never meet.

use std::f64::consts::PI;

use crate::beyond::coeffs::{psi_bracket, q_te_bracket, q_tm_bracket};
use crate::beyond::LinkArgs;
use crate::models::{refl, two_gamma_dtilde, BoundaryKind, Geometry, ModelPair, PlasmaParams};
use crate::specfun::{bessel_ik_real, integrate_breaks, QuadResult, QuadSpec};
use crate::{Error, Result};

/// How many terms of an expansion in `√ε` to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExpansionOrder {
    Leading,
    Half,
    One,
}

impl ExpansionOrder {
    pub const ALL: [ExpansionOrder; 3] = [ExpansionOrder::Leading, ExpansionOrder::Half, ExpansionOrder::One];

    /// `1 + c_h√ε + c_1 ε` truncated at this order.
    pub fn series(self, eps: f64, c_half: f64, c_one: f64) -> f64 {
        match self {
            ExpansionOrder::Leading => 1.0,
            ExpansionOrder::Half => 1.0 + c_half * eps.sqrt(),
            ExpansionOrder::One => 1.0 + c_half * eps.sqrt() + c_one * eps,
        }
    }
}

/// A signed number stored as `sign · e^{ln_abs}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogValue {
    pub sign: f64,
    pub ln_abs: f64,
}

impl LogValue {
    pub fn value(self) -> f64 {
        self.sign * self.ln_abs.exp()
    }
}

/// A quadrature result whose true value is `value · e^{log_scale}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledQuad {
    pub value: f64,
    pub error_estimate: f64,
    pub log_scale: f64,
    pub converged: bool,
}

impl ScaledQuad {
    /// The unscaled result; may underflow.
    pub fn unscaled(self) -> QuadResult {
        let s = self.log_scale.exp();
        QuadResult { value: self.value * s, error_estimate: self.error_estimate * s, converged: self.converged }
    }
}

/// One link of the chain in expansion variables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkPoint {
    pub n: f64,
    pub np: f64,
    pub t: f64,
    pub tau: f64,
    /// Must satisfy `y ≤ √(1−τ²)`, since `ω ≤ ρ`.
    pub y: f64,
    pub eps: f64,
}

/// The same link in cylinder variables (radius one, gap `ε`).
#[derive(Debug, Clone, Copy)]
struct CylVars {
    nu1: f64,
    nu2: f64,
    rho: f64,
    omega: f64,
    a: f64,
    phys: PlasmaParams,
}

impl CylVars {
    fn lambda(&self) -> f64 {
        self.nu1 + self.nu2
    }

    fn z(&self) -> f64 {
        2.0 * self.a * self.rho / self.lambda()
    }

    /// `√(π/2λ)(1+z²)^{-1/4}`, the Gaussian width factor of the saddle.
    fn saddle_pref(&self) -> f64 {
        let z = self.z();
        (PI / (2.0 * self.lambda())).sqrt() * (1.0 + z * z).powf(-0.25)
    }

    /// `η₀ = ν₂η(ρ/ν₂) + ν₁η(ρ/ν₁)`.
    fn eta0(&self) -> f64 {
        self.nu1 * eta(self.rho / self.nu1) + self.nu2 * eta(self.rho / self.nu2)
    }
}

impl LinkPoint {
    fn args(&self, params: &PlasmaParams) -> LinkArgs {
        LinkArgs::new(self.t, self.tau, self.y, params)
    }

    fn cyl(&self, params: &PlasmaParams) -> Result<CylVars> {
        let LinkPoint { n, np, t, tau, y, eps } = *self;
        if !(eps > 0.0 && t > 0.0 && (0.0..1.0).contains(&tau)) {
            return Err(Error::domain(format!("link point needs eps, t > 0 and 0 <= tau < 1, got {self:?}")));
        }
        let st = (1.0 - tau * tau).sqrt();
        if !(0.0..=st * (1.0 + 1e-12)).contains(&y) {
            return Err(Error::domain(format!("y = {y} exceeds sqrt(1 - tau^2) = {st}")));
        }
        let q = (4.0 * t / eps).sqrt();
        let m = t * tau / eps;
        let (nu1, nu2) = (m + n * q, m + np * q);
        if !(nu1 > 0.0 && nu2 > 0.0) {
            return Err(Error::domain(format!("mapped orders ({nu1}, {nu2}) must be positive")));
        }
        let geom = Geometry::new(1.0, eps)?;
        let phys = PlasmaParams::with_geometry(params.omega_l / eps, params.omega_pl / eps, &geom)?;
        Ok(CylVars { nu1, nu2, rho: t * st / eps, omega: t * y / eps, a: geom.a(), phys })
    }
}

/// `η(z) = √(1+z²) + ln(z/(1+√(1+z²)))`, the Debye exponent.
pub fn eta(z: f64) -> f64 {
    let s = z.hypot(1.0);
    s + (z / (1.0 + s)).ln()
}

fn sheet_order(m: f64) -> Result<f64> {
    if m >= 0.0 {
        Ok(m)
    } else if m.fract() == 0.0 {
        // I_{-m} = I_m and K_{-m} = K_m for integers
        Ok(-m)
    } else {
        Err(Error::domain(format!("negative non-integer order {m}")))
    }
}

/// The cylinder factor of an interaction-matrix entry, `A_{m,m'} = (factor)·𝒦_{m+m'}`, in
/// logarithmic form.
///
/// TE: `2ΩR I_m I_{m'}/(1 + 2ΩR I_m K_m)`.  TM: `−β I'_m I'_{m'}/(1 − β I'_m K'_m)` with
/// `β = 2ΩR ρ²/ω²`.  All Bessel functions are evaluated at `ρR`.
pub fn r_cyl_exact_log(
    mode: BoundaryKind,
    m: f64,
    mp: f64,
    rho: f64,
    radius: f64,
    big_omega: f64,
    omega: f64,
) -> Result<LogValue> {
    if !mode.is_sheet() {
        return Err(Error::domain(format!("{mode:?} cannot sit on the cylinder")));
    }
    if !(big_omega > 0.0) {
        return Ok(LogValue { sign: 0.0, ln_abs: f64::NEG_INFINITY });
    }
    let x = rho * radius;
    let b1 = bessel_ik_real(sheet_order(m)?, x)?;
    let b2 = bessel_ik_real(sheet_order(mp)?, x)?;
    let coupling = 2.0 * big_omega * radius;
    if mode.is_te() {
        let den = 1.0 + coupling * b1.ik_product();
        Ok(LogValue { sign: 1.0, ln_abs: coupling.ln() + b1.i.ln_value() + b2.i.ln_value() - den.ln() })
    } else {
        // divide through by β so that ω = 0 is the Neumann-like limit
        let inv_beta = omega * omega / (coupling * rho * rho);
        let den = inv_beta - b1.ipkp_product();
        let ln_ip = |b: &crate::specfun::BesselIK| b.i.ln_value() + b.i.log_derivative().ln();
        Ok(LogValue { sign: -1.0, ln_abs: ln_ip(&b1) + ln_ip(&b2) - den.ln() })
    }
}

/// [`r_cyl_exact_log`] as a plain number.
pub fn r_cyl_exact(
    mode: BoundaryKind,
    m: f64,
    mp: f64,
    rho: f64,
    radius: f64,
    big_omega: f64,
    omega: f64,
) -> Result<f64> {
    Ok(r_cyl_exact_log(mode, m, mp, rho, radius, big_omega, omega)?.value())
}

/// `π e^{-η₀}` times the exact cylinder factor at a mapped link; tends to the rescaled
/// reflection coefficient as `ε → 0`.
pub fn r_cyl_exact_normalised(mode: BoundaryKind, p: &LinkPoint, params: &PlasmaParams) -> Result<f64> {
    let c = p.cyl(params)?;
    let r = r_cyl_exact_log(mode, c.nu1, c.nu2, c.rho, 1.0, c.phys.omega, c.omega)?;
    Ok(r.sign * (r.ln_abs - c.eta0() + PI.ln()).exp())
}

/// The `√ε` and `ε` coefficients `P`, `Q` of the cylinder factor.
pub fn cyl_coeffs(mode: BoundaryKind, p: &LinkPoint, params: &PlasmaParams) -> Result<(f64, f64)> {
    let a = p.args(params);
    let (n, m, t, tau, w) = (p.n, p.np, p.t, p.tau, params.omega_l);
    let st = t.sqrt();
    match mode {
        BoundaryKind::DeltaTE => {
            let s = w + t;
            let pc = -(n * (t - w) + m * s) * tau / (st * s);
            Ok((pc, q_te_bracket(n, m, &a) / (12.0 * t * s * s)))
        }
        BoundaryKind::DeltaTM => {
            let s = t * p.y * p.y + w;
            let pc = tau * ((n + m) * t * p.y * p.y - (n - m) * w) / (st * s);
            Ok((pc, q_tm_bracket(n, m, &a) / (12.0 * t * s * s)))
        }
        _ => Err(Error::domain(format!("{mode:?} cannot sit on the cylinder"))),
    }
}

/// Expansion of [`r_cyl_exact_normalised`]: `r·(1 + P√ε + Qε)` through `order`.
pub fn r_cyl_asympt(mode: BoundaryKind, p: &LinkPoint, params: &PlasmaParams, order: ExpansionOrder) -> Result<f64> {
    let (pc, qc) = cyl_coeffs(mode, p, params)?;
    Ok(refl(mode, p.t, p.y, params) * order.series(p.eps, pc, qc))
}

/// Where the `θ`-integrand of `𝒦_μ` peaks, its exponent there, and its width.
fn ktilde_saddle(mu: f64, a: f64, rho: f64) -> (f64, f64, f64) {
    let x = 2.0 * a * rho;
    let th0 = (mu / x).asinh();
    let c0 = th0.cosh();
    (th0, mu * th0 - x * c0, 1.0 / (x * c0).sqrt())
}

/// Exponent drop below the peak at which the integrand is cut.
const KTILDE_CUT: f64 = 60.0;

/// Distances below and above the saddle where the exponent has dropped by [`KTILDE_CUT`].
fn ktilde_range(mu: f64, a: f64, rho: f64) -> (f64, f64) {
    let (th0, s0, w) = ktilde_saddle(mu, a, rho);
    let x = 2.0 * a * rho;
    let drop = |th: f64| s0 - (mu * th - x * th.cosh());
    let mut lo = w;
    while drop(th0 - lo) < KTILDE_CUT {
        lo *= 2.0;
    }
    let mut hi = w;
    while drop(th0 + hi) < KTILDE_CUT {
        hi *= 2.0;
    }
    (th0 - lo, th0 + hi)
}

fn check_ktilde_args(a: f64, rho: f64) -> Result<()> {
    if a * rho > 0.0 && (a * rho).is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("ktilde needs a*rho > 0, got a = {a}, rho = {rho}")))
    }
}

/// `𝒦_μ = ∫₀^∞dθ cosh(μθ)·2γd̃_{ω,γ}·e^{-2aρ coshθ}` with `γ = ρ coshθ`, scaled by the
/// value of the exponent at its saddle.
///
/// The integral is taken over the whole line as `½∫e^{μθ}(…)` on a window around the
/// saddle `sinh θ₀ = μ/(2aρ)`.
pub fn ktilde_exact_scaled(
    kind: BoundaryKind,
    mu: f64,
    a: f64,
    rho: f64,
    omega: f64,
    params: &PlasmaParams,
    spec: &QuadSpec,
) -> Result<ScaledQuad> {
    check_ktilde_args(a, rho)?;
    let mu = mu.abs();
    let (th0, s0, w) = ktilde_saddle(mu, a, rho);
    let (lo, hi) = ktilde_range(mu, a, rho);
    let x = 2.0 * a * rho;
    let f = |th: f64| {
        let c = th.cosh();
        0.5 * two_gamma_dtilde(kind, omega, rho * c, params) * (mu * th - x * c - s0).exp()
    };
    let r = integrate_breaks(f, &[lo, th0 - w, th0, th0 + w, hi], spec);
    Ok(ScaledQuad { value: r.value, error_estimate: r.error_estimate, log_scale: s0, converged: r.converged })
}

/// [`ktilde_exact_scaled`] unscaled.
pub fn ktilde_exact(
    kind: BoundaryKind,
    mu: f64,
    a: f64,
    rho: f64,
    omega: f64,
    params: &PlasmaParams,
    spec: &QuadSpec,
) -> Result<QuadResult> {
    Ok(ktilde_exact_scaled(kind, mu, a, rho, omega, params, spec)?.unscaled())
}

/// The same integral in the variable `u = sinh θ`, as an independent check.
pub fn ktilde_exact_sinh(
    kind: BoundaryKind,
    mu: f64,
    a: f64,
    rho: f64,
    omega: f64,
    params: &PlasmaParams,
    spec: &QuadSpec,
) -> Result<ScaledQuad> {
    check_ktilde_args(a, rho)?;
    let mu = mu.abs();
    let (th0, s0, w) = ktilde_saddle(mu, a, rho);
    let (lo, hi) = ktilde_range(mu, a, rho);
    let x = 2.0 * a * rho;
    let f = |u: f64| {
        let c = u.hypot(1.0);
        0.5 * two_gamma_dtilde(kind, omega, rho * c, params) * (mu * u.asinh() - x * c - s0).exp() / c
    };
    let pts: Vec<f64> = [lo, th0 - w, th0, th0 + w, hi].iter().map(|v| v.sinh()).collect();
    let r = integrate_breaks(f, &pts, spec);
    Ok(ScaledQuad { value: r.value, error_estimate: r.error_estimate, log_scale: s0, converged: r.converged })
}

/// The plane factor `φ` of a mapped link: `𝒦 e^{λη(z)}` divided by the Gaussian width
/// factor, with `λ = m + m'` and `z = 2aρ/λ`.
pub fn phi_exact(kind: BoundaryKind, p: &LinkPoint, params: &PlasmaParams, spec: &QuadSpec) -> Result<QuadResult> {
    let c = p.cyl(params)?;
    let k = ktilde_exact_scaled(kind, c.lambda(), c.a, c.rho, c.omega, &c.phys, spec)?;
    // the saddle exponent is exactly −λη(z)
    let s = (k.log_scale + c.lambda() * eta(c.z())).exp() / c.saddle_pref();
    Ok(QuadResult { value: k.value * s, error_estimate: k.error_estimate * s, converged: k.converged })
}

/// `φ₀`, `φ_h`, `φ₁` of the plane factor `φ ≈ φ₀ + φ_h√ε + φ₁ε`.
pub fn phi_coeffs(kind: BoundaryKind, p: &LinkPoint, params: &PlasmaParams) -> (f64, f64, f64) {
    let (t, tau, y) = (p.t, p.tau, p.y);
    let (w, wl) = (params.omega_l, params.omega_pl);
    let s = p.n + p.np;
    let s2 = s * s;
    let (t2, y2, st) = (tau * tau, y * y, t.sqrt());
    match kind {
        BoundaryKind::DeltaTE => {
            let d = w + t;
            let p1 = w / (48.0 * t * d.powi(3))
                * ((5.0 * t2 - 3.0) * w * w
                    + 2.0 * t * w * (12.0 * (t2 - 1.0) * s2 + 24.0 * t * t2 + 11.0 * t2 - 9.0)
                    + t * t * (24.0 * (3.0 * t2 - 1.0) * s2 + 48.0 * t * t2 + 41.0 * t2 - 15.0));
            (w / d, -s * w * st * tau / (d * d), p1)
        }
        BoundaryKind::DeltaTM => {
            let d = t * y2 + w;
            let p1 = w / (48.0 * t * d.powi(3))
                * (t * t * y2 * y2 * (24.0 * (t2 - 1.0) * s2 + 48.0 * t * t2 + 7.0 * t2 - 9.0)
                    + 2.0 * w * t * y2 * (12.0 * (3.0 * t2 - 1.0) * s2 + 24.0 * t * t2 + 13.0 * t2 - 3.0)
                    + w * w * (3.0 - 5.0 * t2));
            (-w / d, -s * w * st * tau * y2 / (d * d), p1)
        }
        BoundaryKind::EpsTE => {
            let sq = wl.hypot(t);
            let (w2, ts) = (wl * wl, t + sq);
            let k = (t2 - 1.0) * w2 * w2
                + t * (sq * (3.0 * t2 - 1.0) + t * (5.0 * t2 - 2.0)) * w2
                + t.powi(3) * ts * (4.0 * t2 - 1.0);
            let p1 = -(w2 + t * (t - t * t2 - 2.0 * sq * t2)) * w2 / (2.0 * sq.powi(3) * ts * ts)
                + w2 * (k * s2 + 2.0 * t * (w2 + t * t) * (w2 + t * ts) * t2) / ((w2 + t * t).powi(2) * ts.powi(3))
                + (sq - t) * t2 / (2.0 * (w2 + t * ts))
                + (sq - t) * (5.0 * t2 - 3.0) / (48.0 * t * ts);
            (w2 / (ts * ts), -2.0 * s * w2 * st * tau / (sq * ts * ts), p1)
        }
        BoundaryKind::EpsTM => {
            let sq = wl.hypot(t);
            let (w2, ts) = (wl * wl, t + sq);
            let d = w2 + t * ts * y2;
            let e = w2 + t * t * y2;
            let kk = ((t * y2 + 3.0 * sq) * t2 - t * y2 - sq) * w2 * w2
                + t * t * ((5.0 * t * y2 + sq * (3.0 * y2 + 4.0)) * t2 - 2.0 * t * y2 - sq * (y2 + 1.0)) * w2
                + t.powi(4) * ts * (4.0 * t2 - 1.0) * y2;
            let inner = (1.0 - 2.0 * t2) * w2 * w2
                + t * (sq * y2 + t * (-(2.0 * y2 + 3.0) * t2 + y2 + 1.0)) * w2
                - t.powi(3) * ts * (3.0 * t2 - 1.0) * y2;
            let p1 = (24.0 * w2 * t2 * e * d * y2 / sq - 24.0 * w2 * e * inner * y2 / sq.powi(3)
                + 48.0 * w2 * e * (kk * s2 + 2.0 * t * (w2 + t * t) * t2 * ((t * y2 + sq) * w2 + t * t * ts * y2)) * y2
                    / (w2 + t * t).powi(2)
                - (5.0 * t2 - 3.0) / t * (w2 + t * (t - sq) * y2) * d * d)
                / (48.0 * d.powi(3));
            ((t * (sq - t) * y2 - w2) / d, -2.0 * s * w2 * st * tau * y2 * e / (sq * d * d), p1)
        }
    }
}

/// Expansion of [`phi_exact`] through `order`.
pub fn phi_asympt(kind: BoundaryKind, p: &LinkPoint, params: &PlasmaParams, order: ExpansionOrder) -> f64 {
    let (p0, ph, p1) = phi_coeffs(kind, p, params);
    match order {
        ExpansionOrder::Leading => p0,
        ExpansionOrder::Half => p0 + ph * p.eps.sqrt(),
        ExpansionOrder::One => p0 + ph * p.eps.sqrt() + p1 * p.eps,
    }
}

/// `𝒦 ≈ √(πε/4t)·φ`, without the exponential `e^{-λη(z)}`.
pub fn ktilde_asympt(kind: BoundaryKind, p: &LinkPoint, params: &PlasmaParams, order: ExpansionOrder) -> f64 {
    (PI * p.eps / (4.0 * p.t)).sqrt() * phi_asympt(kind, p, params, order)
}

/// `√ε` and `ε` coefficients of the factor ψ that collects the exponents and prefactors.
pub fn psi_coeffs(n: f64, np: f64, t: f64, tau: f64) -> (f64, f64) {
    let d = n - np;
    let half = (n + np) * (2.0 * d * d - 4.0 * t - 1.0) * tau / (2.0 * t.sqrt());
    (half, psi_bracket(n, np, t, tau) / (24.0 * t))
}

/// ψ through `order`.
pub fn psi_factor(n: f64, np: f64, t: f64, tau: f64, eps: f64, order: ExpansionOrder) -> f64 {
    let (h, one) = psi_coeffs(n, np, t, tau);
    order.series(eps, h, one)
}

/// The exact ψ: `e^{η₀ − λη(z) + 2t + (n−n')²}` times the ratio of the saddle width factor
/// to its leading form `√(πε/4t)`.
pub fn psi_exact(p: &LinkPoint) -> Result<f64> {
    // ψ does not depend on the couplings
    let c = p.cyl(&PlasmaParams::dimensionless(1.0, 1.0)?)?;
    let d = p.n - p.np;
    let ex = c.eta0() - c.lambda() * eta(c.z()) + 2.0 * p.t + d * d;
    Ok(ex.exp() * c.saddle_pref() / (PI * p.eps / (4.0 * p.t)).sqrt())
}

/// `a^{(1/2)}` and `a^{(1)}` of a pair, composed from the cylinder, plane and ψ expansions.
pub fn compose_coeffs(pair: ModelPair, p: &LinkPoint, params: &PlasmaParams) -> Result<(f64, f64)> {
    let (pc, qc) = cyl_coeffs(pair.cyl(), p, params)?;
    let (p0, ph, p1) = phi_coeffs(pair.plane(), p, params);
    let (fh, f1) = (ph / p0, p1 / p0);
    let (gh, g1) = psi_coeffs(p.n, p.np, p.t, p.tau);
    Ok((pc + fh + gh, qc + f1 + g1 + pc * fh + pc * gh + fh * gh))
}

/// `√(ε/4πt)·e^{-2t-(n−n')²}·r_cyl·r_plane·(1 + √ε a^{(1/2)} + ε a^{(1)})`, the expanded
/// matrix entry of one link.
pub fn a_asympt_compose(pair: ModelPair, p: &LinkPoint, params: &PlasmaParams) -> Result<f64> {
    let (ah, a1) = compose_coeffs(pair, p, params)?;
    let d = p.n - p.np;
    let lead = (p.eps / (4.0 * PI * p.t)).sqrt() * (-2.0 * p.t - d * d).exp();
    let r = refl(pair.cyl(), p.t, p.y, params) * refl(pair.plane(), p.t, p.y, params);
    Ok(lead * r * ExpansionOrder::One.series(p.eps, ah, a1))
}

/// The exact matrix entry of a mapped link, cylinder factor times `𝒦`.
pub fn a_exact_link(pair: ModelPair, p: &LinkPoint, params: &PlasmaParams, spec: &QuadSpec) -> Result<QuadResult> {
    let c = p.cyl(params)?;
    let r = r_cyl_exact_log(pair.cyl(), c.nu1, c.nu2, c.rho, 1.0, c.phys.omega, c.omega)?;
    let k = ktilde_exact_scaled(pair.plane(), c.lambda(), c.a, c.rho, c.omega, &c.phys, spec)?;
    let s = r.sign * (r.ln_abs + k.log_scale).exp();
    Ok(QuadResult { value: k.value * s, error_estimate: k.error_estimate * s.abs(), converged: k.converged })
}

/// Laplace expansion of `∫g(θ)e^{-λh(θ)}dθ` about an interior minimum `θ₀` of `h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaddleExpansion {
    /// `ln(√(2π/(λh''))) − λh(θ₀)`
    pub ln_prefactor: f64,
    pub leading: f64,
    /// The `1/λ` term.
    pub correction: f64,
}

impl SaddleExpansion {
    /// `g` and its first two derivatives at `θ₀`; `h` and its first four derivatives there
    /// (`h'` must vanish).
    pub fn new(g: [f64; 3], h: [f64; 5], lambda: f64) -> Result<Self> {
        let [g0, g1, g2] = g;
        let [h0, h1, h2, h3, h4] = h;
        if !(h2 > 0.0) || h1.abs() > 1e-10 * h2 {
            return Err(Error::domain("saddle expansion needs h' = 0 and h'' > 0"));
        }
        let c = g2 / (2.0 * h2) - g1 * h3 / (2.0 * h2 * h2) - g0 * h4 / (8.0 * h2 * h2)
            + 5.0 * g0 * h3 * h3 / (24.0 * h2.powi(3));
        Ok(SaddleExpansion {
            ln_prefactor: 0.5 * (2.0 * PI / (lambda * h2)).ln() - lambda * h0,
            leading: g0,
            correction: c / lambda,
        })
    }

    pub fn value(&self, order: ExpansionOrder) -> f64 {
        let s = match order {
            ExpansionOrder::Leading => self.leading,
            _ => self.leading + self.correction,
        };
        s * self.ln_prefactor.exp()
    }
}

/// The saddle expansion of `K_ν(νz) = ½∫e^{-ν(z coshθ − θ)}dθ`.
pub fn bessel_k_saddle(nu: f64, z: f64) -> Result<SaddleExpansion> {
    let th0 = (1.0 / z).asinh();
    let (c, s) = (th0.cosh(), th0.sinh());
    SaddleExpansion::new([0.5, 0.0, 0.0], [z * c - th0, z * s - 1.0, z * c, z * s, z * c], nu)
}

/// `log₂(err(ε)/err(ε/2))` of the order-`ε` expansions at one sample point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderScaling {
    pub point: LinkPoint,
    pub params: PlasmaParams,
    pub cyl_slope: f64,
    pub phi_slope: f64,
    /// Relative errors at `ε/2`.
    pub cyl_err: f64,
    pub phi_err: f64,
}

fn halton(mut i: usize, base: usize) -> f64 {
    let (mut f, mut r) = (1.0, 0.0);
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

/// `count` points of a Halton sequence over `t ∈ [½, 2]`, `τ ∈ [0.2, 0.8]`,
/// `n, n' ∈ [−½, ½]`, `Ω_L ∈ [10^{-1/2}, 10]`, `α ∈ [0.3, 1.3]` with `y = √(1−τ²) sin α`,
/// and `ω_L = Ω_L`.
pub fn scaling_sample(count: usize) -> Vec<(LinkPoint, PlasmaParams)> {
    (1..=count)
        .map(|i| {
            let u = |b| halton(i, b);
            let (t, tau) = (0.5 + 1.5 * u(2), 0.2 + 0.6 * u(3));
            let (n, np) = (u(5) - 0.5, u(7) - 0.5);
            let w = 10f64.powf(-0.5 + 1.5 * u(11));
            let alpha = 0.3 + u(13);
            let y = (1.0 - tau * tau).sqrt() * alpha.sin();
            (LinkPoint { n, np, t, tau, y, eps: 0.0 }, PlasmaParams { omega: w, omega_p: w, omega_l: w, omega_pl: w })
        })
        .collect()
}

/// Error of the order-`ε` cylinder and plane expansions at `eps` and `eps/2`.
pub fn order_scaling(
    pair: ModelPair,
    point: LinkPoint,
    params: &PlasmaParams,
    eps: f64,
    spec: &QuadSpec,
) -> Result<OrderScaling> {
    let errs = |e: f64| -> Result<(f64, f64)> {
        let p = LinkPoint { eps: e, ..point };
        let rc = r_cyl_exact_normalised(pair.cyl(), &p, params)?;
        let ra = r_cyl_asympt(pair.cyl(), &p, params, ExpansionOrder::One)?;
        let ph = phi_exact(pair.plane(), &p, params, spec)?.into_result("phi")?;
        let pa = phi_asympt(pair.plane(), &p, params, ExpansionOrder::One);
        Ok(((rc / ra - 1.0).abs(), (ph.value / pa - 1.0).abs()))
    };
    let (c1, f1) = errs(eps)?;
    let (c2, f2) = errs(0.5 * eps)?;
    Ok(OrderScaling {
        point: LinkPoint { eps, ..point },
        params: *params,
        cyl_slope: (c1 / c2).log2(),
        phi_slope: (f1 / f2).log2(),
        cyl_err: c2,
        phi_err: f2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beyond::{a_coeff, Order};
    use approx::assert_relative_eq;

    fn params(w: f64, wl: f64) -> PlasmaParams {
        PlasmaParams::dimensionless(w, wl).unwrap()
    }

    fn point(t: f64, tau: f64, n: f64, np: f64, alpha: f64, eps: f64) -> LinkPoint {
        LinkPoint { n, np, t, tau, y: (1.0 - tau * tau).sqrt() * alpha.sin(), eps }
    }

    #[test]
    fn leading_orders_are_reflection_coefficients() {
        let pr = params(2.0, 1.5);
        let p = point(0.7, 0.3, 0.2, -0.1, 0.8, 0.01);
        for kind in [BoundaryKind::DeltaTE, BoundaryKind::DeltaTM, BoundaryKind::EpsTE, BoundaryKind::EpsTM] {
            let want = refl(kind, p.t, p.y, &pr);
            assert_relative_eq!(phi_asympt(kind, &p, &pr, ExpansionOrder::Leading), want, max_relative = 1e-14);
        }
        let te = r_cyl_asympt(BoundaryKind::DeltaTE, &p, &pr, ExpansionOrder::Leading).unwrap();
        assert_relative_eq!(te, 1.0 / (1.0 + p.t / pr.omega_l), max_relative = 1e-15);
    }

    #[test]
    fn cylinder_p_vanishes_without_offsets() {
        let p = LinkPoint { n: 0.0, np: 0.0, t: 0.9, tau: 0.0, y: 0.5, eps: 0.01 };
        let (pc, _) = cyl_coeffs(BoundaryKind::DeltaTE, &p, &params(3.0, 0.0)).unwrap();
        assert_eq!(pc, 0.0);
        let (h, _) = psi_coeffs(0.0, 0.0, 0.9, 0.4);
        assert_eq!(h, 0.0);
        let (h, _) = psi_coeffs(0.3, 0.5, 0.9, 0.0);
        assert_eq!(h, 0.0);
    }

    #[test]
    fn composition_reproduces_link_coefficients() {
        let pr = params(1.7, 0.6);
        for (i, &(n, np, t, tau, a)) in
            [(0.3, -0.7, 0.8, 0.6, 0.5), (-0.2, 0.4, 1.9, 0.1, 1.2), (0.9, 0.8, 0.3, 0.75, 0.2)].iter().enumerate()
        {
            let p = point(t, tau, n, np, a, 0.01);
            let args = LinkArgs::new(t, tau, p.y, &pr);
            for pair in ModelPair::ALL {
                let (h, one) = compose_coeffs(pair, &p, &pr).unwrap();
                let (wh, w1) = (a_coeff(pair, Order::Half, n, np, &args), a_coeff(pair, Order::One, n, np, &args));
                assert!((h - wh).abs() <= 1e-8 * wh.abs().max(1.0), "{i} {pair:?} half {h} {wh}");
                assert!((one - w1).abs() <= 1e-8 * w1.abs().max(1.0), "{i} {pair:?} one {one} {w1}");
            }
        }
    }

    #[test]
    fn saddle_engine_gives_debye_series() {
        // K_ν(νz) ~ √(π/2ν) e^{-νη(z)} (1+z²)^{-1/4} (1 − u₁/ν), u₁ = (3p − 5p³)/24, p = 1/√(1+z²)
        for &(nu, z) in &[(40.0, 0.5), (120.0, 2.0), (300.0, 1.0)] {
            let s = bessel_k_saddle(nu, z).unwrap();
            let k = bessel_ik_real(nu, nu * z).unwrap().k.ln_value();
            let p = 1.0 / z.hypot(1.0);
            let u1 = (3.0 * p - 5.0 * p.powi(3)) / 24.0;
            let debye_ln = 0.5 * (PI / (2.0 * nu)).ln() - nu * eta(z) + 0.5 * p.ln() + (1.0 - u1 / nu).ln();
            let ours_ln = s.ln_prefactor + (s.leading + s.correction).ln();
            assert_relative_eq!(ours_ln, debye_ln, max_relative = 1e-12);
            // the remaining error is O(ν^{-2})
            assert!((ours_ln - k).abs() < 0.1 / (nu * nu), "{nu} {z} {ours_ln} {k}");
            let lead_ln = s.ln_prefactor + s.leading.ln();
            assert!((lead_ln - k).abs() > (ours_ln - k).abs());
        }
    }

    #[test]
    fn ktilde_hard_limit_is_bessel_k() {
        let pr = PlasmaParams { omega: 1e12, omega_p: 0.0, omega_l: 1e12, omega_pl: 0.0 };
        let spec = QuadSpec::default().with_rel_tol(1e-12);
        for &mu in &[0.0, 1.0, 5.0, 40.0] {
            for &(a, rho) in &[(1.1, 0.9), (1.01, 30.0)] {
                let k = ktilde_exact_scaled(BoundaryKind::DeltaTE, mu, a, rho, 0.0, &pr, &spec).unwrap();
                let want = bessel_ik_real(mu, 2.0 * a * rho).unwrap().k.ln_value();
                assert!(k.converged);
                assert_relative_eq!(k.value.ln() + k.log_scale, want, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn ktilde_substitutions_agree() {
        let spec = QuadSpec::default().with_rel_tol(1e-12);
        // μ = 4, aρ = 3, Ω/ρ = 1
        let (a, rho) = (1.5, 2.0);
        let pr = PlasmaParams { omega: rho, omega_p: 0.7, omega_l: rho, omega_pl: 0.7 };
        for kind in [BoundaryKind::DeltaTE, BoundaryKind::DeltaTM, BoundaryKind::EpsTE, BoundaryKind::EpsTM] {
            let x = ktilde_exact_scaled(kind, 4.0, a, rho, 1.3, &pr, &spec).unwrap();
            let y = ktilde_exact_sinh(kind, 4.0, a, rho, 1.3, &pr, &spec).unwrap();
            assert_eq!(x.log_scale, y.log_scale);
            assert_relative_eq!(x.value, y.value, max_relative = 1e-11);
        }
    }

    #[test]
    fn cylinder_factor_limits() {
        // Ω → 0 switches the cylinder off; Ω → ∞ leaves I_{m'}/K_m
        assert_eq!(r_cyl_exact(BoundaryKind::DeltaTE, 3.0, 2.0, 1.5, 1.0, 0.0, 0.4).unwrap(), 0.0);
        let b = |m: f64| bessel_ik_real(m, 1.5).unwrap();
        let hard = r_cyl_exact(BoundaryKind::DeltaTE, 3.0, 2.0, 1.5, 1.0, 1e13, 0.4).unwrap();
        assert_relative_eq!(hard, b(2.0).i.unscaled() / b(3.0).k.unscaled(), max_relative = 1e-10);
        // (m, m') = (10, 10), ρR = 12, ΩR = 5: 10 I²/(1 + 10 I K)
        let v = r_cyl_exact(BoundaryKind::DeltaTE, 10.0, 10.0, 12.0, 1.0, 5.0, 0.0).unwrap();
        // 10·I₁₀(12)²/(1 + 10·I₁₀(12)K₁₀(12)), arbitrary-precision reference
        assert_relative_eq!(v, 740072.543743737019343296425477, max_relative = 1e-12);
        // negative integer orders fold onto positive ones
        let neg = r_cyl_exact(BoundaryKind::DeltaTM, -2.0, 3.0, 0.8, 1.0, 2.0, 0.5).unwrap();
        let pos = r_cyl_exact(BoundaryKind::DeltaTM, 2.0, 3.0, 0.8, 1.0, 2.0, 0.5).unwrap();
        assert_eq!(neg, pos);
        assert!(pos < 0.0);
    }

    fn median(mut v: Vec<f64>) -> f64 {
        v.sort_by(f64::total_cmp);
        0.5 * (v[(v.len() - 1) / 2] + v[v.len() / 2])
    }

    #[test]
    fn refinement_lowers_grid_error() {
        let spec = QuadSpec::default().with_rel_tol(1e-13);
        let sample = scaling_sample(10);
        for pair in ModelPair::ALL {
            let mut mean = [[0.0; 3]; 3];
            for (p, pr) in &sample {
                let p = LinkPoint { eps: 0.01, ..*p };
                let rc = r_cyl_exact_normalised(pair.cyl(), &p, pr).unwrap();
                let ph = phi_exact(pair.plane(), &p, pr, &spec).unwrap().value;
                let ps = psi_exact(&p).unwrap();
                for (k, o) in ExpansionOrder::ALL.into_iter().enumerate() {
                    mean[0][k] += (rc / r_cyl_asympt(pair.cyl(), &p, pr, o).unwrap() - 1.0).abs();
                    mean[1][k] += (ph / phi_asympt(pair.plane(), &p, pr, o) - 1.0).abs();
                    mean[2][k] += (ps / psi_factor(p.n, p.np, p.t, p.tau, p.eps, o) - 1.0).abs();
                }
            }
            for m in mean {
                assert!(m[0] > m[1] && m[1] > m[2], "{pair:?} {m:?}");
            }
        }
    }

    #[test]
    fn expansion_errors_scale_as_three_halves() {
        let spec = QuadSpec::default().with_rel_tol(1e-13);
        for pair in ModelPair::ALL {
            let (mut cyl, mut phi, mut link) = (vec![], vec![], vec![]);
            for (p, pr) in scaling_sample(10) {
                let s = order_scaling(pair, p, &pr, 0.02, &spec).unwrap();
                cyl.push(s.cyl_slope);
                phi.push(s.phi_slope);
                let rel = |eps: f64| {
                    let q = LinkPoint { eps, ..p };
                    let exact = a_exact_link(pair, &q, &pr, &spec).unwrap();
                    assert!(exact.converged);
                    exact.value / a_asympt_compose(pair, &q, &pr).unwrap() - 1.0
                };
                let (r1, r2) = (rel(0.02), rel(0.01));
                assert!(r2.abs() < 3.0 * 0.01f64.powf(1.5), "{pair:?} {r2}");
                link.push((r1 / r2).abs().log2());
            }
            for v in [cyl, phi, link] {
                let m = median(v);
                assert!((1.3..1.7).contains(&m), "{pair:?} median slope {m}");
            }
        }
    }

    #[test]
    fn hard_limit_is_stable() {
        let p = point(0.9, 0.4, 0.1, -0.2, 0.7, 0.01);
        let (soft, hard) = (params(1e8, 1e8), params(1e9, 1e9));
        for pair in ModelPair::ALL {
            let a = a_asympt_compose(pair, &p, &soft).unwrap();
            let b = a_asympt_compose(pair, &p, &hard).unwrap();
            assert_relative_eq!(a, b, max_relative = 1e-6);
            let (h, one) = compose_coeffs(pair, &p, &hard).unwrap();
            assert!(h.is_finite() && one.is_finite());
        }
    }

    #[test]
    fn transparent_sheets_switch_the_link_off() {
        let p = point(0.9, 0.4, 0.1, -0.2, 0.7, 0.01);
        let pr = params(1e-12, 1.0);
        for pair in [ModelPair::DdTe, ModelPair::DdTm] {
            assert!(a_asympt_compose(pair, &p, &pr).unwrap().abs() < 1e-11);
        }
    }
}
