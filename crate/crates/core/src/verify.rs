//! Property suites run by `cylplane verify`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use crate::asympt::{
    a_asympt_compose, a_exact_link, compose_coeffs, ktilde_exact_scaled, order_scaling, scaling_sample, LinkPoint,
};
use crate::beyond::chain::{chain_moment, laurent_fit_residual, odd_sums_vanish};
use crate::beyond::closed::g_denominator;
use crate::beyond::{a_coeff, g_dd, series_integrand, tau_reduce, LinkArgs, Mode, Order};
use crate::models::{BoundaryKind, Geometry, ModelPair, PlasmaParams};
use crate::modesum::{energy_oracle, TruncationSpec};
use crate::specfun::{bessel_ik_real, integrate, polylog, QuadSpec};
use crate::{Error, Result};

/// One named property and its outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed, detail: detail.into() }
    }

    /// Passes when `err ≤ tol`.
    fn within(name: impl Into<String>, err: f64, tol: f64) -> Self {
        Check::new(name, err <= tol, format!("error {err:.3e}, tolerance {tol:.1e}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Specfun,
    Tau,
    Chain,
    Asympt,
    Beyond,
    Oracle,
}

impl Suite {
    pub const ALL: [Suite; 6] = [Suite::Specfun, Suite::Tau, Suite::Chain, Suite::Asympt, Suite::Beyond, Suite::Oracle];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Specfun => "specfun",
            Suite::Tau => "tau",
            Suite::Chain => "chain",
            Suite::Asympt => "asympt",
            Suite::Beyond => "beyond",
            Suite::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::domain(format!("unknown suite '{s}' (expected one of specfun, tau, chain, asympt, beyond, oracle)")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub fn run_suite(suite: Suite) -> Result<SuiteReport> {
    let checks = match suite {
        Suite::Specfun => specfun()?,
        Suite::Tau => tau()?,
        Suite::Chain => chain()?,
        Suite::Asympt => asympt()?,
        Suite::Beyond => beyond()?,
        Suite::Oracle => oracle()?,
    };
    Ok(SuiteReport { suite, checks })
}

/// Worst `|x(I'_νK_ν − I_νK'_ν) − 1|` over a grid of orders and arguments.
pub fn wronskian_residual() -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &nu in &[0.0, 0.5, 1.0, 2.5, 10.0, 37.3, 150.0, 600.0, 1000.0] {
        for &x in &[1e-5, 0.01, 0.7, 3.0, 25.0, 180.0, 1e3, 5e4] {
            let b = bessel_ik_real(nu, x)?;
            // IK · x · (I'/I − K'/K)
            let w = b.ik_product() * x * (b.i.log_derivative() - b.k.log_derivative());
            worst = worst.max((w - 1.0).abs());
        }
    }
    Ok(worst)
}

/// Worst relative defect of `Li_s(z) + Li_s(−z) = 2^{1−s} Li_s(z²)`.
///
/// `z ≤ ½` keeps `Li_s(−z)` on its direct series, which does not use the identity.
pub fn duplication_residual() -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &s in &[-1.5, -0.5, 0.5, 1.5, 2.5, 3.5] {
        for &z in &[0.05, 0.2, 0.35, 0.5] {
            let lhs = polylog(s, z)? + polylog(s, -z)?;
            let rhs = 2f64.powf(1.0 - s) * polylog(s, z * z)?;
            worst = worst.max((lhs - rhs).abs() / rhs.abs().max(1e-300));
        }
    }
    Ok(worst)
}

fn specfun() -> Result<Vec<Check>> {
    Ok(vec![
        Check::within("bessel wronskian", wronskian_residual()?, 1e-12),
        Check::within("polylog duplication", duplication_residual()?, 1e-10),
    ])
}

/// `|lhs − rhs|` of the τ-reduction identity
/// `∫₀^{π/2}dα/(π/2) ∫₀¹dτ τ^{2n} f(√(1−τ²) sin α) = Γ(n+½)/(√πΓ(n+1)) ∫₀¹dy (1−y²)ⁿ f(y)`.
pub fn tau_identity_residual<F: Fn(f64) -> f64>(n: u32, f: F) -> f64 {
    let spec = QuadSpec::default().with_rel_tol(1e-13).with_abs_tol(1e-15);
    let inner = QuadSpec { abs_tol: 1e-17, ..spec };
    let lhs = integrate(
        |alpha| {
            let s = alpha.sin();
            integrate(|tau| tau.powi(2 * n as i32) * f((1.0 - tau * tau).sqrt() * s), 0.0, 1.0, &inner).value
        },
        0.0,
        0.5 * PI,
        &spec,
    )
    .value
        / (0.5 * PI);
    let rhs = tau_reduce(n, &f, &spec).value;
    (lhs - rhs).abs()
}

fn tau() -> Result<Vec<Check>> {
    let fs: [(&str, fn(f64) -> f64); 3] =
        [("1", |_| 1.0), ("exp(-2y)", |y| (-2.0 * y).exp()), ("1/(1+3y^2)^2", |y| 1.0 / (1.0 + 3.0 * y * y).powi(2))];
    let mut out = Vec::new();
    for n in 0..=2u32 {
        for (label, f) in fs {
            out.push(Check::within(format!("tau identity n={n} f={label}"), tau_identity_residual(n, f), 1e-10));
        }
    }
    Ok(out)
}

/// Determinant of the chain's quadratic form `Σ(n_i − n_{i+1})²` in `s` variables, exactly.
pub fn chain_form_determinant(s: usize) -> BigInt {
    // tridiagonal (2, −1): d_k = 2 d_{k−1} − d_{k−2}
    let (mut prev, mut cur) = (BigInt::from(1), BigInt::from(2));
    for _ in 1..s {
        let next = BigInt::from(2) * &cur - &prev;
        prev = cur;
        cur = next;
    }
    if s == 0 { BigInt::from(1) } else { cur }
}

fn chain() -> Result<Vec<Check>> {
    let mut norm_ok = true;
    let mut worst: f64 = 0.0;
    for s in 0..=40usize {
        norm_ok &= chain_form_determinant(s) == BigInt::from(s + 1);
        let m = if s == 0 { 1.0 } else { chain_moment(s, &[])? };
        worst = worst.max((m * ((s + 1) as f64).sqrt() - 1.0).abs());
    }
    let mut odd_ok = (1..=12).all(odd_sums_vanish);
    for s in 1..=8usize {
        for p in [vec![1], vec![0, 3], vec![2, 1, 0], vec![1, 1, 1, 2]] {
            if p.len() <= s {
                odd_ok &= chain_moment(s, &p)? == 0.0;
            }
        }
    }
    Ok(vec![
        Check::new("chain normalisation (s+1)^(-1/2), s <= 40", norm_ok && worst <= 2.0 * f64::EPSILON,
            format!("exact determinants {}, float deviation {worst:.1e}", if norm_ok { "match" } else { "differ" })),
        Check::new("odd moments vanish", odd_ok, "chains of 1 to 12 links"),
        Check::within("link-sum Laurent fit", laurent_fit_residual(12), 1e-12),
    ])
}

/// Per-point order scaling of the cylinder and plane expansions between `ε = 0.02` and
/// `0.01`, as `(pair, point index, cylinder slope, plane slope)`.
pub fn order_scaling_table(count: usize) -> Result<Vec<(ModelPair, usize, f64, f64)>> {
    let spec = QuadSpec::default().with_rel_tol(1e-13);
    let mut out = Vec::new();
    for pair in ModelPair::ALL {
        for (i, (p, pr)) in scaling_sample(count).into_iter().enumerate() {
            let s = order_scaling(pair, p, &pr, 0.02, &spec)?;
            out.push((pair, i, s.cyl_slope, s.phi_slope));
        }
    }
    Ok(out)
}

/// Worst relative deviation of `𝒦_μ` at `Ω = 10⁸` (gap units) from `K_μ(2aρ)`, over
/// `μ ∈ {0, 1, 5}` and `aρ ∈ {1, 3}` with `R/L = 10`.
pub fn dirichlet_ktilde_residual() -> Result<f64> {
    let geom = Geometry::new(10.0, 1.0)?;
    let pr = PlasmaParams::with_geometry(1e8, 0.0, &geom)?;
    let spec = QuadSpec::default().with_rel_tol(1e-13);
    let mut worst: f64 = 0.0;
    for &mu in &[0.0, 1.0, 5.0] {
        for &arho in &[1.0, 3.0] {
            let rho = arho / geom.a();
            let k = ktilde_exact_scaled(BoundaryKind::DeltaTE, mu, geom.a(), rho, 0.0, &pr, &spec)?;
            let want = bessel_ik_real(mu, 2.0 * arho)?.k.ln_value();
            worst = worst.max((k.value.ln() + k.log_scale - want).exp_m1().abs());
        }
    }
    Ok(worst)
}

fn asympt() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let rows = order_scaling_table(10)?;
    let (lo, hi) = (1.2, 1.8);
    let bad: Vec<String> = rows
        .iter()
        .filter(|r| !(lo..=hi).contains(&r.2) || !(lo..=hi).contains(&r.3))
        .map(|r| format!("{}#{} ({:.2}, {:.2})", r.0.label(), r.1, r.2, r.3))
        .collect();
    out.push(Check::new(
        "error slopes in [1.2, 1.8] at every sample point",
        bad.is_empty(),
        if bad.is_empty() { "all inside".to_string() } else { format!("outside: {}", bad.join(", ")) },
    ));
    out.push(Check::within("Dirichlet limit of ktilde", dirichlet_ktilde_residual()?, 1e-8));
    let pr = PlasmaParams::dimensionless(1.7, 0.6)?;
    let mut worst: f64 = 0.0;
    for (p, _) in scaling_sample(6) {
        let p = LinkPoint { eps: 0.01, ..p };
        let args = LinkArgs::new(p.t, p.tau, p.y, &pr);
        for pair in ModelPair::ALL {
            let (h, one) = compose_coeffs(pair, &p, &pr)?;
            worst = worst.max((h - a_coeff(pair, Order::Half, p.n, p.np, &args)).abs());
            worst = worst.max((one - a_coeff(pair, Order::One, p.n, p.np, &args)).abs());
        }
    }
    out.push(Check::within("composed expansions give the link coefficients", worst, 1e-8));
    let spec = QuadSpec::default().with_rel_tol(1e-12);
    let mut worst: f64 = 0.0;
    for (p, pr) in scaling_sample(4) {
        let p = LinkPoint { eps: 0.01, ..p };
        for pair in ModelPair::ALL {
            let exact = a_exact_link(pair, &p, &pr, &spec)?.into_result("exact link")?;
            worst = worst.max((exact.value / a_asympt_compose(pair, &p, &pr)? - 1.0).abs());
        }
    }
    out.push(Check::within("exact link entry against its expansion at eps = 0.01", worst, 3.0 * 0.01f64.powf(1.5)));
    Ok(out)
}

fn beyond() -> Result<Vec<Check>> {
    // integrand-level agreement of the generic series with the closed forms
    let mut worst: f64 = 0.0;
    for (k, &big) in [0.1, 1.0, 10.0].iter().enumerate() {
        let pr = PlasmaParams::dimensionless(big, 0.0)?;
        for j in 0..7 {
            let t = 0.02 + 0.9 * ((k * 7 + j) as f64 * 0.618_033_988_75).fract() * 3.0;
            let y = ((k * 7 + j) as f64 * 0.414_213_562_37).fract();
            for (mode, pair) in [(Mode::Te, ModelPair::DdTe), (Mode::Tm, ModelPair::DdTm)] {
                let yy = if pair.is_te() { 0.0 } else { y };
                let closed = g_dd(mode, t, yy, big)? / g_denominator(mode, t, yy, big);
                let series = series_integrand(pair, t, yy, &pr)?;
                worst = worst.max((series - closed).abs() / closed.abs().max(1e-300));
            }
        }
    }
    Ok(vec![Check::within("generic integrand against closed form", worst, 1e-8)])
}

fn oracle() -> Result<Vec<Check>> {
    let spec = QuadSpec::default().with_rel_tol(1e-6);
    let trunc = TruncationSpec::default();
    let mut out = Vec::new();
    for pair in [ModelPair::DdTe, ModelPair::DdTm, ModelPair::EdTe, ModelPair::EdTm] {
        let mut energies = Vec::new();
        for &gap in &[0.3, 0.4, 0.6] {
            let geom = Geometry::new(1.0, gap)?;
            let pr = PlasmaParams { omega: 5.0, omega_p: 3.0, omega_l: 5.0 * gap, omega_pl: 3.0 * gap };
            let (e, d) = energy_oracle(pair, &geom, &pr, &trunc, &spec)?;
            if !d.converged {
                return Err(Error::no_convergence(format!("oracle at gap {gap}")));
            }
            energies.push(e);
        }
        let negative = energies.iter().all(|&e| e < 0.0);
        let decreasing = energies.windows(2).all(|w| w[1].abs() < w[0].abs());
        let shown: Vec<String> = energies.iter().map(|e| format!("{e:.6e}")).collect();
        let detail = format!("E at L = 0.3, 0.4, 0.6: {}", shown.join(", "));
        out.push(Check::new(format!("{} oracle energy negative", pair.label()), negative, detail.clone()));
        out.push(Check::new(format!("{} oracle |E| decreasing in L", pair.label()), decreasing, detail));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn chain_determinants_are_exact() {
        for s in 0..=40usize {
            assert_eq!(chain_form_determinant(s), BigInt::from(s + 1));
        }
    }

    #[test]
    fn fast_suites_pass() {
        for suite in [Suite::Specfun, Suite::Tau, Suite::Chain, Suite::Beyond] {
            let r = run_suite(suite).unwrap();
            for c in &r.checks {
                assert!(c.passed, "{suite}: {} ({})", c.name, c.detail);
            }
        }
    }
}
