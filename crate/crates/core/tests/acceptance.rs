//! Acceptance run: one PASS/FAIL line per criterion, with the measured value and timing.
//!
//! Exits non-zero when any criterion fails.

use std::f64::consts::{PI, SQRT_2};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use cylplane::asympt::{scaling_sample, order_scaling};
use cylplane::beyond::{f1_dd_closed, f1_series, g_dd, series_integrand, F1Constants, Mode};
use cylplane::beyond::closed::g_denominator;
use cylplane::models::{Geometry, ModelPair, PlasmaParams};
use cylplane::modesum::{energy_oracle, TruncationSpec};
use cylplane::pfa::{f0, ftilde_dd, ftilde_ed, hard_energy};
use cylplane::specfun::QuadSpec;
use cylplane::verify::{dirichlet_ktilde_residual, run_suite, Suite};
use cylplane::Result;

struct Line {
    id: &'static str,
    what: String,
    pass: bool,
    detail: String,
}

fn line(id: &'static str, what: impl Into<String>, pass: bool, detail: impl Into<String>) -> Line {
    Line { id, what: what.into(), pass, detail: detail.into() }
}

fn spec() -> QuadSpec {
    QuadSpec::default()
}

fn dd(ol: f64) -> PlasmaParams {
    PlasmaParams::dimensionless(ol, 0.0).unwrap()
}

fn c1_ftilde_dd() -> Result<Vec<Line>> {
    let t = Instant::now();
    let v = ftilde_dd(&spec())?.value;
    let dt = t.elapsed();
    Ok(vec![line("1", "ftilde_dd = 0.254 ± 0.002, < 30 s", (v - 0.254).abs() <= 0.002 && dt < Duration::from_secs(30),
        format!("value {v:.6}, {dt:.2?}"))])
}

fn c2_ftilde_ed() -> Result<Vec<Line>> {
    let lo = ftilde_ed(1e-4, &spec())?.value / (1.62 * 1e-2);
    let hi = ftilde_ed(1e4, &spec())?.value;
    Ok(vec![
        line("2a", "ftilde_ed(1e-4)/(1.62 sqrt x) in [0.95, 1.05]", (0.95..=1.05).contains(&lo), format!("ratio {lo:.6}")),
        line("2b", "ftilde_ed(1e4) = 1.39 ± 0.03", (hi - 1.39).abs() <= 0.03, format!("value {hi:.6}")),
    ])
}

fn c3_hard_f0() -> Result<Vec<Line>> {
    let mut out = Vec::new();
    let grid: Vec<f64> = (0..20).map(|i| 10f64.powf(-2.0 + 6.0 * i as f64 / 19.0)).collect();
    for pair in ModelPair::ALL {
        let at = |ol: f64| f0(pair, &PlasmaParams::dimensionless(ol, ol).unwrap(), &spec()).map(|r| r.value);
        let top = at(1e4)?;
        let vals = grid.iter().map(|&x| at(x)).collect::<Result<Vec<_>>>()?;
        let mono = vals.windows(2).all(|w| w[1] > w[0]);
        out.push(line("3", format!("{} f0(1e4) in [0.95, 1], monotone", pair.label()), (0.95..=1.0).contains(&top) && mono,
            format!("f0(1e4) = {top:.6}, monotone {mono}")));
    }
    Ok(out)
}

fn c4_te_small() -> Result<Vec<Line>> {
    let x = 1e-3;
    let a = f0(ModelPair::DdTe, &dd(x), &spec())?.value / (840.0 / PI.powi(4) * x * x);
    let b = f0(ModelPair::EdTe, &PlasmaParams::dimensionless(x, x)?, &spec())?.value / (420.0 / PI.powi(4) * x * x);
    Ok(vec![
        line("4a", "f0 dd-te(1e-3) / (840/pi^4) 1e-6 in [0.95, 1.05]", (0.95..=1.05).contains(&a), format!("ratio {a:.6}")),
        line("4b", "f0 ed-te(1e-3, 1e-3) / (420/pi^4) 1e-6 in [0.95, 1.05]", (0.95..=1.05).contains(&b), format!("ratio {b:.6}")),
    ])
}

fn c5_tm_small() -> Result<Vec<Line>> {
    let r = f0(ModelPair::DdTm, &dd(1e-4), &spec())?.value / (840.0 * SQRT_2 / PI.powf(4.5) * 0.254 * 1e-2);
    Ok(vec![line("5", "f0 dd-tm(1e-4) against 0.254 weak-coupling form in [0.95, 1.05]", (0.95..=1.05).contains(&r),
        format!("ratio {r:.6}"))])
}

fn c6_f1_te_small() -> Result<Vec<Line>> {
    let r = f1_dd_closed(Mode::Te, 1e-3, &spec())?.value / (720.0 * SQRT_2 / (7.0 * PI.powf(3.5)) * 10f64.powf(-4.5));
    Ok(vec![line("6", "f1 dd-te(1e-3) weak-coupling ratio in [0.90, 1.10]", (0.90..=1.10).contains(&r), format!("ratio {r:.6}"))])
}

fn c7_f1_tm_small() -> Result<Vec<Line>> {
    let r = f1_dd_closed(Mode::Tm, 1e-4, &spec())?.value / (0.92 * 1e-2);
    Ok(vec![line("7", "f1 dd-tm(1e-4)/(0.92e-2) in [0.95, 1.05]", (0.95..=1.05).contains(&r), format!("ratio {r:.6}"))])
}

fn c8_f1_hard() -> Result<Vec<Line>> {
    let mut out = Vec::new();
    for mode in [Mode::Te, Mode::Tm] {
        let v = f1_dd_closed(mode, 1e4, &spec())?.value;
        out.push(line("8", format!("{:?} f1(1e4) in [0.95, 1.05]", mode), (0.95..=1.05).contains(&v), format!("value {v:.6}")));
    }
    Ok(out)
}

fn c9_generic() -> Result<Vec<Line>> {
    let t0 = Instant::now();
    let mut worst: f64 = 0.0;
    for mode in [Mode::Te, Mode::Tm] {
        for ol in [0.1, 1.0, 10.0] {
            let c = f1_dd_closed(mode, ol, &spec())?.value;
            let s = f1_series(mode.pair(), &dd(ol), &spec())?.value;
            worst = worst.max((s / c - 1.0).abs());
        }
    }
    // 20 quasi-random points in (t, y, Omega_L)
    let mut pointwise: f64 = 0.0;
    for i in 1..=20u32 {
        let t = 0.05 + 4.0 * (i as f64 * 0.618_033_988_749_895).fract();
        let y = (i as f64 * 0.414_213_562_373_095).fract();
        let ol = 10f64.powf(-1.0 + 3.0 * (i as f64 * 0.732_050_807_568_877).fract());
        for mode in [Mode::Te, Mode::Tm] {
            let y = if mode == Mode::Te { 0.0 } else { y };
            let closed = g_dd(mode, t, y, ol)? / g_denominator(mode, t, y, ol);
            let series = series_integrand(mode.pair(), t, y, &dd(ol))?;
            pointwise = pointwise.max((series / closed - 1.0).abs());
        }
    }
    let dt = t0.elapsed();
    Ok(vec![line("9", "generic f1 = closed f1 (1e-4), integrands (1e-6), < 10 min",
        worst <= 1e-4 && pointwise <= 1e-6 && dt < Duration::from_secs(600),
        format!("integrated {worst:.2e}, pointwise {pointwise:.2e}, {dt:.2?}"))])
}

fn c10_orders() -> Result<Vec<Line>> {
    let spec = QuadSpec::default().with_rel_tol(1e-13);
    let (lo, hi) = (1.2, 1.8);
    let (mut cyl, mut kt) = (Vec::new(), Vec::new());
    for pair in ModelPair::ALL {
        for (i, (p, pr)) in scaling_sample(10).into_iter().enumerate() {
            let s = order_scaling(pair, p, &pr, 0.02, &spec)?;
            if !(lo..=hi).contains(&s.cyl_slope) {
                cyl.push(format!("{}#{i}:{:.2}", pair.label(), s.cyl_slope));
            }
            if !(lo..=hi).contains(&s.phi_slope) {
                kt.push(format!("{}#{i}:{:.2}", pair.label(), s.phi_slope));
            }
        }
    }
    let show = |v: &Vec<String>| if v.is_empty() { "all 40 inside".to_string() } else { format!("outside: {}", v.join(" ")) };
    Ok(vec![
        line("10a", "r_cyl error ratio in [2^1.2, 2^1.8] at every point", cyl.is_empty(), show(&cyl)),
        line("10b", "ktilde error ratio in [2^1.2, 2^1.8] at every point", kt.is_empty(), show(&kt)),
    ])
}

fn c11_dirichlet() -> Result<Vec<Line>> {
    let r = dirichlet_ktilde_residual()?;
    Ok(vec![line("11", "ktilde at Omega = 1e8 equals K_mu(2 a rho) to 1e-8", r < 1e-8, format!("worst relative {r:.2e}"))])
}

/// Least-squares line through `(x, y)`, returning its value at zero.
fn intercept(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    my - sxy / sxx * mx
}

fn c12_oracle() -> Result<Vec<Line>> {
    let t0 = Instant::now();
    let spec = QuadSpec::default().with_rel_tol(1e-7);
    let ol = 50.0;
    let eps = [0.4, 0.2, 0.1];
    let mut out = Vec::new();
    for (mode, tol) in [(Mode::Te, 0.15), (Mode::Tm, 0.20)] {
        let pair = mode.pair();
        let f0v = f0(pair, &dd(ol), &spec)?.value;
        let target = F1Constants::hard(mode == Mode::Te) * f1_dd_closed(mode, ol, &spec)?.value / f0v;
        let mut slopes = Vec::new();
        let mut signs_ok = true;
        for &e in &eps {
            let g = Geometry::new(1.0 / e, 1.0)?;
            let pr = PlasmaParams::with_geometry(ol, 0.0, &g)?;
            let (energy, d) = energy_oracle(pair, &g, &pr, &TruncationSpec::default(), &spec)?;
            signs_ok &= d.converged && energy < 0.0;
            slopes.push((energy / (hard_energy(&g) * f0v) - 1.0) / e);
        }
        let fit = intercept(&eps, &slopes);
        let two = intercept(&eps[1..], &slopes[1..]);
        let dev = (fit / target - 1.0).abs();
        out.push(line("12", format!("{:?} oracle slope extrapolates to f1h f1/f0 within {:.0}%", mode, tol * 100.0),
            dev <= tol && signs_ok,
            format!("slopes {:.5} {:.5} {:.5}, fit {fit:.5} (last two {two:.5}), target {target:.5}, off {:.1}%",
                slopes[0], slopes[1], slopes[2], dev * 100.0)));
    }
    let dt = t0.elapsed();
    out.push(line("12", "oracle runtime <= 30 min", dt <= Duration::from_secs(1800), format!("{dt:.2?}")));
    Ok(out)
}

fn c13_suites() -> Result<Vec<Line>> {
    let t0 = Instant::now();
    let mut out = Vec::new();
    for s in [Suite::Specfun, Suite::Tau, Suite::Chain, Suite::Oracle] {
        let r = run_suite(s)?;
        let bad: Vec<&str> = r.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
        out.push(line("13", format!("verify suite {s}"), bad.is_empty(),
            if bad.is_empty() { format!("{} checks green", r.checks.len()) } else { format!("failing: {}", bad.join("; ")) }));
    }
    let dt = t0.elapsed();
    out.push(line("13", "suites < 5 min", dt < Duration::from_secs(300), format!("{dt:.2?}")));
    Ok(out)
}

fn main() -> ExitCode {
    let criteria: [fn() -> Result<Vec<Line>>; 13] = [
        c1_ftilde_dd, c2_ftilde_ed, c3_hard_f0, c4_te_small, c5_tm_small, c6_f1_te_small, c7_f1_tm_small,
        c8_f1_hard, c9_generic, c10_orders, c11_dirichlet, c12_oracle, c13_suites,
    ];
    let (mut passed, mut failed) = (0, 0);
    for (k, c) in criteria.iter().enumerate() {
        let t = Instant::now();
        let lines = c().unwrap_or_else(|e| vec![line("?", format!("criterion {}", k + 1), false, format!("error: {e}"))]);
        let dt = t.elapsed();
        for l in lines {
            if l.pass { passed += 1 } else { failed += 1 }
            println!("{} [{:>3}] {}: {} ({dt:.2?})", if l.pass { "PASS" } else { "FAIL" }, l.id, l.what, l.detail);
        }
    }
    println!("\n{passed} passed, {failed} failed");
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
