//! Identities of the special functions and quadrature error bounds.

use cylplane::specfun::{bessel_ik_real, integrate, integrate_semiinf_scaled, polylog, QuadSpec};
use proptest::prelude::*;
use std::f64::consts::PI;

const HALF_ORDERS: [f64; 6] = [-1.5, -0.5, 0.5, 1.5, 2.5, 3.5];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn wronskian(nu in 0.0f64..1000.0, lx in -4.0f64..4.5) {
        let x = 10f64.powf(lx);
        let b = bessel_ik_real(nu, x).unwrap();
        let w = b.ik_product() * x * (b.i.log_derivative() - b.k.log_derivative());
        prop_assert!((w - 1.0).abs() < 1e-12, "nu {nu}, x {x}: {w}");
    }

    #[test]
    fn three_term_recurrence(nu in 1.0f64..500.0, lx in -2.0f64..3.0) {
        let x = 10f64.powf(lx);
        let ln = |n: f64| bessel_ik_real(n, x).unwrap().i.ln_value();
        let mid = ln(nu);
        let (lo, hi) = ((ln(nu - 1.0) - mid).exp(), (ln(nu + 1.0) - mid).exp());
        let rhs = 2.0 * nu / x;
        prop_assert!((lo - hi - rhs).abs() <= 1e-10 * lo, "nu {nu}, x {x}: {} vs {rhs}", lo - hi);
    }

    #[test]
    fn polylog_duplication(k in 0usize..6, z in 0.001f64..0.5) {
        let s = HALF_ORDERS[k];
        let lhs = polylog(s, z).unwrap() + polylog(s, -z).unwrap();
        let rhs = 2f64.powf(1.0 - s) * polylog(s, z * z).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * rhs.abs());
    }

    #[test]
    fn polylog_increasing(k in 0usize..6, z in 0.0f64..0.999, dz in 1e-6f64..1e-3) {
        let s = HALF_ORDERS[k];
        let z2 = (z + dz).min(0.999_999);
        prop_assert!(polylog(s, z2).unwrap() > polylog(s, z).unwrap());
    }
}

#[test]
fn quadrature_estimates_bound_the_error() {
    let spec = QuadSpec::default().with_rel_tol(1e-9);
    let finite: [(&str, fn(f64) -> f64, f64, f64, f64); 4] = [
        ("sqrt", |x| x.sqrt(), 0.0, 1.0, 2.0 / 3.0),
        ("1/sqrt", |x| 1.0 / x.sqrt(), 0.0, 1.0, 2.0),
        ("ln", |x| x.ln(), 0.0, 1.0, -1.0),
        ("peak", |x| 1.0 / (1e-4 + (x - 0.3).powi(2)), 0.0, 1.0, 100.0 * ((70.0f64).atan() + (30.0f64).atan())),
    ];
    for (name, f, a, b, exact) in finite {
        let r = integrate(f, a, b, &spec);
        assert!(r.converged, "{name}");
        assert!((r.value - exact).abs() <= r.error_estimate.max(1e-15 * exact.abs()), "{name}: {r:?}");
    }
    let semi: [(&str, fn(f64) -> f64, f64); 3] = [
        ("t^1.5 e^-2t", |t| t.powf(1.5) * (-2.0 * t).exp(), 0.75 * PI.sqrt() / 2f64.powf(2.5)),
        ("e^-t/sqrt t", |t| (-t).exp() / t.sqrt(), PI.sqrt()),
        ("e^-2t cos 3t", |t| (-2.0 * t).exp() * (3.0 * t).cos(), 2.0 / 13.0),
    ];
    for (name, f, exact) in semi {
        let r = integrate_semiinf_scaled(f, 1.0, &spec);
        assert!(r.converged, "{name}");
        assert!((r.value - exact).abs() <= r.error_estimate.max(1e-15 * exact), "{name}: {r:?}");
    }
}
