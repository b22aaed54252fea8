//! Shape of the leading functions `f0` and of the ratio `f1/f0`.

use std::f64::consts::PI;

use cylplane::beyond::{f1_dd_closed, Mode};
use cylplane::models::{ModelPair, PlasmaParams};
use cylplane::pfa::{f0, ftilde_dd, hard_energy, pfa_norm};
use cylplane::models::Geometry;
use cylplane::specfun::QuadSpec;
use proptest::prelude::*;

fn f0_at(pair: ModelPair, ol: f64, wl: f64) -> f64 {
    f0(pair, &PlasmaParams::dimensionless(ol, wl).unwrap(), &QuadSpec::default()).unwrap().value
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn f0_in_unit_interval_and_increasing(p in 0usize..4, lo in -3.0f64..4.0, lw in -3.0f64..4.0) {
        let pair = ModelPair::ALL[p];
        let (ol, wl) = (10f64.powf(lo), 10f64.powf(lw));
        let a = f0_at(pair, ol, wl);
        let b = f0_at(pair, 1.5 * ol, wl);
        prop_assert!(a > 0.0 && a <= 1.0);
        prop_assert!(b > a);
    }

    #[test]
    fn tm_dominates_te(lo in -4.0f64..4.0) {
        let ol = 10f64.powf(lo);
        prop_assert!(f0_at(ModelPair::DdTm, ol, 0.0) >= f0_at(ModelPair::DdTe, ol, 0.0));
    }
}

#[test]
fn weak_coupling_leading_terms() {
    // TE: Li ≈ argument and r ≈ Ω_L/t give (480/π⁴)Ω_L²
    let ol = 1e-7;
    let te = f0_at(ModelPair::DdTe, ol, 0.0) / (480.0 / PI.powi(4) * ol * ol);
    assert!((te - 1.0).abs() < 0.01, "{te}");
    // TM: y → y√Ω_L leaves pfa_norm·√Ω_L times the fixed double integral
    let ol = 1e-6;
    let tm = f0_at(ModelPair::DdTm, ol, 0.0) / (pfa_norm() * ol.sqrt() * ftilde_dd(&QuadSpec::default()).unwrap().value);
    assert!((tm - 1.0).abs() < 0.01, "{tm}");
}

#[test]
fn f1_over_f0_is_of_order_one() {
    let spec = QuadSpec::default();
    for mode in [Mode::Te, Mode::Tm] {
        for ol in [0.1, 0.3, 1.0, 3.0, 10.0, 30.0, 100.0] {
            let r = f1_dd_closed(mode, ol, &spec).unwrap().value / f0_at(mode.pair(), ol, 0.0);
            assert!((0.5..=3.0).contains(&r), "{mode:?} at {ol}: {r}");
        }
    }
}

#[test]
fn hard_energy_scales_with_geometry() {
    let a = hard_energy(&Geometry::new(1.0, 0.1).unwrap());
    let b = hard_energy(&Geometry::new(4.0, 0.2).unwrap());
    assert!(a < 0.0 && b < 0.0);
    // E ∝ L^{-5/2} R^{1/2}
    assert!((a / b - 2f64.powf(2.5) / 2.0).abs() < 1e-12);
}
