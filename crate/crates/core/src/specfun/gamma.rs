//! Gamma and zeta values at the arguments the rest of the crate needs.

use std::f64::consts::PI;

/// Taylor coefficients of `1/Γ(z)` about `z = 0`; index `k` multiplies `z^k`.
const RGAMMA_TAYLOR: [f64; 31] = [
    0.0,
    1.0,
    0.577_215_664_901_532_860_6,
    -0.655_878_071_520_253_881_1,
    -0.042_002_635_034_095_235_53,
    0.166_538_611_382_291_489_5,
    -0.042_197_734_555_544_336_75,
    -0.009_621_971_527_876_973_562,
    0.007_218_943_246_663_099_542,
    -0.001_165_167_591_859_065_112,
    -0.000_215_241_674_114_950_972_8,
    0.000_128_050_282_388_116_186_2,
    -0.000_020_134_854_780_788_238_66,
    -0.000_001_250_493_482_142_670_657,
    0.000_001_133_027_231_981_695_882,
    -2.056_338_416_977_607_103e-7,
    6.116_095_104_481_415_818e-9,
    5.002_007_644_469_222_930e-9,
    -1.181_274_570_487_020_145e-9,
    1.043_426_711_691_100_510e-10,
    7.782_263_439_905_071_254e-12,
    -3.696_805_618_642_205_708e-12,
    5.100_370_287_454_475_979e-13,
    -2.058_326_053_566_506_783e-14,
    -5.348_122_539_423_017_982e-15,
    1.226_778_628_238_260_790e-15,
    -1.181_259_301_697_458_770e-16,
    1.186_692_254_751_600_333e-18,
    1.412_380_655_318_031_782e-18,
    -2.298_745_684_435_370_207e-19,
    1.714_406_321_927_337_433e-20,
];

/// `Γ(n + 1/2)` from the closed product `√π · ∏_{k=1}^{n} (k - 1/2)`.
pub fn gamma_half(n: u32) -> f64 {
    (1..=n).fold(PI.sqrt(), |acc, k| acc * (k as f64 - 0.5))
}

/// `Γ(k/2)` for odd `k`, positive or negative.
pub fn gamma_half_odd(k: i32) -> f64 {
    assert!(k % 2 != 0, "gamma_half_odd needs an odd numerator");
    if k > 0 {
        gamma_half(((k - 1) / 2) as u32)
    } else {
        // Γ(x) = Γ(x + 1) / x, walked down from 1/2.
        let mut g = PI.sqrt();
        let mut x = 0.5;
        while x > k as f64 / 2.0 + 1e-9 {
            x -= 1.0;
            g /= x;
        }
        g
    }
}

/// `1/Γ(1 + x)` for `|x| ≤ 1/2`, from the Taylor series of the reciprocal gamma.
pub fn rgamma1p(x: f64) -> f64 {
    debug_assert!(x.abs() <= 0.5 + 1e-12);
    RGAMMA_TAYLOR[1..]
        .iter()
        .rev()
        .fold(0.0, |acc, &c| acc * x + c)
}

/// Temme's auxiliary pair for `|mu| ≤ 1/2`:
/// `gam1 = (1/Γ(1-μ) - 1/Γ(1+μ)) / (2μ)` and `gam2 = (1/Γ(1-μ) + 1/Γ(1+μ)) / 2`.
///
/// Both are evaluated from the even and odd parts of the reciprocal gamma series,
/// so there is no cancellation as `μ → 0`.
pub fn temme_gammas(mu: f64) -> (f64, f64) {
    let mu2 = mu * mu;
    // 1/Γ(1+x) = Σ_{k≥1} c_k x^{k-1}
    let mut gam1 = 0.0;
    let mut gam2 = 0.0;
    for k in (1..RGAMMA_TAYLOR.len()).rev() {
        if k % 2 == 0 {
            gam1 = gam1 * mu2 + RGAMMA_TAYLOR[k];
        } else {
            gam2 = gam2 * mu2 + RGAMMA_TAYLOR[k];
        }
    }
    (-gam1, gam2)
}

const BERNOULLI_2K: [f64; 12] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
];

/// Riemann zeta for real `s > 0`, `s ≠ 1`, by Euler–Maclaurin summation.
/// Negative arguments go through the functional equation.
pub fn zeta(s: f64) -> f64 {
    if s < 0.0 {
        return zeta_reflected(s);
    }
    assert!((s - 1.0).abs() > 1e-12, "zeta pole at s = 1");
    const N: usize = 12;
    let nf = N as f64;
    let mut sum: f64 = (1..N).map(|n| (n as f64).powf(-s)).sum();
    sum += nf.powf(1.0 - s) / (s - 1.0) + 0.5 * nf.powf(-s);
    // Σ B_{2k}/(2k)! · s(s+1)…(s+2k-2) · N^{-s-2k+1}
    let mut rising = s;
    let mut fact = 2.0;
    let mut npow = nf.powf(-s - 1.0);
    for (k, b) in BERNOULLI_2K.iter().enumerate() {
        let term = b / fact * rising * npow;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
        let k2 = 2.0 * (k as f64 + 1.0);
        rising *= (s + k2 - 1.0) * (s + k2);
        fact *= (k2 + 1.0) * (k2 + 2.0);
        npow /= nf * nf;
    }
    sum
}

/// `ζ(s) = 2^s π^{s-1} sin(πs/2) Γ(1-s) ζ(1-s)` for half-integer `s < 0`.
fn zeta_reflected(s: f64) -> f64 {
    let twice = (2.0 * (1.0 - s)).round() as i32;
    assert!(
        ((2.0 * (1.0 - s)) - twice as f64).abs() < 1e-12 && twice % 2 != 0,
        "zeta at negative argument is only provided for half-integers"
    );
    2f64.powf(s) * PI.powf(s - 1.0) * (PI * s / 2.0).sin() * gamma_half_odd(twice) * zeta(1.0 - s)
}
