//! The order-`√ε` and order-`ε` coefficients `a^{(1/2)}_{n,n'}` and `a^{(1)}_{n,n'}` of
//! one link of the reflection chain, for each model pair.
//!
//! The formulas are generic over [`Ring`]: evaluated with `f64` they give the value at a
//! point, evaluated with [`Poly2`] the full polynomial in `(n, n')`.  Arguments other than
//! `n, n'` are the rescaled momentum `t`, the direction variable `τ`, the angular variable
//! `y` and the plasma parameters in units of the gap.

use super::poly::{Poly2, Ring};
use crate::models::{ModelPair, PlasmaParams};

/// Which coefficient of the link expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Order {
    /// Coefficient of `√ε`.
    Half,
    /// Coefficient of `ε`.
    One,
}

/// Arguments shared by all coefficient formulas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkArgs {
    pub t: f64,
    pub tau: f64,
    pub y: f64,
    /// `Ω_L`
    pub big: f64,
    /// `ω_L`
    pub wl: f64,
}

impl LinkArgs {
    pub fn new(t: f64, tau: f64, y: f64, params: &PlasmaParams) -> Self {
        LinkArgs { t, tau, y, big: params.omega_l, wl: params.omega_pl }
    }

    fn s(&self) -> f64 {
        self.wl.hypot(self.t)
    }
}

/// Coefficient at a point.
pub fn a_coeff(pair: ModelPair, order: Order, n: f64, np: f64, args: &LinkArgs) -> f64 {
    match order {
        Order::Half => a_half(pair, n, np, args),
        Order::One => a_one(pair, n, np, args),
    }
}

/// Both coefficients as polynomials in `(n, n')`.
pub fn a_polys(pair: ModelPair, args: &LinkArgs) -> (Poly2, Poly2) {
    let (n, m) = (Poly2::n(), Poly2::np());
    (a_half(pair, n, m, args), a_one(pair, n, m, args))
}

pub fn a_half<T: Ring>(pair: ModelPair, n: T, m: T, a: &LinkArgs) -> T {
    match pair {
        ModelPair::DdTe => half_dd_te(n, m, a),
        ModelPair::DdTm => half_dd_tm(n, m, a),
        ModelPair::EdTe => half_ed_te(n, m, a),
        ModelPair::EdTm => half_ed_tm(n, m, a),
    }
}

pub fn a_one<T: Ring>(pair: ModelPair, n: T, m: T, a: &LinkArgs) -> T {
    match pair {
        ModelPair::DdTe => one_dd_te(n, m, a),
        ModelPair::DdTm => one_dd_tm(n, m, a),
        ModelPair::EdTe => one_ed_te(n, m, a),
        ModelPair::EdTm => one_ed_tm(n, m, a),
    }
}

/// `2n² − 4nn' + 2n'² − 4t`, which recurs everywhere.
fn zh<T: Ring>(n: T, m: T, t: f64) -> T {
    (n * n - n * m * 2.0 + m * m) * 2.0 - 4.0 * t
}

/// `2n² + 4nn' + 2n'² + 1`.
fn nn<T: Ring>(n: T, m: T) -> T {
    (n * n + n * m * 2.0 + m * m) * 2.0 + 1.0
}

/// `24 t` times the order-`ε` part of the prefactor/exponent factor ψ.
pub(crate) fn psi_bracket<T: Ring>(n: T, m: T, t: f64, tau: f64) -> T {
    let t2 = tau * tau;
    let s = n + m;
    let z = n * n - n * m * 2.0 + m * m - 2.0 * t;
    let quad = n * n * (5.0 * t2 - 2.0) + m * n * (2.0 * (5.0 * t2 - 2.0)) + m * m * (5.0 * t2 - 2.0)
        + 4.0 * t * (t2 - 1.0);
    let quart = n * n * n * n * (-7.0 * (3.0 * t2 - 1.0))
        + m * n * n * n * (4.0 * (3.0 * t2 - 1.0))
        + (m * m * (3.0 * t2 - 1.0) + 2.0 * t * (t2 - 1.0)) * n * n * 6.0
        + m * (m * m * (3.0 * t2 - 1.0) + 6.0 * t * (t2 - 1.0)) * n * 4.0
        + s * s * z * z * (6.0 * t2)
        + 12.0 * t * t * t2
        + m * m * (12.0 * t * (t2 - 1.0))
        - m * m * m * m * (7.0 * (3.0 * t2 - 1.0));
    s * s * z * (-12.0 * t2) + quad * 3.0 + quart * 2.0
}

/// `12 t (Ω_L + t)²` times the order-`ε` TE cylinder correction.
pub(crate) fn q_te_bracket<T: Ring>(n: T, m: T, a: &LinkArgs) -> T {
    let (t, w) = (a.t, a.big);
    let t2 = a.tau * a.tau;
    (n * n * (-6.0 * (3.0 * t2 - 2.0)) - m * n * (12.0 * t2) + m * m * (6.0 * (5.0 * t2 - 2.0)) + (3.0 - 5.0 * t2))
        * (w * w)
        + (m * m * (6.0 * (5.0 * t2 - 2.0)) - (n * n * 18.0 + 5.0) * t2 + 3.0) * (2.0 * t * w)
        + (n * n * (6.0 * (5.0 * t2 - 2.0)) + m * n * (12.0 * t2) + m * m * (6.0 * (5.0 * t2 - 2.0)) + (3.0 - 5.0 * t2))
            * (t * t)
}

/// `12 t (t y² + Ω_L)²` times the order-`ε` TM cylinder correction.
pub(crate) fn q_tm_bracket<T: Ring>(n: T, m: T, a: &LinkArgs) -> T {
    let (t, w, y2) = (a.t, a.big, a.y * a.y);
    let t2 = a.tau * a.tau;
    (n * n * (-6.0 * (3.0 * t2 - 2.0)) + m * n * (12.0 * t2) - m * m * (6.0 * (3.0 * t2 - 2.0)) + (7.0 * t2 - 9.0))
        * (t * t * y2 * y2)
        - (m * m * (6.0 * (3.0 * t2 - 2.0)) + (n * n * 18.0 - 7.0) * t2 + 9.0) * (2.0 * w * t * y2)
        + (n * n * (6.0 * (5.0 * t2 - 2.0)) - m * n * (12.0 * t2) - m * m * (6.0 * (3.0 * t2 - 2.0)) + (7.0 * t2 - 9.0))
            * (w * w)
}

fn half_dd_te<T: Ring>(n: T, m: T, a: &LinkArgs) -> T {
    let (t, w, tau) = (a.t, a.big, a.tau);
    let s = w + t;
    let inner = n * n * n * (-2.0 * s)
        + m * n * n * (2.0 * s)
        + n * (m * m * (2.0 * s) + (w * (4.0 * t - 1.0) + t * (4.0 * t + 5.0)))
        + m * (m * m * (-2.0 * s) + (w * (4.0 * t + 3.0) + t * (4.0 * t + 5.0)));
    -inner * (tau / (2.0 * t.sqrt() * s))
}

fn one_dd_te<T: Ring>(n: T, m: T, a: &LinkArgs) -> T {
    let (t, w, tau) = (a.t, a.big, a.tau);
    let t2 = tau * tau;
    let s = w + t;
    let (n2, m2, nm) = (n * n, m * m, n * m);
    let poly = n2 * (-72.0 * t * t + 192.0 * t2 * t * t + 24.0 * w * t2 * t - 24.0 * w * t + 48.0 * w * w
        - 72.0 * w * w * t2)
        + m2 * (-72.0 * t * t + 192.0 * t2 * t * t + 264.0 * w * t2 * t - 120.0 * w * t - 48.0 * w * w
            + 120.0 * w * w * t2)
        + nm * (192.0 * t2 * t * t - 48.0 * t * t + 48.0 * w * t2 * t - 48.0 * w * t - 48.0 * w * w * t2)
        - (n2 * 18.0 + 5.0) * (8.0 * w * t2 * t)
        + (48.0 * t2 * t * t * t + 48.0 * w * t2 * t * t + 21.0 * t2 * t * t - 3.0 * t * t + 22.0 * w * t2 * t
            + 6.0 * w * t
            + 9.0 * w * w
            - 15.0 * w * w * t2);
    let n3 = n2 * n;
    let n4 = n2 * n2;
    let m3 = m2 * m;
    let m4 = m2 * m2;
    let quart = n4 * (28.0 - 84.0 * t2)
        + m * n3 * (48.0 * t2 - 16.0)
        + m2 * n2 * (72.0 * t2 - 24.0)
        + n2 * (48.0 * t * t2 + 30.0 * t2 - 48.0 * t - 12.0)
        + m3 * n * (48.0 * t2 - 16.0)
        + m * n * (60.0 * t2 + 96.0 * t * t2 - 24.0 - 96.0 * t)
        + m4 * (28.0 - 84.0 * t2)
        + m2 * (30.0 * t2 - 12.0 + 48.0 * t * t2 - 48.0 * t)
        + (48.0 * t * t * t2 + 24.0 * t * t2 - 24.0 * t);
    let z2 = zh(n, m, t);
    let u1 = z2 * w - w + (z2 - 3.0) * t;
    let cross = (n * (t - w) * u1 * (-24.0 * t2) + m * s * u1 * (-24.0 * t2)) * (n + m);
    // last group: (n+n')²(Ω_L+t)(24(Ω_L+t)(Z² − Z)τ² − 24(2Z−1)tτ²)
    let z = n2 - nm * 2.0 + m2 - 2.0 * t;
    let tail = (n + m) * (n + m) * ((z * z - z) * (24.0 * s * t2) - (z2 - 1.0) * (24.0 * t * t2)) * s;
    (poly + quart * (s * s) + cross + tail) / (48.0 * t * s * s)
}

fn half_dd_tm<T: Ring>(n: T, m: T, a: &LinkArgs) -> T {
    let (t, w, tau, y2) = (a.t, a.big, a.tau, a.y * a.y);
    let d = w + t * y2;
    let cubic = n * n * n * 2.0 - m * n * n * 2.0 - m * m * n * 2.0 - n * (4.0 * t + 3.0) + m * m * m * 2.0
        + m * (1.0 - 4.0 * t);
    let quad = (n * n * (-2.0) + n * m * 4.0 - m * m * 2.0 + (4.0 * t - 3.0)) * (n + m);
    (cubic * w - quad * (t * y2)) * (tau / (2.0 * t.sqrt() * d))
}

fn one_dd_tm<T: Ring>(n: T, m: T, a: &LinkArgs) -> T {
    let (t, w, tau, y2) = (a.t, a.big, a.tau, a.y * a.y);
    let t2 = tau * tau;
    let d = t * y2 + w;
    let s = n + m;
    let z2 = zh(n, m, t);
    let lin = n * (t * y2 - w) + m * (t * y2 + w);
    let first = s * lin * ((z2 + 1.0) * (t * y2) + (z2 - 1.0) * w) * (24.0 * t2) / (t * d * d);
    let second = s * s * (z2 - 1.0) * (24.0 * y2 * t2 / d);
    let third = psi_bracket(n, m, t, tau) * (2.0 / t);
    let phi = (n * n * (24.0 * (t2 - 1.0)) + m * n * (48.0 * (t2 - 1.0)) + m * m * (24.0 * (t2 - 1.0))
        + (48.0 * t * t2 + 7.0 * t2 - 9.0))
        * (t * t * y2 * y2)
        + (n * n * (12.0 * (3.0 * t2 - 1.0)) + m * n * (24.0 * (3.0 * t2 - 1.0)) + m * m * (12.0 * (3.0 * t2 - 1.0))
            + (24.0 * t * t2 + 13.0 * t2 - 3.0))
            * (2.0 * w * t * y2)
        + w * w * (3.0 - 5.0 * t2);
    let fourth = -phi / (t * d * d);
    let fifth = q_tm_bracket(n, m, a) * (4.0 / (t * d * d));
    (first + second + third + fourth + fifth) / 48.0
}

fn half_ed_te<T: Ring>(n: T, m: T, a: &LinkArgs) -> T {
    let (t, w, tau) = (a.t, a.big, a.tau);
    let st = t.sqrt();
    let s = a.s();
    -(n * (t - w) + m * (w + t)) * (tau / (st * (w + t))) + (n + m) * (zh(n, m, t) - 1.0) * (tau / (2.0 * st))
        - (n + m) * (2.0 * st * tau / s)
}

fn one_ed_te<T: Ring>(n: T, m: T, a: &LinkArgs) -> T {
    let (t, w, tau, wl) = (a.t, a.big, a.tau, a.wl);
    let t2 = tau * tau;
    let s = a.s();
    let z2 = zh(n, m, t);
    let nn = nn(n, m);
    let first = -(n + m) * (n * (t - w) + m * (w + t)) * (z2 - 4.0 * t / s - 1.0) * (t2 / (2.0 * t * (w + t)));
    let second = (n + m) * (n + m) * (-z2 + 1.0) * (t2 / s);
    let third = q_te_bracket(n, m, a) / (12.0 * t * (w + t) * (w + t));
    let fourth = psi_bracket(n, m, t, tau) / (24.0 * t);
    let fifth = ((nn * (24.0 * t * (t2 - 1.0)) + (96.0 * t * t * t2 + s * (5.0 * t2 - 3.0))) * (wl * wl)
        + (nn * (24.0 * t * (2.0 * t2 - 1.0)) + 96.0 * t * t * t2 + ((nn * 48.0 + 5.0) * t2 - 3.0) * s) * (t * t))
        / (48.0 * t * s * s * s);
    first + second + third + fourth + fifth
}

fn half_ed_tm<T: Ring>(n: T, m: T, a: &LinkArgs) -> T {
    let (t, w, tau, wl, y2) = (a.t, a.big, a.tau, a.wl, a.y * a.y);
    let st = t.sqrt();
    let s = a.s();
    let e = wl * wl - t * t * y2 * (y2 - 2.0);
    (n + m) * (2.0 * st * tau * (wl * wl + t * t * y2) * y2 / (s * e))
        + (n + m) * (zh(n, m, t) - 1.0) * (tau / (2.0 * st))
        + (n * (t * y2 - w) + m * (t * y2 + w)) * (tau / (st * (t * y2 + w)))
}

fn one_ed_tm<T: Ring>(n: T, m: T, a: &LinkArgs) -> T {
    let (t, w, tau, wl, y2) = (a.t, a.big, a.tau, a.wl, a.y * a.y);
    let t2 = tau * tau;
    let s = a.s();
    let w2 = wl * wl;
    let e = w2 - t * t * y2 * (y2 - 2.0);
    let d = t * y2 + w;
    let z2 = zh(n, m, t);
    let nn = nn(n, m);
    let g = (w2 + t * t * y2) * y2 / (s * e);
    let first = -(n + m) * (n + m) * (-z2 + 1.0) * (t2 * g);
    let second = psi_bracket(n, m, t, tau) / (24.0 * t);
    let third = q_tm_bracket(n, m, a) * (2.0 / (24.0 * t * d * d));
    let fourth = (n + m) * (n * (t * y2 - w) + m * (t * y2 + w)) * (z2 + 4.0 * t * g - 1.0) * (t2 / (2.0 * t * d));
    let y4 = y2 * y2;
    let y6 = y4 * y2;
    let n19 = nn * 24.0 - 5.0;
    let n53 = nn * 48.0 + 5.0;
    let c6 = (nn * (-72.0 * t * y2) + (-96.0 * t * t * y2 + 5.0 * s)) * t2 + nn * (24.0 * t * y2) - 3.0 * s;
    let c4 = (nn * (24.0 * t * (y4 - 9.0 * y2 - 4.0) * y2)
        + 96.0 * t * t * (y4 - 3.0 * y2 - 1.0) * y2
        + (n19 * (2.0 * y4) + (20.0 * y2 + 5.0)) * s)
        * t2
        + (-(nn * (8.0 * t * y2 * (y4 - 3.0 * y2 - 1.0))) + s * (2.0 * y4 - 4.0 * y2 - 1.0)) * 3.0;
    let c2 = (nn * (24.0 * t * (y4 - 4.0 * y2 - 12.0) * y2)
        + 96.0 * t * t * (y4 - y2 - 3.0) * y2
        + (n19 * (4.0 * y4) + (5.0 * y6 + 10.0 * y2 + 20.0)) * s)
        * t2
        - (nn * (8.0 * t * (y4 - y2 - 3.0) * y2) + s * (y6 - 4.0 * y4 + 2.0 * y2 + 4.0)) * 3.0;
    let c0 = (nn * (48.0 * t * (y2 - 4.0) * y2) + 96.0 * t * t * (y2 - 2.0) * y2 + (n53 * y4 + (20.0 - 20.0 * y2)) * s)
        * t2
        - (nn * (8.0 * t * y2) + s * (y2 - 2.0)) * (3.0 * (y2 - 2.0));
    let fifth = (c6 * (w2 * w2 * w2) + c4 * (t * t * w2 * w2) + c2 * (t.powi(4) * y2 * w2) + c0 * (t.powi(6) * y4))
        / (48.0 * t * s * s * s * e * e);
    first + second + third + fourth + fifth
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(t: f64, tau: f64, y: f64, big: f64, wl: f64) -> LinkArgs {
        LinkArgs { t, tau, y, big, wl }
    }

    #[test]
    fn matches_composed_expansion() {
        // values of the composed cylinder, plane and prefactor expansions, evaluated symbolically
        let a = args(0.8, 0.6, 0.45, 2.0, 1.3);
        let expected = [
            (ModelPair::DdTe, 0.9276487723799127, 0.23348687074829955),
            (ModelPair::DdTm, -0.36560642265229676, -0.6930255974855684),
            (ModelPair::EdTe, 1.1322437775282628, 0.6624614493170204),
            (ModelPair::EdTm, -0.399394360625926, -0.7355221512208531),
        ];
        for (pair, half, one) in expected {
            approx::assert_relative_eq!(a_coeff(pair, Order::Half, 0.3, -0.7, &a), half, max_relative = 1e-13);
            approx::assert_relative_eq!(a_coeff(pair, Order::One, 0.3, -0.7, &a), one, max_relative = 1e-13);
        }
    }

    #[test]
    fn half_vanishes_at_origin_and_is_odd() {
        let a = args(0.7, 0.4, 0.3, 2.0, 1.5);
        for pair in ModelPair::ALL {
            assert_eq!(a_coeff(pair, Order::Half, 0.0, 0.0, &a), 0.0);
            let (h, one) = a_polys(pair, &a);
            assert!(h.even_part_norm() < 1e-13 * h.norm(), "{pair}: {h:?}");
            assert!(one.odd_part_norm() < 1e-13 * one.norm(), "{pair}: {one:?}");
            for (x, y) in [(0.3, -0.8), (1.1, 0.4)] {
                let v = a_coeff(pair, Order::Half, x, y, &a);
                assert!((v + a_coeff(pair, Order::Half, -x, -y, &a)).abs() < 1e-13 * v.abs().max(1.0));
                assert!((h.eval(x, y) - v).abs() < 1e-12 * v.abs().max(1.0));
                let w = a_coeff(pair, Order::One, x, y, &a);
                assert!((one.eval(x, y) - w).abs() < 1e-12 * w.abs().max(1.0));
            }
        }
    }

    #[test]
    fn degrees() {
        let a = args(0.7, 0.4, 0.3, 2.0, 1.5);
        for pair in ModelPair::ALL {
            let (h, one) = a_polys(pair, &a);
            assert_eq!(h.degree(), Some(3));
            assert_eq!(one.degree(), Some(6));
        }
    }

    #[test]
    fn hard_te_limit_is_stable() {
        let p = |big| args(0.9, 0.6, 0.0, big, 0.0);
        for (x, y) in [(0.5, -0.2), (1.3, 0.7)] {
            let a = a_coeff(ModelPair::DdTe, Order::One, x, y, &p(1e8));
            let b = a_coeff(ModelPair::DdTe, Order::One, x, y, &p(1e9));
            assert!((a - b).abs() < 1e-6 * a.abs().max(1.0));
        }
    }
}
