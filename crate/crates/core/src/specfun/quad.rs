//! Adaptive Gauss–Kronrod (10/21) quadrature on finite intervals, plus the
//! semi-infinite and unit-interval front ends used by the energy integrals.

use std::cell::{Cell, RefCell};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;

use crate::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_600_525_478_166,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Tolerances and budgets shared by every integral in the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Upper cut of `t`-integrals whose integrand decays at least like `e^{-2t}`.
    pub t_max: f64,
    pub max_subdivisions: usize,
    /// Cap on explicit chain sums.
    pub s_max: usize,
    pub series_tail_tol: f64,
}

impl Default for QuadSpec {
    fn default() -> Self {
        QuadSpec {
            rel_tol: 1e-8,
            abs_tol: 1e-14,
            t_max: 40.0,
            max_subdivisions: 4000,
            s_max: 60,
            series_tail_tol: 1e-12,
        }
    }
}

impl QuadSpec {
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    /// Tolerances for an integral nested inside another: ten times tighter and purely
    /// relative, so that [`InnerLedger`] can turn its error into a relative bound.
    pub fn nested(&self) -> Self {
        QuadSpec { rel_tol: 0.1 * self.rel_tol, abs_tol: f64::MIN_POSITIVE, ..*self }
    }

    /// Rejects nonpositive tolerances and a cut that leaves an `e^{-2t}` tail above `abs_tol`.
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0 && self.series_tail_tol > 0.0) {
            return Err(Error::domain("tolerances must be positive"));
        }
        if self.max_subdivisions == 0 || self.s_max == 0 {
            return Err(Error::domain("budgets must be positive"));
        }
        if (-2.0 * self.t_max).exp() >= self.abs_tol {
            return Err(Error::domain(format!(
                "t_max = {} leaves a tail above abs_tol = {}",
                self.t_max, self.abs_tol
            )));
        }
        Ok(())
    }

    pub(crate) fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

/// Value, error estimate and whether the requested tolerance was met.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub converged: bool,
}

impl QuadResult {
    pub fn exact(value: f64) -> Self {
        QuadResult { value, error_estimate: 0.0, converged: true }
    }

    /// Converts a failed integration into an error naming `what`.
    pub fn into_result(self, what: &str) -> Result<QuadResult> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::no_convergence(format!(
                "{what}: value {:e}, error estimate {:e}",
                self.value, self.error_estimate
            )))
        }
    }

    pub fn scale(self, c: f64) -> Self {
        QuadResult { value: c * self.value, error_estimate: c.abs() * self.error_estimate, ..self }
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = fc * WGK[10];
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut error = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    if !value.is_finite() {
        error = f64::INFINITY;
    }
    Segment { a, b, value, error }
}

/// Adaptive integral over `[points[0], points[last]]`, starting from the given partition.
pub fn integrate_breaks<F: Fn(f64) -> f64>(f: F, points: &[f64], spec: &QuadSpec) -> QuadResult {
    assert!(points.len() >= 2, "need at least one interval");
    let mut heap: BinaryHeap<Segment> = points
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| gk21(&f, w[0], w[1]))
        .collect();
    let mut value: f64 = heap.iter().map(|s| s.value).sum();
    let mut error: f64 = heap.iter().map(|s| s.error).sum();
    let mut frozen_error = 0.0;
    let mut splits = 0;
    while error + frozen_error > spec.target(value) && splits < spec.max_subdivisions {
        let Some(seg) = heap.pop() else { break };
        let mid = 0.5 * (seg.a + seg.b);
        if (seg.b - seg.a).abs() <= 1e-14 * mid.abs().max(1e-300) {
            // cannot be refined further; keep its error on the books
            frozen_error += seg.error;
            error -= seg.error;
            continue;
        }
        let left = gk21(&f, seg.a, mid);
        let right = gk21(&f, mid, seg.b);
        value += left.value + right.value - seg.value;
        error += left.error + right.error - seg.error;
        heap.push(left);
        heap.push(right);
        splits += 1;
        if splits % 64 == 0 {
            // resum to shed accumulated roundoff
            value = heap.iter().map(|s| s.value).sum();
            error = heap.iter().map(|s| s.error).sum();
        }
    }
    let value: f64 = heap.iter().map(|s| s.value).sum();
    let error: f64 = heap.iter().map(|s| s.error).sum::<f64>() + frozen_error;
    QuadResult { value, error_estimate: error, converged: value.is_finite() && error <= spec.target(value) }
}

/// Like [`integrate_breaks`], but every refinement round evaluates its new segments in
/// parallel.  Meant for expensive integrands; the result does not depend on the thread
/// count.
pub fn integrate_breaks_par<F: Fn(f64) -> f64 + Sync>(f: F, points: &[f64], spec: &QuadSpec) -> QuadResult {
    assert!(points.len() >= 2, "need at least one interval");
    let spans: Vec<(f64, f64)> = points.windows(2).filter(|w| w[1] > w[0]).map(|w| (w[0], w[1])).collect();
    let mut segs: Vec<Segment> = spans.par_iter().map(|&(a, b)| gk21(&f, a, b)).collect();
    let mut splits = 0;
    loop {
        let value: f64 = segs.iter().map(|s| s.value).sum();
        let error: f64 = segs.iter().map(|s| s.error).sum();
        let target = spec.target(value);
        if error <= target || splits >= spec.max_subdivisions || !value.is_finite() {
            return QuadResult { value, error_estimate: error, converged: value.is_finite() && error <= target };
        }
        // split the worst segments until the rest fits in half the budget
        segs.sort_by(|a, b| b.error.total_cmp(&a.error));
        let mut rest = error;
        let mut take = 0;
        while take < segs.len() && (take == 0 || rest > 0.5 * target) {
            rest -= segs[take].error;
            take += 1;
        }
        let halves: Vec<(f64, f64)> = segs
            .drain(..take)
            .flat_map(|s| {
                let mid = 0.5 * (s.a + s.b);
                [(s.a, mid), (mid, s.b)]
            })
            .collect();
        splits += take;
        segs.extend(halves.par_iter().map(|&(a, b)| gk21(&f, a, b)).collect::<Vec<_>>());
        // keep the summation order independent of completion order
        segs.sort_by(|a, b| a.a.total_cmp(&b.a));
    }
}

/// Adaptive integral over `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadSpec) -> QuadResult {
    integrate_breaks(f, &[a, b], spec)
}

/// Integral over `(0, ∞)` of an integrand decaying at least like `e^{-2t}`.
///
/// The range is cut at `t_max`; the neglected tail is bounded by `|f(t_max)|/2`,
/// which is added to the error estimate.
pub fn integrate_semiinf<F: Fn(f64) -> f64>(f: F, spec: &QuadSpec) -> QuadResult {
    integrate_semiinf_scaled(f, 1.0, spec)
}

/// Like [`integrate_semiinf`] with extra breakpoints clustered around `scale`,
/// for integrands with structure at a small parameter-dependent `t`.
pub fn integrate_semiinf_scaled<F: Fn(f64) -> f64>(f: F, scale: f64, spec: &QuadSpec) -> QuadResult {
    integrate_from(f, 0.0, scale, spec)
}

/// Like [`integrate_semiinf_scaled`] for integrands that tend to a finite limit at zero
/// but cannot be evaluated accurately below `floor`.  The piece `(0, floor)` comes from
/// the model `a + b√t + ct` matched at `floor`, `4·floor` and `16·floor`; the size of the
/// `ct` contribution is added to the error estimate.
pub fn integrate_semiinf_floored<F: Fn(f64) -> f64>(f: F, scale: f64, floor: f64, spec: &QuadSpec) -> QuadResult {
    if floor <= 0.0 {
        return integrate_semiinf_scaled(f, scale, spec);
    }
    // in u = √t the samples sit at u, 2u, 4u
    let u = floor.sqrt();
    let (f1, f2, f4) = (f(floor), f(4.0 * floor), f(16.0 * floor));
    let c = (f4 - 3.0 * f2 + 2.0 * f1) / (6.0 * floor);
    let b = (f2 - f1 - 3.0 * c * floor) / u;
    let a = f1 - b * u - c * floor;
    let linear = 0.5 * c * floor * floor;
    let head = a * floor + 2.0 / 3.0 * b * floor * u + linear;
    let mut r = integrate_from(f, floor, scale, spec);
    r.value += head;
    r.error_estimate += linear.abs();
    r.converged = r.converged && r.value.is_finite() && r.error_estimate <= spec.target(r.value);
    r
}

fn integrate_from<F: Fn(f64) -> f64>(f: F, start: f64, scale: f64, spec: &QuadSpec) -> QuadResult {
    let mut pts = vec![start, 0.05, 0.25, 1.0, 3.0, 8.0, spec.t_max];
    if scale > 0.0 && scale < 1.0 {
        pts.extend([0.1 * scale, scale, 10.0 * scale]);
    }
    pts.retain(|&p| p >= start && p <= spec.t_max);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let tail = 0.5 * f(spec.t_max).abs();
    let mut r = integrate_breaks(&f, &pts, spec);
    r.error_estimate += tail;
    r.converged = r.converged && r.error_estimate <= spec.target(r.value);
    r
}

/// Integral over `(0, 1)`, optionally with interior breakpoints.
pub fn integrate_unit<F: Fn(f64) -> f64>(f: F, breaks: &[f64], spec: &QuadSpec) -> QuadResult {
    let mut pts = vec![0.0, 1.0];
    pts.extend(breaks.iter().copied().filter(|&p| p > 0.0 && p < 1.0));
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    integrate_breaks(f, &pts, spec)
}

/// Integral over `y ∈ (0, ∞)` through `y = u/(1-u)`.
pub fn integrate_halfline<F: Fn(f64) -> f64>(f: F, breaks: &[f64], spec: &QuadSpec) -> QuadResult {
    let g = |u: f64| {
        if u >= 1.0 {
            return 0.0;
        }
        let w = 1.0 - u;
        let v = f(u / w) / (w * w);
        if v.is_finite() { v } else { 0.0 }
    };
    let ubreaks: Vec<f64> = breaks.iter().map(|&y| y / (1.0 + y)).collect();
    integrate_unit(g, &ubreaks, spec)
}

/// Error bookkeeping for integrals nested inside an outer integrand.
///
/// Inner results are recorded as they are produced; [`InnerLedger::finish`] folds
/// their worst relative error into the outer estimate and fails the whole result if any
/// inner integral or special function failed.
#[derive(Debug, Default)]
pub struct InnerLedger {
    worst_rel: Cell<f64>,
    all_converged: Cell<bool>,
    failure: RefCell<Option<Error>>,
    densities: RefCell<Vec<(f64, f64)>>,
}

impl InnerLedger {
    pub fn new() -> Self {
        InnerLedger {
            worst_rel: Cell::new(0.0),
            all_converged: Cell::new(true),
            failure: RefCell::new(None),
            densities: RefCell::new(Vec::new()),
        }
    }

    /// Records an inner result and returns its value.
    pub fn record(&self, r: QuadResult) -> f64 {
        if r.value != 0.0 {
            let rel = r.error_estimate / r.value.abs();
            if rel > self.worst_rel.get() {
                self.worst_rel.set(rel);
            }
        }
        if !r.converged {
            self.all_converged.set(false);
        }
        r.value
    }

    /// Records an inner result evaluated at outer abscissa `x`, where the outer integrand is
    /// `weight` times it, and returns its value.  The error density `|weight|·error` is
    /// integrated over the recorded abscissae by the trapezoidal rule in [`Self::finish`],
    /// which stays meaningful where the inner value passes through zero.
    pub fn record_at(&self, x: f64, weight: f64, r: QuadResult) -> f64 {
        if !r.converged {
            self.all_converged.set(false);
        }
        self.densities.borrow_mut().push((x, (weight * r.error_estimate).abs()));
        r.value
    }

    /// Unwraps a fallible value, remembering the first failure; failures evaluate to NaN.
    pub fn check(&self, v: Result<f64>) -> f64 {
        match v {
            Ok(x) => x,
            Err(e) => {
                self.failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        }
    }

    pub fn finish(self, outer: QuadResult) -> Result<QuadResult> {
        if let Some(e) = self.failure.into_inner() {
            return Err(e);
        }
        let mut d = self.densities.into_inner();
        d.sort_by(|a, b| a.0.total_cmp(&b.0));
        let trapezoid: f64 = d.windows(2).map(|w| 0.5 * (w[1].0 - w[0].0) * (w[0].1 + w[1].1)).sum();
        let error_estimate = outer.error_estimate + self.worst_rel.get() * outer.value.abs() + trapezoid;
        Ok(QuadResult {
            value: outer.value,
            error_estimate,
            converged: outer.converged && self.all_converged.get(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::gamma::gamma_half;
    use approx::assert_relative_eq;

    #[test]
    fn gamma_integral() {
        let spec = QuadSpec::default();
        let r = integrate_semiinf(|t: f64| t.powf(1.5) * (-2.0 * t).exp(), &spec);
        assert!(r.converged);
        assert_relative_eq!(r.value, gamma_half(2) / 2f64.powf(2.5), max_relative = 1e-10);
    }

    #[test]
    fn exponential() {
        let spec = QuadSpec::default();
        let r = integrate_semiinf(|t: f64| (-t).exp(), &spec);
        // e^{-t} decays slower than e^{-2t}; the cut at 40 still leaves only e^{-40}
        assert_relative_eq!(r.value, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn parallel_rounds_match_serial() {
        let spec = QuadSpec::default().with_rel_tol(1e-12);
        let f = |x: f64| x.sqrt() * (-x).exp() * (3.0 * x).cos();
        let a = integrate_breaks(f, &[0.0, 1.0, 30.0], &spec);
        let b = integrate_breaks_par(f, &[0.0, 1.0, 30.0], &spec);
        assert!(a.converged && b.converged);
        assert_relative_eq!(a.value, b.value, max_relative = 1e-11);
    }

    #[test]
    fn unit_interval_polynomials() {
        let spec = QuadSpec::default();
        assert_relative_eq!(integrate_unit(|_| 1.0, &[], &spec).value, 1.0, max_relative = 1e-15);
        assert_relative_eq!(integrate_unit(|y| 1.0 - y * y, &[], &spec).value, 2.0 / 3.0, max_relative = 1e-15);
    }

    #[test]
    fn endpoint_singularity() {
        let spec = QuadSpec::default().with_rel_tol(1e-10);
        let r = integrate(|x: f64| x.powf(-0.5), 0.0, 1.0, &spec);
        assert!(r.converged);
        assert_relative_eq!(r.value, 2.0, max_relative = 1e-9);
    }

    #[test]
    fn halfline_transform() {
        let spec = QuadSpec::default();
        let r = integrate_halfline(|y| 1.0 / (1.0 + y * y), &[], &spec);
        assert_relative_eq!(r.value, std::f64::consts::FRAC_PI_2, max_relative = 1e-12);
    }

    #[test]
    fn spec_validation() {
        assert!(QuadSpec::default().validate().is_ok());
        assert!(QuadSpec { t_max: 3.0, ..QuadSpec::default() }.validate().is_err());
        assert!(QuadSpec::default().with_rel_tol(0.0).validate().is_err());
    }
}
