//! The exact interaction energy per unit length,
//! `E = ½∫dω/2π ∫dk₃/2π ln det(1 − A)`, with `A_{m,m'} = K̃_{m,m'}/K⁽⁰⁾_m`.
//!
//! Every entry factors as `c_m w_m w_{m'} 𝒦_{m+m'}` with a diagonal cylinder factor `c_m`,
//! so `1 − A` is similar to the symmetric `1 − |c|^{1/2} w 𝒦 w |c|^{1/2}`.  Its Cholesky
//! factor is built one angular momentum at a time in the order `0, 1, −1, 2, −2, …`; each
//! new pivot extends the determinant, so every truncation level comes for free and a
//! nonpositive pivot means `A` is not contractive.

use std::f64::consts::PI;
use std::sync::Mutex;

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;

use crate::asympt::{ktilde_exact_scaled, r_cyl_exact_log};
use crate::models::{BoundaryKind, Geometry, ModelPair, PlasmaParams};
use crate::specfun::{bessel_ik_sequence, integrate, integrate_breaks_par, QuadResult, QuadSpec};
use crate::{Error, Result};

/// Hard cap on the angular momentum reached by auto growth.
pub const M_LIMIT: usize = 4000;
/// Step of auto growth, and the distance of the comparison level.
pub const M_STEP: usize = 5;
/// Upper end of the outer integral in `ρL`.
const U_MAX: f64 = 20.0;

/// Truncation of the angular momentum sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationSpec {
    /// Starting (or, without auto growth, fixed) `m_max`; zero means `⌈5/ε⌉`.
    pub m_max: usize,
    /// Relative change of `ln det` between `m_max − 5` and `m_max` accepted as converged.
    pub convergence_tol: f64,
    pub auto_grow: bool,
}

impl Default for TruncationSpec {
    fn default() -> Self {
        TruncationSpec { m_max: 0, convergence_tol: 1e-10, auto_grow: true }
    }
}

impl TruncationSpec {
    pub fn start(&self, geom: &Geometry) -> usize {
        if self.m_max > 0 {
            self.m_max
        } else {
            (5.0 / geom.epsilon()).ceil() as usize
        }
    }

    fn validate(&self) -> Result<()> {
        if self.convergence_tol > 0.0 {
            Ok(())
        } else {
            Err(Error::domain("convergence_tol must be positive"))
        }
    }
}

/// The diagonal kernel `K⁽⁰⁾_m` of a plasma-sheet cylinder.
///
/// TE: `(2Ω/R)(1 + 2ΩR I_m K_m)`.  TM: `−(2Ω/(ω²R))(1 − (2Ωρ²R/ω²) I'_m K'_m)`, which needs
/// `ω ≠ 0`.  Bessel functions at `ρR`.
pub fn k0_diag(mode: BoundaryKind, m: i64, rho: f64, radius: f64, big_omega: f64, omega: f64) -> Result<f64> {
    let b = crate::specfun::bessel_ik(m.unsigned_abs() as u32, rho * radius)?;
    let c = 2.0 * big_omega * radius;
    match mode {
        BoundaryKind::DeltaTE => Ok(2.0 * big_omega / radius * (1.0 + c * b.ik_product())),
        BoundaryKind::DeltaTM => {
            if omega == 0.0 {
                return Err(Error::domain("TM kernel diverges at omega = 0"));
            }
            let w2 = omega * omega;
            Ok(-2.0 * big_omega / (w2 * radius) * (1.0 - c * rho * rho / w2 * b.ipkp_product()))
        }
        _ => Err(Error::domain(format!("{mode:?} cannot sit on the cylinder"))),
    }
}

/// One matrix entry `A_{m,m'}` at Euclidean frequency `ω` and axial momentum `k₃`.
#[allow(clippy::too_many_arguments)]
pub fn a_entry(
    pair: ModelPair,
    m: i64,
    mp: i64,
    omega: f64,
    k3: f64,
    geom: &Geometry,
    params: &PlasmaParams,
    spec: &QuadSpec,
) -> Result<f64> {
    let rho = omega.hypot(k3);
    if !(rho > 0.0) {
        return Err(Error::domain("A needs rho > 0"));
    }
    let r = r_cyl_exact_log(pair.cyl(), m as f64, mp as f64, rho, geom.radius, params.omega, omega)?;
    let k = ktilde_exact_scaled(pair.plane(), (m + mp) as f64, geom.a(), rho, omega, params, spec)?;
    if !k.converged {
        return Err(Error::no_convergence(format!("ktilde at mu = {}", m + mp)));
    }
    Ok(r.sign * k.value * (r.ln_abs + k.log_scale).exp())
}

/// What sits on the cylinder: a plasma sheet of a model pair, or a Dirichlet surface
/// facing a Dirichlet plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bodies {
    Pair(ModelPair),
    Dirichlet,
}

/// Factors of the entries at one `(ρ, ω)`, extended on demand.
struct Tables<'a> {
    bodies: Bodies,
    rho: f64,
    omega: f64,
    geom: &'a Geometry,
    params: &'a PlasmaParams,
    spec: &'a QuadSpec,
    /// `½ln|c_m| + ln w_m` for `m = 0, 1, …`
    half: Vec<f64>,
    sign_c: f64,
    /// `(sign, ln|𝒦_μ|)` for `μ = 0, 1, …`
    kt: Vec<(f64, f64)>,
}

impl<'a> Tables<'a> {
    fn new(bodies: Bodies, rho: f64, omega: f64, geom: &'a Geometry, params: &'a PlasmaParams, spec: &'a QuadSpec) -> Self {
        let sign_c = match bodies {
            Bodies::Pair(p) if !p.is_te() => -1.0,
            _ => 1.0,
        };
        Tables { bodies, rho, omega, geom, params, spec, half: Vec::new(), sign_c, kt: Vec::new() }
    }

    fn extend(&mut self, m_max: usize) -> Result<()> {
        if self.half.len() > m_max {
            return Ok(());
        }
        let r = self.geom.radius;
        let bs = bessel_ik_sequence(0.0, m_max + 1, self.rho * r)?;
        let coupling = 2.0 * self.params.omega * r;
        self.half = bs
            .iter()
            .map(|b| match self.bodies {
                Bodies::Dirichlet => -0.5 * b.ik_product().ln() + b.i.ln_value(),
                Bodies::Pair(p) if p.is_te() => {
                    0.5 * (coupling / (1.0 + coupling * b.ik_product())).ln() + b.i.ln_value()
                }
                Bodies::Pair(_) => {
                    let inv_beta = self.omega * self.omega / (coupling * self.rho * self.rho);
                    -0.5 * (inv_beta - b.ipkp_product()).ln() + b.i.ln_value() + b.i.log_derivative().ln()
                }
            })
            .collect();
        let (from, to) = (self.kt.len(), 2 * m_max + 1);
        let a = self.geom.a();
        let fresh: Vec<Result<(f64, f64)>> = match self.bodies {
            Bodies::Dirichlet => bessel_ik_sequence(from as f64, to - from, 2.0 * a * self.rho)?
                .into_iter()
                .map(|b| Ok((1.0, b.k.ln_value())))
                .collect(),
            Bodies::Pair(p) => (from..to)
                .into_par_iter()
                .map(|mu| {
                    let k = ktilde_exact_scaled(p.plane(), mu as f64, a, self.rho, self.omega, self.params, self.spec)?;
                    if !k.converged {
                        return Err(Error::no_convergence(format!("ktilde at mu = {mu}, rho = {}", self.rho)));
                    }
                    Ok((k.value.signum(), k.value.abs().ln() + k.log_scale))
                })
                .collect(),
        };
        for v in fresh {
            self.kt.push(v?);
        }
        Ok(())
    }

    /// Entry of the symmetrised matrix.
    fn b(&self, m: i64, mp: i64) -> f64 {
        let (s, lk) = self.kt[(m + mp).unsigned_abs() as usize];
        let ln = self.half[m.unsigned_abs() as usize] + self.half[mp.unsigned_abs() as usize] + lk;
        self.sign_c * s * ln.exp()
    }

    fn index_order(level: usize) -> Vec<i64> {
        let mut v = vec![0];
        for l in 1..=level as i64 {
            v.extend([l, -l]);
        }
        v
    }

    fn symmetric(&self, level: usize) -> DMatrix<f64> {
        let ms = Self::index_order(level);
        DMatrix::from_fn(ms.len(), ms.len(), |i, j| self.b(ms[i], ms[j]))
    }
}

/// Largest `|λ|` of a symmetric matrix.
fn spectral_radius(b: DMatrix<f64>) -> f64 {
    SymmetricEigen::new(b).eigenvalues.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
}

/// Lower Cholesky factor of `1 − B`, grown one index at a time.
struct Bordered {
    rows: Vec<Vec<f64>>,
    ms: Vec<i64>,
    logdet: f64,
}

impl Bordered {
    fn new() -> Self {
        Bordered { rows: Vec::new(), ms: Vec::new(), logdet: 0.0 }
    }

    fn push(&mut self, m: i64, t: &Tables) -> Result<()> {
        let mut y: Vec<f64> = self.ms.iter().map(|&mp| -t.b(m, mp)).collect();
        for i in 0..y.len() {
            let row = &self.rows[i];
            let s: f64 = row[..i].iter().zip(&y[..i]).map(|(a, b)| a * b).sum();
            y[i] = (y[i] - s) / row[i];
        }
        // pivot 1 − x, kept as x for accuracy when x is tiny
        let x = t.b(m, m) + y.iter().map(|v| v * v).sum::<f64>();
        if !(x < 1.0) {
            let level = self.ms.iter().map(|v| v.unsigned_abs() as usize).max().unwrap_or(0).max(m.unsigned_abs() as usize);
            return Err(Error::SpectralRadius(spectral_radius(t.symmetric(level))));
        }
        y.push((1.0 - x).sqrt());
        self.rows.push(y);
        self.ms.push(m);
        self.logdet += (-x).ln_1p();
        Ok(())
    }
}

/// `ln det(1 − A)` at one node, with its truncation diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeLogdet {
    pub value: f64,
    /// `|ln det(M) − ln det(M − 5)|`
    pub truncation_error: f64,
    pub m_max: usize,
    pub converged: bool,
}

fn node_logdet(
    bodies: Bodies,
    omega: f64,
    k3: f64,
    trunc: &TruncationSpec,
    geom: &Geometry,
    params: &PlasmaParams,
    spec: &QuadSpec,
) -> Result<NodeLogdet> {
    let rho = omega.hypot(k3);
    if !(rho > 0.0) {
        return Err(Error::domain("ln det needs rho > 0"));
    }
    let mut t = Tables::new(bodies, rho, omega, geom, params, spec);
    let mut m_max = trunc.start(geom);
    t.extend(m_max)?;
    let mut chol = Bordered::new();
    let mut history = Vec::new();
    chol.push(0, &t)?;
    history.push(chol.logdet);
    let mut level = 0;
    loop {
        while level < m_max {
            level += 1;
            chol.push(level as i64, &t)?;
            chol.push(-(level as i64), &t)?;
            history.push(chol.logdet);
        }
        let value = chol.logdet;
        let diff = match level.checked_sub(M_STEP) {
            Some(k) => (value - history[k]).abs(),
            None => value.abs(),
        };
        let ok = diff <= trunc.convergence_tol * value.abs();
        if ok || !trunc.auto_grow || m_max + M_STEP > M_LIMIT {
            return Ok(NodeLogdet { value, truncation_error: diff, m_max, converged: ok });
        }
        m_max += M_STEP;
        t.extend(m_max)?;
    }
}

/// `ln det(δ_{m,m'} − A_{m,m'})` at Euclidean frequency `ω` and axial momentum `k₃`,
/// growing the truncation as `trunc` allows.
pub fn interaction_logdet(
    pair: ModelPair,
    omega: f64,
    k3: f64,
    trunc: &TruncationSpec,
    geom: &Geometry,
    params: &PlasmaParams,
    spec: &QuadSpec,
) -> Result<NodeLogdet> {
    trunc.validate()?;
    node_logdet(Bodies::Pair(pair), omega, k3, trunc, geom, params, spec)
}

/// The full matrix `A` on `m ∈ [−m_max, m_max]`, in natural order.
#[derive(Debug, Clone, PartialEq)]
pub struct InteractionMatrix {
    pub m_max: usize,
    pub entries: DMatrix<f64>,
    pub spectral_radius_estimate: f64,
}

impl InteractionMatrix {
    pub fn index(&self, m: i64) -> usize {
        (m + self.m_max as i64) as usize
    }

    /// `ln det(1 − A)` by LU; fails if `A` is not contractive.
    pub fn logdet(&self) -> Result<f64> {
        if self.spectral_radius_estimate >= 1.0 {
            return Err(Error::SpectralRadius(self.spectral_radius_estimate));
        }
        let n = self.entries.nrows();
        let det = (DMatrix::identity(n, n) - &self.entries).lu().determinant();
        Ok(det.ln())
    }
}

#[allow(clippy::too_many_arguments)]
pub fn interaction_matrix(
    bodies: Bodies,
    omega: f64,
    k3: f64,
    m_max: usize,
    geom: &Geometry,
    params: &PlasmaParams,
    spec: &QuadSpec,
) -> Result<InteractionMatrix> {
    let rho = omega.hypot(k3);
    let mut t = Tables::new(bodies, rho, omega, geom, params, spec);
    t.extend(m_max)?;
    let n = 2 * m_max + 1;
    let mi = |i: usize| i as i64 - m_max as i64;
    // A = |c|^{-1/2} sign(c) B |c|^{1/2} has the spectrum of B; rebuild A from c and w
    let ln_c: Vec<f64> = (0..n).map(|i| lnc(&t, mi(i))).collect();
    let entries = DMatrix::from_fn(n, n, |i, j| t.b(mi(i), mi(j)) * (0.5 * (ln_c[i] - ln_c[j])).exp());
    let rad = spectral_radius(t.symmetric(m_max));
    Ok(InteractionMatrix { m_max, entries, spectral_radius_estimate: rad })
}

/// `ln|c_m|` alone, recomputed from one Bessel evaluation.
fn lnc(t: &Tables, m: i64) -> f64 {
    let b = crate::specfun::bessel_ik(m.unsigned_abs() as u32, t.rho * t.geom.radius).expect("validated in extend");
    let coupling = 2.0 * t.params.omega * t.geom.radius;
    match t.bodies {
        Bodies::Dirichlet => -b.ik_product().ln(),
        Bodies::Pair(p) if p.is_te() => (coupling / (1.0 + coupling * b.ik_product())).ln(),
        Bodies::Pair(_) => {
            let inv_beta = t.omega * t.omega / (coupling * t.rho * t.rho);
            -(inv_beta - b.ipkp_product()).ln()
        }
    }
}

/// Accuracy report of [`energy_oracle`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleDiagnostics {
    /// Outer and inner quadrature error estimate.
    pub quad_error: f64,
    /// Worst relative truncation change over all nodes, times `|E|`.
    pub truncation_error: f64,
    /// Largest `m_max` any node needed.
    pub max_m: usize,
    pub nodes: usize,
    pub converged: bool,
}

#[derive(Default)]
struct Collector {
    failure: Option<Error>,
    worst_trunc: f64,
    max_m: usize,
    nodes: usize,
    converged: bool,
    inner_err: Vec<(f64, f64)>,
}

/// Exact energy per unit length for `bodies`; see [`energy_oracle`].
pub fn energy_oracle_bodies(
    bodies: Bodies,
    geom: &Geometry,
    params: &PlasmaParams,
    trunc: &TruncationSpec,
    spec: &QuadSpec,
) -> Result<(f64, OracleDiagnostics)> {
    spec.validate()?;
    trunc.validate()?;
    if let Bodies::Pair(p) = bodies {
        if params.omega == 0.0 || (p.has_dielectric() && params.omega_p == 0.0) {
            let d = OracleDiagnostics { quad_error: 0.0, truncation_error: 0.0, max_m: 0, nodes: 0, converged: true };
            return Ok((0.0, d));
        }
    }
    let l = geom.gap;
    let col = Mutex::new(Collector { converged: true, ..Default::default() });
    let node = |omega: f64, k3: f64| -> f64 {
        match node_logdet(bodies, omega, k3, trunc, geom, params, spec) {
            Ok(r) => {
                let mut c = col.lock().unwrap();
                c.nodes += 1;
                c.max_m = c.max_m.max(r.m_max);
                c.converged &= r.converged;
                if r.value != 0.0 {
                    c.worst_trunc = c.worst_trunc.max(r.truncation_error / r.value.abs());
                }
                r.value
            }
            Err(e) => {
                col.lock().unwrap().failure.get_or_insert(e);
                f64::NAN
            }
        }
    };
    // TE kernels do not depend on the direction of (ω, k₃)
    let alpha_free = matches!(bodies, Bodies::Dirichlet) || matches!(bodies, Bodies::Pair(p) if p.is_te());
    let inner_spec = spec.nested();
    let f = |u: f64| -> f64 {
        let rho = u / l;
        if alpha_free {
            return u * 0.5 * PI * node(0.0, rho);
        }
        let r: QuadResult = integrate(|a: f64| node(rho * a.sin(), rho * a.cos()), 0.0, 0.5 * PI, &inner_spec);
        let mut c = col.lock().unwrap();
        c.converged &= r.converged;
        c.inner_err.push((u, u * r.error_estimate));
        u * r.value
    };
    let mut outer = integrate_breaks_par(&f, &[0.0, 0.05, 0.25, 1.0, 3.0, 8.0, U_MAX], spec);
    outer.error_estimate += 0.5 * f(U_MAX).abs();
    let c = col.into_inner().unwrap();
    if let Some(e) = c.failure {
        return Err(e);
    }
    let mut inner = c.inner_err;
    inner.sort_by(|a, b| a.0.total_cmp(&b.0));
    let inner_total: f64 = inner.windows(2).map(|w| 0.5 * (w[1].0 - w[0].0) * (w[0].1 + w[1].1)).sum();
    let norm = 1.0 / (2.0 * PI * PI * l * l);
    let e = norm * outer.value;
    let quad_error = norm * (outer.error_estimate + inner_total);
    let d = OracleDiagnostics {
        quad_error,
        truncation_error: c.worst_trunc * e.abs(),
        max_m: c.max_m,
        nodes: c.nodes,
        converged: c.converged && outer.converged && quad_error <= spec.target(e),
    };
    Ok((e, d))
}

/// Exact interaction energy per unit length of cylinder,
/// `(1/2π²)∫₀^{π/2}dα ∫₀^∞ρdρ ln det(1 − A)` with `ω = ρ sin α`, `k₃ = ρ cos α`.
pub fn energy_oracle(
    pair: ModelPair,
    geom: &Geometry,
    params: &PlasmaParams,
    trunc: &TruncationSpec,
    spec: &QuadSpec,
) -> Result<(f64, OracleDiagnostics)> {
    energy_oracle_bodies(Bodies::Pair(pair), geom, params, trunc, spec)
}
