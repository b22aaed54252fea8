//! Boundary models: the two plasma-sheet polarizations, the plasma-model half-space,
//! their plane amplitudes on the imaginary frequency axis, and the rescaled reflection
//! coefficients that enter the small-separation expansion.

use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

/// The four scalar boundary problems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryKind {
    DeltaTE,
    DeltaTM,
    EpsTE,
    EpsTM,
}

impl BoundaryKind {
    pub fn is_te(self) -> bool {
        matches!(self, BoundaryKind::DeltaTE | BoundaryKind::EpsTE)
    }

    /// Only plasma sheets may sit on the cylinder.
    pub fn is_sheet(self) -> bool {
        matches!(self, BoundaryKind::DeltaTE | BoundaryKind::DeltaTM)
    }
}

/// Cylinder/plane combinations with matching polarization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelPair {
    /// plasma sheet facing plasma sheet, TE
    DdTe,
    /// plasma sheet facing plasma sheet, TM
    DdTm,
    /// plasma sheet facing a plasma-model half-space, TE
    EdTe,
    /// plasma sheet facing a plasma-model half-space, TM
    EdTm,
}

impl ModelPair {
    pub const ALL: [ModelPair; 4] = [ModelPair::DdTe, ModelPair::DdTm, ModelPair::EdTe, ModelPair::EdTm];

    pub fn cyl(self) -> BoundaryKind {
        if self.is_te() { BoundaryKind::DeltaTE } else { BoundaryKind::DeltaTM }
    }

    pub fn plane(self) -> BoundaryKind {
        match self {
            ModelPair::DdTe => BoundaryKind::DeltaTE,
            ModelPair::DdTm => BoundaryKind::DeltaTM,
            ModelPair::EdTe => BoundaryKind::EpsTE,
            ModelPair::EdTm => BoundaryKind::EpsTM,
        }
    }

    pub fn is_te(self) -> bool {
        matches!(self, ModelPair::DdTe | ModelPair::EdTe)
    }

    /// True when the plane is the dielectric half-space.
    pub fn has_dielectric(self) -> bool {
        matches!(self, ModelPair::EdTe | ModelPair::EdTm)
    }

    pub fn label(self) -> &'static str {
        match self {
            ModelPair::DdTe => "dd-te",
            ModelPair::DdTm => "dd-tm",
            ModelPair::EdTe => "ed-te",
            ModelPair::EdTm => "ed-tm",
        }
    }
}

impl fmt::Display for ModelPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for ModelPair {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ModelPair::ALL
            .into_iter()
            .find(|p| p.label() == s)
            .ok_or_else(|| Error::domain(format!("unknown model '{s}' (expected dd-te, dd-tm, ed-te or ed-tm)")))
    }
}

/// Cylinder radius `R` and gap `L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry {
    pub radius: f64,
    pub gap: f64,
}

impl Geometry {
    pub fn new(radius: f64, gap: f64) -> Result<Self> {
        if !(radius > 0.0 && gap > 0.0) || !radius.is_finite() || !gap.is_finite() {
            return Err(Error::domain(format!("geometry needs R > 0 and L > 0, got R = {radius}, L = {gap}")));
        }
        Ok(Geometry { radius, gap })
    }

    /// Distance from the cylinder axis to the plane.
    pub fn a(&self) -> f64 {
        self.radius + self.gap
    }

    /// `L/R`, the small parameter of the expansion.
    pub fn epsilon(&self) -> f64 {
        self.gap / self.radius
    }
}

/// Plasma parameters, dimensional (`Ω`, `ω_p` in inverse length) and in units of the gap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlasmaParams {
    pub omega: f64,
    pub omega_p: f64,
    pub omega_l: f64,
    pub omega_pl: f64,
}

impl PlasmaParams {
    /// From `Ω_L = ΩL` and `ω_L = ω_p L` alone; the dimensional fields assume `L = 1`.
    pub fn dimensionless(omega_l: f64, omega_pl: f64) -> Result<Self> {
        check_nonneg("Omega_L", omega_l)?;
        check_nonneg("omega_L", omega_pl)?;
        Ok(PlasmaParams { omega: omega_l, omega_p: omega_pl, omega_l, omega_pl })
    }

    /// From dimensional `Ω`, `ω_p` and the gap of `geom`.
    pub fn with_geometry(omega: f64, omega_p: f64, geom: &Geometry) -> Result<Self> {
        check_nonneg("Omega", omega)?;
        check_nonneg("omega_p", omega_p)?;
        Ok(PlasmaParams { omega, omega_p, omega_l: omega * geom.gap, omega_pl: omega_p * geom.gap })
    }

    /// `ω_p = √(Ωλ/L)`, i.e. `ω_L = √(λ Ω_L)`.
    pub fn from_lambda(omega_l: f64, lambda: f64) -> Result<Self> {
        check_nonneg("lambda", lambda)?;
        Self::dimensionless(omega_l, (lambda * omega_l).sqrt())
    }
}

fn check_nonneg(name: &str, v: f64) -> Result<()> {
    if v >= 0.0 && !v.is_nan() {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be nonnegative, got {v}")))
    }
}

/// `ε(iξ) = 1 + ω_p²/ξ²`.
pub fn permittivity_plasma(omega_p: f64, xi: f64) -> Result<f64> {
    if xi == 0.0 {
        return Err(Error::domain("permittivity at zero frequency"));
    }
    Ok(1.0 + omega_p * omega_p / (xi * xi))
}

/// Plane amplitude `d̃_{ω,γ}` (including its `1/2γ`) at imaginary frequency `ω` and
/// `γ = √(ω² + k∥²)`.
pub fn dtilde(kind: BoundaryKind, omega: f64, gamma: f64, params: &PlasmaParams) -> Result<f64> {
    if !(gamma > 0.0) {
        return Err(Error::domain(format!("dtilde needs gamma > 0, got {gamma}")));
    }
    Ok(two_gamma_dtilde(kind, omega, gamma, params) / (2.0 * gamma))
}

/// `2γ d̃`, the dimensionless reflection amplitude.  Finite at `ω = 0` for every kind.
pub(crate) fn two_gamma_dtilde(kind: BoundaryKind, omega: f64, gamma: f64, params: &PlasmaParams) -> f64 {
    let big = params.omega;
    let wp2 = params.omega_p * params.omega_p;
    let w2 = omega * omega;
    match kind {
        BoundaryKind::DeltaTE => 1.0 / (1.0 + gamma / big),
        BoundaryKind::DeltaTM => -1.0 / (1.0 + w2 / (gamma * big)),
        BoundaryKind::EpsTE => {
            let p = (gamma * gamma + wp2).sqrt();
            // (p - γ)/(p + γ) written without cancellation
            wp2 / ((p + gamma) * (p + gamma))
        }
        BoundaryKind::EpsTM => {
            let p = (gamma * gamma + wp2).sqrt();
            // ε γ ∓ p with ε = 1 + ω_p²/ω², multiplied through by ω²
            let eg = (w2 + wp2) * gamma;
            -(eg - w2 * p) / (eg + w2 * p)
        }
    }
}

/// Rescaled reflection coefficient at `t` and angular variable `y ∈ [0, 1]`.
pub fn refl(kind: BoundaryKind, t: f64, y: f64, params: &PlasmaParams) -> f64 {
    let big = params.omega_l;
    let w = params.omega_pl;
    match kind {
        BoundaryKind::DeltaTE => 1.0 / (1.0 + t / big),
        BoundaryKind::DeltaTM => -1.0 / (1.0 + t * y * y / big),
        BoundaryKind::EpsTE => {
            if w == 0.0 {
                return 0.0;
            }
            let u = t / w;
            let s = (1.0 + u * u).sqrt();
            1.0 / ((s + u) * (s + u))
        }
        BoundaryKind::EpsTM => {
            if w == 0.0 {
                return 0.0;
            }
            let s = t.hypot(w);
            let num = t * y * y / (s + t) - 1.0;
            let den = 1.0 + t * (t + s) * y * y / (w * w);
            num / den
        }
    }
}

/// `r_cyl · r_plane` for a model pair.
pub fn refl_product(pair: ModelPair, t: f64, y: f64, params: &PlasmaParams) -> f64 {
    refl(pair.cyl(), t, y, params) * refl(pair.plane(), t, y, params)
}
