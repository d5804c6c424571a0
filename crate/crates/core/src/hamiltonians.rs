//! Hamiltonians of the cosine-driven two-level atom.
//!
//! * full dipole model `H = −(Δ/2)σ₃ + g cos(ωt) σ₁`
//! * its rotating-wave truncation `−(Δ/2)σ₃ + (g/2)(e^{iωt}σ₊ + e^{−iωt}σ₋)`
//! * the drive term alone `H₀ = g cos(ωt) σ₁`

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{sigma_minus, sigma_plus, sigma_x, sigma_z, Matrix2};

/// Ratio `g/Δ` above which a parameter set is reported as strongly coupled.
/// Purely informational.
pub const STRONG_COUPLING_RATIO: f64 = 10.0;

/// Level splitting `Δ`, coupling `g` and drive frequency `ω` (ħ = 1).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct DriveParams {
    delta: f64,
    g: f64,
    omega: f64,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    delta: f64,
    g: f64,
    omega: f64,
}

impl TryFrom<RawParams> for DriveParams {
    type Error = Error;
    fn try_from(r: RawParams) -> Result<Self> {
        DriveParams::new(r.delta, r.g, r.omega)
    }
}

impl From<DriveParams> for RawParams {
    fn from(p: DriveParams) -> Self {
        RawParams {
            delta: p.delta,
            g: p.g,
            omega: p.omega,
        }
    }
}

impl DriveParams {
    pub fn new(delta: f64, g: f64, omega: f64) -> Result<Self> {
        if !(delta.is_finite() && g.is_finite() && omega.is_finite()) {
            return Err(Error::InvalidParams("parameters must be finite".into()));
        }
        if omega <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "drive frequency must be positive, got omega = {omega}"
            )));
        }
        if g < 0.0 {
            return Err(Error::InvalidParams(format!(
                "coupling must be >= 0, got g = {g}"
            )));
        }
        if delta < 0.0 {
            return Err(Error::InvalidParams(format!(
                "level splitting must be >= 0, got delta = {delta}"
            )));
        }
        Ok(Self { delta, g, omega })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn with_delta(&self, delta: f64) -> Result<Self> {
        Self::new(delta, self.g, self.omega)
    }

    pub fn with_g(&self, g: f64) -> Result<Self> {
        Self::new(self.delta, g, self.omega)
    }

    pub fn with_omega(&self, omega: f64) -> Result<Self> {
        Self::new(self.delta, self.g, omega)
    }

    /// Drive period `2π/ω`.
    pub fn period(&self) -> f64 {
        2.0 * PI / self.omega
    }

    /// `g/ω`
    pub fn drive_ratio(&self) -> f64 {
        self.g / self.omega
    }

    /// Accumulated drive phase `(g/ω) sin(ωt)`.
    pub fn drive_phase(&self, t: f64) -> f64 {
        self.drive_ratio() * (self.omega * t).sin()
    }

    /// Advisory tag for `g ≫ Δ`; never enforced.
    pub fn is_strong_coupling(&self) -> bool {
        self.g >= STRONG_COUPLING_RATIO * self.delta
    }
}

/// `−(Δ/2)σ₃ + g cos(ωt) σ₁`
pub fn hamiltonian_full(t: f64, p: &DriveParams) -> Matrix2 {
    hamiltonian_drive_only(t, p) + sigma_z() * (-0.5 * p.delta)
}

/// `−(Δ/2)σ₃ + (g/2)(e^{iωt}σ₊ + e^{−iωt}σ₋)`
pub fn hamiltonian_rwa(t: f64, p: &DriveParams) -> Matrix2 {
    let rot = C64::from_polar(1.0, p.omega * t);
    sigma_z() * (-0.5 * p.delta) + (sigma_plus() * rot + sigma_minus() * rot.conj()) * (0.5 * p.g)
}

/// `H₀ = g cos(ωt) σ₁`
pub fn hamiltonian_drive_only(t: f64, p: &DriveParams) -> Matrix2 {
    sigma_x() * (p.g * (p.omega * t).cos())
}

/// The counter-rotating part dropped by the RWA:
/// `(g/2)(e^{−iωt}σ₊ + e^{iωt}σ₋)`.
pub fn counter_rotating_term(t: f64, p: &DriveParams) -> Matrix2 {
    let rot = C64::from_polar(1.0, -p.omega * t);
    (sigma_plus() * rot + sigma_minus() * rot.conj()) * (0.5 * p.g)
}
