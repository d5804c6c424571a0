//! The phase integrals `I±(t) = ∫₀ᵗ exp(±2i (g/ω) sin(ωs)) ds`.
//!
//! Two independent evaluations are provided: adaptive quadrature of the
//! integrand, and the Jacobi–Anger series
//! `e^{iz sin θ} = Σₙ Jₙ(z) e^{inθ}` integrated term by term.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::bessel::bessel_j_orders;
use super::quadrature::{integrate, QuadOptions};
use crate::error::{Error, Result};
use crate::hamiltonians::DriveParams;

/// Extra Bessel orders summed beyond `2g/ω` by default.
pub const BESSEL_EXTRA_TERMS: usize = 25;

/// Orders past the truncation used to bound the neglected tail.
const TAIL_TERMS: usize = 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PhaseSign {
    Plus,
    Minus,
}

impl PhaseSign {
    pub fn value(self) -> f64 {
        match self {
            PhaseSign::Plus => 1.0,
            PhaseSign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            PhaseSign::Plus => PhaseSign::Minus,
            PhaseSign::Minus => PhaseSign::Plus,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PhaseMethod {
    Quadrature,
    BesselSeries,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseIntegralResult {
    pub value: C64,
    pub t: f64,
    pub sign: PhaseSign,
    pub method: PhaseMethod,
    pub err_estimate: f64,
}

/// Integrand `exp(±2i (g/ω) sin(ωs))`.
#[inline]
pub fn phase_factor(s: f64, sign: PhaseSign, p: &DriveParams) -> C64 {
    C64::from_polar(1.0, 2.0 * sign.value() * p.drive_phase(s))
}

/// Default truncation `⌈2g/ω⌉ + 25`.
pub fn default_bessel_terms(p: &DriveParams) -> usize {
    (2.0 * p.drive_ratio()).ceil() as usize + BESSEL_EXTRA_TERMS
}

/// Number of initial panels on `[0, t]`: at least two per drive period and
/// one per local oscillation of the integrand (angular rate up to `2g`),
/// i.e. at least 30 nodes per period.
pub(crate) fn panel_count(t: f64, p: &DriveParams) -> usize {
    let mut width = 0.5 * p.period();
    if p.g() > 0.0 {
        width = width.min(PI / p.g());
    }
    (t.abs() / width).ceil().max(1.0) as usize
}

fn check_time(t: f64) -> Result<()> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::domain(format!(
            "phase integral needs finite t >= 0, got {t}"
        )));
    }
    Ok(())
}

/// Adaptive Gauss–Kronrod evaluation of `I±(t)` to absolute tolerance `tol`.
pub fn phase_integral_quadrature(
    t: f64,
    sign: PhaseSign,
    p: &DriveParams,
    tol: f64,
) -> Result<PhaseIntegralResult> {
    check_time(t)?;
    if !(tol > 0.0) {
        return Err(Error::domain(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let result = |value, err_estimate| PhaseIntegralResult {
        value,
        t,
        sign,
        method: PhaseMethod::Quadrature,
        err_estimate,
    };
    if t == 0.0 {
        return Ok(result(C64::new(0.0, 0.0), 0.0));
    }
    if p.g() == 0.0 {
        return Ok(result(C64::new(t, 0.0), 0.0));
    }
    let opts = QuadOptions::new(tol).panels(panel_count(t, p));
    let q = integrate(|s| Ok(phase_factor(s, sign, p)), 0.0, t, &opts)?;
    Ok(result(q.value, q.err_estimate))
}

/// Jacobi–Anger evaluation of `I±(t)` keeping orders `|n| ≤ n_terms`:
/// `J₀(z) t + Σ_{0<|n|≤N} Jₙ(z) (e^{inωt} − 1)/(inω)` with `z = ±2g/ω`.
pub fn phase_integral_bessel(
    t: f64,
    sign: PhaseSign,
    p: &DriveParams,
    n_terms: usize,
) -> Result<PhaseIntegralResult> {
    check_time(t)?;
    if n_terms < 1 {
        return Err(Error::domain("Bessel series needs at least one term"));
    }
    let z = 2.0 * sign.value() * p.drive_ratio();
    let w = p.omega();
    let j = bessel_j_orders(z, n_terms + TAIL_TERMS);

    // (e^{ix} − 1)/(i n ω) without cancellation for small x
    let term = |n: f64| {
        let x = n * w * t;
        let half = (0.5 * x).sin();
        C64::new(x.sin(), 2.0 * half * half) / (n * w)
    };

    let mut value = C64::new(j[0] * t, 0.0);
    let mut magnitude = (j[0] * t).abs();
    for n in 1..=n_terms {
        let jn = j[n];
        let j_neg = if n % 2 == 1 { -jn } else { jn };
        let plus = term(n as f64) * jn;
        let minus = term(-(n as f64)) * j_neg;
        value += plus + minus;
        magnitude += plus.norm() + minus.norm();
    }
    let tail: f64 = (n_terms + 1..=n_terms + TAIL_TERMS)
        .map(|n| 2.0 * j[n].abs() * (2.0 / (n as f64 * w)).min(t))
        .sum();
    let rounding = 8.0 * f64::EPSILON * magnitude;

    Ok(PhaseIntegralResult {
        value,
        t,
        sign,
        method: PhaseMethod::BesselSeries,
        err_estimate: tail + rounding,
    })
}

/// Quadrature value of `I±(t)` after confirming it against the Bessel series.
///
/// Fails with [`Error::CrossCheck`] when the two evaluations differ by more
/// than ten times their combined error estimates (plus a rounding floor).
pub fn phase_integral(
    t: f64,
    sign: PhaseSign,
    p: &DriveParams,
    tol: f64,
) -> Result<PhaseIntegralResult> {
    let quad = phase_integral_quadrature(t, sign, p, tol)?;
    let series = phase_integral_bessel(t, sign, p, default_bessel_terms(p))?;
    let discrepancy = (quad.value - series.value).norm();
    let allowed = 10.0 * (tol + series.err_estimate) + 64.0 * f64::EPSILON * (1.0 + t);
    if discrepancy > allowed {
        return Err(Error::CrossCheck {
            t,
            discrepancy,
            allowed,
        });
    }
    Ok(quad)
}
