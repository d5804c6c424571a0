//! Observables, error metrics and parameter scans.

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonians::DriveParams;
use crate::linalg::{sigma_x, sigma_z, Complex2Vector, Matrix2, StateVector, Unitary2};
use crate::propagator::{propagate_full, uniform_grid, IntegratorConfig};
use crate::strong_coupling::{approx_solution, FrameAmplitudes};

/// Time samples per drive period used by scans that pick their own grid.
pub const SAMPLES_PER_PERIOD: usize = 32;

/// `|ψ₁(t)|² = (1 − cos((2g/ω) sin ωt))/2`, the excited population of the
/// drive-only solution started from `α = β = e^{iθ}/√2`.
pub fn population_excited_closed_form(t: f64, p: &DriveParams) -> f64 {
    0.5 * (1.0 - (2.0 * p.drive_phase(t)).cos())
}

/// `|⟨a, b⟩|² / ‖b‖²`; the second argument may be unnormalized.
pub fn fidelity(a: &StateVector, b: &Complex2Vector) -> Result<f64> {
    let nb = b.norm_sqr();
    if !(nb > 0.0) || !b.is_finite() {
        return Err(Error::domain(
            "fidelity against a zero or non-finite vector",
        ));
    }
    Ok((a.vector().inner(b).norm_sqr() / nb).min(1.0))
}

/// `|⟨a, b⟩|² / (‖a‖² ‖b‖²)`, for comparing two numerically evolved states
/// whose norms both drift slightly.
pub fn state_fidelity(a: &Complex2Vector, b: &Complex2Vector) -> Result<f64> {
    let na = a.norm_sqr();
    let nb = b.norm_sqr();
    if !(na > 0.0 && nb > 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(Error::domain(
            "fidelity against a zero or non-finite vector",
        ));
    }
    Ok((a.inner(b).norm_sqr() / (na * nb)).min(1.0))
}

/// Pure-state trace distance `sqrt(1 − F)`.
pub fn trace_distance(a: &Complex2Vector, b: &Complex2Vector) -> Result<f64> {
    Ok((1.0 - state_fidelity(a, b)?).max(0.0).sqrt())
}

/// Exact propagator of the RWA Hamiltonian,
/// `U(t) = e^{iωtσ₃/2} exp(−i H̄ t)` with `H̄ = −((Δ−ω)/2)σ₃ + (g/2)σ₁`.
pub fn rwa_propagator(t: f64, p: &DriveParams) -> Unitary2 {
    let h_bar = sigma_z() * (-0.5 * (p.delta() - p.omega())) + sigma_x() * (0.5 * p.g());
    let r = (0.25 * (p.delta() - p.omega()).powi(2) + 0.25 * p.g() * p.g()).sqrt();
    let static_part = if r == 0.0 {
        Matrix2::identity()
    } else {
        let (s, c) = (r * t).sin_cos();
        Matrix2::identity() * c + h_bar * C64::new(0.0, -s / r)
    };
    let frame = Matrix2::diag(
        C64::from_polar(1.0, 0.5 * p.omega() * t),
        C64::from_polar(1.0, -0.5 * p.omega() * t),
    );
    Unitary2::new(frame * static_part).expect("product of unitaries")
}

/// Analytic solution of `i dψ/dt = H_RWA(t) ψ`.
pub fn rwa_solution(t: f64, psi0: &StateVector, p: &DriveParams) -> StateVector {
    let v = rwa_propagator(t, p).apply(&psi0.vector());
    StateVector::normalized(v).expect("unitary image of a unit vector")
}

/// A one-dimensional sweep of some error metric.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub axis_name: String,
    pub metric_name: String,
    pub axis: Vec<f64>,
    /// `None` where the point failed; see `failures`.
    pub metric: Vec<Option<f64>>,
    pub failures: Vec<ScanFailure>,
    /// Parameters of each point (the base set with the axis value applied).
    pub point_params: Vec<DriveParams>,
    pub horizon: f64,
    pub rel_tol: f64,
    pub quad_tol: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanFailure {
    pub index: usize,
    pub axis: f64,
    pub message: String,
}

impl ScanResult {
    /// Largest successfully computed metric value.
    pub fn max_metric(&self) -> Option<f64> {
        self.metric.iter().flatten().copied().reduce(f64::max)
    }
}

fn check_axis(values: &[f64], name: &str) -> Result<()> {
    if values.is_empty() {
        return Err(Error::domain(format!("{name} list is empty")));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::domain(format!("{name} values must be finite")));
    }
    let increasing = values.windows(2).all(|w| w[1] > w[0]);
    let decreasing = values.windows(2).all(|w| w[1] < w[0]);
    if !(increasing || decreasing) {
        return Err(Error::domain(format!(
            "{name} values must be strictly monotone"
        )));
    }
    Ok(())
}

fn collect_points(
    axis: &[f64],
    outcomes: Vec<Result<f64>>,
) -> (Vec<Option<f64>>, Vec<ScanFailure>) {
    let mut metric = Vec::with_capacity(outcomes.len());
    let mut failures = Vec::new();
    for (index, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Ok(v) => metric.push(Some(v)),
            Err(e) => {
                metric.push(None);
                failures.push(ScanFailure {
                    index,
                    axis: axis[index],
                    message: e.to_string(),
                });
            }
        }
    }
    (metric, failures)
}

/// Integrator settings for reference runs accompanying approximations
/// computed at `quad_tol`: `rel_tol = min(1e-10, quad_tol/10)`.
pub fn reference_config(p: &DriveParams, quad_tol: f64) -> IntegratorConfig {
    let rel_tol = (quad_tol / 10.0).min(IntegratorConfig::DEFAULT_REL_TOL);
    IntegratorConfig::for_params(p)
        .with_rel_tol(rel_tol)
        .with_abs_tol((rel_tol * 1e-2).min(IntegratorConfig::DEFAULT_ABS_TOL))
}

/// Max-over-time infidelity of the lowest-order solution against the exact
/// propagator on a uniform grid of `samples` points in `[0, horizon]`.
pub fn max_infidelity(
    p: &DriveParams,
    amps: &FrameAmplitudes,
    horizon: f64,
    samples: usize,
    quad_tol: f64,
) -> Result<f64> {
    let grid = uniform_grid(horizon, samples);
    let exact = propagate_full(
        p,
        &amps.initial_state(),
        &grid,
        &reference_config(p, quad_tol),
    )?;
    let mut worst: f64 = 0.0;
    for (&t, psi) in grid.iter().zip(&exact.states) {
        let approx = approx_solution(t, amps, p, quad_tol)?;
        worst = worst.max(1.0 - state_fidelity(psi, &approx)?);
    }
    Ok(worst.max(0.0))
}

/// [`max_infidelity`] for each `Δ` in `delta_values`.
pub fn infidelity_scan(
    p_base: &DriveParams,
    delta_values: &[f64],
    horizon: f64,
    samples: usize,
    quad_tol: f64,
    amps: &FrameAmplitudes,
) -> Result<ScanResult> {
    check_axis(delta_values, "delta")?;
    if !(horizon > 0.0) || samples < 2 {
        return Err(Error::domain(
            "scan needs horizon > 0 and at least two samples",
        ));
    }
    let point_params = delta_values
        .iter()
        .map(|&d| p_base.with_delta(d))
        .collect::<Result<Vec<_>>>()?;
    let outcomes: Vec<Result<f64>> = point_params
        .par_iter()
        .map(|p| max_infidelity(p, amps, horizon, samples, quad_tol))
        .collect();
    let (metric, failures) = collect_points(delta_values, outcomes);
    Ok(ScanResult {
        axis_name: "delta".into(),
        metric_name: "max_infidelity".into(),
        axis: delta_values.to_vec(),
        metric,
        failures,
        point_params,
        horizon,
        rel_tol: reference_config(p_base, quad_tol).rel_tol,
        quad_tol: Some(quad_tol),
    })
}

/// Max-over-time trace distance between the full-model state (propagated
/// numerically) and the analytic RWA state, both from `(1, 0)`.
pub fn rwa_discrepancy(p: &DriveParams, horizon: f64) -> Result<f64> {
    let periods = horizon / p.period();
    let samples = ((periods * SAMPLES_PER_PERIOD as f64).ceil() as usize + 1).max(2);
    let grid = uniform_grid(horizon, samples);
    let psi0 = StateVector::ground();
    let exact = propagate_full(p, &psi0, &grid, &IntegratorConfig::for_params(p))?;
    let mut worst: f64 = 0.0;
    for (&t, psi) in grid.iter().zip(&exact.states) {
        let rwa = rwa_solution(t, &psi0, p);
        worst = worst.max(trace_distance(psi, &rwa.vector())?);
    }
    Ok(worst)
}

/// [`rwa_discrepancy`] for each drive frequency in `omega_values`.
pub fn bloch_siegert_proxy_scan(
    p_base: &DriveParams,
    omega_values: &[f64],
    horizon: f64,
) -> Result<ScanResult> {
    check_axis(omega_values, "omega")?;
    if !(horizon > 0.0) {
        return Err(Error::domain("scan needs horizon > 0"));
    }
    let point_params = omega_values
        .iter()
        .map(|&w| p_base.with_omega(w))
        .collect::<Result<Vec<_>>>()?;
    let outcomes: Vec<Result<f64>> = point_params
        .par_iter()
        .map(|p| rwa_discrepancy(p, horizon))
        .collect();
    let (metric, failures) = collect_points(omega_values, outcomes);
    Ok(ScanResult {
        axis_name: "omega".into(),
        metric_name: "max_trace_distance".into(),
        axis: omega_values.to_vec(),
        metric,
        failures,
        point_params,
        horizon,
        rel_tol: IntegratorConfig::DEFAULT_REL_TOL,
        quad_tol: None,
    })
}
