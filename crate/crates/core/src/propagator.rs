//! Reference integrator for `i dψ/dt = H(t) ψ`.
//!
//! Embedded Dormand–Prince 8(5,3) pair with local extrapolation and a PI
//! step size controller. Every requested sample time is hit exactly by clipping
//! the step, so sample times in the output are bit-identical to the input
//! grid. The state is never renormalized; norm drift is reported instead.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonians::{hamiltonian_full, DriveParams};
use crate::linalg::{Complex2Vector, Matrix2, StateVector, Unitary2};

const NEG_I: C64 = C64::new(0.0, -1.0);

/// Tolerances and step limits of the adaptive integrator.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    pub initial_step: f64,
}

impl IntegratorConfig {
    pub const DEFAULT_REL_TOL: f64 = 1e-10;
    pub const DEFAULT_ABS_TOL: f64 = 1e-12;

    /// Default tolerances with `max_step` resolving the drive period 20 times.
    pub fn for_params(p: &DriveParams) -> Self {
        let max_step = p.period() / 20.0;
        Self {
            rel_tol: Self::DEFAULT_REL_TOL,
            abs_tol: Self::DEFAULT_ABS_TOL,
            max_step,
            initial_step: max_step / 100.0,
        }
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol <= 1e-3) {
            return Err(Error::domain(format!(
                "rel_tol must lie in (0, 1e-3], got {}",
                self.rel_tol
            )));
        }
        if !(self.abs_tol > 0.0 && self.abs_tol <= 1e-6) {
            return Err(Error::domain(format!(
                "abs_tol must lie in (0, 1e-6], got {}",
                self.abs_tol
            )));
        }
        if !(self.max_step > 0.0 && self.max_step.is_finite()) {
            return Err(Error::domain(format!(
                "max_step must be positive, got {}",
                self.max_step
            )));
        }
        if !(self.initial_step > 0.0 && self.initial_step.is_finite()) {
            return Err(Error::domain(format!(
                "initial_step must be positive, got {}",
                self.initial_step
            )));
        }
        Ok(())
    }
}

/// Sampled solution of a propagation run.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Complex2Vector>,
    /// Drive parameters when the generator was the full dipole Hamiltonian.
    pub params: Option<DriveParams>,
    pub config: IntegratorConfig,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    /// Sum of the local error estimates of all accepted steps (absolute).
    pub accumulated_error: f64,
}

impl Trajectory {
    pub fn final_state(&self) -> Complex2Vector {
        *self
            .states
            .last()
            .expect("trajectory has at least one sample")
    }

    /// `max_t |‖ψ(t)‖ − 1|`
    pub fn max_norm_drift(&self) -> f64 {
        self.states
            .iter()
            .map(|s| (s.norm() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

/// `samples` equally spaced points on `[0, horizon]`, endpoints included.
pub fn uniform_grid(horizon: f64, samples: usize) -> Vec<f64> {
    match samples {
        0 => Vec::new(),
        1 => vec![0.0],
        n => {
            let dt = horizon / (n - 1) as f64;
            (0..n)
                .map(|k| if k == n - 1 { horizon } else { k as f64 * dt })
                .collect()
        }
    }
}

/// Integrates `i dψ/dt = H(t)ψ` from `t = 0`, returning ψ at each grid time.
pub fn propagate<H>(
    hamiltonian: H,
    psi0: &StateVector,
    t_grid: &[f64],
    cfg: &IntegratorConfig,
) -> Result<Trajectory>
where
    H: Fn(f64) -> Matrix2,
{
    cfg.validate()?;
    check_grid(t_grid)?;
    let mut stepper = Stepper::new(&hamiltonian, psi0.vector(), cfg);
    let mut states = Vec::with_capacity(t_grid.len());
    states.push(psi0.vector());
    for &target in &t_grid[1..] {
        stepper.advance_to(target)?;
        states.push(stepper.y);
    }
    Ok(Trajectory {
        times: t_grid.to_vec(),
        states,
        params: None,
        config: *cfg,
        accepted_steps: stepper.accepted,
        rejected_steps: stepper.rejected,
        accumulated_error: stepper.accumulated_error,
    })
}

/// [`propagate`] with the full dipole Hamiltonian of `p`.
pub fn propagate_full(
    p: &DriveParams,
    psi0: &StateVector,
    t_grid: &[f64],
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    let mut traj = propagate(|t| hamiltonian_full(t, p), psi0, t_grid, cfg)?;
    traj.params = Some(*p);
    Ok(traj)
}

/// Propagator `U(t)` of `H` from 0 to `t`, built column by column.
pub fn propagator_matrix<H>(hamiltonian: H, t: f64, cfg: &IntegratorConfig) -> Result<Matrix2>
where
    H: Fn(f64) -> Matrix2,
{
    let grid = [0.0, t];
    let col0 = propagate(&hamiltonian, &StateVector::ground(), &grid, cfg)?.final_state();
    let col1 = propagate(&hamiltonian, &StateVector::excited(), &grid, cfg)?.final_state();
    Ok(Matrix2::from_columns(&col0, &col1))
}

/// One-period propagator `U(2π/ω)` of the full dipole Hamiltonian.
///
/// Accepted as unitary within `max(1e-8, 100·rel_tol)`.
pub fn monodromy(p: &DriveParams, cfg: &IntegratorConfig) -> Result<Unitary2> {
    let u = propagator_matrix(|t| hamiltonian_full(t, p), p.period(), cfg)?;
    Unitary2::with_tolerance(u, (100.0 * cfg.rel_tol).max(1e-8))
}

fn check_grid(t_grid: &[f64]) -> Result<()> {
    match t_grid.first() {
        None => return Err(Error::domain("time grid is empty")),
        Some(&t0) if t0 != 0.0 => {
            return Err(Error::domain(format!(
                "time grid must start at 0, starts at {t0}"
            )))
        }
        _ => {}
    }
    if let Some(w) = t_grid
        .windows(2)
        .find(|w| !(w[1] > w[0]) || !w[1].is_finite())
    {
        return Err(Error::domain(format!(
            "time grid must be finite and strictly increasing ({} then {})",
            w[0], w[1]
        )));
    }
    Ok(())
}

// Dormand–Prince 8(5,3) tableau.
const STAGES: usize = 12;

const C: [f64; STAGES] = [
    0.0,
    0.05260015195876773,
    0.0789002279381516,
    0.1183503419072274,
    0.2816496580927726,
    0.3333333333333333,
    0.25,
    0.3076923076923077,
    0.6512820512820513,
    0.6,
    0.8571428571428571,
    1.0,
];

const A: [[f64; STAGES]; STAGES] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [
        0.05260015195876773,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        0.0197250569845379,
        0.0591751709536137,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        0.02958758547680685,
        0.0,
        0.08876275643042054,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        0.2413651341592667,
        0.0,
        -0.8845494793282861,
        0.924834003261792,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        0.037037037037037035,
        0.0,
        0.0,
        0.17082860872947386,
        0.12546768756682242,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        0.037109375,
        0.0,
        0.0,
        0.17025221101954405,
        0.06021653898045596,
        -0.017578125,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        0.03709200011850479,
        0.0,
        0.0,
        0.17038392571223998,
        0.10726203044637328,
        -0.015319437748624402,
        0.008273789163814023,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        0.6241109587160757,
        0.0,
        0.0,
        -3.3608926294469414,
        -0.868219346841726,
        27.59209969944671,
        20.154067550477894,
        -43.48988418106996,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        0.47766253643826434,
        0.0,
        0.0,
        -2.4881146199716677,
        -0.590290826836843,
        21.230051448181193,
        15.279233632882423,
        -33.28821096898486,
        -0.020331201708508627,
        0.0,
        0.0,
        0.0,
    ],
    [
        -0.9371424300859873,
        0.0,
        0.0,
        5.186372428844064,
        1.0914373489967295,
        -8.149787010746927,
        -18.52006565999696,
        22.739487099350505,
        2.4936055526796523,
        -3.0467644718982196,
        0.0,
        0.0,
    ],
    [
        2.273310147516538,
        0.0,
        0.0,
        -10.53449546673725,
        -2.0008720582248625,
        -17.9589318631188,
        27.94888452941996,
        -2.8589982771350235,
        -8.87285693353063,
        12.360567175794303,
        0.6433927460157636,
        0.0,
    ],
];

const B: [f64; STAGES] = [
    0.054293734116568765,
    0.0,
    0.0,
    0.0,
    0.0,
    4.450312892752409,
    1.8915178993145003,
    -5.801203960010585,
    0.3111643669578199,
    -0.1521609496625161,
    0.20136540080403034,
    0.04471061572777259,
];

// B minus the embedded third-order weights
const E3: [f64; STAGES] = [
    -0.18980075407240762,
    0.0,
    0.0,
    0.0,
    0.0,
    4.450312892752409,
    1.8915178993145003,
    -5.801203960010585,
    -0.4226823213237919,
    -0.1521609496625161,
    0.20136540080403034,
    0.02265179219836082,
];

// B minus the embedded fifth-order weights
const E5: [f64; STAGES] = [
    0.01312004499419488,
    0.0,
    0.0,
    0.0,
    0.0,
    -1.2251564463762044,
    -0.4957589496572502,
    1.6643771824549864,
    -0.35032884874997366,
    0.3341791187130175,
    0.08192320648511571,
    -0.022355307863886294,
];

const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;
const BETA: f64 = 0.04;
const EXPO: f64 = 1.0 / 8.0 - 0.2 * BETA;
const MAX_STEPS: usize = 50_000_000;

struct Stepper<'a, H> {
    hamiltonian: &'a H,
    cfg: &'a IntegratorConfig,
    t: f64,
    y: Complex2Vector,
    /// derivative at (t, y), reused by first-same-as-last
    k1: Complex2Vector,
    h: f64,
    err_old: f64,
    accepted: usize,
    rejected: usize,
    accumulated_error: f64,
}

impl<'a, H> Stepper<'a, H>
where
    H: Fn(f64) -> Matrix2,
{
    fn new(hamiltonian: &'a H, y0: Complex2Vector, cfg: &'a IntegratorConfig) -> Self {
        let k1 = rhs(hamiltonian, 0.0, &y0);
        Self {
            hamiltonian,
            cfg,
            t: 0.0,
            y: y0,
            k1,
            h: cfg.initial_step.min(cfg.max_step),
            err_old: 1e-4,
            accepted: 0,
            rejected: 0,
            accumulated_error: 0.0,
        }
    }

    fn advance_to(&mut self, target: f64) -> Result<()> {
        while self.t < target {
            if self.accepted + self.rejected >= MAX_STEPS {
                return Err(Error::IntegrationFailure {
                    time: self.t,
                    reason: format!("step budget of {MAX_STEPS} exhausted"),
                });
            }
            let remaining = target - self.t;
            let clipped = self.h >= remaining;
            let h = if clipped { remaining } else { self.h };
            if h < 16.0 * f64::EPSILON * self.t.abs().max(1.0) && !clipped {
                return Err(Error::IntegrationFailure {
                    time: self.t,
                    reason: format!("step size underflow (h = {h:e})"),
                });
            }
            self.try_step(h, clipped, target)?;
        }
        Ok(())
    }

    fn try_step(&mut self, h: f64, clipped: bool, target: f64) -> Result<()> {
        let f = self.hamiltonian;
        let (t, y) = (self.t, self.y);
        let zero = Complex2Vector::zero();
        let mut k = [zero; STAGES];
        k[0] = self.k1;
        for i in 1..STAGES {
            let incr = (0..i).fold(zero, |acc, j| acc + k[j] * A[i][j]);
            k[i] = rhs(f, t + C[i] * h, &(y + incr * h));
        }
        let combine =
            |w: &[f64; STAGES]| k.iter().zip(w).fold(zero, |acc, (kj, wj)| acc + *kj * *wj);
        let y_new = y + combine(&B) * h;
        if !y_new.is_finite() {
            return Err(Error::IntegrationFailure {
                time: t,
                reason: "non-finite state".into(),
            });
        }
        let err5 = combine(&E5) * h;
        let err3 = combine(&E3) * h;

        let scale = |a: C64, b: C64| self.cfg.abs_tol + self.cfg.rel_tol * a.norm().max(b.norm());
        let (s0, s1) = (scale(y.c0, y_new.c0), scale(y.c1, y_new.c1));
        let sq = |e: &Complex2Vector| (e.c0.norm() / s0).powi(2) + (e.c1.norm() / s1).powi(2);
        let (e5, e3) = (sq(&err5), sq(&err3));
        let denom = e5 + 0.01 * e3;
        let err = if denom > 0.0 {
            e5 / (2.0 * denom).sqrt()
        } else {
            0.0
        };

        let fac11 = err.powf(EXPO);
        if err <= 1.0 {
            let t_new = if clipped { target } else { t + h };
            let fac =
                (fac11 / self.err_old.powf(BETA) / SAFETY).clamp(1.0 / FAC_MAX, 1.0 / FAC_MIN);
            let mut h_next = h / fac;
            if clipped {
                h_next = h_next.max(self.h);
            }
            self.h = h_next.min(self.cfg.max_step);
            self.err_old = err.max(1e-4);
            self.t = t_new;
            self.y = y_new;
            self.k1 = rhs(f, t_new, &y_new);
            self.accepted += 1;
            self.accumulated_error += err5.norm();
        } else {
            self.h = h / (fac11 / SAFETY).min(1.0 / FAC_MIN);
            self.rejected += 1;
        }
        Ok(())
    }
}

#[inline]
fn rhs<H: Fn(f64) -> Matrix2>(hamiltonian: &H, t: f64, y: &Complex2Vector) -> Complex2Vector {
    hamiltonian(t).apply(y) * NEG_I
}
