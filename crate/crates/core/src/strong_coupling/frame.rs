//! Drive-diagonal frame: the exact solution of the drive term, the equation
//! left over after varying its constants, and the map back to the lab frame.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::phase::{phase_factor, phase_integral, PhaseSign};
use crate::error::{Error, Result};
use crate::hamiltonians::DriveParams;
use crate::linalg::{hadamard, Complex2Vector, Matrix2, StateVector, Unitary2, STRUCTURE_TOL};
use crate::propagator::{propagate, IntegratorConfig, Trajectory};

/// Initial rotated-frame amplitudes `φ(0) = (α, β)` with `|α|² + |β|² = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameAmplitudes {
    alpha: C64,
    beta: C64,
}

impl FrameAmplitudes {
    pub fn new(alpha: C64, beta: C64) -> Result<Self> {
        let dev = (alpha.norm_sqr() + beta.norm_sqr() - 1.0).abs();
        if !(alpha.is_finite() && beta.is_finite()) || dev > STRUCTURE_TOL {
            return Err(Error::domain(format!(
                "|alpha|^2 + |beta|^2 must equal 1 (deviation {dev:e})"
            )));
        }
        Ok(Self { alpha, beta })
    }

    /// `α = β = e^{iθ}/√2`
    pub fn equal_superposition(theta: f64) -> Self {
        let a = C64::from_polar(FRAC_1_SQRT_2, theta);
        Self { alpha: a, beta: a }
    }

    /// Amplitudes whose lab-frame state at `t = 0` is `psi0`, i.e. `W ψ₀`.
    pub fn from_initial_state(psi0: &StateVector) -> Self {
        let v = hadamard() * psi0.vector();
        Self {
            alpha: v.c0,
            beta: v.c1,
        }
    }

    pub fn alpha(&self) -> C64 {
        self.alpha
    }

    pub fn beta(&self) -> C64 {
        self.beta
    }

    pub fn vector(&self) -> Complex2Vector {
        Complex2Vector::new(self.alpha, self.beta)
    }

    pub fn state(&self) -> StateVector {
        StateVector::normalized(self.vector()).expect("amplitudes are normalized")
    }

    /// Lab-frame state at `t = 0`.
    pub fn initial_state(&self) -> StateVector {
        StateVector::normalized(hadamard() * self.vector()).expect("W is unitary")
    }
}

/// `exp(−i (g/ω) sin(ωt)) |1⟩⟨1| + exp(+i (g/ω) sin(ωt)) |−1⟩⟨−1|`,
/// the propagator of `H₀ = g cos(ωt) σ₁`.
///
/// In closed form this is `cos φ · I − i sin φ · σ₁` with `φ = (g/ω) sin(ωt)`.
pub fn drive_frame_propagator(t: f64, p: &DriveParams) -> Unitary2 {
    let phi = p.drive_phase(t);
    let (s, c) = phi.sin_cos();
    let diag = C64::new(c, 0.0);
    let off = C64::new(0.0, -s);
    Unitary2::new(Matrix2::new(diag, off, off, diag)).expect("rotation is unitary")
}

/// Generator of the rotated-frame equation
/// `i dφ/dt = −(Δ/2)(e^{2iφ(t)} σ₊ + e^{−2iφ(t)} σ₋) φ`.
pub fn rotated_frame_rhs(t: f64, p: &DriveParams) -> Matrix2 {
    let coupling = -0.5 * p.delta();
    let up = phase_factor(t, PhaseSign::Plus, p) * coupling;
    Matrix2::new(C64::new(0.0, 0.0), up, up.conj(), C64::new(0.0, 0.0))
}

/// Lab-frame state `ψ(t) = W diag(e^{−iφ(t)}, e^{iφ(t)}) φ(t)`.
///
/// Unitary in `phi`, so the norm of the result equals `‖phi‖`; `phi` need
/// not be normalized (approximate solutions carry a norm of `1 + O(Δ²)`).
pub fn reconstruct_full(t: f64, phi: &Complex2Vector, p: &DriveParams) -> Complex2Vector {
    let rot = C64::from_polar(1.0, -p.drive_phase(t));
    let inner = Complex2Vector::new(phi.c0 * rot, phi.c1 * rot.conj());
    hadamard() * inner
}

/// Lowest-order strong-coupling solution
/// `ψ(t) = W (e^{−iφ}{α + i(Δ/2)β I₊(t)}, e^{iφ}{β + i(Δ/2)α I₋(t)})ᵗ`.
///
/// Not renormalized: its norm is `1 + O(Δ²)`.
pub fn approx_solution(
    t: f64,
    amps: &FrameAmplitudes,
    p: &DriveParams,
    quad_tol: f64,
) -> Result<Complex2Vector> {
    Ok(reconstruct_full(
        t,
        &first_order_amplitudes(t, amps, p, quad_tol)?,
        p,
    ))
}

/// Rotated-frame amplitudes `(a(t), b(t))` to first order in `Δ`.
pub fn first_order_amplitudes(
    t: f64,
    amps: &FrameAmplitudes,
    p: &DriveParams,
    quad_tol: f64,
) -> Result<Complex2Vector> {
    if p.delta() == 0.0 || t == 0.0 {
        return Ok(amps.vector());
    }
    let i_half_delta = C64::new(0.0, 0.5 * p.delta());
    let plus = phase_integral(t, PhaseSign::Plus, p, quad_tol)?.value;
    let minus = phase_integral(t, PhaseSign::Minus, p, quad_tol)?.value;
    Ok(Complex2Vector::new(
        amps.alpha + i_half_delta * amps.beta * plus,
        amps.beta + i_half_delta * amps.alpha * minus,
    ))
}

/// Numerically integrates the rotated-frame equation from `φ(0) = (α, β)`.
pub fn propagate_rotated_frame(
    p: &DriveParams,
    amps: &FrameAmplitudes,
    t_grid: &[f64],
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    let mut traj = propagate(|t| rotated_frame_rhs(t, p), &amps.state(), t_grid, cfg)?;
    traj.params = Some(*p);
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{sigma_x, SigmaOneEigenbasis};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn drive_frame_identity_points() {
        let p = DriveParams::new(0.2, 3.0, 1.7).unwrap();
        assert!(
            drive_frame_propagator(0.0, &p)
                .matrix()
                .max_abs_diff(&Matrix2::identity())
                < 1e-15
        );
        let half = std::f64::consts::PI / p.omega();
        assert!(
            drive_frame_propagator(half, &p)
                .matrix()
                .max_abs_diff(&Matrix2::identity())
                < 1e-14
        );
    }

    #[test]
    fn drive_frame_spectral_form() {
        let p = DriveParams::new(0.2, 3.0, 1.7).unwrap();
        let b = SigmaOneEigenbasis::new();
        let w = hadamard();
        for k in 0..40 {
            let t = 0.11 * k as f64;
            let phi = p.drive_phase(t);
            let u = *drive_frame_propagator(t, &p).matrix();
            let spectral = b.projector_plus() * C64::from_polar(1.0, -phi)
                + b.projector_minus() * C64::from_polar(1.0, phi);
            assert!(u.max_abs_diff(&spectral) < 1e-14);
            let via_w =
                w * Matrix2::diag(C64::from_polar(1.0, -phi), C64::from_polar(1.0, phi)) * w;
            assert!(u.max_abs_diff(&via_w) < 1e-14);
            assert!((u * u.dagger()).max_abs_diff(&Matrix2::identity()) <= 1e-14);
            assert!(
                (u * b.ket_plus).max_abs_diff(&(b.ket_plus * C64::from_polar(1.0, -phi))) < 1e-14
            );
        }
    }

    #[test]
    fn rotated_rhs_examples() {
        let p0 = DriveParams::new(0.0, 3.0, 1.7).unwrap();
        assert_eq!(rotated_frame_rhs(2.3, &p0), Matrix2::zero());
        let p = DriveParams::new(0.4, 3.0, 1.7).unwrap();
        assert!(rotated_frame_rhs(0.0, &p).max_abs_diff(&(sigma_x() * -0.2)) < 1e-16);
        for k in 0..30 {
            let m = rotated_frame_rhs(0.3 * k as f64, &p);
            assert!(m.is_hermitian(1e-15));
            assert_eq!(m.get(0, 0), c(0.0, 0.0));
            assert_eq!(m.get(1, 1), c(0.0, 0.0));
        }
    }

    #[test]
    fn rotated_rhs_is_conjugated_perturbation() {
        // U₀† (−Δ/2 σ₃) U₀ = W · rotated_frame_rhs · W
        let p = DriveParams::new(0.6, 2.2, 0.9).unwrap();
        let w = hadamard();
        for k in 0..25 {
            let t = 0.37 * k as f64;
            let u = *drive_frame_propagator(t, &p).matrix();
            let lhs = u.dagger() * crate::linalg::sigma_z() * (-0.3) * u;
            let rhs = w * rotated_frame_rhs(t, &p) * w;
            assert!(lhs.max_abs_diff(&rhs) < 1e-14);
        }
    }

    #[test]
    fn reconstruct_examples() {
        let p = DriveParams::new(0.0, 1.4, 0.8).unwrap();
        let alpha = c(0.6, 0.0);
        let beta = c(0.0, 0.8);
        let at0 = reconstruct_full(0.0, &Complex2Vector::new(alpha, beta), &p);
        let s = FRAC_1_SQRT_2;
        assert!(
            at0.max_abs_diff(&Complex2Vector::new((alpha + beta) * s, (alpha - beta) * s)) < 1e-15
        );

        let t = 2.9;
        let phi = p.drive_phase(t);
        let psi = reconstruct_full(t, &Complex2Vector::basis0(), &p);
        let e = C64::from_polar(s, -phi);
        assert!(psi.max_abs_diff(&Complex2Vector::new(e, e)) < 1e-15);

        let v = Complex2Vector::new(c(1.3, -0.2), c(0.1, 0.7));
        assert!((reconstruct_full(t, &v, &p).norm() - v.norm()).abs() < 1e-15);
    }

    #[test]
    fn reconstruct_matches_drive_propagator() {
        // ψ(t) = U₀(t) W φ(t)
        let p = DriveParams::new(0.0, 1.4, 0.8).unwrap();
        let v = Complex2Vector::new(c(0.3, -0.2), c(0.5, 0.7));
        for k in 0..10 {
            let t = 0.7 * k as f64;
            let direct = drive_frame_propagator(t, &p).apply(&(hadamard() * v));
            assert!(reconstruct_full(t, &v, &p).max_abs_diff(&direct) < 1e-15);
        }
    }

    #[test]
    fn amplitudes_validation() {
        assert!(FrameAmplitudes::new(c(1.0, 0.0), c(0.1, 0.0)).is_err());
        let a = FrameAmplitudes::new(c(0.6, 0.0), c(0.0, 0.8)).unwrap();
        assert_eq!(a.vector(), Complex2Vector::new(c(0.6, 0.0), c(0.0, 0.8)));
        let e = FrameAmplitudes::equal_superposition(0.4);
        assert_eq!(e.alpha(), e.beta());
        assert!((e.alpha().norm_sqr() - 0.5).abs() < 1e-16);
        let psi = StateVector::new(c(0.6, 0.0), c(0.0, 0.8)).unwrap();
        let back = FrameAmplitudes::from_initial_state(&psi).initial_state();
        assert!(back.vector().max_abs_diff(&psi.vector()) < 1e-15);
    }

    #[test]
    fn approx_at_origin() {
        let p = DriveParams::new(0.3, 1.0, 1.0).unwrap();
        let amps = FrameAmplitudes::new(c(0.6, 0.0), c(0.0, 0.8)).unwrap();
        let psi = approx_solution(0.0, &amps, &p, 1e-10).unwrap();
        let s = FRAC_1_SQRT_2;
        let want = Complex2Vector::new(
            (amps.alpha() + amps.beta()) * s,
            (amps.alpha() - amps.beta()) * s,
        );
        assert!(psi.max_abs_diff(&want) < 1e-15);
    }
}
