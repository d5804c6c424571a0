//! Strong-coupling expansion in the level splitting `Δ`.
//!
//! The drive term is solved exactly, the constants of that solution are
//! promoted to time-dependent amplitudes `φ = (a, b)`, and the equation they
//! obey is iterated in powers of `Δ`.

pub mod bessel;
pub mod frame;
pub mod phase;
pub mod picard;
pub mod quadrature;

pub use frame::{
    approx_solution, drive_frame_propagator, first_order_amplitudes, propagate_rotated_frame,
    reconstruct_full, rotated_frame_rhs, FrameAmplitudes,
};
pub use phase::{
    default_bessel_terms, phase_integral, phase_integral_bessel, phase_integral_quadrature,
    PhaseIntegralResult, PhaseMethod, PhaseSign,
};
pub use picard::{picard_iterate, PicardSolution, DEFAULT_QUAD_TOL};
