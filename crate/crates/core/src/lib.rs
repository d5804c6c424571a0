//! Driven two-level system beyond the rotating-wave approximation.
//!
//! The Hamiltonian `H(t) = -(Δ/2)σ₃ + g cos(ωt) σ₁` is treated in the strong
//! coupling regime `g ≫ Δ` by solving the drive term exactly, moving to the
//! frame that co-moves with it, and expanding the remaining dynamics in powers
//! of `Δ` (Picard iteration of the rotated-frame integral equations).
//!
//! Every approximation is checked against an adaptive Runge–Kutta propagator
//! ([`propagator`]), and the oscillatory phase integrals that carry all of the
//! numerical content of the expansion are evaluated two independent ways
//! (adaptive Gauss–Kronrod quadrature and a Bessel-series closed form).
//!
//! Units: ħ = 1, all parameters are angular frequencies.

pub mod analysis;
pub mod cli;
pub mod error;
pub mod hamiltonians;
pub mod linalg;
pub mod propagator;
pub mod strong_coupling;

pub use error::{Error, Result};
pub use hamiltonians::DriveParams;
pub use linalg::{Complex2Vector, Matrix2, StateVector, Unitary2};

/// Complex scalar used throughout the crate.
pub type C64 = num_complex::Complex64;
