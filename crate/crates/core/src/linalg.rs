//! Exact 2×2 complex linear algebra: state vectors, operators, the Pauli
//! algebra and the Walsh–Hadamard change of basis.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance for structural identities that hold exactly up to rounding.
pub const STRUCTURE_TOL: f64 = 1e-12;

/// Tolerance for `U†U = I` when accepting a matrix as unitary.
pub const UNITARY_TOL: f64 = 1e-10;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

/// Pair of complex amplitudes in the σ₃ basis `|0) = (1, 0)ᵗ`, `|1) = (0, 1)ᵗ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Complex2Vector {
    pub c0: C64,
    pub c1: C64,
}

impl Complex2Vector {
    pub const fn new(c0: C64, c1: C64) -> Self {
        Self { c0, c1 }
    }

    pub const fn zero() -> Self {
        Self::new(ZERO, ZERO)
    }

    /// `|0) = (1, 0)ᵗ`
    pub const fn basis0() -> Self {
        Self::new(ONE, ZERO)
    }

    /// `|1) = (0, 1)ᵗ`
    pub const fn basis1() -> Self {
        Self::new(ZERO, ONE)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.c0.norm_sqr() + self.c1.norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Hermitian inner product `⟨self, other⟩`, antilinear in `self`.
    pub fn inner(&self, other: &Complex2Vector) -> C64 {
        self.c0.conj() * other.c0 + self.c1.conj() * other.c1
    }

    pub fn is_finite(&self) -> bool {
        self.c0.is_finite() && self.c1.is_finite()
    }

    /// Largest componentwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Complex2Vector) -> f64 {
        (self.c0 - other.c0).norm().max((self.c1 - other.c1).norm())
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::new(self.c0 * s, self.c1 * s)
    }
}

impl Add for Complex2Vector {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.c0 + rhs.c0, self.c1 + rhs.c1)
    }
}

impl Sub for Complex2Vector {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.c0 - rhs.c0, self.c1 - rhs.c1)
    }
}

impl Neg for Complex2Vector {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.c0, -self.c1)
    }
}

impl Mul<C64> for Complex2Vector {
    type Output = Self;
    fn mul(self, rhs: C64) -> Self {
        self.scale(rhs)
    }
}

impl Mul<f64> for Complex2Vector {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        Self::new(self.c0 * rhs, self.c1 * rhs)
    }
}

/// A [`Complex2Vector`] with unit norm (within [`STRUCTURE_TOL`]).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Complex2Vector", into = "Complex2Vector")]
pub struct StateVector(Complex2Vector);

impl StateVector {
    pub fn new(c0: C64, c1: C64) -> Result<Self> {
        Self::try_from(Complex2Vector::new(c0, c1))
    }

    /// Rescales a non-zero finite vector to unit norm.
    pub fn normalized(v: Complex2Vector) -> Result<Self> {
        let n = v.norm();
        if !v.is_finite() || n == 0.0 {
            return Err(Error::domain(
                "cannot normalize a zero or non-finite vector",
            ));
        }
        Ok(Self(v * (1.0 / n)))
    }

    pub const fn ground() -> Self {
        Self(Complex2Vector::basis0())
    }

    pub const fn excited() -> Self {
        Self(Complex2Vector::basis1())
    }

    pub fn c0(&self) -> C64 {
        self.0.c0
    }

    pub fn c1(&self) -> C64 {
        self.0.c1
    }

    pub fn vector(&self) -> Complex2Vector {
        self.0
    }
}

impl TryFrom<Complex2Vector> for StateVector {
    type Error = Error;

    fn try_from(v: Complex2Vector) -> Result<Self> {
        if !v.is_finite() {
            return Err(Error::domain("state vector has non-finite components"));
        }
        let dev = (v.norm_sqr() - 1.0).abs();
        if dev > STRUCTURE_TOL {
            return Err(Error::domain(format!(
                "state vector not normalized: |c0|^2 + |c1|^2 - 1 = {dev:e}"
            )));
        }
        Ok(Self(v))
    }
}

impl From<StateVector> for Complex2Vector {
    fn from(s: StateVector) -> Self {
        s.0
    }
}

/// 2×2 complex matrix, entries stored row-major.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Matrix2 {
    pub m: [[C64; 2]; 2],
}

impl Matrix2 {
    pub const fn new(m00: C64, m01: C64, m10: C64, m11: C64) -> Self {
        Self {
            m: [[m00, m01], [m10, m11]],
        }
    }

    pub fn from_real(m00: f64, m01: f64, m10: f64, m11: f64) -> Self {
        Self::new(m00.into(), m01.into(), m10.into(), m11.into())
    }

    pub const fn zero() -> Self {
        Self::new(ZERO, ZERO, ZERO, ZERO)
    }

    pub const fn identity() -> Self {
        Self::new(ONE, ZERO, ZERO, ONE)
    }

    pub const fn diag(d0: C64, d1: C64) -> Self {
        Self::new(d0, ZERO, ZERO, d1)
    }

    /// Outer product `|ket⟩⟨bra|`.
    pub fn outer(ket: &Complex2Vector, bra: &Complex2Vector) -> Self {
        Self::new(
            ket.c0 * bra.c0.conj(),
            ket.c0 * bra.c1.conj(),
            ket.c1 * bra.c0.conj(),
            ket.c1 * bra.c1.conj(),
        )
    }

    /// Builds a matrix from its two columns.
    pub fn from_columns(col0: &Complex2Vector, col1: &Complex2Vector) -> Self {
        Self::new(col0.c0, col1.c0, col0.c1, col1.c1)
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.m[row][col]
    }

    pub fn column(&self, col: usize) -> Complex2Vector {
        Complex2Vector::new(self.m[0][col], self.m[1][col])
    }

    pub fn dagger(&self) -> Self {
        let [[a, b], [c, d]] = self.m;
        Self::new(a.conj(), c.conj(), b.conj(), d.conj())
    }

    pub fn trace(&self) -> C64 {
        self.m[0][0] + self.m[1][1]
    }

    pub fn det(&self) -> C64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn apply(&self, v: &Complex2Vector) -> Complex2Vector {
        Complex2Vector::new(
            self.m[0][0] * v.c0 + self.m[0][1] * v.c1,
            self.m[1][0] * v.c0 + self.m[1][1] * v.c1,
        )
    }

    pub fn scale(&self, s: C64) -> Self {
        let [[a, b], [c, d]] = self.m;
        Self::new(a * s, b * s, c * s, d * s)
    }

    /// Max-norm of the entrywise difference.
    pub fn max_abs_diff(&self, other: &Matrix2) -> f64 {
        self.m
            .iter()
            .flatten()
            .zip(other.m.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.m.iter().flatten().all(|z| z.is_finite())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.dagger()) <= tol
    }

    /// `‖M†M − I‖_max`
    pub fn unitarity_defect(&self) -> f64 {
        (self.dagger() * *self).max_abs_diff(&Matrix2::identity())
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    /// Eigenvalues of a Hermitian matrix, ascending.
    pub fn hermitian_eigenvalues(&self) -> [f64; 2] {
        let a = self.m[0][0].re;
        let d = self.m[1][1].re;
        let mean = 0.5 * (a + d);
        let half_gap = (0.25 * (a - d) * (a - d) + self.m[0][1].norm_sqr()).sqrt();
        [mean - half_gap, mean + half_gap]
    }
}

impl Add for Matrix2 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut out = self;
        for (o, r) in out.m.iter_mut().flatten().zip(rhs.m.iter().flatten()) {
            *o += r;
        }
        out
    }
}

impl Sub for Matrix2 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for Matrix2 {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-ONE)
    }
}

impl Mul for Matrix2 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let a = &self.m;
        let b = &rhs.m;
        Self::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }
}

impl Mul<Complex2Vector> for Matrix2 {
    type Output = Complex2Vector;
    fn mul(self, rhs: Complex2Vector) -> Complex2Vector {
        self.apply(&rhs)
    }
}

impl Mul<C64> for Matrix2 {
    type Output = Self;
    fn mul(self, rhs: C64) -> Self {
        self.scale(rhs)
    }
}

impl Mul<f64> for Matrix2 {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        self.scale(rhs.into())
    }
}

impl fmt::Display for Matrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [[a, b], [c, d]] = self.m;
        write!(f, "[[{a}, {b}], [{c}, {d}]]")
    }
}

/// A [`Matrix2`] satisfying `U†U = I` within [`UNITARY_TOL`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Unitary2(Matrix2);

impl Unitary2 {
    pub fn new(m: Matrix2) -> Result<Self> {
        Self::with_tolerance(m, UNITARY_TOL)
    }

    /// Accepts `m` if its unitarity defect is at most `tol`.
    pub fn with_tolerance(m: Matrix2, tol: f64) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::domain("matrix has non-finite entries"));
        }
        let defect = m.unitarity_defect();
        if defect > tol {
            return Err(Error::domain(format!(
                "matrix is not unitary: |U'U - I|_max = {defect:e} > {tol:e}"
            )));
        }
        Ok(Self(m))
    }

    pub fn identity() -> Self {
        Self(Matrix2::identity())
    }

    pub fn matrix(&self) -> &Matrix2 {
        &self.0
    }

    pub fn dagger(&self) -> Self {
        Self(self.0.dagger())
    }

    pub fn apply(&self, v: &Complex2Vector) -> Complex2Vector {
        self.0.apply(v)
    }

    pub fn unitarity_defect(&self) -> f64 {
        self.0.unitarity_defect()
    }
}

impl Mul for Unitary2 {
    type Output = Unitary2;
    fn mul(self, rhs: Unitary2) -> Unitary2 {
        Unitary2(self.0 * rhs.0)
    }
}

impl From<Unitary2> for Matrix2 {
    fn from(u: Unitary2) -> Self {
        u.0
    }
}

/// Pauli matrix σ₁, σ₂ or σ₃.
pub fn pauli(index: u8) -> Result<Matrix2> {
    match index {
        1 => Ok(sigma_x()),
        2 => Ok(sigma_y()),
        3 => Ok(sigma_z()),
        _ => Err(Error::domain(format!(
            "Pauli index must be 1, 2 or 3, got {index}"
        ))),
    }
}

pub fn sigma_x() -> Matrix2 {
    Matrix2::new(ZERO, ONE, ONE, ZERO)
}

pub fn sigma_y() -> Matrix2 {
    Matrix2::new(ZERO, -I, I, ZERO)
}

pub fn sigma_z() -> Matrix2 {
    Matrix2::new(ONE, ZERO, ZERO, -ONE)
}

/// σ₊ = (σ₁ + iσ₂)/2 = |0)(1|
pub fn sigma_plus() -> Matrix2 {
    (sigma_x() + sigma_y() * I) * 0.5
}

/// σ₋ = (σ₁ − iσ₂)/2 = |1)(0|
pub fn sigma_minus() -> Matrix2 {
    (sigma_x() - sigma_y() * I) * 0.5
}

/// Walsh–Hadamard matrix `W = (1/√2)[[1, 1], [1, −1]]`, its own inverse.
pub fn hadamard() -> Matrix2 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Matrix2::from_real(s, s, s, -s)
}

/// Rank-one projector `|v⟩⟨v|` onto a unit vector.
pub fn projector(v: &Complex2Vector) -> Result<Matrix2> {
    let dev = (v.norm_sqr() - 1.0).abs();
    if !v.is_finite() || dev > STRUCTURE_TOL {
        return Err(Error::domain(format!(
            "projector requires a unit vector (norm^2 deviation {dev:e})"
        )));
    }
    Ok(Matrix2::outer(v, v))
}

/// Eigenvectors of σ₁: `|1⟩ = (1, 1)/√2` (eigenvalue +1) and
/// `|−1⟩ = (1, −1)/√2` (eigenvalue −1). σ₃ swaps them.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SigmaOneEigenbasis {
    pub ket_plus: Complex2Vector,
    pub ket_minus: Complex2Vector,
}

impl SigmaOneEigenbasis {
    pub fn new() -> Self {
        let s = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self {
            ket_plus: Complex2Vector::new(s, s),
            ket_minus: Complex2Vector::new(s, -s),
        }
    }

    pub fn projector_plus(&self) -> Matrix2 {
        Matrix2::outer(&self.ket_plus, &self.ket_plus)
    }

    pub fn projector_minus(&self) -> Matrix2 {
        Matrix2::outer(&self.ket_minus, &self.ket_minus)
    }
}

impl Default for SigmaOneEigenbasis {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn pauli_matrices() {
        assert_eq!(pauli(1).unwrap(), Matrix2::from_real(0.0, 1.0, 1.0, 0.0));
        for k in 1..=3 {
            let s = pauli(k).unwrap();
            assert!(s.is_hermitian(0.0));
            assert!(s.is_unitary(0.0));
            assert_eq!(s.trace(), ZERO);
            assert_eq!(s * s, Matrix2::identity());
        }
        assert!(matches!(pauli(0), Err(Error::Domain(_))));
        assert!(matches!(pauli(4), Err(Error::Domain(_))));
    }

    #[test]
    fn su2_commutator() {
        let comm = sigma_x() * sigma_y() - sigma_y() * sigma_x();
        assert_eq!(comm, sigma_z() * c(0.0, 2.0));
    }

    #[test]
    fn raising_lowering_are_basis_dyads() {
        let e0 = Complex2Vector::basis0();
        let e1 = Complex2Vector::basis1();
        assert_eq!(sigma_plus(), Matrix2::outer(&e0, &e1));
        assert_eq!(sigma_minus(), Matrix2::outer(&e1, &e0));
        assert_eq!(sigma_plus().dagger(), sigma_minus());
    }

    #[test]
    fn hadamard_identities() {
        let w = hadamard();
        assert!((w * w).max_abs_diff(&Matrix2::identity()) <= 1e-15);
        assert!((w * sigma_z() * w).max_abs_diff(&sigma_x()) <= 1e-15);
        assert!((w * sigma_x() * w).max_abs_diff(&sigma_z()) <= 1e-15);
        let col = w * Complex2Vector::basis0();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!(col.max_abs_diff(&Complex2Vector::new(c(s, 0.0), c(s, 0.0))) <= 1e-16);
        assert!(w.is_hermitian(0.0));
    }

    #[test]
    fn sigma_one_eigenbasis() {
        let b = SigmaOneEigenbasis::new();
        let sx = sigma_x();
        let sz = sigma_z();
        assert!((sx * b.ket_plus).max_abs_diff(&b.ket_plus) <= 1e-15);
        assert!((sx * b.ket_minus).max_abs_diff(&(-b.ket_minus)) <= 1e-15);
        assert!((sz * b.ket_plus).max_abs_diff(&b.ket_minus) <= 1e-15);
        assert!((sz * b.ket_minus).max_abs_diff(&b.ket_plus) <= 1e-15);

        // |±1⟩⟨±1| = W |0)(0| W and W |1)(1| W
        let w = hadamard();
        let p0 = Matrix2::outer(&Complex2Vector::basis0(), &Complex2Vector::basis0());
        let p1 = Matrix2::outer(&Complex2Vector::basis1(), &Complex2Vector::basis1());
        assert!((w * p0 * w).max_abs_diff(&b.projector_plus()) <= 1e-15);
        assert!((w * p1 * w).max_abs_diff(&b.projector_minus()) <= 1e-15);
        assert!(
            b.projector_plus()
                .max_abs_diff(&Matrix2::from_real(0.5, 0.5, 0.5, 0.5))
                <= 1e-15
        );
        assert!(
            b.projector_minus()
                .max_abs_diff(&Matrix2::from_real(0.5, -0.5, -0.5, 0.5))
                <= 1e-15
        );
    }

    #[test]
    fn projector_examples() {
        let b = SigmaOneEigenbasis::new();
        let p = projector(&b.ket_plus).unwrap();
        assert!(p.max_abs_diff(&Matrix2::from_real(0.5, 0.5, 0.5, 0.5)) <= 1e-15);
        assert_eq!(
            projector(&Complex2Vector::basis0()).unwrap(),
            Matrix2::from_real(1.0, 0.0, 0.0, 0.0)
        );
        let v = Complex2Vector::new(c(0.6, 0.0), c(0.0, 0.8));
        let pv = projector(&v).unwrap() * v;
        assert!(pv.max_abs_diff(&v) <= 1e-15);
        let bad = Complex2Vector::new(c(1.0, 0.0), c(1.0, 0.0));
        assert!(matches!(projector(&bad), Err(Error::Domain(_))));
    }

    #[test]
    fn state_vector_validation() {
        assert!(StateVector::new(c(1.0, 0.0), c(0.0, 0.0)).is_ok());
        assert!(StateVector::new(c(1.0, 0.0), c(1.0, 0.0)).is_err());
        assert!(StateVector::new(c(f64::NAN, 0.0), c(0.0, 0.0)).is_err());
        assert!(StateVector::normalized(Complex2Vector::zero()).is_err());
        let s = StateVector::normalized(Complex2Vector::new(c(3.0, 0.0), c(0.0, 4.0))).unwrap();
        assert!((s.vector().norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn unitary_validation() {
        assert!(Unitary2::new(hadamard()).is_ok());
        assert!(Unitary2::new(Matrix2::from_real(1.0, 1.0, 0.0, 1.0)).is_err());
    }

    #[test]
    fn hermitian_eigenvalues_of_pauli_combination() {
        let h = sigma_x() * 2.0 + sigma_z() * 0.5;
        let [lo, hi] = h.hermitian_eigenvalues();
        let r = (4.0f64 + 0.25).sqrt();
        assert!((lo + r).abs() < 1e-15 && (hi - r).abs() < 1e-15);
    }

    fn unit_vector() -> impl Strategy<Value = Complex2Vector> {
        (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0)
            .prop_filter("nonzero", |(a, b, c, d)| {
                a * a + b * b + c * c + d * d > 1e-6
            })
            .prop_map(|(a, b, cc, d)| {
                let v = Complex2Vector::new(c(a, b), c(cc, d));
                v * (1.0 / v.norm())
            })
    }

    proptest! {
        #[test]
        fn projector_is_idempotent_and_hermitian(v in unit_vector()) {
            let p = projector(&v).unwrap();
            prop_assert!(p.is_hermitian(1e-12));
            prop_assert!((p * p).max_abs_diff(&p) <= 1e-12);
            prop_assert!((p.trace() - ONE).norm() <= 1e-12);
        }
    }
}
