//! Dense square complex matrices.
//!
//! Everything in the simulator is at most 4×4, so the representation is a
//! flat row-major `Vec<Complex64>` with no attempt at blocking or SIMD.
//! Joint two-qubit objects use the system-major index convention
//! `i = dim(aux) * s + a`.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

/// Which factor of a two-qubit joint object survives a partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    System,
    Auxiliary,
}

impl ComplexMatrix {
    /// Builds a `dim × dim` matrix from row-major entries.
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(Error::BadEntryCount {
                expected: dim * dim,
                actual: entries.len(),
            });
        }
        if entries
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite);
        }
        Ok(Self { dim, entries })
    }

    pub fn from_rows<const N: usize>(rows: [[Complex64; N]; N]) -> Result<Self> {
        Self::new(N, rows.iter().flatten().copied().collect())
    }

    pub fn from_real_rows<const N: usize>(rows: [[f64; N]; N]) -> Result<Self> {
        Self::new(
            N,
            rows.iter()
                .flatten()
                .map(|&x| Complex64::new(x, 0.0))
                .collect(),
        )
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// `|v⟩⟨w|`.
    pub fn outer(v: &[Complex64], w: &[Complex64]) -> Result<Self> {
        if v.len() != w.len() {
            return Err(Error::DimensionMismatch {
                expected: v.len(),
                actual: w.len(),
            });
        }
        let n = v.len();
        let mut entries = Vec::with_capacity(n * n);
        for vi in v {
            for wj in w {
                entries.push(vi * wj.conj());
            }
        }
        Self::new(n, entries)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    /// `self · other · self†`.
    pub fn conjugate(&self, other: &ComplexMatrix) -> Self {
        &(self * other) * &self.adjoint()
    }

    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!(self.dim, other.dim, "max_abs_diff on mismatched dimensions");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    /// Distance of `self · self†` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        (self * &self.adjoint()).max_abs_diff(&Self::identity(self.dim))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Kronecker product `self ⊗ other`, with `self` as the major index.
    pub fn tensor(&self, other: &ComplexMatrix) -> Self {
        let (na, nb) = (self.dim, other.dim);
        let n = na * nb;
        let mut out = Self::zeros(n);
        for i in 0..na {
            for j in 0..na {
                let a = self[(i, j)];
                if a == ZERO {
                    continue;
                }
                for k in 0..nb {
                    for l in 0..nb {
                        out[(nb * i + k, nb * j + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        out
    }

    /// Partial trace of a two-qubit operator, keeping `keep`.
    pub fn partial_trace(&self, keep: Subsystem) -> Result<Self> {
        if self.dim != 4 {
            return Err(Error::DimensionMismatch {
                expected: 4,
                actual: self.dim,
            });
        }
        let mut out = Self::zeros(2);
        for i in 0..2 {
            for j in 0..2 {
                out[(i, j)] = match keep {
                    Subsystem::System => (0..2).map(|a| self[(2 * i + a, 2 * j + a)]).sum(),
                    Subsystem::Auxiliary => (0..2).map(|s| self[(2 * s + i, 2 * s + j)]).sum(),
                };
            }
        }
        Ok(out)
    }
}

pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.tensor(b)
}

pub fn partial_trace(joint: &ComplexMatrix, keep: Subsystem) -> Result<ComplexMatrix> {
    joint.partial_trace(keep)
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[i * self.dim + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix product on mismatched dimensions");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix sum on mismatched dimensions");
        ComplexMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(
            self.dim, rhs.dim,
            "matrix difference on mismatched dimensions"
        );
        ComplexMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Pauli matrices and the single-qubit identity.
pub mod pauli {
    use super::{ComplexMatrix, I, ONE, ZERO};

    pub fn identity() -> ComplexMatrix {
        ComplexMatrix::identity(2)
    }

    pub fn x() -> ComplexMatrix {
        ComplexMatrix::from_rows([[ZERO, ONE], [ONE, ZERO]]).expect("finite")
    }

    pub fn y() -> ComplexMatrix {
        ComplexMatrix::from_rows([[ZERO, -I], [I, ZERO]]).expect("finite")
    }

    pub fn z() -> ComplexMatrix {
        ComplexMatrix::from_rows([[ONE, ZERO], [ZERO, -ONE]]).expect("finite")
    }

    /// `n · σ` for a real 3-vector `n`.
    pub fn along(n: [f64; 3]) -> ComplexMatrix {
        let [nx, ny, nz] = n;
        let c = |x: f64| super::Complex64::new(x, 0.0);
        &(&x().scale(c(nx)) + &y().scale(c(ny))) + &z().scale(c(nz))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_non_finite_and_ragged_input() {
        assert_eq!(
            ComplexMatrix::new(2, vec![ONE; 3]).unwrap_err(),
            Error::BadEntryCount {
                expected: 4,
                actual: 3
            }
        );
        let mut e = vec![ONE; 4];
        e[2] = c(f64::NAN, 0.0);
        assert_eq!(ComplexMatrix::new(2, e).unwrap_err(), Error::NonFinite);
    }

    #[test]
    fn identity_tensor_identity() {
        let i4 = pauli::identity().tensor(&pauli::identity());
        assert_eq!(i4, ComplexMatrix::identity(4));
    }

    #[test]
    fn sigma_z_tensor_identity_is_system_major() {
        let m = pauli::z().tensor(&pauli::identity());
        let expected = ComplexMatrix::from_diagonal(&[ONE, ONE, -ONE, -ONE]);
        assert_eq!(m, expected);
    }

    #[test]
    fn partial_trace_of_product() {
        let a = ComplexMatrix::from_rows([[c(0.7, 0.0), c(0.1, 0.2)], [c(0.1, -0.2), c(0.3, 0.0)]])
            .unwrap();
        let b =
            ComplexMatrix::from_rows([[c(0.25, 0.0), c(0.0, -0.1)], [c(0.0, 0.1), c(0.75, 0.0)]])
                .unwrap();
        let joint = a.tensor(&b);
        assert!(
            joint
                .partial_trace(Subsystem::System)
                .unwrap()
                .max_abs_diff(&a)
                < 1e-15
        );
        assert!(
            joint
                .partial_trace(Subsystem::Auxiliary)
                .unwrap()
                .max_abs_diff(&b)
                < 1e-15
        );
    }

    #[test]
    fn partial_trace_of_bell_projector_is_maximally_mixed() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell = [c(s, 0.0), ZERO, ZERO, c(s, 0.0)];
        let p = ComplexMatrix::outer(&bell, &bell).unwrap();
        let half = ComplexMatrix::identity(2).scale(c(0.5, 0.0));
        for keep in [Subsystem::System, Subsystem::Auxiliary] {
            assert!(p.partial_trace(keep).unwrap().max_abs_diff(&half) < 1e-15);
        }
    }

    #[test]
    fn partial_trace_requires_four_dimensions() {
        assert!(matches!(
            pauli::x().partial_trace(Subsystem::System),
            Err(Error::DimensionMismatch {
                expected: 4,
                actual: 2
            })
        ));
    }

    #[test]
    fn pauli_algebra() {
        // σx σy = i σz
        let lhs = &pauli::x() * &pauli::y();
        assert!(lhs.max_abs_diff(&pauli::z().scale(I)) < 1e-15);
        assert!(pauli::along([0.0, 0.0, 1.0]).max_abs_diff(&pauli::z()) < 1e-15);
    }
}
