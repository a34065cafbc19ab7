//! Qubit and two-qubit density matrices, Bloch geometry and thermal
//! parameterisation.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::eigen::{hermitian_eig, HERMITIAN_TOL};
use crate::error::{Error, Result};
use crate::matrix::{pauli, ComplexMatrix, Subsystem};

pub const TRACE_TOL: f64 = 1e-10;
/// Eigenvalues in `[-NEGATIVITY_TOL, 0)` are treated as zero.
pub const NEGATIVITY_TOL: f64 = 1e-10;
pub const BLOCH_TOL: f64 = 1e-10;

/// Outcome of checking a matrix against the density-matrix invariants.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub hermiticity_defect: f64,
    pub trace_defect: f64,
    /// `None` when the matrix was too far from Hermitian to diagonalise.
    pub min_eigenvalue: Option<f64>,
    /// Set when some eigenvalue fell inside the clamp window.
    pub clamped: bool,
}

impl ValidationReport {
    pub fn hermitian(&self) -> bool {
        self.hermiticity_defect <= HERMITIAN_TOL
    }

    pub fn unit_trace(&self) -> bool {
        self.trace_defect <= TRACE_TOL
    }

    pub fn positive(&self) -> bool {
        self.min_eigenvalue.is_some_and(|l| l >= -NEGATIVITY_TOL)
    }

    pub fn accepted(&self) -> bool {
        self.hermitian() && self.unit_trace() && self.positive()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut problems = Vec::new();
        if !self.hermitian() {
            problems.push(format!("hermiticity defect {:e}", self.hermiticity_defect));
        }
        if !self.unit_trace() {
            problems.push(format!("trace defect {:e}", self.trace_defect));
        }
        match self.min_eigenvalue {
            Some(l) if l < -NEGATIVITY_TOL => problems.push(format!("negative eigenvalue {l:e}")),
            None => problems.push("spectrum unavailable".to_string()),
            _ => {}
        }
        if problems.is_empty() {
            write!(f, "valid")?;
            if self.clamped {
                write!(f, " (eigenvalues within clamp window set to zero)")?;
            }
            Ok(())
        } else {
            write!(f, "{}", problems.join(", "))
        }
    }
}

/// Checks Hermiticity, unit trace, and positivity of `m`.
pub fn validate(m: &ComplexMatrix) -> ValidationReport {
    let hermiticity_defect = m.hermiticity_defect();
    let trace_defect = (m.trace() - Complex64::new(1.0, 0.0)).norm();
    let min_eigenvalue = if hermiticity_defect <= HERMITIAN_TOL {
        hermitian_eig(m).ok().map(|e| e.eigenvalues[0])
    } else {
        None
    };
    let clamped = min_eigenvalue.is_some_and(|l| (-NEGATIVITY_TOL..0.0).contains(&l));
    ValidationReport {
        hermiticity_defect,
        trace_defect,
        min_eigenvalue,
        clamped,
    }
}

/// A validated density matrix on one or two qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if matrix.dim() != 2 && matrix.dim() != 4 {
            return Err(Error::DimensionMismatch {
                expected: 4,
                actual: matrix.dim(),
            });
        }
        let report = validate(&matrix);
        if !report.accepted() {
            return Err(Error::InvalidState(report));
        }
        Ok(Self { matrix })
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        Self::new(ComplexMatrix::identity(dim).scale(Complex64::new(1.0 / dim as f64, 0.0)))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Eigenvalues with the clamp window applied.
    pub fn spectrum(&self) -> Vec<f64> {
        hermitian_eig(&self.matrix)
            .expect("validated density matrix diagonalises")
            .eigenvalues
            .into_iter()
            .map(|l| l.max(0.0))
            .collect()
    }

    pub fn tensor(&self, other: &DensityMatrix) -> Result<DensityMatrix> {
        DensityMatrix::new(self.matrix.tensor(&other.matrix))
    }

    pub fn marginal(&self, keep: Subsystem) -> Result<DensityMatrix> {
        DensityMatrix::new(self.matrix.partial_trace(keep)?)
    }

    /// `U ρ U†`.
    pub fn evolve(&self, u: &ComplexMatrix) -> Result<DensityMatrix> {
        if u.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: u.dim(),
            });
        }
        DensityMatrix::new(u.conjugate(&self.matrix))
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn length(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

/// `(I + r·σ)/2`.
pub fn qubit_from_bloch(r: BlochVector) -> Result<DensityMatrix> {
    let norm = r.length();
    if !norm.is_finite() || norm > 1.0 + BLOCH_TOL {
        return Err(Error::BlochOutOfBall { norm });
    }
    let m = &pauli::identity() + &pauli::along(r.as_array());
    DensityMatrix::new(m.scale(Complex64::new(0.5, 0.0)))
}

/// Pauli expectations `r_i = Tr[ρ σ_i]`.
pub fn bloch_from_qubit(rho: &DensityMatrix) -> Result<BlochVector> {
    if rho.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            actual: rho.dim(),
        });
    }
    let m = rho.matrix();
    let expect = |s: ComplexMatrix| (m * &s).trace().re;
    Ok(BlochVector::new(
        expect(pauli::x()),
        expect(pauli::y()),
        expect(pauli::z()),
    ))
}

/// Energy gap of a qubit relative to a thermal energy scale.
///
/// `delta` and `kt` share the same energy unit; the thermal state has
/// Bloch vector `(0, 0, -tanh(delta / 2kT))` with Hamiltonian
/// `(delta/2) σ_z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitSplitting {
    pub delta: f64,
    pub kt: f64,
}

impl QubitSplitting {
    pub fn new(delta: f64, kt: f64) -> Result<Self> {
        if !(kt > 0.0 && kt.is_finite()) {
            return Err(Error::param("kT", kt, "must be positive"));
        }
        if !delta.is_finite() {
            return Err(Error::param("delta", delta, "must be finite"));
        }
        Ok(Self { delta, kt })
    }

    pub fn hamiltonian(&self) -> ComplexMatrix {
        pauli::z().scale(Complex64::new(self.delta / 2.0, 0.0))
    }
}

/// Boltzmann Bloch length `tanh(delta / 2kT)`.
pub fn thermal_alpha(split: QubitSplitting) -> f64 {
    (split.delta / (2.0 * split.kt)).tanh()
}

/// Inverse of [`thermal_alpha`]: `delta = kT ln((1+α)/(1-α))`.
pub fn splitting_from_alpha(alpha: f64, kt: f64) -> Result<QubitSplitting> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::param(
            "alpha",
            alpha,
            "must lie in [0, 1); alpha = 1 needs an infinite gap",
        ));
    }
    QubitSplitting::new(kt * ((1.0 + alpha) / (1.0 - alpha)).ln(), kt)
}

/// The thermal qubit `(I - α σ_z)/2`.
pub fn thermal_qubit(alpha: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::param(
            "alpha",
            alpha,
            "Bloch length must lie in [0, 1]",
        ));
    }
    qubit_from_bloch(BlochVector::new(0.0, 0.0, -alpha))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn origin_is_maximally_mixed() {
        let rho = qubit_from_bloch(BlochVector::new(0.0, 0.0, 0.0)).unwrap();
        assert!(
            rho.matrix()
                .max_abs_diff(&ComplexMatrix::identity(2).scale(c(0.5)))
                < 1e-16
        );
        let r = bloch_from_qubit(&rho).unwrap();
        assert_eq!(r.length(), 0.0);
    }

    #[test]
    fn thermal_qubit_matches_diagonal_form() {
        let rho = thermal_qubit(0.4).unwrap();
        let expected = ComplexMatrix::from_diagonal(&[c(0.3), c(0.7)]);
        assert!(rho.matrix().max_abs_diff(&expected) < 1e-16);
        let r = bloch_from_qubit(&rho).unwrap();
        assert!((r.z + 0.4).abs() < 1e-16 && r.x == 0.0 && r.y == 0.0);
    }

    #[test]
    fn outside_ball_is_rejected() {
        assert!(matches!(
            qubit_from_bloch(BlochVector::new(0.8, 0.0, 0.8)),
            Err(Error::BlochOutOfBall { .. })
        ));
    }

    #[test]
    fn bloch_requires_qubit() {
        let rho = DensityMatrix::maximally_mixed(4).unwrap();
        assert!(bloch_from_qubit(&rho).is_err());
    }

    #[test]
    fn thermal_alpha_limits() {
        assert_eq!(thermal_alpha(QubitSplitting::new(0.0, 1.0).unwrap()), 0.0);
        assert!(thermal_alpha(QubitSplitting::new(40.0, 1.0).unwrap()) > 1.0 - 1e-6);
        let delta = 2.0 * 0.4f64.atanh();
        let a = thermal_alpha(QubitSplitting::new(delta, 1.0).unwrap());
        assert!((a - 0.4).abs() < 1e-12);
    }

    #[test]
    fn splitting_values() {
        assert_eq!(splitting_from_alpha(0.0, 1.0).unwrap().delta, 0.0);
        let d = splitting_from_alpha(0.4, 1.0).unwrap().delta;
        assert!((d - 0.847_297_860_387_203_8).abs() < 1e-12);
        let d = splitting_from_alpha(0.8, 1.0).unwrap().delta;
        assert!((d - 9f64.ln()).abs() < 1e-12);
        assert!(splitting_from_alpha(1.0, 1.0).is_err());
        assert!(QubitSplitting::new(1.0, 0.0).is_err());
    }

    #[test]
    fn validation_reports() {
        let half = ComplexMatrix::identity(2).scale(c(0.5));
        assert!(validate(&half).accepted());

        let heavy = ComplexMatrix::from_diagonal(&[c(0.75), c(0.75)]);
        let report = validate(&heavy);
        assert!(!report.accepted());
        assert!((report.trace_defect - 0.5).abs() < 1e-15);
        assert!(matches!(
            DensityMatrix::new(heavy),
            Err(Error::InvalidState(_))
        ));

        let edge = ComplexMatrix::from_diagonal(&[c(1.000_000_000_1), c(-0.000_000_000_1)]);
        let report = validate(&edge);
        assert!(report.accepted());
        assert!(report.clamped);
        let rho = DensityMatrix::new(edge).unwrap();
        assert!(rho.spectrum().iter().all(|&l| l >= 0.0));

        let negative = ComplexMatrix::from_diagonal(&[c(1.1), c(-0.1)]);
        assert!(!validate(&negative).positive());

        let skew = ComplexMatrix::from_rows([[c(0.5), c(0.1)], [c(0.0), c(0.5)]]).unwrap();
        let report = validate(&skew);
        assert!(!report.hermitian());
        assert_eq!(report.min_eigenvalue, None);
    }

    fn ball_point() -> impl Strategy<Value = BlochVector> {
        (0.0..=1.0f64, -1.0..=1.0f64, 0.0..std::f64::consts::TAU).prop_map(|(r, cz, phi)| {
            let sz = (1.0 - cz * cz).sqrt();
            BlochVector::new(r * sz * phi.cos(), r * sz * phi.sin(), r * cz)
        })
    }

    proptest! {
        #[test]
        fn bloch_roundtrip(r in ball_point()) {
            let back = bloch_from_qubit(&qubit_from_bloch(r).unwrap()).unwrap();
            prop_assert!((back.x - r.x).abs() < 1e-12);
            prop_assert!((back.y - r.y).abs() < 1e-12);
            prop_assert!((back.z - r.z).abs() < 1e-12);
        }

        #[test]
        fn purity_matches_bloch_length(r in ball_point()) {
            let rho = qubit_from_bloch(r).unwrap();
            let len = r.length();
            prop_assert!((rho.purity() - (1.0 + len * len) / 2.0).abs() < 1e-12);
        }

        #[test]
        fn pure_projectors_have_unit_length(t in 0.0..=std::f64::consts::PI, phi in 0.0..std::f64::consts::TAU) {
            let psi = [Complex64::new((t / 2.0).cos(), 0.0), Complex64::from_polar((t / 2.0).sin(), phi)];
            let rho = DensityMatrix::new(ComplexMatrix::outer(&psi, &psi).unwrap()).unwrap();
            prop_assert!((bloch_from_qubit(&rho).unwrap().length() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn thermal_alpha_inverts_splitting(alpha in 0.0..=(1.0 - 1e-8f64), kt in 0.1..10.0f64) {
            let split = splitting_from_alpha(alpha, kt).unwrap();
            prop_assert!((thermal_alpha(split) - alpha).abs() < 1e-12);
        }

        #[test]
        fn constructed_states_validate(r in ball_point()) {
            let rho = qubit_from_bloch(r).unwrap();
            prop_assert!(validate(rho.matrix()).accepted());
        }
    }
}
