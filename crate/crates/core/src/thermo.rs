//! Entropy, heat and efficiency bookkeeping.
//!
//! Entropies are in nats and heats in units of `kT`, so Boltzmann's
//! constant never appears as a separate number.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::Subsystem;
use crate::protocol::Stage;
use crate::state::DensityMatrix;

/// Heat (in units of `kT`) at or below which no efficiency is assigned.
pub const UNDEFINED_HEAT_TOL: f64 = 1e-12;

/// `-Σ λ ln λ` over the clamped spectrum, with `0 ln 0 = 0`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    rho.spectrum()
        .into_iter()
        .filter(|&l| l > 0.0)
        .map(|l| -l * l.ln())
        .sum()
}

/// Entropy of a qubit whose Bloch vector has length `a`.
pub fn binary_entropy(a: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&a) {
        return Err(Error::param("a", a, "Bloch length must lie in [0, 1]"));
    }
    Ok(binary_entropy_unchecked(a))
}

pub(crate) fn binary_entropy_unchecked(a: f64) -> f64 {
    let term = |p: f64| if p > 0.0 { -p * p.ln() } else { 0.0 };
    term((1.0 + a) / 2.0) + term((1.0 - a) / 2.0)
}

/// `H(ρ_S) + H(ρ_A) - H(r)` for a two-qubit state.
pub fn mutual_information(joint: &DensityMatrix) -> Result<f64> {
    if joint.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            actual: joint.dim(),
        });
    }
    let hs = von_neumann_entropy(&joint.marginal(Subsystem::System)?);
    let ha = von_neumann_entropy(&joint.marginal(Subsystem::Auxiliary)?);
    Ok(hs + ha - von_neumann_entropy(joint))
}

/// `ΔH + Q/kT`, in units of `k`.
pub fn entropy_production(dh: f64, q: f64, kt: f64) -> f64 {
    dh + q / kt
}

/// `kT ΔH_A`: the heat released by an isothermal reset that saturates the
/// second law.
pub fn optimal_reset_heat(dh_a: f64, kt: f64) -> f64 {
    kt * dh_a
}

/// An efficiency that may be undefined when the protocol releases no heat.
///
/// Serialises as a number, or `null` when undefined.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Efficiency {
    Value(f64),
    Undefined,
}

impl Efficiency {
    pub fn value(self) -> Option<f64> {
        match self {
            Efficiency::Value(v) => Some(v),
            Efficiency::Undefined => None,
        }
    }

    pub fn is_defined(self) -> bool {
        matches!(self, Efficiency::Value(_))
    }

    /// The value, or NaN when undefined.
    pub fn or_nan(self) -> f64 {
        self.value().unwrap_or(f64::NAN)
    }

    /// Ratio `numerator / denominator`, undefined when the denominator is
    /// below `tol` in magnitude.
    pub fn ratio(numerator: f64, denominator: f64, tol: f64) -> Self {
        if denominator.abs() < tol || !denominator.is_finite() {
            Efficiency::Undefined
        } else {
            Efficiency::Value(numerator / denominator)
        }
    }
}

impl fmt::Display for Efficiency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Efficiency::Value(v) => write!(f, "{v}"),
            Efficiency::Undefined => write!(f, "nan"),
        }
    }
}

impl Serialize for Efficiency {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.value().serialize(serializer)
    }
}

/// `-kT ΔH_S / Q`: the Landauer minimum heat over the heat actually paid.
///
/// Undefined when `Q` does not exceed `UNDEFINED_HEAT_TOL · kT`, which is
/// the case whenever the protocol changes no entropy at all.
pub fn efficiency(dh_s: f64, q: f64, kt: f64) -> Efficiency {
    if q <= UNDEFINED_HEAT_TOL * kt {
        Efficiency::Undefined
    } else {
        Efficiency::Value(-kt * dh_s / q)
    }
}

/// Energy bookkeeping under the Hamiltonians `(δ/2)σ_z` implied by the
/// thermal Bloch lengths. This is a convention: any Hamiltonians with the
/// same Boltzmann states would serve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyBlock {
    #[serde(rename = "dE_S")]
    pub de_system: f64,
    /// `Q_opt + ΔE_S`, the work drawn from the work source.
    #[serde(rename = "W")]
    pub work: f64,
    /// `ΔE_A - kT ΔH_A` relative to the initial auxiliary, at each stage.
    #[serde(rename = "dF_A")]
    pub df_auxiliary: Vec<(Stage, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThermoLedger {
    #[serde(rename = "dH_S")]
    pub dh_system: f64,
    #[serde(rename = "dH_A")]
    pub dh_auxiliary: f64,
    #[serde(rename = "I_stages")]
    pub mutual_information: Vec<(Stage, f64)>,
    #[serde(rename = "Q_min")]
    pub q_min: f64,
    #[serde(rename = "Q_opt")]
    pub q_opt: f64,
    pub epsilon: Efficiency,
    #[serde(rename = "dSi_reset")]
    pub reset_entropy_production: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub energy: Option<EnergyBlock>,
}

impl ThermoLedger {
    pub fn mutual_information_at(&self, stage: Stage) -> Option<f64> {
        self.mutual_information
            .iter()
            .find(|(s, _)| *s == stage)
            .map(|&(_, i)| i)
    }
}
