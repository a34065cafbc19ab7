//! Density-matrix simulation and thermodynamic accounting for a qubit
//! controlled by measurement-based feedback through an auxiliary qubit.
//!
//! The pipeline is: thermal product state → correlating unitary →
//! (optional) decoherence of the auxiliary → conditional feedback unitary →
//! optimal reset of the auxiliary, with entropies, mutual information and
//! heat recorded at every stage. [`closed_form`] holds the analytic results
//! the engine is checked against.

pub mod closed_form;
pub mod eigen;
pub mod error;
pub mod matrix;
pub mod protocol;
pub mod state;
pub mod thermo;
pub mod trajectory;

pub use eigen::{hermitian_eig, unitary_from_generator, EigenDecomposition};
pub use error::{Error, Result};
pub use matrix::{partial_trace, pauli, tensor_product, ComplexMatrix, Subsystem};
pub use protocol::{
    conditional_states, decohere_auxiliary, feedback_unitary, kraus_elements, measurement_unitary,
    run_protocol, Axis, MeasurementModel, Mode, ProtocolConfig, ProtocolResult, QubitBasis, Stage,
    StageRecord, UnitVector, Warning,
};
pub use state::{
    bloch_from_qubit, qubit_from_bloch, splitting_from_alpha, thermal_alpha, validate, BlochVector,
    DensityMatrix, QubitSplitting, ValidationReport,
};
pub use thermo::{
    binary_entropy, efficiency, entropy_production, mutual_information, optimal_reset_heat,
    von_neumann_entropy, Efficiency, EnergyBlock, ThermoLedger,
};
pub use trajectory::{mutual_information_trace, Leg, Trajectory, TrajectoryPoint};

pub use num_complex::Complex64;
