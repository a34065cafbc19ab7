//! The two-qubit feedback protocol: correlate, optionally decohere, apply
//! conditional feedback, and account for the optimal reset.
//!
//! The system starts in `(I - α σ_z)/2` and the auxiliary in
//! `(I - λ σ_z)/2`. The correlating unitary is
//! `exp(-i (θ/2) σ_m ⊗ σ_y)`: conditional on the system being in the
//! `σ_m = s` eigenstate, the auxiliary Bloch vector turns about `ŷ` by the
//! Bloch angle `s θ`, starting from `-λ ẑ` and ending at
//! `(-s λ sin θ, 0, -λ cos θ)`. The readout basis is the auxiliary `σ_x`
//! eigenbasis `{|+⟩, |−⟩}`, so the system eigenvalue `s` is recorded in the
//! outcome `m = -s`. Feedback branch `U_s` is conditioned on that outcome.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::eigen::unitary_from_generator;
use crate::error::{Error, Result};
use crate::matrix::{pauli, ComplexMatrix, Subsystem, ONE, ZERO};
use crate::state::{bloch_from_qubit, splitting_from_alpha, thermal_qubit, DensityMatrix};
use crate::thermo::{
    efficiency, entropy_production, optimal_reset_heat, von_neumann_entropy, EnergyBlock,
    ThermoLedger,
};

const AXIS_TOL: f64 = 1e-12;
const BASIS_TOL: f64 = 1e-10;
pub const KRAUS_TOL: f64 = 1e-10;
/// Outcomes less likely than this carry no conditional state.
pub const NULL_OUTCOME_PROBABILITY: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitVector([f64; 3]);

impl UnitVector {
    pub fn new(v: [f64; 3]) -> Result<Self> {
        let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > AXIS_TOL {
            return Err(Error::AxisNotNormalized { norm });
        }
        Ok(Self(v))
    }

    pub fn components(&self) -> [f64; 3] {
        self.0
    }
}

/// Measured system observable, `σ_x` or `σ_z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Z,
}

impl Axis {
    pub fn unit_vector(self) -> UnitVector {
        match self {
            Axis::X => UnitVector([1.0, 0.0, 0.0]),
            Axis::Z => UnitVector([0.0, 0.0, 1.0]),
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Z => "z",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Feedback acts on the coherent post-measurement state.
    Coherent,
    /// The auxiliary is decohered in the readout basis before feedback.
    Explicit,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Coherent => "coherent",
            Mode::Explicit => "explicit",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Initial,
    PostMeasurement,
    PostDecoherence,
    PostFeedback,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Initial => "initial",
            Stage::PostMeasurement => "post_measurement",
            Stage::PostDecoherence => "post_decoherence",
            Stage::PostFeedback => "post_feedback",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Warning {
    /// `λ < α`: the auxiliary cannot absorb the system's entropy.
    AuxiliaryLessPure,
    /// z-axis with `λ sin θ < α`: the prescribed flip lowers the final
    /// Bloch length below doing nothing.
    FeedbackNotOptimal,
    /// x-axis with `α = 0`: the feedback angle is taken as its `α → 0`
    /// limit, `π/2`.
    FeedbackAngleFromLimit,
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Warning::AuxiliaryLessPure => "auxiliary less pure than system",
            Warning::FeedbackNotOptimal => {
                "z feedback is not optimal here: lambda*sin(theta) < alpha"
            }
            Warning::FeedbackAngleFromLimit => "feedback angle set by its alpha -> 0 limit",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProtocolConfig {
    pub alpha: f64,
    pub lambda: f64,
    pub theta: f64,
    pub axis: Axis,
    pub mode: Mode,
    #[serde(rename = "kT")]
    pub kt: f64,
}

impl ProtocolConfig {
    pub fn new(alpha: f64, lambda: f64, theta: f64, axis: Axis, mode: Mode) -> Self {
        Self {
            alpha,
            lambda,
            theta,
            axis,
            mode,
            kt: 1.0,
        }
    }

    pub fn with_kt(mut self, kt: f64) -> Self {
        self.kt = kt;
        self
    }

    pub fn with_axis(mut self, axis: Axis) -> Self {
        self.axis = axis;
        self
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_theta(mut self, theta: f64) -> Self {
        self.theta = theta;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::param("alpha", self.alpha, "must lie in [0, 1]"));
        }
        if !(0.0..=1.0).contains(&self.lambda) {
            return Err(Error::param("lambda", self.lambda, "must lie in [0, 1]"));
        }
        if !(0.0..=FRAC_PI_2).contains(&self.theta) {
            return Err(Error::param("theta", self.theta, "must lie in [0, pi/2]"));
        }
        if !(self.kt > 0.0 && self.kt.is_finite()) {
            return Err(Error::param("kT", self.kt, "must be positive"));
        }
        Ok(())
    }

    pub fn warnings(&self) -> Vec<Warning> {
        let mut out = Vec::new();
        if self.lambda < self.alpha {
            out.push(Warning::AuxiliaryLessPure);
        }
        match self.axis {
            Axis::Z if self.theta > 0.0 && self.lambda * self.theta.sin() < self.alpha => {
                out.push(Warning::FeedbackNotOptimal)
            }
            Axis::X if self.alpha == 0.0 && self.theta > 0.0 && self.theta < FRAC_PI_2 => {
                out.push(Warning::FeedbackAngleFromLimit)
            }
            _ => {}
        }
        out
    }
}

/// An orthonormal basis of the auxiliary qubit.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitBasis {
    vectors: [[Complex64; 2]; 2],
}

impl QubitBasis {
    pub fn new(first: [Complex64; 2], second: [Complex64; 2]) -> Result<Self> {
        let dot = |a: &[Complex64; 2], b: &[Complex64; 2]| -> Complex64 {
            a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
        };
        let defect = [
            (dot(&first, &first) - ONE).norm(),
            (dot(&second, &second) - ONE).norm(),
            dot(&first, &second).norm(),
        ]
        .into_iter()
        .fold(0.0, f64::max);
        if defect.is_nan() || defect > BASIS_TOL {
            return Err(Error::BasisNotOrthonormal { defect });
        }
        Ok(Self {
            vectors: [first, second],
        })
    }

    /// `{|0⟩, |1⟩}`, the `σ_z` eigenbasis.
    pub fn computational() -> Self {
        Self {
            vectors: [[ONE, ZERO], [ZERO, ONE]],
        }
    }

    /// `{|+⟩, |−⟩}`, the `σ_x` eigenbasis used for readout.
    pub fn sigma_x() -> Self {
        let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
        Self {
            vectors: [[s, s], [s, -s]],
        }
    }

    pub fn vector(&self, k: usize) -> &[Complex64; 2] {
        &self.vectors[k]
    }

    pub fn projector(&self, k: usize) -> ComplexMatrix {
        ComplexMatrix::outer(&self.vectors[k], &self.vectors[k]).expect("two-vectors")
    }

    /// `I ⊗ |m⟩⟨m|` on the joint space.
    fn joint_projector(&self, k: usize) -> ComplexMatrix {
        pauli::identity().tensor(&self.projector(k))
    }
}

/// Readout index of `|+⟩` and `|−⟩` in [`QubitBasis::sigma_x`].
const PLUS: usize = 0;
const MINUS: usize = 1;

/// `(1/2) σ_m ⊗ σ_y`; the correlating unitary is `exp(-i θ G)`.
pub fn measurement_generator(axis: UnitVector) -> ComplexMatrix {
    pauli::along(axis.components())
        .tensor(&pauli::y())
        .scale(Complex64::new(0.5, 0.0))
}

/// `exp(-i (θ/2) σ_m ⊗ σ_y)`.
pub fn measurement_unitary(axis: UnitVector, theta: f64) -> Result<ComplexMatrix> {
    if !(0.0..=FRAC_PI_2).contains(&theta) {
        return Err(Error::param("theta", theta, "must lie in [0, pi/2]"));
    }
    unitary_from_generator(&measurement_generator(axis), theta)
}

/// Removes auxiliary coherences in `basis`:
/// `r → Σ_m (I⊗|m⟩⟨m|) r (I⊗|m⟩⟨m|)`.
pub fn decohere_auxiliary(joint: &DensityMatrix, basis: &QubitBasis) -> Result<DensityMatrix> {
    require_joint(joint)?;
    let r = joint.matrix();
    let mut out = ComplexMatrix::zeros(4);
    for k in 0..2 {
        let p = basis.joint_projector(k);
        out = &out + &p.conjugate(r);
    }
    DensityMatrix::new(out)
}

fn require_joint(joint: &DensityMatrix) -> Result<()> {
    if joint.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            actual: joint.dim(),
        });
    }
    Ok(())
}

/// Feedback rotation angle for the x-protocol, `arctan((λ/α) tan θ)` on
/// `[0, π/2]`. The flag is set when `α = 0` forces the limiting value.
pub fn feedback_angle(theta: f64, alpha: f64, lambda: f64) -> (f64, bool) {
    if theta == 0.0 {
        return (0.0, false);
    }
    if theta >= FRAC_PI_2 {
        return (FRAC_PI_2, false);
    }
    if alpha == 0.0 {
        return (FRAC_PI_2, true);
    }
    ((lambda * theta.sin()).atan2(alpha * theta.cos()), false)
}

/// The controlled feedback `U_fb = Σ_s U_s ⊗ |m(s)⟩⟨m(s)|`, written as
/// `exp(-i duration · generator)` so that it can also be followed in time.
#[derive(Debug, Clone)]
pub struct FeedbackUnitary {
    pub unitary: ComplexMatrix,
    pub generator: ComplexMatrix,
    /// Rotation angle of the acting branch: `φ` for x, `π` for z.
    pub phi: f64,
    pub phi_from_limit: bool,
}

/// Feedback for the x- or z-protocol.
///
/// x: `U_± = exp(∓ i φ σ_y / 2)`. z: `U_+ = exp(-i π σ_y / 2)`, `U_- = I`.
/// At `θ = 0` nothing was measured and the feedback is the identity.
pub fn feedback_unitary(
    axis: Axis,
    theta: f64,
    alpha: f64,
    lambda: f64,
) -> Result<FeedbackUnitary> {
    if !(0.0..=FRAC_PI_2).contains(&theta) {
        return Err(Error::param("theta", theta, "must lie in [0, pi/2]"));
    }
    let basis = QubitBasis::sigma_x();
    let half_y = pauli::y().scale(Complex64::new(0.5, 0.0));
    // s = +1 is read out as |−⟩, s = -1 as |+⟩
    let on_plus_branch = half_y.tensor(&basis.projector(MINUS));
    let on_minus_branch = half_y.tensor(&basis.projector(PLUS));

    let (generator, phi, phi_from_limit) = match axis {
        Axis::X => {
            let (phi, limit) = feedback_angle(theta, alpha, lambda);
            (&on_plus_branch - &on_minus_branch, phi, limit)
        }
        Axis::Z => {
            let phi = if theta == 0.0 { 0.0 } else { PI };
            (on_plus_branch, phi, false)
        }
    };
    let unitary = unitary_from_generator(&generator, phi)?;
    Ok(FeedbackUnitary {
        unitary,
        generator,
        phi,
        phi_from_limit,
    })
}

/// Readout probability and, unless the outcome is negligible, the
/// normalised conditional system state.
#[derive(Debug, Clone)]
pub struct ConditionalState {
    pub probability: f64,
    pub state: Option<DensityMatrix>,
}

/// `p_m = Tr[(I⊗|m⟩⟨m|) r]`, `ρ_m = Tr_A[(I⊗|m⟩⟨m|) r (I⊗|m⟩⟨m|)] / p_m`.
pub fn conditional_states(
    joint: &DensityMatrix,
    basis: &QubitBasis,
) -> Result<Vec<ConditionalState>> {
    require_joint(joint)?;
    (0..2)
        .map(|k| {
            let p = basis.joint_projector(k);
            let block = p.conjugate(joint.matrix());
            let probability = block.trace().re;
            let state = if probability < NULL_OUTCOME_PROBABILITY {
                None
            } else {
                let reduced = block.partial_trace(Subsystem::System)?;
                Some(DensityMatrix::new(
                    reduced.scale(Complex64::new(1.0 / probability, 0.0)),
                )?)
            };
            Ok(ConditionalState { probability, state })
        })
        .collect()
}

/// A set of system measurement operators with `Σ Π†Π = I`.
#[derive(Debug, Clone)]
pub struct MeasurementModel {
    kraus: Vec<ComplexMatrix>,
}

impl MeasurementModel {
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let model = Self { kraus };
        let defect = model.completeness_defect();
        if defect.is_nan() || defect > KRAUS_TOL {
            return Err(Error::IncompleteKraus { defect });
        }
        Ok(model)
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn completeness_defect(&self) -> f64 {
        let Some(first) = self.kraus.first() else {
            return f64::INFINITY;
        };
        let n = first.dim();
        let mut sum = ComplexMatrix::zeros(n);
        for k in &self.kraus {
            if k.dim() != n {
                return f64::INFINITY;
            }
            sum = &sum + &(&k.adjoint() * k);
        }
        sum.max_abs_diff(&ComplexMatrix::identity(n))
    }

    /// `p_m = Tr[Π ρ Π†]` and `ρ_m = Π ρ Π† / p_m`.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<Vec<ConditionalState>> {
        self.kraus
            .iter()
            .map(|k| {
                if k.dim() != rho.dim() {
                    return Err(Error::DimensionMismatch {
                        expected: k.dim(),
                        actual: rho.dim(),
                    });
                }
                let unnormalised = k.conjugate(rho.matrix());
                let probability = unnormalised.trace().re;
                let state = if probability < NULL_OUTCOME_PROBABILITY {
                    None
                } else {
                    Some(DensityMatrix::new(
                        unnormalised.scale(Complex64::new(1.0 / probability, 0.0)),
                    )?)
                };
                Ok(ConditionalState { probability, state })
            })
            .collect()
    }
}

/// `Π_m = ⟨m| U_meas |a₀⟩` with `a₀ = |1⟩`, the `-ẑ` auxiliary ground state.
///
/// Only a pure auxiliary (`λ = 1`) induces Kraus operators on the system
/// alone; mixed auxiliaries are handled by the density-matrix engine.
pub fn kraus_elements(
    axis: UnitVector,
    theta: f64,
    basis: &QubitBasis,
    lambda: f64,
) -> Result<MeasurementModel> {
    if (lambda - 1.0).abs() > 1e-12 {
        return Err(Error::MixedAuxiliary { lambda });
    }
    let u = measurement_unitary(axis, theta)?;
    let kraus = (0..2)
        .map(|k| {
            let m = basis.vector(k);
            let mut pi = ComplexMatrix::zeros(2);
            for s in 0..2 {
                for t in 0..2 {
                    pi[(s, t)] = (0..2)
                        .map(|a| m[a].conj() * u[(2 * s + a, 2 * t + 1)])
                        .sum();
                }
            }
            pi
        })
        .collect();
    MeasurementModel::new(kraus)
}

/// Snapshot of the joint state after one protocol stage.
#[derive(Debug, Clone)]
pub struct StageRecord {
    pub stage: Stage,
    pub joint: DensityMatrix,
    pub system: DensityMatrix,
    pub auxiliary: DensityMatrix,
    pub h_system: f64,
    pub h_auxiliary: f64,
    pub h_joint: f64,
    pub mutual_information: f64,
}

impl StageRecord {
    pub fn new(stage: Stage, joint: DensityMatrix) -> Result<Self> {
        require_joint(&joint)?;
        let system = joint.marginal(Subsystem::System)?;
        let auxiliary = joint.marginal(Subsystem::Auxiliary)?;
        let h_system = von_neumann_entropy(&system);
        let h_auxiliary = von_neumann_entropy(&auxiliary);
        let h_joint = von_neumann_entropy(&joint);
        Ok(Self {
            stage,
            joint,
            system,
            auxiliary,
            h_system,
            h_auxiliary,
            h_joint,
            mutual_information: h_system + h_auxiliary - h_joint,
        })
    }
}

#[derive(Debug, Clone)]
pub struct ProtocolResult {
    pub config: ProtocolConfig,
    pub stages: Vec<StageRecord>,
    pub ledger: ThermoLedger,
    /// Bloch length of the final system marginal.
    pub gamma_final: f64,
    pub phi_used: f64,
    pub warnings: Vec<Warning>,
}

impl ProtocolResult {
    pub fn stage(&self, stage: Stage) -> Option<&StageRecord> {
        self.stages.iter().find(|r| r.stage == stage)
    }

    pub fn initial(&self) -> &StageRecord {
        &self.stages[0]
    }

    pub fn last(&self) -> &StageRecord {
        self.stages.last().expect("at least the initial stage")
    }
}

/// Product of the thermal system and auxiliary states.
pub fn initial_joint(alpha: f64, lambda: f64) -> Result<DensityMatrix> {
    thermal_qubit(alpha)?.tensor(&thermal_qubit(lambda)?)
}

/// Runs the whole protocol and fills the thermodynamic ledger.
pub fn run_protocol(config: &ProtocolConfig) -> Result<ProtocolResult> {
    config.validate()?;
    let initial = initial_joint(config.alpha, config.lambda)?;
    let mut stages = vec![StageRecord::new(Stage::Initial, initial.clone())?];

    let u_meas = measurement_unitary(config.axis.unit_vector(), config.theta)?;
    let measured = initial.evolve(&u_meas)?;
    stages.push(StageRecord::new(Stage::PostMeasurement, measured.clone())?);

    let before_feedback = match config.mode {
        Mode::Coherent => measured,
        Mode::Explicit => {
            // no readout happens without a measurement
            let decohered = if config.theta == 0.0 {
                measured
            } else {
                decohere_auxiliary(&measured, &QubitBasis::sigma_x())?
            };
            stages.push(StageRecord::new(Stage::PostDecoherence, decohered.clone())?);
            decohered
        }
    };

    let feedback = feedback_unitary(config.axis, config.theta, config.alpha, config.lambda)?;
    let final_joint = before_feedback.evolve(&feedback.unitary)?;
    stages.push(StageRecord::new(Stage::PostFeedback, final_joint)?);

    let ledger = build_ledger(config, &stages)?;
    let last = stages.last().expect("stages");
    let gamma_final = bloch_from_qubit(&last.system)?.length();

    Ok(ProtocolResult {
        config: *config,
        gamma_final,
        phi_used: feedback.phi,
        warnings: config.warnings(),
        ledger,
        stages,
    })
}

fn build_ledger(config: &ProtocolConfig, stages: &[StageRecord]) -> Result<ThermoLedger> {
    let first = &stages[0];
    let last = stages.last().expect("stages");
    let kt = config.kt;

    let dh_system = last.h_system - first.h_system;
    let dh_auxiliary = last.h_auxiliary - first.h_auxiliary;
    let q_opt = optimal_reset_heat(dh_auxiliary, kt);
    let q_min = -kt * dh_system;

    // reset r_final → ρ_final ⊗ χ with heat Q_opt
    let reset_target = last.system.tensor(&first.auxiliary)?;
    let reset_dh = von_neumann_entropy(&reset_target) - last.h_joint;
    let reset_entropy_production = entropy_production(reset_dh, q_opt, kt);

    Ok(ThermoLedger {
        dh_system,
        dh_auxiliary,
        mutual_information: stages
            .iter()
            .map(|r| (r.stage, r.mutual_information))
            .collect(),
        q_min,
        q_opt,
        epsilon: efficiency(dh_system, q_opt, kt),
        reset_entropy_production,
        energy: energy_block(config, stages, q_opt),
    })
}

fn energy_block(
    config: &ProtocolConfig,
    stages: &[StageRecord],
    q_opt: f64,
) -> Option<EnergyBlock> {
    let h_s = splitting_from_alpha(config.alpha, config.kt)
        .ok()?
        .hamiltonian();
    let h_a = splitting_from_alpha(config.lambda, config.kt)
        .ok()?
        .hamiltonian();
    let energy = |h: &ComplexMatrix, rho: &DensityMatrix| (h * rho.matrix()).trace().re;

    let first = &stages[0];
    let last = stages.last()?;
    let de_system = energy(&h_s, &last.system) - energy(&h_s, &first.system);
    let df_auxiliary = stages
        .iter()
        .map(|r| {
            let de_a = energy(&h_a, &r.auxiliary) - energy(&h_a, &first.auxiliary);
            let dh_a = r.h_auxiliary - first.h_auxiliary;
            (r.stage, de_a - config.kt * dh_a)
        })
        .collect();
    Some(EnergyBlock {
        de_system,
        work: q_opt + de_system,
        df_auxiliary,
    })
}
